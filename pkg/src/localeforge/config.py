"""Size caps and other run-time settings.

Library code reads the active :class:`Config` through :func:`current`; the CLI
(or a test) swaps it with :func:`override`.
"""

from __future__ import annotations

import contextlib
import dataclasses
import os
from typing import Iterator

ENV_MAXCAP = "LOCALEFORGE_MAXCAP"


@dataclasses.dataclass(frozen=True)
class Config:
    downset_cap: int = 2**20
    nucleus_cap: int = 7
    directed_cap: int = 2**16
    sweep_max_size: int = 3
    output_format: str = "text"
    jobs: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("downset_cap", "nucleus_cap", "directed_cap", "sweep_max_size", "jobs"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output_format not in ("text", "json", "dot"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    @classmethod
    def from_env(cls, **kwargs) -> "Config":
        raw = os.environ.get(ENV_MAXCAP)
        if raw is not None and "downset_cap" not in kwargs:
            try:
                kwargs["downset_cap"] = int(raw)
            except ValueError:
                raise ValueError(f"{ENV_MAXCAP} must be an integer, got {raw!r}") from None
        return cls(**kwargs)


_active = Config()


def current() -> Config:
    return _active


@contextlib.contextmanager
def override(**changes) -> Iterator[Config]:
    global _active
    saved = _active
    _active = dataclasses.replace(saved, **changes)
    try:
        yield _active
    finally:
        _active = saved


def install(config: Config) -> None:
    global _active
    _active = config
