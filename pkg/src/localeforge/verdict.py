from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """Outcome of a predicate: truthy iff ``ok``; ``witness`` is the first
    counterexample in index order when ``ok`` is false."""

    ok: bool
    witness: Any = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.ok


PASS = Verdict(True)


def fail(witness: Any, note: str = "") -> Verdict:
    return Verdict(False, witness, note)
