"""Nuclei on finite frames and the frame NX of all nuclei."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from . import config
from .errors import CapExceeded, InputError, NotANucleus, SizeOverflow
from .frame import Frame


class Nucleus:
    """An inflationary, idempotent, finite-meet-preserving self-map."""

    __slots__ = ("frame", "table")

    def __init__(self, frame: Frame, table: Sequence[int], check: bool = True):
        self.frame = frame
        self.table = tuple(table)
        if check:
            bad = nucleus_witness(frame, self.table)
            if bad is not None:
                raise NotANucleus(f"{bad[0]} fails at {bad[1]}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __eq__(self, other) -> bool:
        return isinstance(other, Nucleus) and other.frame is self.frame and other.table == self.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"Nucleus{self.table}"

    def leq(self, other: "Nucleus") -> bool:
        f = self.frame
        return all(f.leq(a, b) for a, b in zip(self.table, other.table))

    def fixed_points(self) -> list[int]:
        return [x for x in self.frame.elements if self.table[x] == x]


def nucleus_witness(frame: Frame, table: Sequence[int]):
    """First failed nucleus law as ``(law, where)``, or None."""
    if len(table) != frame.n or any(not (0 <= v < frame.n) for v in table):
        return ("shape", None)
    for x in frame.elements:
        if not frame.leq(x, table[x]):
            return ("inflationary", x)
    for x in frame.elements:
        if table[table[x]] != table[x]:
            return ("idempotent", x)
    if table[frame.top] != frame.top:
        return ("meet", (frame.top,))
    for x in frame.elements:
        for y in range(x + 1, frame.n):
            if table[frame.meet(x, y)] != frame.meet(table[x], table[y]):
                return ("meet", (x, y))
    return None


def identity_nucleus(frame: Frame) -> Nucleus:
    return Nucleus(frame, frame.elements, check=False)


def open_nucleus(frame: Frame, u: int) -> Nucleus:
    return Nucleus(frame, [frame.imp(u, x) for x in frame.elements], check=False)


def closed_nucleus(frame: Frame, v: int) -> Nucleus:
    return Nucleus(frame, [frame.join(v, x) for x in frame.elements], check=False)


def _same_frame(j: Nucleus, k: Nucleus) -> Frame:
    if j.frame is not k.frame:
        raise InputError("nuclei live on different frames")
    return j.frame


def nucleus_meet(j: Nucleus, k: Nucleus) -> Nucleus:
    f = _same_frame(j, k)
    return Nucleus(f, [f.meet(a, b) for a, b in zip(j.table, k.table)])


def nucleus_join(j: Nucleus, k: Nucleus) -> Nucleus:
    """Least nucleus above both: iterate ``x -> j(k(x))`` until it settles."""
    f = _same_frame(j, k)
    jt, kt = j.table, k.table
    out = []
    for x in f.elements:
        while True:
            y = jt[kt[x]]
            if y == x:
                break
            x = y
        out.append(x)
    return Nucleus(f, out)


def all_nuclei(frame: Frame) -> list[Nucleus]:
    """Every nucleus on ``frame``, by brute force over monotone inflationary
    maps. Sorted by table."""
    cap = config.current().nucleus_cap
    if frame.n > cap:
        raise CapExceeded("nucleus_cap", cap, f"frame has {frame.n} elements, brute-force cap is {cap}")
    n = frame.n
    order = sorted(frame.elements, key=lambda x: frame.masks[x].bit_count())
    below = [[y for y in frame.elements if y != x and frame.leq(y, x)] for x in frame.elements]
    ups = [[y for y in frame.elements if frame.leq(x, y)] for x in frame.elements]
    table = [-1] * n
    found = []

    def place(k: int) -> None:
        if k == n:
            t = tuple(table)
            if nucleus_witness(frame, t) is None:
                found.append(t)
            return
        x = order[k]
        lower = frame.join_all([x] + [table[y] for y in below[x]])
        for v in ups[lower]:
            if v == x or table[v] in (-1, v):
                table[x] = v
                place(k + 1)
        table[x] = -1

    place(0)
    return [Nucleus(frame, t, check=False) for t in sorted(found)]


@dataclass(frozen=True)
class NX:
    """Nuclei on ``base`` (sorted by table) and their lattice under the
    pointwise order; element ``i`` of ``lattice`` is ``nuclei[i]``."""

    base: Frame
    nuclei: tuple[Nucleus, ...]

    @cached_property
    def lattice(self) -> Frame:
        ns = self.nuclei
        return Frame.from_order([[a.leq(b) for b in ns] for a in ns])

    def index(self, j: Nucleus) -> int:
        return self.nuclei.index(j)

    def __len__(self) -> int:
        return len(self.nuclei)


def decomposition_generators(frame: Frame) -> dict[tuple[int, ...], tuple[int, int]]:
    """``o_u & c_v`` tables mapped to the first ``(u, v)`` producing them."""
    gens: dict[tuple[int, ...], tuple[int, int]] = {}
    for u in frame.elements:
        o = open_nucleus(frame, u)
        for v in frame.elements:
            t = nucleus_meet(o, closed_nucleus(frame, v)).table
            gens.setdefault(t, (u, v))
    return gens


def generate_NX(frame: Frame) -> NX:
    """Close ``{o_u & c_v}`` under nucleus joins."""
    cap = config.current().downset_cap
    seen = {t: Nucleus(frame, t, check=False) for t in decomposition_generators(frame)}
    frontier = list(seen.values())
    while frontier:
        new = []
        current = list(seen.values())
        for j in frontier:
            for k in current:
                h = nucleus_join(j, k)
                if h.table not in seen:
                    seen[h.table] = h
                    new.append(h)
                    if len(seen) > cap:
                        raise SizeOverflow("downset_cap", cap, "too many nuclei")
        frontier = new
    return NX(frame, tuple(seen[t] for t in sorted(seen)))


def decompose(j: Nucleus) -> list[tuple[int, int]]:
    """Pairs ``(u, v)`` whose ``o_u & c_v`` lie below ``j``; their join is ``j``."""
    f = j.frame
    out = []
    for t, uv in decomposition_generators(f).items():
        if all(f.leq(a, b) for a, b in zip(t, j.table)):
            out.append(uv)
    return sorted(out)
