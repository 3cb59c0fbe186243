"""Finite posets on dense indices, downset enumeration and Birkhoff duality.

A poset on ``0..n-1`` is stored as ``down[i]``, the bitmask of elements
``<= i``. Downsets are plain ``int`` bitmasks, so meet and join of downsets
are ``&`` and ``|``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Iterator, Sequence

from . import config
from .errors import InputError, InvalidPoset, SizeOverflow

if TYPE_CHECKING:
    from .frame import Frame


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class Poset:
    n: int
    down: tuple[int, ...]

    def __post_init__(self):
        if len(self.down) != self.n:
            raise InvalidPoset(f"expected {self.n} down-masks, got {len(self.down)}")
        full = (1 << self.n) - 1
        for i, d in enumerate(self.down):
            if d & ~full:
                raise InvalidPoset(f"element {i} has out-of-range predecessors")
            if not d >> i & 1:
                raise InvalidPoset(f"not reflexive at {i}")
            for j in bits(d):
                if j != i and self.down[j] >> i & 1:
                    raise InvalidPoset(f"not antisymmetric: {i} and {j}")
                if self.down[j] & ~d:
                    raise InvalidPoset(f"not transitive through {j} <= {i}")

    @classmethod
    def _trusted(cls, n: int, down: tuple[int, ...]) -> "Poset":
        """Skip validation for down-masks that are correct by construction."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "down", down)
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_leq(cls, leq: Sequence[Sequence[bool]]) -> "Poset":
        """``leq[i][j]`` is true iff ``i <= j``."""
        n = len(leq)
        if any(len(row) != n for row in leq):
            raise InvalidPoset("order matrix is not square")
        down = tuple(mask_of(i for i in range(n) if leq[i][j]) for j in range(n))
        return cls(n, down)

    @classmethod
    def from_covers(cls, n: int, covers: Iterable[Sequence[int]]) -> "Poset":
        """Reflexive-transitive closure of the pairs ``(i, j)`` read as ``i < j``."""
        if n < 0:
            raise InvalidPoset("negative size")
        below = [1 << i for i in range(n)]
        for pair in covers:
            if len(pair) != 2:
                raise InvalidPoset(f"cover entry {pair!r} is not a pair")
            i, j = pair
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidPoset(f"cover entry {pair!r} out of range")
            below[j] |= 1 << i
        changed = True
        while changed:
            changed = False
            for j in range(n):
                closed = below[j]
                for i in bits(below[j]):
                    closed |= below[i]
                if closed != below[j]:
                    below[j] = closed
                    changed = True
        return cls(n, tuple(below))

    @classmethod
    def chain(cls, n: int) -> "Poset":
        return cls(n, tuple((1 << (i + 1)) - 1 for i in range(n)))

    @classmethod
    def antichain(cls, n: int) -> "Poset":
        return cls(n, tuple(1 << i for i in range(n)))

    # -- order queries ----------------------------------------------------

    def leq(self, i: int, j: int) -> bool:
        return bool(self.down[j] >> i & 1)

    @cached_property
    def up(self) -> tuple[int, ...]:
        ups = [0] * self.n
        for j, d in enumerate(self.down):
            for i in bits(d):
                ups[i] |= 1 << j
        return tuple(ups)

    @cached_property
    def leq_matrix(self) -> list[list[bool]]:
        return [[self.leq(i, j) for j in range(self.n)] for i in range(self.n)]

    @cached_property
    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges ``(i, j)`` with ``j`` covering ``i``."""
        out = []
        for j in range(self.n):
            strict = self.down[j] & ~(1 << j)
            for i in bits(strict):
                between = strict & self.up[i] & ~(1 << i)
                if not between:
                    out.append((i, j))
        return sorted(out)

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        return tuple(sorted(range(self.n), key=lambda i: (popcount(self.down[i]), i)))

    @cached_property
    def full(self) -> int:
        return (1 << self.n) - 1

    def is_downset(self, mask: int) -> bool:
        return all(self.down[i] & ~mask == 0 for i in bits(mask))

    def downset_closure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.down[i]
        return out

    def maximal(self, mask: int) -> int:
        """Maximal elements of the subset ``mask``."""
        return mask_of(i for i in bits(mask) if not (self.up[i] & mask) & ~(1 << i))

    # -- downsets ---------------------------------------------------------

    def downset_masks(self, cap: int | None = None) -> list[int]:
        """All downsets as bitmasks, sorted by ``(size, mask)``.

        Raises :class:`SizeOverflow` once more than ``cap`` downsets are found.
        """
        cap = config.current().downset_cap if cap is None else cap
        order = self.linear_extension
        strict = [self.down[i] & ~(1 << i) for i in range(self.n)]
        out: list[int] = []

        def extend(k: int, current: int) -> None:
            if k == self.n:
                out.append(current)
                if len(out) > cap:
                    raise SizeOverflow("downset_cap", cap, f"more than {cap} downsets")
                return
            e = order[k]
            extend(k + 1, current)
            if strict[e] & ~current == 0:
                extend(k + 1, current | 1 << e)

        extend(0, 0)
        out.sort(key=lambda m: (popcount(m), m))
        return out

    def count_downsets(self, limit: int | None = None) -> int:
        """Number of downsets; stops counting (returning ``limit + 1``) past ``limit``."""
        order = self.linear_extension
        strict = [self.down[i] & ~(1 << i) for i in range(self.n)]
        count = 0

        def walk(k: int, current: int) -> bool:
            nonlocal count
            if k == self.n:
                count += 1
                return limit is not None and count > limit
            e = order[k]
            if walk(k + 1, current):
                return True
            if strict[e] & ~current == 0:
                return walk(k + 1, current | 1 << e)
            return False

        walk(0, 0)
        return count

    # -- isomorphism ------------------------------------------------------

    @cached_property
    def invariants(self) -> tuple[tuple[int, int, int, int], ...]:
        cover_down = [0] * self.n
        cover_up = [0] * self.n
        for i, j in self.covers:
            cover_up[i] += 1
            cover_down[j] += 1
        return tuple(
            (popcount(self.down[i]), popcount(self.up[i]), cover_down[i], cover_up[i])
            for i in range(self.n)
        )

    def relabel(self, perm: Sequence[int]) -> "Poset":
        """Poset with element ``i`` renamed ``perm[i]``."""
        down = [0] * self.n
        for i in range(self.n):
            down[perm[i]] = mask_of(perm[k] for k in bits(self.down[i]))
        return Poset(self.n, tuple(down))

    def canonical_form(self) -> tuple[int, ...]:
        """Isomorphism-invariant encoding.

        Minimum over all relabelings that list elements in increasing
        invariant order; the search permutes inside each invariant class.
        """
        inv = self.invariants
        classes: dict[tuple, list[int]] = {}
        for i in range(self.n):
            classes.setdefault(inv[i], []).append(i)
        keys = sorted(classes)
        groups = [classes[k] for k in keys]
        best: tuple[int, ...] | None = None
        for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
            perm = [0] * self.n
            pos = 0
            for block in choice:
                for i in block:
                    perm[i] = pos
                    pos += 1
            down = [0] * self.n
            for i in range(self.n):
                down[perm[i]] = mask_of(perm[k] for k in bits(self.down[i]))
            enc = tuple(down)
            if best is None or enc < best:
                best = enc
        return (self.n,) + (best or ())

    def find_isomorphism(self, other: "Poset") -> tuple[int, ...] | None:
        """An order isomorphism ``self -> other`` as an index map, or None."""
        if self.n != other.n or sorted(self.invariants) != sorted(other.invariants):
            return None
        order = self.linear_extension
        image = [-1] * self.n
        used = 0

        def place(k: int) -> bool:
            nonlocal used
            if k == self.n:
                return True
            i = order[k]
            for j in range(other.n):
                if used >> j & 1 or other.invariants[j] != self.invariants[i]:
                    continue
                ok = True
                for kk in range(k):
                    p = order[kk]
                    if self.leq(p, i) != other.leq(image[p], j) or self.leq(i, p) != other.leq(j, image[p]):
                        ok = False
                        break
                if not ok:
                    continue
                image[i] = j
                used |= 1 << j
                if place(k + 1):
                    return True
                used &= ~(1 << j)
                image[i] = -1
            return False

        return tuple(image) if place(0) else None

    def is_isomorphic(self, other: "Poset") -> bool:
        return self.find_isomorphism(other) is not None

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n, "cover": [list(c) for c in self.covers]}

    @classmethod
    def from_json(cls, data) -> "Poset":
        if not isinstance(data, dict) or "n" not in data:
            raise InputError('poset JSON needs an "n" field')
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise InputError('"n" must be an integer')
        return cls.from_covers(n, data.get("cover", []))

    def to_dot(self, labels: Sequence[str] | None = None, name: str = "P") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i in range(self.n):
            label = labels[i] if labels else str(i)
            lines.append(f'  {i} [label="{label}"];')
        for i, j in self.covers:
            lines.append(f"  {i} -> {j};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, cover={self.covers})"


def product(p: Poset, q: Poset) -> Poset:
    """Componentwise order; pair ``(i, j)`` has index ``i * q.n + j``."""
    n = p.n * q.n
    if n > 4096:
        raise SizeOverflow("poset_size", 4096)
    down = []
    for i in range(p.n):
        for j in range(q.n):
            down.append(mask_of(a * q.n + b for a in bits(p.down[i]) for b in bits(q.down[j])))
    return Poset(n, tuple(down))


def disjoint_union(p: Poset, q: Poset) -> Poset:
    """Elements of ``q`` are shifted up by ``p.n``."""
    return Poset(p.n + q.n, p.down + tuple(d << p.n for d in q.down))


def extensions_by_maximal(p: Poset) -> Iterator[Poset]:
    """Posets obtained by adding a new top-indexed maximal element above a downset."""
    for d in p.downset_masks():
        yield Poset._trusted(p.n + 1, p.down + (d | 1 << p.n,))


def enumerate_posets(n: int, max_downsets: int | None = None) -> list[Poset]:
    """All posets with ``n`` elements up to isomorphism.

    With ``max_downsets`` set, only posets with at most that many downsets are
    kept (downset counts never decrease when adding a maximal element, so the
    pruning is exact).
    """
    layer = {Poset(0, ()).canonical_form(): Poset(0, ())}
    for _ in range(n):
        nxt: dict[tuple, Poset] = {}
        for base in layer.values():
            dms = base.downset_masks()
            for d in dms:
                # downsets of the extension: old ones, plus new point over those containing d
                if max_downsets is not None and len(dms) + sum(e & d == d for e in dms) > max_downsets:
                    continue
                ext = Poset._trusted(base.n + 1, base.down + (d | 1 << base.n,))
                key = ext.canonical_form()
                if key not in nxt:
                    nxt[key] = Poset._trusted(ext.n, key[1:])
        layer = nxt
    return [layer[k] for k in sorted(layer)]


def all_downsets(p: Poset, cap: int | None = None) -> "Frame":
    """The frame of all downsets of ``p`` ordered by inclusion."""
    from .frame import Frame

    return Frame(p, p.downset_masks(cap))


def join_irreducibles(lattice: "Frame") -> Poset:
    """The poset of join-irreducible elements of ``lattice``.

    Elements are listed in increasing index order of ``lattice``.
    """
    return lattice.join_irreducible_poset()


def load_poset(text: str) -> Poset:
    return Poset.from_json(json.loads(text))
