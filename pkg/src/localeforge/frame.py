"""Finite frames (finite distributive lattices) and their lattice-level
operations: Heyting structure, Boolean center, ideals, Stone recognition and
the compact / regular / normal / subfit checks.

Every :class:`Frame` is stored as the downset lattice of a poset (Birkhoff
representation): element ``i`` is the downset ``masks[i]``. Indices are
arbitrary but fixed, so explicit-order inputs keep their numbering.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, NamedTuple, Sequence

from . import config
from .errors import (
    InputError,
    NotALattice,
    NotDistributive,
    NotLatticeHom,
    SizeOverflow,
    SubfitFormsDisagree,
)
from .poset import Poset, bits, disjoint_union, enumerate_posets, mask_of, popcount
from .verdict import PASS, Verdict, fail

if TYPE_CHECKING:
    from .maps import FrameHom

log = logging.getLogger(__name__)


class Frame:
    """A finite frame given as all downsets of ``poset``.

    ``masks`` must list every downset exactly once; the position of a mask is
    the element's index.
    """

    def __init__(self, poset: Poset, masks: Sequence[int], labels: Sequence[str] | None = None):
        self.poset = poset
        self.masks = tuple(masks)
        self.n = len(self.masks)
        self.index = {m: i for i, m in enumerate(self.masks)}
        if len(self.index) != self.n:
            raise InputError("duplicate downsets in frame carrier")
        for m in self.masks:
            if not poset.is_downset(m):
                raise InputError(f"mask {m:#x} is not a downset")
        if poset.count_downsets(self.n) != self.n:
            raise InputError("carrier does not contain every downset")
        self.bot = self.index[0]
        self.top = self.index[poset.full]
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != self.n:
            raise InputError("label count does not match element count")
        self._imp: dict[tuple[int, int], int] = {}

    # -- basic structure --------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Frame(n={self.n}, dual={self.poset!r})"

    @property
    def elements(self) -> range:
        return range(self.n)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def leq(self, a: int, b: int) -> bool:
        return self.masks[a] & ~self.masks[b] == 0

    def meet(self, a: int, b: int) -> int:
        return self.index[self.masks[a] & self.masks[b]]

    def join(self, a: int, b: int) -> int:
        return self.index[self.masks[a] | self.masks[b]]

    def meet_all(self, items: Iterable[int]) -> int:
        m = self.poset.full
        for i in items:
            m &= self.masks[i]
        return self.index[m]

    def join_all(self, items: Iterable[int]) -> int:
        m = 0
        for i in items:
            m |= self.masks[i]
        return self.index[m]

    def imp(self, a: int, b: int) -> int:
        """Heyting implication: the largest ``w`` with ``a & w <= b``."""
        key = (a, b)
        out = self._imp.get(key)
        if out is None:
            ma, mb = self.masks[a], self.masks[b]
            down = self.poset.down
            w = mask_of(p for p in range(self.poset.n) if down[p] & ma & ~mb == 0)
            out = self._imp[key] = self.index[w]
        return out

    def neg(self, a: int) -> int:
        return self.imp(a, self.bot)

    def complement(self, a: int) -> int | None:
        """The complement of ``a`` if it has one (it is then unique)."""
        return self.index.get(self.poset.full ^ self.masks[a])

    def principal(self, p: int) -> int:
        """The join-irreducible element generated by point ``p`` of the dual poset."""
        return self.index[self.poset.down[p]]

    @cached_property
    def is_boolean(self) -> bool:
        return all(self.complement(a) is not None for a in self.elements)

    @cached_property
    def leq_table(self) -> list[list[bool]]:
        return [[self.leq(a, b) for b in self.elements] for a in self.elements]

    @cached_property
    def meet_table(self) -> list[list[int]]:
        return [[self.meet(a, b) for b in self.elements] for a in self.elements]

    @cached_property
    def join_table(self) -> list[list[int]]:
        return [[self.join(a, b) for b in self.elements] for a in self.elements]

    @cached_property
    def imp_table(self) -> list[list[int]]:
        return [[self.imp(a, b) for b in self.elements] for a in self.elements]

    @cached_property
    def up_sets(self) -> list[int]:
        """``up_sets[a]``: bitmask over element indices of ``{b : a <= b}``."""
        out = [0] * self.n
        for a in self.elements:
            ma = self.masks[a]
            out[a] = mask_of(b for b in self.elements if ma & ~self.masks[b] == 0)
        return out

    @cached_property
    def covers(self) -> list[tuple[int, int]]:
        out = []
        down = self.poset.down
        for x in self.elements:
            mx = self.masks[x]
            for p in range(self.poset.n):
                if not mx >> p & 1 and down[p] & ~(1 << p) & ~mx == 0:
                    out.append((x, self.index[mx | 1 << p]))
        return sorted(out)

    def join_irreducible_poset(self) -> Poset:
        """Join-irreducibles of this frame in increasing index order, with the
        induced order. Found from the order alone: ``x`` is join-irreducible iff
        it differs from the join of everything strictly below it."""
        jis = []
        for x in self.elements:
            if x == self.bot:
                continue
            mx = self.masks[x]
            below = 0
            for y in self.elements:
                my = self.masks[y]
                if my != mx and my & ~mx == 0:
                    below |= my
            if below != mx:
                jis.append(x)
        return Poset.from_leq([[self.leq(a, b) for b in jis] for a in jis])

    # -- construction from an explicit order ------------------------------

    @classmethod
    def from_order(cls, leq: Sequence[Sequence[bool]], labels: Sequence[str] | None = None) -> "Frame":
        """Validate an explicit order matrix as a distributive lattice and
        build its Birkhoff representation, keeping the input indices."""
        order = Poset.from_leq(leq)
        n = order.n
        if n == 0:
            raise NotALattice("a lattice needs at least one element")
        meet, join = _meet_join_tables(order)
        for a in range(n):
            for b in range(n):
                jab = join[a][b]
                for c in range(n):
                    if meet[c][jab] != join[meet[c][a]][meet[c][b]]:
                        raise NotDistributive(f"distributivity fails at ({c}, {a}, {b})")
        bot = next(i for i in range(n) if order.down[i] == 1 << i)
        jis = []
        for x in range(n):
            if x == bot:
                continue
            strict = order.down[x] & ~(1 << x)
            acc = bot
            for y in bits(strict):
                acc = join[acc][y]
            if acc != x:
                jis.append(x)
        ji_poset = Poset.from_leq([[order.leq(a, b) for b in jis] for a in jis])
        masks = [mask_of(k for k, p in enumerate(jis) if order.leq(p, x)) for x in range(n)]
        return cls(ji_poset, masks, labels)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        out = {"n": self.n, "leq": [[int(v) for v in row] for row in self.leq_table]}
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data) -> "Frame":
        if not isinstance(data, dict):
            raise InputError("frame JSON must be an object")
        if "poset" in data:
            p = Poset.from_json(data["poset"])
            return Frame(p, p.downset_masks())
        if "leq" in data:
            leq = data["leq"]
            n = data.get("n", len(leq))
            if not isinstance(leq, list) or len(leq) != n:
                raise InputError('"leq" must be an n x n matrix')
            try:
                rows = [[bool(v) for v in row] for row in leq]
            except TypeError:
                raise InputError('"leq" must be an n x n matrix') from None
            return cls.from_order(rows, data.get("labels"))
        raise InputError('frame JSON needs "poset" or "leq"')

    def to_dot(self, name: str = "L") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i in self.elements:
            lines.append(f'  {i} [label="{self.label(i)}"];')
        for a, b in self.covers:
            lines.append(f"  {a} -> {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _meet_join_tables(order: Poset) -> tuple[list[list[int]], list[list[int]]]:
    n = order.n
    up, down = order.up, order.down

    def least(mask: int, what: str, a: int, b: int) -> int:
        for k in bits(mask):
            if mask & ~up[k] == 0:
                return k
        raise NotALattice(f"no {what} for ({a}, {b})")

    def greatest(mask: int, what: str, a: int, b: int) -> int:
        for k in bits(mask):
            if mask & ~down[k] == 0:
                return k
        raise NotALattice(f"no {what} for ({a}, {b})")

    join = [[least(up[a] & up[b], "join", a, b) for b in range(n)] for a in range(n)]
    meet = [[greatest(down[a] & down[b], "meet", a, b) for b in range(n)] for a in range(n)]
    return meet, join


def load_frame(text: str) -> Frame:
    return Frame.from_json(json.loads(text))


# -- standard frames -------------------------------------------------------


def chain(n: int) -> Frame:
    """The ``n``-element chain C_n."""
    if n < 1:
        raise InputError("a chain frame needs at least one element")
    p = Poset.chain(n - 1)
    return Frame(p, p.downset_masks())


def boolean(k: int) -> Frame:
    """The Boolean frame 2^k; element index equals its subset bitmask."""
    if k < 0:
        raise InputError("negative atom count")
    return Frame(Poset.antichain(k), range(1 << k))


def frame_product(a: Frame, b: Frame) -> Frame:
    """Cartesian product; the pair ``(x, y)`` has index ``x * len(b) + y``."""
    p = disjoint_union(a.poset, b.poset)
    shift = a.poset.n
    masks = [ma | mb << shift for ma in a.masks for mb in b.masks]
    return Frame(p, masks)


def enumerate_distributive_lattices(max_size: int) -> list[Frame]:
    """Every distributive lattice with at most ``max_size`` elements, one per
    isomorphism class, ordered by size."""
    out = []
    for n in range(max_size):
        for p in enumerate_posets(n, max_downsets=max_size):
            out.append(Frame(p, p.downset_masks()))
    out.sort(key=lambda f: (f.n, f.poset.down))
    return out


def find_isomorphism(a: Frame, b: Frame) -> tuple[int, ...] | None:
    """A lattice isomorphism ``a -> b`` as an index map, found as an
    isomorphism of the dual posets."""
    if a.n != b.n:
        return None
    pa, pb = a.join_irreducible_poset(), b.join_irreducible_poset()
    iso = pa.find_isomorphism(pb)
    if iso is None:
        return None
    ja = [x for x in a.elements if x != a.bot and _is_ji(a, x)]
    jb = [x for x in b.elements if x != b.bot and _is_ji(b, x)]
    out = []
    for x in a.elements:
        below = [jb[iso[k]] for k, p in enumerate(ja) if a.leq(p, x)]
        out.append(b.join_all(below))
    return tuple(out)


def _is_ji(f: Frame, x: int) -> bool:
    return popcount(f.poset.maximal(f.masks[x])) == 1


def is_isomorphic(a: Frame, b: Frame) -> bool:
    return find_isomorphism(a, b) is not None


# -- homomorphism checks ---------------------------------------------------


def hom_witness(src: Frame, tgt: Frame, table: Sequence[int], exhaustive: bool | None = None):
    """First violation of the bounded-lattice-homomorphism laws, or None.

    Small sources are checked on all pairs; large ones through the dual poset:
    ``h(D)`` must be the join of ``h`` on the principal downsets inside ``D``,
    and ``h`` must preserve meets of principal downsets.
    """
    if len(table) != src.n or any(not (0 <= v < tgt.n) for v in table):
        return ("shape", None)
    if table[src.bot] != tgt.bot:
        return ("bot", src.bot)
    if table[src.top] != tgt.top:
        return ("top", src.top)
    if exhaustive is None:
        exhaustive = src.n <= 64
    if exhaustive:
        for a in src.elements:
            for b in src.elements:
                if table[src.meet(a, b)] != tgt.meet(table[a], table[b]):
                    return ("meet", (a, b))
                if table[src.join(a, b)] != tgt.join(table[a], table[b]):
                    return ("join", (a, b))
        return None
    prin = [table[src.principal(p)] for p in range(src.poset.n)]
    for a in src.elements:
        expect = tgt.join_all(prin[p] for p in bits(src.masks[a]))
        if table[a] != expect:
            return ("join", a)
    for p in range(src.poset.n):
        for q in range(p + 1, src.poset.n):
            ab = src.index[src.poset.down[p] & src.poset.down[q]]
            if table[ab] != tgt.meet(prin[p], prin[q]):
                return ("meet", (src.principal(p), src.principal(q)))
    return None


# -- Boolean center, ideals, phi ------------------------------------------


@dataclass(frozen=True)
class BoolAlg:
    """The Boolean algebra of subsets of ``k`` atoms; elements are bitmasks."""

    k: int

    @property
    def size(self) -> int:
        return 1 << self.k

    @property
    def full(self) -> int:
        return (1 << self.k) - 1

    def meet(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return a | b

    def complement(self, a: int) -> int:
        return self.full ^ a

    def as_frame(self) -> Frame:
        return boolean(self.k)


def boolean_center(lat: Frame) -> tuple[BoolAlg, tuple[int, ...]]:
    """Complemented elements of ``lat`` as a Boolean algebra together with the
    inclusion ``embedding[b]`` (an element index of ``lat``)."""
    complemented = [a for a in lat.elements if lat.complement(a) is not None]
    # scanning by size, a nonzero complemented element is an atom iff no
    # atom found so far lies below it
    atoms: list[int] = []
    for a in sorted(complemented, key=lambda a: (popcount(lat.masks[a]), lat.masks[a])):
        if a != lat.bot and not any(lat.leq(b, a) for b in atoms):
            atoms.append(a)
    atoms.sort(key=lambda a: lat.masks[a])
    k = len(atoms)
    embedding = tuple(lat.join_all(atoms[i] for i in bits(b)) for b in range(1 << k))
    if sorted(embedding) != sorted(complemented):
        raise AssertionError("complemented elements are not generated by their atoms")
    return BoolAlg(k), embedding


class Ideals(NamedTuple):
    frame: Frame
    unit: tuple[int, ...]
    members: tuple[int, ...]
    """``members[i]``: bitmask over elements of the base lattice."""


def ideal_sets(lat: Frame, cap: int | None = None) -> list[int]:
    """All ideals of ``lat`` (downward closed, contain bottom, closed under
    binary joins) as bitmasks over element indices.

    Search from ``{0}`` by adding one element and closing; every ideal is
    reached since adding its elements one at a time stays inside it.
    """
    cap = config.current().downset_cap if cap is None else cap
    below = [mask_of(y for y in lat.elements if lat.leq(y, x)) for x in lat.elements]

    def close(s: int) -> int:
        while True:
            t = s
            for x in bits(s):
                t |= below[x]
            members = list(bits(t))
            for i, x in enumerate(members):
                for y in members[i + 1:]:
                    t |= 1 << lat.join(x, y)
            if t == s:
                return s
            s = t

    start = close(1 << lat.bot)
    seen = {start}
    todo = [start]
    while todo:
        s = todo.pop()
        for x in lat.elements:
            if not s >> x & 1:
                t = close(s | 1 << x)
                if t not in seen:
                    seen.add(t)
                    if len(seen) > cap:
                        raise SizeOverflow("downset_cap", cap, "too many ideals")
                    todo.append(t)
    return sorted(seen, key=lambda m: (popcount(m), m))


def ideals(lat: Frame) -> Ideals:
    """The frame Idl(L) of ideals under inclusion and the unit ``x -> down x``."""
    sets = ideal_sets(lat)
    pos = {s: i for i, s in enumerate(sets)}
    leq = [[a & ~b == 0 for b in sets] for a in sets]
    frame = Frame.from_order(leq)
    unit = []
    for x in lat.elements:
        principal = mask_of(y for y in lat.elements if lat.leq(y, x))
        unit.append(pos[principal])
    return Ideals(frame, tuple(unit), tuple(sets))


def ideal_map(h: "FrameHom") -> "FrameHom":
    """``Idl(h)``: the frame hom ``I -> down h[I]`` between ideal frames."""
    from .maps import FrameHom

    src, tgt, table = h.source, h.target, h.table
    bad = hom_witness(src, tgt, table)
    if bad is not None:
        raise NotLatticeHom(f"not a lattice homomorphism: {bad}")
    il, im = ideals(src), ideals(tgt)
    pos = {s: i for i, s in enumerate(im.members)}
    below = [mask_of(y for y in tgt.elements if tgt.leq(y, x)) for x in tgt.elements]
    out = []
    for s in il.members:
        img = 0
        for x in bits(s):
            img |= below[table[x]]
        out.append(pos[img])
    return FrameHom(il.frame, im.frame, out)


class Phi(NamedTuple):
    mapping: tuple[int, ...]
    is_iso: bool
    center: BoolAlg
    embedding: tuple[int, ...]
    ideals: Ideals


def phi(lat: Frame) -> Phi:
    """``u -> {c in B(L) : c <= u}`` into Idl(B(L)); ``is_iso`` recognizes
    Stone frames."""
    center, emb = boolean_center(lat)
    idl = ideals(center.as_frame())
    pos = {s: i for i, s in enumerate(idl.members)}
    mapping = []
    for u in lat.elements:
        s = mask_of(c for c in range(center.size) if lat.leq(emb[c], u))
        mapping.append(pos.get(s, -1))
    is_iso = (
        -1 not in mapping
        and len(set(mapping)) == lat.n == idl.frame.n
        and all(
            lat.leq(a, b) == idl.frame.leq(mapping[a], mapping[b])
            for a in lat.elements for b in lat.elements
        )
    )
    return Phi(tuple(mapping), is_iso, center, emb, idl)


# -- locale properties -----------------------------------------------------


def check_compact(lat: Frame) -> Verdict:
    """Every directed family with join 1 contains 1.

    Enumerates all subsets while ``2**n`` stays under the directed-subset cap;
    above it a finite directed set always has a maximum, which is its join, so
    the property holds and only a note is logged.
    """
    cached = lat.__dict__.get("_compact")
    if cached is not None:
        return cached
    cap = config.current().directed_cap
    if (1 << lat.n) > cap:
        log.info("check_compact: %d elements exceed the directed-subset cap; "
                 "using the finite-maximum argument", lat.n)
        out = Verdict(True, note="finite-maximum argument")
    else:
        out = PASS
        ups = lat.up_sets
        for d in range(1, 1 << lat.n):
            if d >> lat.top & 1:
                continue
            if lat.join_all(bits(d)) != lat.top:
                continue
            if _is_directed(d, ups):
                out = fail(tuple(bits(d)))
                break
    lat.__dict__["_compact"] = out
    return out


def _is_directed(d: int, ups: Sequence[int]) -> bool:
    members = list(bits(d))
    for i, x in enumerate(members):
        for y in members[i + 1:]:
            if not ups[x] & ups[y] & d:
                return False
    return True


def directed_subsets(lat: Frame) -> Iterable[tuple[int, ...]]:
    ups = lat.up_sets
    for d in range(1, 1 << lat.n):
        if _is_directed(d, ups):
            yield tuple(bits(d))


def check_regular(lat: Frame) -> Verdict:
    """Each ``u`` is the join of the ``v`` with ``not v or u = 1``."""
    for u in lat.elements:
        inside = [v for v in lat.elements if lat.join(lat.neg(v), u) == lat.top]
        if lat.join_all(inside) != u:
            return fail(u)
    return PASS


def check_normal(lat: Frame) -> Verdict:
    """``a or b = 1`` implies disjoint ``u, v`` with ``a or u = 1``, ``b or v = 1``."""
    above_top = [mask_of(u for u in lat.elements if lat.join(a, u) == lat.top) for a in lat.elements]
    disjoint = [mask_of(v for v in lat.elements if lat.meet(u, v) == lat.bot) for u in lat.elements]
    for a in lat.elements:
        for b in lat.elements:
            if lat.join(a, b) != lat.top:
                continue
            if not any(above_top[b] & disjoint[u] for u in bits(above_top[a])):
                return fail((a, b))
    return PASS


def check_subfit(lat: Frame) -> Verdict:
    """Every open sublocale is a join of closed ones.

    Computed on nuclei (``o_u`` is the pointwise meet of the ``c_v`` above it)
    and by the classical element-wise form; the two must agree.
    """
    from .nuclei import closed_nucleus, open_nucleus

    nuclei_form: Verdict = PASS
    closed = [closed_nucleus(lat, v).table for v in lat.elements]
    for u in lat.elements:
        o = open_nucleus(lat, u).table
        above = [c for c in closed if all(lat.leq(o[x], c[x]) for x in lat.elements)]
        meet = tuple(lat.meet_all(c[x] for c in above) for x in lat.elements)
        if meet != o:
            nuclei_form = fail(u, "o_u is not a meet of closed nuclei")
            break
    classical: Verdict = PASS
    for u, v in itertools.product(lat.elements, repeat=2):
        if lat.leq(u, v):
            continue
        if not any(lat.join(u, a) == lat.top and lat.join(v, a) != lat.top for a in lat.elements):
            classical = fail((u, v), "no separating element")
            break
    if nuclei_form.ok != classical.ok:
        raise SubfitFormsDisagree(f"nucleus form {nuclei_form} vs classical form {classical}")
    return nuclei_form


def property_report(lat: Frame) -> dict[str, Verdict]:
    from .coproduct import check_hausdorff

    return {
        "compact": check_compact(lat),
        "regular": check_regular(lat),
        "normal": check_normal(lat),
        "subfit": check_subfit(lat),
        "hausdorff": check_hausdorff(lat),
        "stone": Verdict(phi(lat).is_iso),
        "boolean": Verdict(lat.is_boolean),
    }
