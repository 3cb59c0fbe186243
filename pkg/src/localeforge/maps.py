"""Frame homomorphisms, localic maps with their computed right adjoints, and
map-level predicates (injection, surjection, closed, dense, proper), plus
the induced maps on nuclei.

Orientation: a localic map ``f: X -> Y`` is carried by the frame hom
``f*: OY -> OX`` (``hom``); ``f_*: OX -> OY`` is its right adjoint
(``direct``). So ``hom.source`` is OY and ``hom.target`` is OX.
"""

from __future__ import annotations

import json
import random
from functools import reduce
from typing import Iterator, Sequence

from . import config
from .errors import CharacterizationMismatch, InputError, NotAdjoint, NotFrameHom
from .frame import Frame, directed_subsets, hom_witness
from .nuclei import (
    Nucleus,
    closed_nucleus,
    decomposition_generators,
    nucleus_join,
    nucleus_meet,
    open_nucleus,
)
from .poset import bits, mask_of
from .verdict import PASS, Verdict, fail


class FrameHom:
    """A map of finite frames preserving finite meets and all joins."""

    __slots__ = ("source", "target", "table")

    def __init__(self, source: Frame, target: Frame, table: Sequence[int], check: bool = True):
        self.source = source
        self.target = target
        self.table = tuple(table)
        if check:
            bad = hom_witness(source, target, self.table)
            if bad is not None:
                raise NotFrameHom(f"not a frame homomorphism: {bad[0]} fails at {bad[1]}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FrameHom)
            and other.source is self.source
            and other.target is self.target
            and other.table == self.table
        )

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"FrameHom({self.source.n}->{self.target.n}, {self.table})"

    def then(self, other: "FrameHom") -> "FrameHom":
        """``other . self``."""
        if other.source is not self.target and other.source.masks != self.target.masks:
            raise InputError("homs do not compose")
        return FrameHom(self.source, other.target, [other.table[v] for v in self.table], check=False)

    @classmethod
    def identity(cls, frame: Frame) -> "FrameHom":
        return cls(frame, frame, frame.elements, check=False)

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(), "table": list(self.table)}

    @classmethod
    def from_json(cls, data) -> "FrameHom":
        if not isinstance(data, dict) or not {"source", "target", "table"} <= data.keys():
            raise InputError('map JSON needs "source", "target" and "table"')
        src, tgt = Frame.from_json(data["source"]), Frame.from_json(data["target"])
        table = data["table"]
        if not isinstance(table, list) or not all(isinstance(v, int) for v in table):
            raise InputError('"table" must be a list of element indices')
        return cls(src, tgt, table)


def right_adjoint(h: FrameHom) -> tuple[int, ...]:
    """``f_*(x)``: the join of all ``y`` with ``h(y) <= x``.

    A ``y`` qualifies iff every join-irreducible below it does, so the join
    is the downset of points ``p`` whose principal element maps below ``x``.
    """
    src, tgt = h.source, h.target
    prin = [h.table[src.principal(p)] for p in range(src.poset.n)]
    out = []
    for x in tgt.elements:
        out.append(src.index[mask_of(p for p, img in enumerate(prin) if tgt.leq(img, x))])
    return tuple(out)


def right_adjoint_naive(h: FrameHom) -> tuple[int, ...]:
    src, tgt = h.source, h.target
    return tuple(
        src.join_all(y for y in src.elements if tgt.leq(h.table[y], x)) for x in tgt.elements
    )


def adjunction_witness(h: FrameHom, direct: Sequence[int], exhaustive: bool | None = None):
    """First failure of ``h(y) <= x  <=>  y <= direct(x)`` or of a triangle
    identity, as ``(law, where)``; None if the pair is an adjunction.

    Large pairs use the equivalent unit/counit form plus monotonicity of
    ``direct`` along covers.
    """
    src, tgt, up = h.source, h.target, h.table
    if len(direct) != tgt.n or any(not (0 <= v < src.n) for v in direct):
        return ("shape", None)
    if exhaustive is None:
        exhaustive = src.n * tgt.n <= 1 << 16
    if exhaustive:
        for x in tgt.elements:
            dx = direct[x]
            for y in src.elements:
                if tgt.leq(up[y], x) != src.leq(y, dx):
                    return ("adjunction", (x, y))
    else:
        for x in tgt.elements:
            if not tgt.leq(up[direct[x]], x):
                return ("counit", x)
        for y in src.elements:
            if not src.leq(y, direct[up[y]]):
                return ("unit", y)
        for a, b in tgt.covers:
            if not src.leq(direct[a], direct[b]):
                return ("monotone", (a, b))
    for y in src.elements:
        if up[direct[up[y]]] != up[y]:
            return ("triangle", ("upper", y))
    for x in tgt.elements:
        if direct[up[direct[x]]] != direct[x]:
            return ("triangle", ("lower", x))
    return None


class LocalicMap:
    """A localic map given by its frame hom; the right adjoint is computed
    (or supplied) and validated on construction."""

    __slots__ = ("hom", "direct")

    def __init__(self, hom: FrameHom, direct: Sequence[int] | None = None, check: bool = True):
        self.hom = hom
        self.direct = right_adjoint(hom) if direct is None else tuple(direct)
        if check:
            bad = adjunction_witness(hom, self.direct)
            if bad is not None:
                raise NotAdjoint(f"adjunction fails: {bad[0]} at {bad[1]}")

    @property
    def domain_frame(self) -> Frame:
        """OX for ``f: X -> Y``."""
        return self.hom.target

    @property
    def codomain_frame(self) -> Frame:
        """OY for ``f: X -> Y``."""
        return self.hom.source

    def __repr__(self) -> str:
        return f"LocalicMap(up={self.hom.table}, down={self.direct})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LocalicMap) and self.hom == other.hom

    def __hash__(self) -> int:
        return hash(self.hom)

    def then(self, other: "LocalicMap") -> "LocalicMap":
        """``other . self`` as localic maps (``X -> Y -> Z``)."""
        return LocalicMap(other.hom.then(self.hom))

    @classmethod
    def identity(cls, frame: Frame) -> "LocalicMap":
        return cls(FrameHom.identity(frame), frame.elements, check=False)


def _injective(table: Sequence[int]) -> bool:
    return len(set(table)) == len(table)


def _surjective(table: Sequence[int], size: int) -> bool:
    return len(set(table)) == size


def is_injection(f: LocalicMap) -> Verdict:
    """``f*`` surjective; cross-checked against ``f_*`` injective."""
    a = _surjective(f.hom.table, f.domain_frame.n)
    b = _injective(f.direct)
    if a != b:
        raise CharacterizationMismatch(f"f* surjective={a} but f_* injective={b}")
    if a:
        return PASS
    missing = next(x for x in f.domain_frame.elements if x not in set(f.hom.table))
    return fail(missing, "not in the image of f*")


def is_surjection(f: LocalicMap) -> Verdict:
    """``f*`` injective; cross-checked against ``f_*`` surjective."""
    a = _injective(f.hom.table)
    b = _surjective(f.direct, f.codomain_frame.n)
    if a != b:
        raise CharacterizationMismatch(f"f* injective={a} but f_* surjective={b}")
    if a:
        return PASS
    seen: dict[int, int] = {}
    for y, v in enumerate(f.hom.table):
        if v in seen:
            return fail((seen[v], y), "identified by f*")
        seen[v] = y
    raise AssertionError("unreachable")


def is_closed(f: LocalicMap) -> Verdict:
    """Dual Frobenius law ``f_*(u or f*v) = f_*u or v``; first failing
    ``(u, v)`` in index order."""
    ox, oy, up, down = f.domain_frame, f.codomain_frame, f.hom.table, f.direct
    for u in ox.elements:
        du = down[u]
        for v in oy.elements:
            if down[ox.join(u, up[v])] != oy.join(du, v):
                return fail((u, v))
    return PASS


def is_dense(f: LocalicMap) -> Verdict:
    d = f.direct[f.domain_frame.bot]
    return PASS if d == f.codomain_frame.bot else fail(d, "f_*(0)")


def preserves_directed_joins(f: LocalicMap) -> Verdict:
    ox, oy = f.domain_frame, f.codomain_frame
    if (1 << ox.n) > config.current().directed_cap:
        return Verdict(True, note="finite-maximum argument")
    for d in directed_subsets(ox):
        if f.direct[ox.join_all(d)] != oy.join_all(f.direct[x] for x in d):
            return fail(d)
    return PASS


def is_proper(f: LocalicMap) -> Verdict:
    c = is_closed(f)
    return c if not c else preserves_directed_joins(f)


# -- induced maps on nuclei -------------------------------------------------


def nucleus_image(f: LocalicMap, j: Nucleus) -> Nucleus:
    """``f_+ j = f_* . j . f*`` (``j`` on OX, result on OY)."""
    if j.frame is not f.domain_frame:
        raise InputError("nucleus is not on the domain frame")
    up, down = f.hom.table, f.direct
    return Nucleus(f.codomain_frame, [down[j.table[up[y]]] for y in f.codomain_frame.elements])


def nucleus_preimage(f: LocalicMap, j: Nucleus) -> Nucleus:
    """``f^- j`` for ``j`` on OY: the join of ``o_{f*u} & c_{f*v}`` over the
    generators ``o_u & c_v`` below ``j``.

    Open and closed nuclei are recognized first and sent straight to
    ``o_{f*u}`` / ``c_{f*v}``.
    """
    oy, ox, up = f.codomain_frame, f.domain_frame, f.hom.table
    if j.frame is not oy:
        raise InputError("nucleus is not on the codomain frame")
    t = j.table
    v = t[oy.bot]
    if t == closed_nucleus(oy, v).table:
        return closed_nucleus(ox, up[v])
    u = oy.meet_all(x for x in oy.elements if t[x] == oy.top)
    if t == open_nucleus(oy, u).table:
        return open_nucleus(ox, up[u])
    parts = [
        nucleus_meet(open_nucleus(ox, up[a]), closed_nucleus(ox, up[b]))
        for g, (a, b) in decomposition_generators(oy).items()
        if all(oy.leq(p, q) for p, q in zip(g, t))
    ]
    return reduce(nucleus_join, parts)


def nucleus_adjunction_witness(f: LocalicMap, ny: Sequence[Nucleus], nx: Sequence[Nucleus]):
    """First ``(j, k)`` breaking ``f^- j <= k  <=>  j <= f_+ k``."""
    pre = [nucleus_preimage(f, j) for j in ny]
    img = [nucleus_image(f, k) for k in nx]
    for a, j in enumerate(ny):
        for b, k in enumerate(nx):
            if pre[a].leq(k) != j.leq(img[b]):
                return (j.table, k.table)
    return None


# -- enumeration and sampling ----------------------------------------------


def enumerate_homs(src: Frame, tgt: Frame) -> Iterator[FrameHom]:
    """All frame homs ``src -> tgt``.

    Backtracks over images of the join-irreducibles of ``src`` in a linear
    extension, requiring ``g(p) & g(q) = join{g(r) : r <= p, q}``; the hom is
    then ``D -> join of g over D``.
    """
    p_src = src.poset
    order = p_src.linear_extension
    down = p_src.down
    g = [-1] * p_src.n

    def extend(k: int) -> Iterator[tuple[int, ...]]:
        if k == len(order):
            if tgt.join_all(g) == tgt.top:
                yield tuple(tgt.join_all(g[p] for p in bits(m)) for m in src.masks)
            return
        p = order[k]
        strict = down[p] & ~(1 << p)
        lower = tgt.join_all(g[r] for r in bits(strict))
        for v in tgt.elements:
            if not tgt.leq(lower, v):
                continue
            ok = True
            for q in order[:k]:
                common = down[p] & down[q]
                if tgt.meet(v, g[q]) != tgt.join_all(g[r] for r in bits(common)):
                    ok = False
                    break
            if ok:
                g[p] = v
                yield from extend(k + 1)
        g[p] = -1

    for table in extend(0):
        yield FrameHom(src, tgt, table, check=False)


def hom_from_monotone(src: Frame, tgt: Frame, g: Sequence[int]) -> FrameHom:
    """The frame hom ``D -> g^{-1}(D)`` for a monotone ``g`` from the dual
    poset of ``tgt`` to that of ``src``."""
    out = []
    for m in src.masks:
        out.append(tgt.index[mask_of(q for q, p in enumerate(g) if m >> p & 1)])
    return FrameHom(src, tgt, out, check=False)


def monotone_maps(p_from, p_to) -> Iterator[tuple[int, ...]]:
    order = p_from.linear_extension
    g = [-1] * p_from.n

    def extend(k: int) -> Iterator[tuple[int, ...]]:
        if k == len(order):
            yield tuple(g)
            return
        q = order[k]
        allowed = p_to.full
        for r in bits(p_from.down[q] & ~(1 << q)):
            allowed &= p_to.up[g[r]]
        for v in bits(allowed):
            g[q] = v
            yield from extend(k + 1)
        g[q] = -1

    yield from extend(0)


def homs_via_duality(src: Frame, tgt: Frame) -> Iterator[FrameHom]:
    """All frame homs ``src -> tgt`` through monotone maps of dual posets."""
    for g in monotone_maps(tgt.poset, src.poset):
        yield hom_from_monotone(src, tgt, g)


def random_monotone(p_from, p_to, rng: random.Random, attempts: int = 1000) -> tuple[int, ...] | None:
    if p_from.n and not p_to.n:
        return None
    for _ in range(attempts):
        g = [-1] * p_from.n
        for q in p_from.linear_extension:
            allowed = p_to.full
            for r in bits(p_from.down[q] & ~(1 << q)):
                allowed &= p_to.up[g[r]]
            choices = list(bits(allowed))
            if not choices:
                break
            g[q] = rng.choice(choices)
        else:
            return tuple(g)
    return None


def random_hom(src: Frame, tgt: Frame, rng: random.Random) -> FrameHom | None:
    g = random_monotone(tgt.poset, src.poset, rng)
    return None if g is None else hom_from_monotone(src, tgt, g)


def load_map(text: str) -> LocalicMap:
    return LocalicMap(FrameHom.from_json(json.loads(text)))
