"""The category of finite sets as a concrete pretopos.

Objects are sizes, maps are tables and subobjects are bitmasks over the
parent's elements.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Sequence

from .errors import InputError, NotEquivalenceRelation
from .poset import bits, mask_of, popcount
from .verdict import PASS, Verdict, fail


@dataclass(frozen=True)
class FinObj:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise InputError("object size must be non-negative")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def subobjects(self) -> range:
        return range(1 << self.n)


@dataclass(frozen=True)
class FinMap:
    source: FinObj
    target: FinObj
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.source.n:
            raise InputError("map table length differs from source size")
        if any(not (0 <= v < self.target.n) for v in self.table):
            raise InputError("map value outside target")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def then(self, g: "FinMap") -> "FinMap":
        """``g . self``."""
        if g.source != self.target:
            raise InputError("maps do not compose")
        return FinMap(self.source, g.target, tuple(g.table[v] for v in self.table))

    @property
    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.target.n


@dataclass(frozen=True)
class Subobject:
    parent: FinObj
    members: int

    def __post_init__(self):
        if self.members & ~self.parent.full:
            raise InputError("subobject is not a subset of its parent")

    def inclusion(self) -> FinMap:
        return FinMap(FinObj(popcount(self.members)), self.parent, tuple(bits(self.members)))


def identity(x: FinObj) -> FinMap:
    return FinMap(x, x, tuple(range(x.n)))


def terminal() -> FinObj:
    return FinObj(1)


def to_terminal(x: FinObj) -> FinMap:
    return FinMap(x, terminal(), (0,) * x.n)


def all_maps(x: FinObj, y: FinObj) -> Iterator[FinMap]:
    for t in itertools.product(range(y.n), repeat=x.n):
        yield FinMap(x, y, t)


def map_count(x: FinObj, y: FinObj) -> int:
    return y.n ** x.n


def random_map(x: FinObj, y: FinObj, rng: random.Random) -> FinMap:
    return FinMap(x, y, tuple(rng.randrange(y.n) for _ in range(x.n)))


# -- subobject calculus ----------------------------------------------------


def preimage(f: FinMap, s: int) -> int:
    return mask_of(x for x, v in enumerate(f.table) if s >> v & 1)


def image(f: FinMap, s: int) -> int:
    out = 0
    for x in bits(s):
        out |= 1 << f.table[x]
    return out


# -- limits and colimits ---------------------------------------------------


class Pullback(NamedTuple):
    obj: FinObj
    p1: FinMap
    p2: FinMap


def product(x: FinObj, y: FinObj) -> Pullback:
    """``X x Y``; the pair ``(a, b)`` has index ``a * y.n + b``."""
    p = FinObj(x.n * y.n)
    return Pullback(
        p,
        FinMap(p, x, tuple(a for a in range(x.n) for _ in range(y.n))),
        FinMap(p, y, tuple(b for _ in range(x.n) for b in range(y.n))),
    )


def pullback(f: FinMap, g: FinMap) -> Pullback:
    """``{(x, y) : f(x) = g(y)}`` in lexicographic order."""
    if f.target != g.target:
        raise InputError("pullback needs a common codomain")
    pairs = [(x, y) for x in range(f.source.n) for y in range(g.source.n) if f.table[x] == g.table[y]]
    p = FinObj(len(pairs))
    return Pullback(p, FinMap(p, f.source, tuple(a for a, _ in pairs)), FinMap(p, g.source, tuple(b for _, b in pairs)))


def certify_pullback(f: FinMap, g: FinMap, pb: Pullback, max_cone: int = 2) -> Verdict:
    """Every commuting cone from a set of size ``<= max_cone`` factors
    uniquely through ``pb``."""
    if pb.p1.then(f).table != pb.p2.then(g).table:
        return fail("square", "pullback square does not commute")
    for w in range(max_cone + 1):
        wo = FinObj(w)
        for a in all_maps(wo, f.source):
            for b in all_maps(wo, g.source):
                if a.then(f).table != b.then(g).table:
                    continue
                hits = [
                    m for m in all_maps(wo, pb.obj)
                    if m.then(pb.p1).table == a.table and m.then(pb.p2).table == b.table
                ]
                if len(hits) != 1:
                    return fail((a.table, b.table), f"{len(hits)} factorizations")
    return PASS


class ImageFactorization(NamedTuple):
    repi: FinMap
    mono: FinMap


def image_factorization(f: FinMap) -> ImageFactorization:
    members = sorted(set(f.table))
    pos = {v: i for i, v in enumerate(members)}
    mid = FinObj(len(members))
    return ImageFactorization(
        FinMap(f.source, mid, tuple(pos[v] for v in f.table)),
        FinMap(mid, f.target, tuple(members)),
    )


class Coproduct(NamedTuple):
    obj: FinObj
    i1: FinMap
    i2: FinMap


def coproduct(x: FinObj, y: FinObj) -> Coproduct:
    s = FinObj(x.n + y.n)
    return Coproduct(s, FinMap(x, s, tuple(range(x.n))), FinMap(y, s, tuple(range(x.n, x.n + y.n))))


def copair(f: FinMap, g: FinMap) -> FinMap:
    """``[f, g]: X + Y -> Z``."""
    if f.target != g.target:
        raise InputError("copair needs a common codomain")
    return FinMap(FinObj(f.source.n + g.source.n), f.target, f.table + g.table)


def coproduct_map(f: FinMap, g: FinMap) -> FinMap:
    """``f + g: X1 + X2 -> Y1 + Y2``."""
    s = coproduct(f.target, g.target)
    return copair(f.then(s.i1), g.then(s.i2))


def relation_mask(x: FinObj, pairs) -> int:
    return mask_of(a * x.n + b for a, b in pairs)


def is_equivalence(x: FinObj, r: int) -> bool:
    n = x.n
    rel = lambda a, b: r >> (a * n + b) & 1
    return (
        all(rel(a, a) for a in range(n))
        and all(rel(b, a) for a in range(n) for b in range(n) if rel(a, b))
        and all(
            rel(a, c)
            for a in range(n) for b in range(n) if rel(a, b)
            for c in range(n) if rel(b, c)
        )
    )


def coequalizer_of_equivalence(x: FinObj, r: int) -> FinMap:
    """Quotient by the equivalence relation ``r`` (a subobject of ``X x X``);
    classes are numbered by their least member."""
    if r & ~((1 << (x.n * x.n)) - 1) or not is_equivalence(x, r):
        raise NotEquivalenceRelation("relation is not an equivalence relation")
    cls: dict[int, int] = {}
    table = []
    for a in range(x.n):
        rep = next(b for b in range(a + 1) if r >> (a * x.n + b) & 1)
        if rep not in cls:
            cls[rep] = len(cls)
        table.append(cls[rep])
    return FinMap(x, FinObj(len(cls)), tuple(table))


def kernel_pair(f: FinMap) -> int:
    """Kernel pair of ``f`` as a subobject of ``X x X``."""
    pb = pullback(f, f)
    return relation_mask(f.source, zip(pb.p1.table, pb.p2.table))


def equivalence_relations(x: FinObj) -> Iterator[int]:
    """Every equivalence relation on ``x``, via set partitions."""
    def partitions(k: int, blocks: list[int]) -> Iterator[list[int]]:
        if k == x.n:
            yield list(blocks)
            return
        for b in range((max(blocks) + 2) if blocks else 1):
            blocks.append(b)
            yield from partitions(k + 1, blocks)
            blocks.pop()

    for blocks in partitions(0, []):
        yield relation_mask(x, [(a, b) for a in range(x.n) for b in range(x.n) if blocks[a] == blocks[b]])


# -- pretopos axioms -------------------------------------------------------


def check_extensive(x: FinObj, y: FinObj, g: FinMap) -> Verdict:
    """Pulling ``X -> X + Y <- Y`` back along ``g`` gives a coproduct with
    disjoint summands."""
    s = coproduct(x, y)
    if g.target != s.obj:
        raise InputError("map does not land in the coproduct")
    a, b = pullback(g, s.i1), pullback(g, s.i2)
    if a.obj.n + b.obj.n != g.source.n:
        return fail(g.table, "summand sizes do not add up")
    covered = set(a.p1.table) | set(b.p1.table)
    if len(covered) != g.source.n:
        return fail(g.table, "injections not jointly surjective")
    if pullback(s.i1, s.i2).obj.n != 0:
        return fail(g.table, "summands intersect")
    return PASS


def check_enough_subobjects(x: FinObj, y: FinObj) -> Verdict:
    """Maps ``X -> Y`` are determined by their direct images on subobjects."""
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    for f in all_maps(x, y):
        sig = tuple(image(f, u) for u in x.subobjects())
        if sig in seen:
            return fail((seen[sig], f.table))
        seen[sig] = f.table
    return PASS


def subobject_count(x: FinObj) -> int:
    return len(x.subobjects())


def terminal_is_atom() -> bool:
    return subobject_count(terminal()) == 2


def is_epi(f: FinMap, test_size: int = 2) -> bool:
    """Right-cancellable against maps into a set of size ``test_size``
    (two elements suffice to separate points of the codomain)."""
    z = FinObj(test_size)
    maps = list(all_maps(f.target, z))
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    for g in maps:
        key = f.then(g).table
        if key in seen and seen[key] != g.table:
            return False
        seen[key] = g.table
    return True


def is_regular_epi(f: FinMap) -> bool:
    """``f`` is the coequalizer of its kernel pair."""
    q = coequalizer_of_equivalence(f.source, kernel_pair(f))
    if q.target.n != f.target.n:
        return False
    induced = {}
    for a, b in zip(q.table, f.table):
        if induced.setdefault(a, b) != b:
            return False
    return len(set(induced.values())) == f.target.n


# -- audit -----------------------------------------------------------------


def _maps_upto(max_size: int) -> Iterator[FinMap]:
    for a in range(max_size + 1):
        for b in range(max_size + 1):
            yield from all_maps(FinObj(a), FinObj(b))


def _sample(items: Sequence, limit: int, rng: random.Random) -> Sequence:
    return items if len(items) <= limit else rng.sample(items, limit)


@dataclass(frozen=True)
class AuditRow:
    axiom: str
    ok: bool
    checked: int
    witness: object = None


def pretopos_audit(max_size: int = 3, seed: int = 0, pair_limit: int = 4096) -> list[AuditRow]:
    """Sweep the pretopos axioms over all finite sets of size ``<= max_size``.

    Single-map axioms are exhaustive; axioms over pairs of maps are exhaustive
    up to ``pair_limit`` pairs per size pattern and sampled beyond.
    """
    from .frame import phi

    rng = random.Random(seed)
    objs = [FinObj(k) for k in range(max_size + 1)]
    rows: list[AuditRow] = []

    def run(name: str, cases: Iterator, test: Callable) -> None:
        count = 0
        for case in cases:
            count += 1
            bad = test(*case)
            if bad is not None:
                rows.append(AuditRow(name, False, count, bad))
                return
        rows.append(AuditRow(name, True, count))

    def cospans() -> Iterator[tuple[FinMap, FinMap]]:
        for x, y, z in itertools.product(objs, repeat=3):
            fs, gs = list(all_maps(x, z)), list(all_maps(y, z))
            pairs = [(f, g) for f in fs for g in gs]
            yield from _sample(pairs, pair_limit, rng)

    def t_pullback(f, g):
        v = certify_pullback(f, g, pullback(f, g), max_cone=1 if max(f.source.n, g.source.n) > 3 else 2)
        return None if v else (f.table, g.table, v.witness)

    run("pullbacks", cospans(), t_pullback)

    def t_image(f):
        r, m = image_factorization(f)
        ok = r.is_surjective and m.is_injective and r.then(m).table == f.table
        return None if ok else f.table

    run("image_factorization", ((f,) for f in _maps_upto(max_size)), t_image)

    def t_stable(f, g):
        # f: X -> Y, g: Z -> Y; pull the factorization of f back along g
        _, m = image_factorization(f)
        pulled_mono = pullback(m, g)
        pulled_f = pullback(f, g)
        if image(pulled_mono.p2, FinObj(pulled_mono.obj.n).full) != image(pulled_f.p2, pulled_f.obj.full):
            return (f.table, g.table)
        if not pulled_mono.p2.is_injective:
            return (f.table, g.table, "mono")
        return None

    run("image_stability", cospans(), t_stable)

    def t_adjoint(f):
        xs, ys = f.source.subobjects(), f.target.subobjects()
        for u in xs:
            iu = image(f, u)
            for v in ys:
                if (iu & ~v == 0) != (u & ~preimage(f, v) == 0):
                    return (f.table, u, v)
        return None

    run("image_preimage_adjunction", ((f,) for f in _maps_upto(max_size)), t_adjoint)

    def t_coherent(f):
        ys = f.target.subobjects()
        if preimage(f, 0) != 0 or preimage(f, f.target.full) != f.source.full:
            return (f.table, "bounds")
        for a in ys:
            for b in ys:
                if preimage(f, a | b) != preimage(f, a) | preimage(f, b):
                    return (f.table, a, b)
                if preimage(f, a & b) != preimage(f, a) & preimage(f, b):
                    return (f.table, a, b)
        return None

    run("preimage_lattice_hom", ((f,) for f in _maps_upto(max_size)), t_coherent)

    def t_frobenius(f):
        for u in f.source.subobjects():
            for v in f.target.subobjects():
                if image(f, u & preimage(f, v)) != image(f, u) & v:
                    return (f.table, u, v)
        return None

    run("frobenius", ((f,) for f in _maps_upto(max_size)), t_frobenius)

    def t_images_mono_repi(f):
        imgs = [image(f, u) for u in f.source.subobjects()]
        if f.is_injective and len(set(imgs)) != len(imgs):
            return (f.table, "mono")
        if f.is_surjective and len(set(imgs)) != len(f.target.subobjects()):
            return (f.table, "repi")
        return None

    run("image_map_mono_repi", ((f,) for f in _maps_upto(max_size)), t_images_mono_repi)

    def t_extensive(g, x, y):
        v = check_extensive(x, y, g)
        return None if v else v.witness

    def extensive_cases():
        for x, y in itertools.product(objs, repeat=2):
            s = FinObj(x.n + y.n)
            for z in objs:
                for g in _sample(list(all_maps(z, s)), pair_limit, rng):
                    yield g, x, y

    run("extensive", extensive_cases(), t_extensive)

    def t_effective(x, r):
        q = coequalizer_of_equivalence(x, r)
        return None if kernel_pair(q) == r else (x.n, r)

    run("effective_equivalences", ((x, r) for x in objs for r in equivalence_relations(x)), t_effective)

    balanced_size = min(max_size, 4)

    def t_balanced(f):
        e, s, r = is_epi(f), f.is_surjective, is_regular_epi(f)
        return None if e == s == r else (f.table, e, s, r)

    run("balanced", ((f,) for f in _maps_upto(balanced_size)), t_balanced)

    def t_strict_initial(f):
        return None if f.source.n == 0 else f.table

    run("strict_initial", ((f,) for x in objs for f in all_maps(x, FinObj(0))), t_strict_initial)

    def t_enough(x, y):
        v = check_enough_subobjects(x, y)
        return None if v else v.witness

    run("enough_subobjects", itertools.product(objs, repeat=2), t_enough)
    run("terminal_atom", [()], lambda: None if terminal_is_atom() else subobject_count(terminal()))

    def t_filtral(x):
        from .functor import F_obj

        return None if phi(F_obj(x)).is_iso else x.n

    run("filtral", ((x,) for x in objs), t_filtral)
    return rows
