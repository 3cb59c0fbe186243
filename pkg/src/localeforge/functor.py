"""The subobject functor ``F = Sub(-)^op`` from finite sets to finite frames
and localic maps, and the finite-scale verification of its preservation
properties.

``F(X)`` uses the subset bitmask as element index; element ``S`` is stored
as the downset ``complement(S)`` of an antichain, which reverses inclusion.
So the bottom of ``F(X)`` is ``X`` itself and the top is the empty subset.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from . import finset as fs
from .coproduct import coproduct as frame_coproduct
from .coproduct import mediator_census, verify_universal_property
from .errors import ImplementationBug, InputError, LocaleForgeError
from .finset import FinMap, FinObj
from .frame import (
    Frame,
    boolean,
    boolean_center,
    check_compact,
    check_regular,
    chain,
    enumerate_distributive_lattices,
    frame_product,
    hom_witness,
    ideals,
    phi,
)
from .maps import (
    FrameHom,
    LocalicMap,
    adjunction_witness,
    enumerate_homs,
    is_closed,
    is_dense,
    is_injection,
    is_surjection,
    right_adjoint,
)
from .nuclei import closed_nucleus, nucleus_witness
from .poset import Poset, bits, mask_of, popcount


@lru_cache(maxsize=None)
def F_obj(x: FinObj) -> Frame:
    """``Sub(X)^op``."""
    full = x.full
    return Frame(Poset.antichain(x.n), [full ^ s for s in range(1 << x.n)])


@lru_cache(maxsize=None)
def preimage_hom(f: FinMap) -> FrameHom:
    """``f^{-1}: F(Y) -> F(X)``."""
    return FrameHom(F_obj(f.target), F_obj(f.source), [fs.preimage(f, s) for s in f.target.subobjects()], check=False)


def image_table(f: FinMap) -> tuple[int, ...]:
    return tuple(fs.image(f, s) for s in f.source.subobjects())


def F_mor(f: FinMap) -> LocalicMap:
    """``F(f)``: the localic map with ``f* = f^{-1}`` and computed right
    adjoint, which must be the direct image ``f[-]``."""
    m = LocalicMap(preimage_hom(f))
    if m.direct != image_table(f):
        raise ImplementationBug(f"right adjoint of preimage is not the image map for {f.table}")
    return m


# -- per-object and per-pair checks ----------------------------------------


@dataclass(frozen=True)
class Outcome:
    ok: bool
    counterexample: object = None

    def __bool__(self) -> bool:
        return self.ok


OK = Outcome(True)


def bad(detail) -> Outcome:
    return Outcome(False, detail)


def subobject_comparison(x: FinObj, table: Sequence[Sequence[int]] | None = None) -> Outcome:
    """Subobjects of ``X`` against closed nuclei on ``F(X)``.

    ``table[m]`` is the nucleus attached to subobject ``m`` (default
    ``c_m``). Checks it is a nucleus, is closed, is recovered by evaluation
    at 0, that the assignment is a bijection onto the closed nuclei, and that
    it is an order isomorphism (larger subobject, smaller nucleus).
    """
    fx = F_obj(x)
    if table is None:
        table = [closed_nucleus(fx, m).table for m in x.subobjects()]
    for m in x.subobjects():
        t = tuple(table[m])
        w = nucleus_witness(fx, t)
        if w is not None:
            return bad({"subobject": m, "nucleus": t, "law": w[0], "at": w[1]})
        if t[fx.bot] != m:
            return bad({"subobject": m, "nucleus": t, "value_at_0": t[fx.bot]})
        if t != closed_nucleus(fx, t[fx.bot]).table:
            return bad({"subobject": m, "nucleus": t, "not_closed": True})
    closed = {closed_nucleus(fx, v).table for v in fx.elements}
    if {tuple(t) for t in table} != closed:
        return bad({"closed_nuclei_missed": len(closed - {tuple(t) for t in table})})
    for a in x.subobjects():
        for b in x.subobjects():
            sub = a & ~b == 0
            below = all(fx.leq(p, q) for p, q in zip(table[b], table[a]))
            if sub != below:
                return bad({"pair": (a, b), "inclusion": sub, "nucleus_order": below})
    return OK


def chloc_object(x: FinObj) -> Outcome:
    from .coproduct import check_hausdorff

    fx = F_obj(x)
    for name, v in (
        ("compact", check_compact(fx)),
        ("regular", check_regular(fx)),
        ("hausdorff", check_hausdorff(fx)),
    ):
        if not v:
            return bad({"property": name, "witness": v.witness})
    if not fx.is_boolean or not phi(fx).is_iso:
        return bad({"property": "stone"})
    return OK


@lru_cache(maxsize=None)
def _test_frames() -> tuple[Frame, ...]:
    return tuple(enumerate_distributive_lattices(4))


@lru_cache(maxsize=None)
def _homs(src_size: int, tgt_key: int) -> tuple[tuple[int, ...], ...]:
    src = F_obj(FinObj(src_size))
    tgt = _test_frames()[tgt_key]
    return tuple(h.table for h in enumerate_homs(src, tgt))


def check_preserves_equalizers(f: FinMap, g: FinMap) -> Outcome:
    """``F(e)`` for the equalizer ``e: E -> X`` is an equalizer of
    ``F(f), F(g)``: on frames, ``e*`` coequalizes ``f*, g*`` and every hom
    ``k`` out of ``F(X)`` into a test frame with ``k f* = k g*`` factors
    uniquely through ``e*``."""
    if f.source != g.source or f.target != g.target:
        raise InputError("equalizer needs a parallel pair")
    x = f.source
    members = mask_of(a for a in range(x.n) if f.table[a] == g.table[a])
    e = fs.Subobject(x, members).inclusion()
    fe, ge = preimage_hom(f).table, preimage_hom(g).table
    es = preimage_hom(e).table
    if [es[v] for v in fe] != [es[v] for v in ge]:
        return bad({"cofork": "e* f* != e* g*"})
    for key, tgt in enumerate(_test_frames()):
        through: dict[tuple[int, ...], int] = {}
        for m in _homs(e.source.n, key):
            k = tuple(m[v] for v in es)
            through[k] = through.get(k, 0) + 1
        for k in _homs(x.n, key):
            if [k[v] for v in fe] != [k[v] for v in ge]:
                continue
            hits = through.get(k, 0)
            if hits != 1:
                return bad({"test_frame": tgt.n, "hom": k, "factorizations": hits})
    return OK


@lru_cache(maxsize=None)
def product_comparison(x: FinObj, y: FinObj) -> tuple[LocalicMap, Outcome]:
    """``p: F(X x Y) -> F(X) x F(Y)`` with ``p*`` the mediator of
    ``pi_1^{-1}, pi_2^{-1}`` on the frame coproduct ``F(X) + F(Y)``."""
    prod = fs.product(x, y)
    h1, h2 = preimage_hom(prod.p1), preimage_hom(prod.p2)
    cp = frame_coproduct(F_obj(x), F_obj(y))
    competitors = None
    if cp.carrier.n * F_obj(prod.obj).n <= 1 << 8:
        competitors = mediator_census(cp, F_obj(prod.obj))
    p_up = verify_universal_property(cp, h1, h2, competitors)
    p = LocalicMap(p_up)
    try:
        surj, inj = is_surjection(p), is_injection(p)
    except LocaleForgeError as exc:
        return p, bad({"characterization": str(exc)})
    if not surj:
        return p, bad({"surjection": surj.witness})
    if not inj:
        return p, bad({"injection": inj.witness})
    if not is_dense(p):
        return p, bad({"p_*(0)": p.direct[F_obj(prod.obj).bot]})
    # p_*(0) as the join of generators a (+) b with pi_1^{-1} a meet pi_2^{-1} b = 0
    fxy = F_obj(prod.obj)
    via_generators = cp.carrier.join_all(
        cp.generator(a, b)
        for a in F_obj(x).elements
        for b in F_obj(y).elements
        if fxy.meet(h1.table[a], h2.table[b]) == fxy.bot
    )
    if via_generators != p.direct[fxy.bot] or via_generators != cp.carrier.bot:
        return p, bad({"p_*(0)_generators": via_generators, "p_*(0)": p.direct[fxy.bot]})
    return p, OK


@lru_cache(maxsize=None)
def compatible_filtrality_table(s1: FinObj, s2: FinObj) -> tuple[int, ...]:
    """Canonical map ``B(F S1) + B(F S2) -> B(F(S1 x S2))``; the Boolean
    coproduct has the atom pairs as atoms, element ``a`` being a bitmask over
    pairs ``i * k2 + j``."""
    prod = fs.product(s1, s2)
    f1, f2, f12 = F_obj(s1), F_obj(s2), F_obj(prod.obj)
    (b1, emb1), (b2, emb2) = boolean_center(f1), boolean_center(f2)
    b12, emb12 = boolean_center(f12)
    back = {v: c for c, v in enumerate(emb12)}
    up1, up2 = preimage_hom(prod.p1).table, preimage_hom(prod.p2).table
    atom_images = []
    for i in range(b1.k):
        for j in range(b2.k):
            atom_images.append(f12.meet(up1[emb1[1 << i]], up2[emb2[1 << j]]))
    return tuple(back[f12.join_all(atom_images[k] for k in bits(a))] for a in range(1 << (b1.k * b2.k)))


def check_compatible_filtrality(s1: FinObj, s2: FinObj) -> Outcome:
    table = compatible_filtrality_table(s1, s2)
    k = s1.n * s2.n
    full = (1 << k) - 1
    if table[0] != 0 or table[full] != full:
        return bad({"bounds": (table[0], table[full])})
    atoms = [table[1 << i] for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if atoms[i] & atoms[j]:
                return bad({"meet": (1 << i, 1 << j)})
    seen: dict[int, int] = {}
    for a, v in enumerate(table):
        if v in seen:
            return bad({"not_injective": (seen[v], a)})
        seen[v] = a
    return OK


def zeta_table(x: FinObj, y: FinObj) -> tuple[int, ...]:
    """``zeta(m) = (i1^{-1} m, i2^{-1} m)`` into ``F(X) x F(Y)``."""
    s = fs.coproduct(x, y)
    ny = F_obj(y).n
    return tuple(fs.preimage(s.i1, m) * ny + fs.preimage(s.i2, m) for m in s.obj.subobjects())


def check_zeta(x: FinObj, y: FinObj, table: Sequence[int] | None = None, rng: random.Random | None = None) -> Outcome:
    """``zeta`` is a frame isomorphism, and the subobject ``n`` built from
    the image factorization of ``m1 + m2`` has ``zeta(n) = (m1, m2)``."""
    s = fs.coproduct(x, y)
    src = F_obj(s.obj)
    tgt = frame_product(F_obj(x), F_obj(y))
    table = zeta_table(x, y) if table is None else tuple(table)
    w = hom_witness(src, tgt, table)
    if w is not None:
        return bad({"hom": w})
    if len(set(table)) != tgt.n:
        return bad({"not_bijective": len(set(table))})
    ny = F_obj(y).n
    pairs = [(m1, m2) for m1 in x.subobjects() for m2 in y.subobjects()]
    if rng is not None and len(pairs) > 64:
        pairs = rng.sample(pairs, 64)
    for m1, m2 in pairs:
        inc = fs.coproduct_map(fs.Subobject(x, m1).inclusion(), fs.Subobject(y, m2).inclusion())
        _, mono = fs.image_factorization(inc)
        n = mask_of(mono.table)
        if table[n] != m1 * ny + m2:
            return bad({"subobject": n, "expected": (m1, m2), "got": divmod(table[n], ny)})
    return OK


OMEGA = chain(2)


def check_nontrivial_and_terminal() -> Outcome:
    """``F(1)`` is the two-element frame and ``t: F(1) -> Omega`` is both an
    injection and a surjection."""
    f1 = F_obj(fs.terminal())
    if f1.n != 2 or f1.bot == f1.top:
        return bad({"F(1)": f1.n})
    t = LocalicMap(FrameHom(OMEGA, f1, [f1.bot, f1.top]))
    if not is_surjection(t):
        return bad({"t*": "not injective"})
    if not is_injection(t):
        return bad({"t*": "not surjective"})
    return OK


def copower_alpha(s: FinObj) -> tuple[FrameHom, FrameHom, int, int]:
    """``alpha(P) = i_{P^c}``, the induced ``alpha*`` on ideals, and
    ``alpha_*(0)`` computed by the adjoint and by the definition."""
    ps = boolean(s.n)
    fs_ = F_obj(s)
    alpha = FrameHom(ps, fs_, [s.full ^ p for p in range(1 << s.n)], check=False)
    idl = ideals(ps)
    unit_inv = {u: x for x, u in enumerate(idl.unit)}
    alpha_star = FrameHom(idl.frame, fs_, [alpha.table[unit_inv[i]] for i in idl.frame.elements], check=False)
    via_adjoint = right_adjoint(alpha_star)[fs_.bot]
    members = mask_of(p for p in ps.elements if fs_.leq(alpha.table[p], fs_.bot))
    via_definition = idl.members.index(members) if members in idl.members else -1
    return alpha, alpha_star, via_adjoint, via_definition


def check_copower(s: FinObj) -> Outcome:
    alpha, alpha_star, via_adjoint, via_definition = copower_alpha(s)
    ps, fs_ = alpha.source, alpha.target
    if hom_witness(ps, fs_, alpha.table) is not None:
        return bad({"alpha": "not a lattice hom"})
    singletons = [1 << x for x in range(s.n)]
    for p in range(1 << s.n):
        joined = 0
        for x in bits(p):
            joined |= singletons[x]
        if joined != p:
            return bad({"singleton_join": p})
        if mask_of(x for x in range(s.n) if singletons[x] & ~p == 0) != p:
            return bad({"singleton_recovery": p})
        if fs_.complement(alpha.table[p]) is None:
            return bad({"not_complemented": p})
    if len(set(alpha_star.table)) != alpha_star.source.n:
        return bad({"alpha*": "not injective"})
    if hom_witness(alpha_star.source, fs_, alpha_star.table) is not None:
        return bad({"alpha*": "not a frame hom"})
    idl = ideals(ps)
    bottom_ideal = idl.unit[ps.bot]
    if via_adjoint != bottom_ideal or via_definition != bottom_ideal:
        return bad({"alpha_*(0)": (via_adjoint, via_definition)})
    return OK


def check_rectangles(x1: FinObj, x2: FinObj, image_p2: Sequence[int] | None = None) -> Outcome:
    """Rectangle facts for the projections of ``X1 x X2``.

    ``image_p2`` is the direct image table of ``F(pi_2)`` (default: computed).
    """
    if x1.n == 0 or x2.n == 0:
        raise InputError("rectangles need nonempty factors")
    prod = fs.product(x1, x2)
    f1, f2, f12 = F_obj(x1), F_obj(x2), F_obj(prod.obj)
    up1, up2 = preimage_hom(prod.p1).table, preimage_hom(prod.p2).table
    down2 = image_table(prod.p2) if image_p2 is None else image_p2
    bang1, bang2 = fs.to_terminal(x1), fs.to_terminal(x2)
    for u in f1.elements:
        lhs = down2[up1[u]]
        if u != f1.top and lhs != f2.bot:
            return bad({"a": u, "image": lhs})
        rhs = fs.preimage(bang2, fs.image(bang1, u))
        if lhs != rhs:
            return bad({"beck_chevalley": u, "lhs": lhs, "rhs": rhs})
    for t1 in f1.elements:
        if f1.complement(t1) is None:
            continue
        for t2 in f2.elements:
            if f2.complement(t2) is None:
                continue
            zero = f12.meet(up1[t1], up2[t2]) == f12.bot
            if zero != (t1 == f1.bot or t2 == f2.bot):
                return bad({"b": (t1, t2)})
    return OK


# -- the sweep -------------------------------------------------------------


@dataclass(frozen=True)
class Fault:
    """Overwrite one table entry before the sweep.

    ``kind`` is ``adjoint`` (key: ``(source size, target size, map table)``),
    ``nucleus`` (key: ``(object size, subobject)``) or ``zeta`` (key:
    ``(size X, size Y)``); ``entry`` indexes the table and ``value``
    defaults to the next element cyclically.
    """

    kind: str
    key: tuple
    entry: int
    value: int | None = None

    def __post_init__(self):
        if self.kind not in ("adjoint", "nucleus", "zeta"):
            raise InputError(f"unknown fault kind {self.kind!r}")


class FunctorModel:
    """The mutable tables a sweep reads: direct images of ``F(f)``, the
    nucleus for each subobject, and ``zeta`` for each pair of objects."""

    def __init__(self, max_size: int, faults: Iterable[Fault] = ()):
        self.max_size = max_size
        self.objects = [FinObj(k) for k in range(max_size + 1)]
        self.direct: dict[tuple, tuple[int, ...]] = {}
        self.nucleus: dict[tuple[int, int], tuple[int, ...]] = {}
        self.zeta: dict[tuple[int, int], tuple[int, ...]] = {}
        for x in self.objects:
            fx = F_obj(x)
            for m in x.subobjects():
                self.nucleus[(x.n, m)] = closed_nucleus(fx, m).table
        for x in self.objects:
            for y in self.objects:
                if x.n + y.n <= max_size:
                    self.zeta[(x.n, y.n)] = zeta_table(x, y)
        for fault in faults:
            self.inject(fault)

    def direct_of(self, f: FinMap) -> tuple[int, ...]:
        key = (f.source.n, f.target.n, f.table)
        t = self.direct.get(key)
        if t is None:
            t = self.direct[key] = F_mor(f).direct
        return t

    def localic(self, f: FinMap) -> LocalicMap:
        return LocalicMap(preimage_hom(f), self.direct_of(f), check=False)

    def inject(self, fault: Fault) -> None:
        if fault.kind == "adjoint":
            ns, nt, table = fault.key
            f = FinMap(FinObj(ns), FinObj(nt), tuple(table))
            store, key, size = self.direct, (ns, nt, f.table), 1 << nt
            self.direct_of(f)
        elif fault.kind == "nucleus":
            store, key, size = self.nucleus, tuple(fault.key), 1 << fault.key[0]
        else:
            store, key = self.zeta, tuple(fault.key)
            size = (1 << fault.key[0]) * (1 << fault.key[1])
        if key not in store:
            raise InputError(f"fault key {fault.key} is outside the sweep")
        t = list(store[key])
        t[fault.entry] = (t[fault.entry] + 1) % size if fault.value is None else fault.value
        store[key] = tuple(t)


@dataclass
class Record:
    check_id: str
    witness: str
    ok: bool
    counterexample: object = None
    checked: int = 0

    def to_json(self) -> dict:
        out = {"check_id": self.check_id, "witness": self.witness, "pass": self.ok, "checked": self.checked}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class EmbeddingReport:
    max_size: int
    records: list[Record] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def failures(self) -> list[Record]:
        return [r for r in self.records if not r.ok]

    def check_ids(self) -> list[str]:
        return list(dict.fromkeys(r.check_id for r in self.records))

    def to_json(self) -> str:
        body = {"max_size": self.max_size, "pass": self.ok, "records": [r.to_json() for r in self.records]}
        return json.dumps(body, indent=2, sort_keys=True, default=_jsonable)

    def to_text(self) -> str:
        lines = []
        for r in self.records:
            mark = "PASS" if r.ok else "FAIL"
            line = f"{mark}  {r.check_id:<26} {r.witness} ({r.checked} cases)"
            if not r.ok:
                line += f"  counterexample: {json.dumps(r.counterexample, default=_jsonable, sort_keys=True)}"
            lines.append(line)
        lines.append(f"{'ALL PASS' if self.ok else 'FAILURES'}: {len(self.failures())} of {len(self.records)} records failed")
        return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    return repr(obj)


EQUALIZER_EXHAUSTIVE = 4096
EQUALIZER_SAMPLE = 512


def _tasks(max_size: int) -> list[tuple[str, tuple]]:
    """Check groups in report order."""
    sizes = range(max_size + 1)
    out: list[tuple[str, tuple]] = [("terminal", ())]
    out += [("chloc_object", (a,)) for a in sizes]
    out += [("identity", (a,)) for a in sizes]
    out += [("adjoint", (a, b)) for a in sizes for b in sizes]
    out += [("closed", (a, b)) for a in sizes for b in sizes]
    out += [("mono_repi", (a, b)) for a in sizes for b in sizes]
    out += [("faithful", (a, b)) for a in sizes for b in sizes]
    out += [("composition", (a, b, c)) for a in sizes for b in sizes for c in sizes]
    out += [("subobjects", (a,)) for a in sizes]
    out += [("equalizers", (a, b)) for a in sizes for b in sizes]
    out += [("products", (a, b)) for a in sizes for b in sizes]
    out += [("coproducts", (a, b)) for a in sizes for b in sizes if a + b <= max_size]
    out += [("compatible_filtrality", (a, b)) for a in sizes for b in sizes]
    out += [("rectangles", (a, b)) for a in sizes for b in sizes if a and b]
    out += [("copower", (a,)) for a in sizes]
    return out


def _maps(a: int, b: int) -> list[FinMap]:
    return list(fs.all_maps(FinObj(a), FinObj(b)))


def _first_failure(items: Iterable, test: Callable[..., Outcome]) -> tuple[int, Outcome]:
    count = 0
    for item in items:
        count += 1
        try:
            out = test(item)
        except LocaleForgeError as exc:
            out = bad({"case": repr(item), "error": f"{type(exc).__name__}: {exc}"})
        if not out:
            return count, out
    return count, OK


def run_task(model: FunctorModel, name: str, args: tuple, seed: int = 0) -> Record:
    rng = random.Random(f"{seed}:{name}:{args}")
    sep = "->" if _WITNESS_KIND[name] in ("maps", "pairs") else ","
    label = sep.join(map(str, args)) if args else "1"
    check = _CHECKS[name]
    try:
        count, out = check(model, rng, *args)
    except LocaleForgeError as exc:
        count, out = 1, bad({"error": f"{type(exc).__name__}: {exc}"})
    return Record(name, f"{_WITNESS_KIND[name]} {label}", out.ok, out.counterexample, count)


def _c_terminal(model, rng):
    return 1, check_nontrivial_and_terminal()


def _c_object(model, rng, a):
    return 1, chloc_object(FinObj(a))


def _c_identity(model, rng, a):
    f = fs.identity(FinObj(a))
    fx = F_obj(f.source)
    m = model.localic(f)
    if m.hom.table != tuple(fx.elements):
        return 1, bad({"F(id)*": m.hom.table})
    if m.direct != tuple(fx.elements):
        return 1, bad({"F(id)_*": m.direct})
    return 1, OK


def _c_adjoint(model, rng, a, b):
    def test(f):
        m = model.localic(f)
        w = adjunction_witness(m.hom, m.direct)
        if w is not None:
            return bad({"map": f.table, "law": w[0], "at": w[1]})
        if m.direct != image_table(f):
            return bad({"map": f.table, "direct": m.direct, "image": image_table(f)})
        return OK

    return _first_failure(_maps(a, b), test)


def _c_closed(model, rng, a, b):
    def test(f):
        v = is_closed(model.localic(f))
        return OK if v else bad({"map": f.table, "pair": v.witness})

    return _first_failure(_maps(a, b), test)


def _c_mono_repi(model, rng, a, b):
    def test(f):
        m = model.localic(f)
        inj, surj = is_injection(m), is_surjection(m)
        if f.is_injective and not inj:
            return bad({"map": f.table, "mono": inj.witness})
        if f.is_surjective and not surj:
            return bad({"map": f.table, "repi": surj.witness})
        return OK

    return _first_failure(_maps(a, b), test)


def _c_faithful(model, rng, a, b):
    seen: dict[tuple, tuple] = {}
    count = 0
    for f in _maps(a, b):
        count += 1
        key = (preimage_hom(f).table, model.direct_of(f))
        if key in seen:
            return count, bad({"maps": (seen[key], f.table)})
        seen[key] = f.table
    v = fs.check_enough_subobjects(FinObj(a), FinObj(b))
    return count, (OK if v else bad({"enough_subobjects": v.witness}))


def _c_composition(model, rng, a, b, c):
    fs_ab, fs_bc = _maps(a, b), _maps(b, c)
    up = {g.table: preimage_hom(g).table for g in fs_bc}
    count = 0
    for f in fs_ab:
        uf, df = preimage_hom(f).table, model.direct_of(f)
        for g in fs_bc:
            count += 1
            gf = f.then(g)
            ug, dg = up[g.table], model.direct_of(g)
            ugf, dgf = preimage_hom(gf).table, model.direct_of(gf)
            if ugf != tuple(uf[v] for v in ug):
                return count, bad({"f": f.table, "g": g.table, "side": "f*"})
            if dgf != tuple(dg[v] for v in df):
                return count, bad({"f": f.table, "g": g.table, "side": "f_*"})
    return count, OK


def _c_subobjects(model, rng, a):
    x = FinObj(a)
    return 1 << a, subobject_comparison(x, [model.nucleus[(a, m)] for m in x.subobjects()])


def _c_equalizers(model, rng, a, b):
    maps = _maps(a, b)
    pairs = [(f, g) for f in maps for g in maps]
    if len(pairs) > EQUALIZER_EXHAUSTIVE:
        pairs = rng.sample(pairs, EQUALIZER_SAMPLE)
    return _first_failure(pairs, lambda fg: _wrap_pair(fg, check_preserves_equalizers(*fg)))


def _wrap_pair(fg, out: Outcome) -> Outcome:
    if out:
        return out
    return bad({"f": fg[0].table, "g": fg[1].table, "detail": out.counterexample})


def _c_products(model, rng, a, b):
    return 1, product_comparison(FinObj(a), FinObj(b))[1]


def _c_coproducts(model, rng, a, b):
    x, y = FinObj(a), FinObj(b)
    out = check_zeta(x, y, model.zeta[(a, b)])
    if out and a == 0:
        # F(0) is the one-element frame, the unit for products of frames
        if F_obj(x).n != 1:
            out = bad({"F(0)": F_obj(x).n})
    return 1 << (a + b), out


def _c_filtrality(model, rng, a, b):
    return 1, check_compatible_filtrality(FinObj(a), FinObj(b))


def _c_rectangles(model, rng, a, b):
    prod = fs.product(FinObj(a), FinObj(b))
    return 1, check_rectangles(FinObj(a), FinObj(b), model.direct_of(prod.p2))


def _c_copower(model, rng, a):
    return 1, check_copower(FinObj(a))


_CHECKS: dict[str, Callable] = {
    "terminal": _c_terminal,
    "chloc_object": _c_object,
    "identity": _c_identity,
    "adjoint": _c_adjoint,
    "closed": _c_closed,
    "mono_repi": _c_mono_repi,
    "faithful": _c_faithful,
    "composition": _c_composition,
    "subobjects": _c_subobjects,
    "equalizers": _c_equalizers,
    "products": _c_products,
    "coproducts": _c_coproducts,
    "compatible_filtrality": _c_filtrality,
    "rectangles": _c_rectangles,
    "copower": _c_copower,
}

_WITNESS_KIND = {
    "terminal": "object",
    "chloc_object": "object",
    "identity": "object",
    "adjoint": "maps",
    "closed": "maps",
    "mono_repi": "maps",
    "faithful": "maps",
    "composition": "maps",
    "subobjects": "object",
    "equalizers": "pairs",
    "products": "objects",
    "coproducts": "objects",
    "compatible_filtrality": "objects",
    "rectangles": "objects",
    "copower": "object",
}


def _worker(payload: tuple) -> Record:
    max_size, faults, name, args, seed = payload
    return run_task(_worker_model(max_size, faults), name, args, seed)


@lru_cache(maxsize=4)
def _worker_model(max_size: int, faults: tuple) -> FunctorModel:
    return FunctorModel(max_size, faults)


def verify_embedding(
    max_size: int,
    faults: Sequence[Fault] = (),
    seed: int = 0,
    map_fn: Callable[[Callable, Iterable], Iterator] | None = None,
) -> EmbeddingReport:
    """Run every check over all finite sets of size ``<= max_size``.

    ``map_fn`` (e.g. an executor's ``map``) may evaluate check groups in
    parallel; records are always assembled in the fixed task order.
    """
    if max_size < 1:
        raise InputError("max_size must be at least 1")
    tasks = _tasks(max_size)
    if map_fn is None:
        model = FunctorModel(max_size, faults)
        records = [run_task(model, name, args, seed) for name, args in tasks]
    else:
        payloads = [(max_size, tuple(faults), name, args, seed) for name, args in tasks]
        records = list(map_fn(_worker, payloads))
    return EmbeddingReport(max_size, records)
