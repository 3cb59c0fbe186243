"""Binary coproducts of finite frames, their universal property, and the
closed-diagonal (Hausdorff) test."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError, MultipleMediators, NoMediator
from .frame import Frame, hom_witness
from .maps import FrameHom, enumerate_homs, right_adjoint
from .nuclei import closed_nucleus
from .poset import bits, mask_of, product
from .verdict import PASS, Verdict, fail


@dataclass(frozen=True)
class FrameCoproduct:
    """``carrier`` is the downset frame of the product of the dual posets;
    point ``(p, q)`` has index ``p * right.poset.n + q``."""

    left: Frame
    right: Frame
    carrier: Frame
    u1: FrameHom
    u2: FrameHom

    def pair(self, p: int, q: int) -> int:
        return p * self.right.poset.n + q

    def generator(self, a: int, b: int) -> int:
        """``a (+) b = u1(a) & u2(b)``."""
        return self.carrier.meet(self.u1.table[a], self.u2.table[b])

    def mediator_table(self, h1: FrameHom, h2: FrameHom) -> tuple[int, ...]:
        """``D -> join over (p, q) in D of h1(down p) & h2(down q)``."""
        n_tgt = h1.target
        m = self.right.poset.n
        atom = {}
        for p in range(self.left.poset.n):
            hp = h1.table[self.left.principal(p)]
            for q in range(m):
                atom[p * m + q] = n_tgt.meet(hp, h2.table[self.right.principal(q)])
        return tuple(n_tgt.join_all(atom[k] for k in bits(d)) for d in self.carrier.masks)


def coproduct(left: Frame, right: Frame, cap: int | None = None) -> FrameCoproduct:
    prod = product(left.poset, right.poset)
    carrier = Frame(prod, prod.downset_masks(cap))
    m = right.poset.n
    u1 = FrameHom(left, carrier, [
        carrier.index[mask_of(p * m + q for p in bits(a) for q in range(m))] for a in left.masks
    ], check=False)
    u2 = FrameHom(right, carrier, [
        carrier.index[mask_of(p * m + q for p in range(left.poset.n) for q in bits(b))] for b in right.masks
    ], check=False)
    return FrameCoproduct(left, right, carrier, u1, u2)


def generator_closure(cp: FrameCoproduct) -> set[int]:
    """Elements reachable as joins of ``a (+) b``."""
    c = cp.carrier
    gens = {cp.generator(a, b) for a in cp.left.elements for b in cp.right.elements}
    mask = {c.masks[g] for g in gens}
    reach = {0}
    for g in mask:
        reach |= {r | g for r in reach}
    return {c.index[r] for r in reach}


def generators_join_dense(cp: FrameCoproduct) -> bool:
    """Generators are join-dense iff every join-irreducible ``down (p, q)``
    is one, namely ``down p (+) down q``."""
    c = cp.carrier
    for p in range(cp.left.poset.n):
        for q in range(cp.right.poset.n):
            ji = c.index[c.poset.down[cp.pair(p, q)]]
            if cp.generator(cp.left.principal(p), cp.right.principal(q)) != ji:
                return False
    return True


def cocone_signature(cp: FrameCoproduct, table: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return (
        tuple(table[x] for x in cp.u1.table),
        tuple(table[x] for x in cp.u2.table),
    )


def verify_universal_property(
    cp: FrameCoproduct,
    h1: FrameHom,
    h2: FrameHom,
    competitors: Iterable[Sequence[int]] | Counter | None = None,
) -> FrameHom:
    """The unique frame hom ``h`` with ``h . u1 = h1`` and ``h . u2 = h2``.

    Uniqueness is certified by search over all homs ``carrier -> N`` when
    ``|N| <= 5`` (``competitors`` may pass a precomputed
    :func:`mediator_census`), otherwise by density of the generators.
    """
    if h1.source is not cp.left or h2.source is not cp.right:
        raise InputError("cocone legs do not start at the coproduct summands")
    if h1.target is not h2.target:
        raise InputError("cocone legs have different codomains")
    n_tgt = h1.target
    table = cp.mediator_table(h1, h2)
    if hom_witness(cp.carrier, n_tgt, table) is not None:
        raise NoMediator("candidate mediator is not a frame homomorphism")
    sig = (h1.table, h2.table)
    if cocone_signature(cp, table) != sig:
        raise NoMediator("candidate mediator does not factor the cocone")
    if n_tgt.n <= 5 or competitors is not None:
        census = competitors if isinstance(competitors, Counter) else mediator_census(cp, n_tgt, competitors)
        count = census.get(sig, 0)
        if count == 0:
            raise NoMediator("no frame hom out of the carrier factors the cocone")
        if count > 1:
            raise MultipleMediators(f"{count} frame homs factor the cocone")
    elif not generators_join_dense(cp):
        raise MultipleMediators("generators are not join-dense, mediator not determined")
    return FrameHom(cp.carrier, n_tgt, table, check=False)


def mediator_census(cp: FrameCoproduct, target: Frame, homs: Iterable[Sequence[int]] | None = None) -> Counter:
    """Count of homs ``carrier -> target`` per induced cocone."""
    if homs is None:
        homs = (h.table for h in enumerate_homs(cp.carrier, target))
    return Counter(cocone_signature(cp, t) for t in homs)


def codiagonal(frame: Frame, cp: FrameCoproduct | None = None) -> tuple[FrameCoproduct, FrameHom]:
    cp = coproduct(frame, frame) if cp is None else cp
    ident = FrameHom.identity(frame)
    return cp, verify_universal_property(cp, ident, ident)


def check_hausdorff(frame: Frame) -> Verdict:
    """The diagonal is closed: with ``j = delta_* . codiagonal`` on the
    carrier of ``L + L``, ``j`` must equal ``c_{j(0)}``."""
    cached = frame.__dict__.get("_hausdorff")
    if cached is None:
        cached = frame.__dict__["_hausdorff"] = _hausdorff(frame)
    return cached


def _hausdorff(frame: Frame) -> Verdict:
    cp, nabla = codiagonal(frame)
    down = right_adjoint(nabla)
    c = cp.carrier
    j = [down[nabla.table[x]] for x in c.elements]
    closed = closed_nucleus(c, j[c.bot]).table
    for x in c.elements:
        if j[x] != closed[x]:
            return fail(x, f"j({x})={j[x]} but c_j0({x})={closed[x]}")
    return PASS
