import json
import random

import pytest

from localeforge import finset as fs
from localeforge.coproduct import check_hausdorff
from localeforge.errors import InputError
from localeforge.finset import FinMap, FinObj, all_maps
from localeforge.frame import boolean, chain, check_compact, check_regular, find_isomorphism, frame_product
from localeforge.functor import (
    OMEGA,
    F_mor,
    F_obj,
    Fault,
    FunctorModel,
    check_compatible_filtrality,
    check_copower,
    check_nontrivial_and_terminal,
    check_preserves_equalizers,
    check_rectangles,
    check_zeta,
    chloc_object,
    copower_alpha,
    image_table,
    product_comparison,
    subobject_comparison,
    verify_embedding,
    zeta_table,
)
from localeforge.maps import is_closed, is_injection, is_surjection
from localeforge.nuclei import closed_nucleus


def maps_upto(n):
    for a in range(n + 1):
        for b in range(n + 1):
            yield from all_maps(FinObj(a), FinObj(b))


def test_object_examples():
    assert F_obj(FinObj(0)).n == 1
    f2 = F_obj(FinObj(2))
    assert f2.n == 4 and find_isomorphism(f2, boolean(2)) is not None
    # reversed inclusion: the whole set is the bottom
    assert f2.bot == 0b11 and f2.top == 0


@pytest.mark.parametrize("n", range(5))
def test_object_order_is_reverse_inclusion(n):
    fx = F_obj(FinObj(n))
    for a in fx.elements:
        for b in fx.elements:
            assert fx.leq(a, b) == (b & ~a == 0)
    assert check_compact(fx) and check_regular(fx)
    if n <= 3:
        assert check_hausdorff(fx)
    assert chloc_object(FinObj(n))


def test_surjection_goes_to_localic_surjection():
    f = FinMap(FinObj(3), FinObj(2), (0, 0, 1))
    m = F_mor(f)
    assert is_surjection(m)
    assert not is_injection(m)
    assert is_closed(m)


def test_morphisms_exhaustive():
    for f in maps_upto(3):
        m = F_mor(f)
        # the right adjoint of preimage, computed generically, is direct image
        assert m.direct == image_table(f)
        assert is_closed(m)
        assert bool(is_injection(m)) == f.is_injective
        assert bool(is_surjection(m)) == f.is_surjective


def test_functoriality_and_faithfulness():
    for a in range(4):
        x = FinObj(a)
        assert F_mor(fs.identity(x)).direct == tuple(F_obj(x).elements)
        for b in range(4):
            seen = {}
            for f in all_maps(x, FinObj(b)):
                d = F_mor(f).direct
                assert d not in seen
                seen[d] = f
            for c in range(3):
                for f in all_maps(x, FinObj(b)):
                    for g in all_maps(FinObj(b), FinObj(c)):
                        lhs = F_mor(f.then(g)).direct
                        rhs = tuple(F_mor(g).direct[v] for v in F_mor(f).direct)
                        assert lhs == rhs


def test_subobject_comparison_examples():
    assert subobject_comparison(FinObj(1))
    assert subobject_comparison(FinObj(2))
    fx = F_obj(FinObj(2))
    for m in FinObj(2).subobjects():
        assert closed_nucleus(fx, m)(fx.bot) == m


@pytest.mark.parametrize("n", range(6))
def test_subobject_comparison_sweep(n):
    assert subobject_comparison(FinObj(n))


def test_subobject_comparison_catches_corruption():
    x = FinObj(2)
    fx = F_obj(x)
    table = [list(closed_nucleus(fx, m).table) for m in x.subobjects()]
    table[1], table[2] = table[2], table[1]
    assert not subobject_comparison(x, table)


def test_equalizer_examples():
    two = FinObj(2)
    ident = fs.identity(two)
    swap = FinMap(two, two, (1, 0))
    assert check_preserves_equalizers(ident, ident)
    assert check_preserves_equalizers(ident, swap)
    with pytest.raises(InputError):
        check_preserves_equalizers(ident, fs.identity(FinObj(3)))


def test_equalizers_sampled():
    rng = random.Random(2)
    for _ in range(40):
        x, y = FinObj(rng.randrange(4)), FinObj(rng.randrange(1, 4))
        f, g = fs.random_map(x, y, rng), fs.random_map(x, y, rng)
        assert check_preserves_equalizers(f, g)


def test_product_comparison_examples():
    one, two = FinObj(1), FinObj(2)
    p, out = product_comparison(one, two)
    assert out
    p, out = product_comparison(two, two)
    assert out
    assert p.hom.source.n == 16 and p.hom.target.n == 16
    assert p.direct[p.domain_frame.bot] == p.codomain_frame.bot


@pytest.mark.parametrize("a,b", [(a, b) for a in range(4) for b in range(4) if a + b <= 4])
def test_product_comparison_sweep(a, b):
    assert product_comparison(FinObj(a), FinObj(b))[1]


def test_compatible_filtrality():
    for a in range(4):
        for b in range(4):
            if a * b <= 6:
                assert check_compatible_filtrality(FinObj(a), FinObj(b))


def test_zeta_examples():
    assert check_zeta(FinObj(0), FinObj(2))
    assert check_zeta(FinObj(1), FinObj(1))
    t = zeta_table(FinObj(1), FinObj(1))
    assert sorted(t) == list(range(4))
    tgt = frame_product(F_obj(FinObj(1)), F_obj(FinObj(1)))
    assert tgt.n == 4
    bad = list(t)
    bad[0], bad[1] = bad[1], bad[0]
    assert not check_zeta(FinObj(1), FinObj(1), bad)


def test_zeta_sweep():
    for a in range(4):
        for b in range(4):
            assert check_zeta(FinObj(a), FinObj(b), rng=random.Random(0))


def test_terminal_and_omega():
    assert OMEGA.n == 2
    assert check_nontrivial_and_terminal()
    assert find_isomorphism(F_obj(fs.terminal()), chain(2)) is not None


def test_copower_examples():
    alpha, _, via_adjoint, via_definition = copower_alpha(FinObj(0))
    assert alpha.table == (0,)
    alpha, alpha_star, via_adjoint, via_definition = copower_alpha(FinObj(2))
    assert alpha.table == (0b11, 0b10, 0b01, 0b00)
    assert via_adjoint == via_definition
    for s in range(5):
        assert check_copower(FinObj(s))


def test_rectangles():
    for a in range(1, 4):
        for b in range(1, 4):
            assert check_rectangles(FinObj(a), FinObj(b))
    with pytest.raises(InputError):
        check_rectangles(FinObj(0), FinObj(2))
    x = FinObj(2)
    wrong = list(image_table(fs.product(x, x).p2))
    wrong[F_obj(FinObj(4)).top] = 0b01
    assert not check_rectangles(x, x, wrong)


# -- the sweep ------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_verify_embedding_passes(n):
    report = verify_embedding(n)
    assert report.ok, report.to_text()
    assert report.to_text().rstrip().splitlines()[-1].startswith("ALL PASS")


def test_report_is_deterministic_and_well_formed():
    a, b = verify_embedding(2).to_json(), verify_embedding(2).to_json()
    assert a == b
    body = json.loads(a)
    assert body["pass"] is True
    for rec in body["records"]:
        assert {"check_id", "witness", "pass"} <= rec.keys()
    ids = verify_embedding(2).check_ids()
    for name in ("terminal", "identity", "adjoint", "subobjects", "equalizers", "products", "coproducts"):
        assert name in ids


@pytest.mark.parametrize(
    "fault,check_id",
    [
        (Fault("adjoint", (2, 2, (0, 1)), 1), "adjoint"),
        (Fault("nucleus", (2, 1), 0), "subobjects"),
        (Fault("zeta", (1, 1), 2), "coproducts"),
    ],
)
def test_fault_injection_is_localized(fault, check_id):
    report = verify_embedding(2, [fault])
    assert not report.ok
    assert check_id in {r.check_id for r in report.failures()}
    failing = [r for r in report.failures() if r.check_id == check_id]
    assert failing[0].counterexample is not None


def test_unknown_faults_rejected():
    with pytest.raises(InputError):
        Fault("bogus", (1,), 0)
    with pytest.raises(InputError):
        FunctorModel(2, [Fault("nucleus", (9, 0), 0)])
    with pytest.raises(InputError):
        verify_embedding(0)


def test_parallel_map_gives_same_report():
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=2) as pool:
        par = verify_embedding(2, map_fn=pool.map)
    assert par.to_json() == verify_embedding(2).to_json()
