import json
import random

import pytest
from hypothesis import given

from conftest import posets
from localeforge import config
from localeforge.errors import InputError, NotALattice, NotDistributive, NotLatticeHom
from localeforge.frame import (
    Frame,
    boolean,
    boolean_center,
    chain,
    check_compact,
    check_normal,
    check_regular,
    check_subfit,
    enumerate_distributive_lattices,
    find_isomorphism,
    frame_product,
    ideal_map,
    ideal_sets,
    ideals,
    load_frame,
    phi,
)
from localeforge.maps import FrameHom, random_hom
from localeforge.poset import all_downsets, bits
from oracles import brute_complemented, brute_imp, brute_join, brute_meet

LATTICES = enumerate_distributive_lattices(8)

# chain C3 as 0 < m < 1 has indices 0, 1, 2
C3_BOT, C3_MID, C3_TOP = 0, 1, 2


def leq_matrix(f):
    return [[f.leq(a, b) for b in f.elements] for a in f.elements]


@pytest.mark.parametrize("lat", LATTICES, ids=lambda f: f"n{f.n}")
def test_lattice_operations_match_order_oracle(lat):
    leq = leq_matrix(lat)
    for a in lat.elements:
        for b in lat.elements:
            assert lat.meet(a, b) == brute_meet(leq, a, b)
            assert lat.join(a, b) == brute_join(leq, a, b)
            assert lat.imp(a, b) == brute_imp(leq, a, b)


@pytest.mark.parametrize("lat", LATTICES, ids=lambda f: f"n{f.n}")
def test_frame_invariants(lat):
    e = list(lat.elements)
    for a in e:
        assert lat.meet(a, lat.top) == a and lat.join(a, lat.bot) == a
        neg = lat.neg(a)
        disjoint = [v for v in e if lat.meet(v, a) == lat.bot]
        assert neg in disjoint and all(lat.leq(v, neg) for v in disjoint)
        for b in e:
            for w in e:
                assert lat.leq(lat.meet(a, w), b) == lat.leq(w, lat.imp(a, b))
                assert lat.meet(a, lat.join(b, w)) == lat.join(lat.meet(a, b), lat.meet(a, w))


def test_from_order_keeps_indices_and_validates():
    # diamond 0 < 1, 2 < 3 with the input numbering
    leq = [[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]]
    f = Frame.from_order([[bool(v) for v in row] for row in leq])
    assert (f.bot, f.top) == (0, 3)
    assert f.meet(1, 2) == 0 and f.join(1, 2) == 3
    assert find_isomorphism(f, boolean(2)) is not None


def test_non_lattice_rejected():
    # two incomparable maximal elements, no top
    leq = [[True, True, True], [False, True, False], [False, False, True]]
    with pytest.raises(NotALattice):
        Frame.from_order(leq)


def test_non_distributive_rejected():
    # the diamond M3: 0 < a, b, c < 1
    n = 5
    leq = [[i == j or i == 0 or j == 4 for j in range(n)] for i in range(n)]
    with pytest.raises(NotDistributive):
        Frame.from_order(leq)
    # the pentagon N5: 0 < a < b < 1, 0 < c < 1
    leq = [[False] * 5 for _ in range(5)]
    for i, j in [(0, 1), (1, 2), (0, 2), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)] + [(k, k) for k in range(5)]:
        leq[i][j] = True
    with pytest.raises(NotDistributive):
        Frame.from_order(leq)


def test_json_formats_round_trip():
    c3 = chain(3)
    again = load_frame(json.dumps(c3.to_json()))
    assert leq_matrix(again) == leq_matrix(c3)
    via_poset = Frame.from_json({"poset": {"n": 2, "cover": [[0, 1]]}})
    assert find_isomorphism(via_poset, c3) is not None
    with pytest.raises(InputError):
        Frame.from_json({"n": 2})
    with pytest.raises(InputError):
        Frame.from_json({"n": 3, "leq": [[1]]})


@given(posets(max_n=4))
def test_explicit_order_round_trip(p):
    f = all_downsets(p)
    g = Frame.from_order(leq_matrix(f))
    assert leq_matrix(g) == leq_matrix(f)
    assert find_isomorphism(g, f) is not None


def test_frame_product_order():
    a, b = chain(2), chain(3)
    ab = frame_product(a, b)
    assert ab.n == 6
    for x in ab.elements:
        for y in ab.elements:
            (x1, x2), (y1, y2) = divmod(x, 3), divmod(y, 3)
            assert ab.leq(x, y) == (a.leq(x1, y1) and b.leq(x2, y2))


# -- Boolean center --------------------------------------------------------


def test_boolean_center_examples():
    alg, emb = boolean_center(chain(2))
    assert alg.size == 2 and emb == (0, 1)
    alg, emb = boolean_center(chain(3))
    assert sorted(emb) == [C3_BOT, C3_TOP]
    alg, emb = boolean_center(boolean(2))
    assert alg.size == 4 and sorted(emb) == [0, 1, 2, 3]


@pytest.mark.parametrize("lat", LATTICES, ids=lambda f: f"n{f.n}")
def test_boolean_center_matches_oracle(lat):
    alg, emb = boolean_center(lat)
    assert sorted(emb) == brute_complemented(leq_matrix(lat))
    assert emb[0] == lat.bot and emb[alg.full] == lat.top
    for a in range(alg.size):
        assert alg.complement(alg.complement(a)) == a
        for b in range(alg.size):
            assert emb[a & b] == lat.meet(emb[a], emb[b])
            assert emb[a | b] == lat.join(emb[a], emb[b])
            assert alg.complement(a | b) == alg.complement(a) & alg.complement(b)


# -- ideals ------------------------------------------------------------------


def brute_ideals(lat):
    out = []
    for s in range(1 << lat.n):
        members = set(bits(s))
        if lat.bot not in members:
            continue
        if any(not s >> y & 1 for x in members for y in lat.elements if lat.leq(y, x)):
            continue
        if any(lat.join(x, y) not in members for x in members for y in members):
            continue
        out.append(s)
    return sorted(out)


def test_ideal_examples():
    for lat in (chain(2), chain(3), boolean(2)):
        idl = ideals(lat)
        assert idl.frame.n == lat.n
        iso = find_isomorphism(lat, idl.frame)
        assert iso is not None
        for a in lat.elements:
            for b in lat.elements:
                assert lat.leq(a, b) == idl.frame.leq(idl.unit[a], idl.unit[b])


@pytest.mark.parametrize("lat", enumerate_distributive_lattices(7), ids=lambda f: f"n{f.n}")
def test_every_ideal_is_principal(lat):
    sets = ideal_sets(lat)
    assert sorted(sets) == brute_ideals(lat)
    idl = ideals(lat)
    assert sorted(idl.unit) == list(idl.frame.elements)


def test_ideal_map_examples():
    c3 = chain(3)
    ident = FrameHom.identity(c3)
    m = ideal_map(ident)
    assert m.table == tuple(m.source.elements)
    c2 = chain(2)
    h = FrameHom(c2, c3, [C3_BOT, C3_TOP])
    m = ideal_map(h)
    il, im = ideals(c2), ideals(c3)
    # the ideal {0} goes to {0}, the ideal {0, 1} to all of C3
    assert im.members[m.table[il.unit[0]]] == 1 << C3_BOT
    assert im.members[m.table[il.unit[1]]] == (1 << 3) - 1


def test_ideal_map_rejects_non_homs():
    c3 = chain(3)
    with pytest.raises(NotLatticeHom):
        ideal_map(FrameHom(c3, c3, [0, 2, 1], check=False))


def test_ideal_map_functorial_and_natural():
    rng = random.Random(7)
    lats = enumerate_distributive_lattices(6)
    for _ in range(60):
        a, b, c = (rng.choice(lats) for _ in range(3))
        h, g = random_hom(a, b, rng), random_hom(b, c, rng)
        if h is None or g is None:
            continue
        composite = ideal_map(h.then(g))
        stepwise = ideal_map(h).then(ideal_map(g))
        assert composite.table == stepwise.table
        ia, ib = ideals(a), ideals(b)
        ih = ideal_map(h)
        for x in a.elements:
            assert ih.table[ia.unit[x]] == ib.unit[h.table[x]]
    ident = ideal_map(FrameHom.identity(lats[-1]))
    assert ident.table == tuple(ident.source.elements)


# -- phi --------------------------------------------------------------------


def test_phi_examples():
    assert phi(boolean(2)).is_iso
    assert phi(chain(2)).is_iso
    r = phi(chain(3))
    assert not r.is_iso
    assert r.mapping[C3_MID] == r.mapping[C3_BOT]


@pytest.mark.parametrize("lat", LATTICES, ids=lambda f: f"n{f.n}")
def test_phi_iso_iff_boolean(lat):
    assert phi(lat).is_iso == lat.is_boolean


# -- locale properties ---------------------------------------------------------


def brute_normal(lat):
    e = list(lat.elements)
    for a in e:
        for b in e:
            if lat.join(a, b) != lat.top:
                continue
            if not any(
                lat.join(a, u) == lat.top and lat.join(b, v) == lat.top and lat.meet(u, v) == lat.bot
                for u in e for v in e
            ):
                return False
    return True


def test_property_examples_c2_c3_square():
    c2, c3, sq = chain(2), chain(3), boolean(2)
    for lat in (c2, sq):
        assert check_regular(lat) and check_normal(lat) and check_subfit(lat) and check_compact(lat)
    assert check_compact(c3)
    assert not check_regular(c3)
    assert check_regular(c3).witness == C3_MID
    assert not check_subfit(c3)
    # every chain is normal: a or b = 1 forces one of them to be 1
    assert check_normal(c3)
    assert check_compact(boolean(3))


@pytest.mark.parametrize("lat", LATTICES, ids=lambda f: f"n{f.n}")
def test_normal_matches_brute_force(lat):
    assert check_normal(lat).ok == brute_normal(lat)


def test_chains_are_normal_but_not_regular():
    for n in range(3, 8):
        c = chain(n)
        assert check_normal(c)
        assert not check_regular(c)


@pytest.mark.parametrize("lat", LATTICES, ids=lambda f: f"n{f.n}")
def test_subfit_forms_agree(lat):
    # raises SubfitFormsDisagree if the two forms split
    v = check_subfit(lat)
    assert v.ok == lat.is_boolean


def test_compact_fallback_above_cap(caplog):
    big = boolean(5)
    with config.override(directed_cap=1 << 10):
        v = check_compact(big)
    assert v.ok and "finite-maximum" in v.note


def test_compact_literal_on_small_frames():
    for lat in enumerate_distributive_lattices(8):
        v = check_compact(lat)
        assert v.ok and not v.note


def test_dot_output():
    dot = chain(3).to_dot()
    assert "0 -> 1" in dot and "1 -> 2" in dot
