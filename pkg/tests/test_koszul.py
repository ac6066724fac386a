import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complexes
from torfacet.complexes import SimplicialComplex, boundary_simplex, mgon, points, rp2, simplex, to_vertices
from torfacet.homology import GF, QQ, ZZ
from torfacet.koszul import (
    BettiTable,
    KoszulCohomology,
    KoszulElement,
    betti_table_full_complex,
    betti_table_koszul,
    cup_product,
    differential,
    format_element,
    load_element,
    multidegree_complex,
    parse_element,
    shuffle_sign,
)

SQUARE = mgon(4)


@st.composite
def elements(draw, K, max_terms=5):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        sigma = draw(st.sampled_from(sorted(K.face_set)))
        omega = draw(st.integers(0, K.full_mask)) & ~sigma
        terms[(omega, sigma)] = draw(st.integers(-3, 3))
    return KoszulElement(K, terms)


@st.composite
def complex_with_elements(draw, n=2, max_m=6):
    K = draw(complexes(max_m=max_m))
    return (K,) + tuple(draw(elements(K)) for _ in range(n))


def _homogeneous_parts(x):
    parts = {}
    for (w, s), c in x.terms.items():
        parts.setdefault(bin(w).count("1") + 2 * bin(s).count("1"), {})[(w, s)] = c
    return [KoszulElement(x.K, t) for t in parts.values()]


def test_shuffle_sign():
    assert shuffle_sign(0b001, 0b010) == 1
    assert shuffle_sign(0b010, 0b001) == -1
    assert shuffle_sign(0b101, 0b010) == -1
    assert shuffle_sign(0b110, 0b001) == 1


def test_differential_examples():
    K = points(2)
    assert parse_element(K, "u1").d() == parse_element(K, "v1")
    x = parse_element(K, "u1u2")
    assert differential(x) == parse_element(K, "u2v1 - u1v2")
    assert not x.d().d()
    assert not parse_element(SQUARE, "v1v2").d()


@given(complexes(max_m=7))
def test_d_squared_vanishes_on_basis(K):
    for sigma in K.faces:
        rest = K.full_mask & ~sigma
        omega = rest
        while True:
            assert not KoszulElement(K, {(omega, sigma): 1}).d().d()
            if omega == 0:
                break
            omega = (omega - 1) & rest


@given(complex_with_elements())
def test_leibniz(data):
    K, x, y = data
    for xh in _homogeneous_parts(x):
        sign = (-1) ** xh.total_degree()
        assert (xh * y).d() == xh.d() * y + (xh * y.d()).scale(sign)


@given(complex_with_elements(n=3, max_m=5))
def test_product_is_associative_and_unital(data):
    K, x, y, z = data
    assert (x * y) * z == x * (y * z)
    one = KoszulElement.one(K)
    assert one * x == x and x * one == x


@given(complex_with_elements(max_m=5))
def test_graded_commutativity(data):
    K, x, y = data
    for xh in _homogeneous_parts(x):
        for yh in _homogeneous_parts(y):
            sign = (-1) ** (xh.total_degree() * yh.total_degree())
            assert xh * yh == (yh * xh).scale(sign)


def test_multidegree_complex_examples():
    c = multidegree_complex(SQUARE, [])
    assert c.basis == {0: [(0, 0)]} and c.cohomology()[0].rank == 1
    c = multidegree_complex(SQUARE, [1, 3])
    assert c.basis[2] == [(0b101, 0)]
    assert sorted(c.basis[1]) == sorted([(0b100, 0b001), (0b001, 0b100)])
    assert c.basis[0] == []
    assert {i: g.rank for i, g in c.cohomology().items()} == {1: 1}
    c = multidegree_complex(SQUARE, [1, 2, 3, 4])
    assert {i: g.rank for i, g in c.cohomology().items()} == {2: 1}
    with pytest.raises(ValueError):
        multidegree_complex(SQUARE, [5])


def test_betti_table_examples():
    assert betti_table_koszul(SQUARE, QQ).ranks() == {(0, 0): 1, (-1, 4): 2, (-2, 8): 1}
    for m in range(2, 6):
        assert betti_table_koszul(boundary_simplex(m), QQ).ranks() == {(0, 0): 1, (-1, 2 * m): 1}
        assert betti_table_koszul(simplex(m), QQ).ranks() == {(0, 0): 1}


def test_ghost_vertices_give_exterior_algebra():
    K = SimplicialComplex(3, (0,))
    t = betti_table_koszul(K, ZZ)
    assert t.ranks() == {(0, 0): 1, (-1, 2): 3, (-2, 4): 3, (-3, 6): 1}


def test_rp2_torsion():
    t = betti_table_koszul(rp2(), ZZ)
    # H^2(RP^2; Z) = Z/2 sits in multidegree [6], level 6 - 2 - 1 = 3
    assert t.entries[(-3, 12)].torsion == (2,)
    assert t.rank(-3, 12) == 0
    assert betti_table_koszul(rp2(), GF(2)).rank(-3, 12) == 1
    assert betti_table_koszul(rp2(), GF(2)).rank(-4, 12) == 1


@pytest.mark.parametrize("coeff", [QQ, GF(2), GF(3), ZZ], ids=str)
@given(K=complexes(max_m=5))
def test_full_complex_oracle(coeff, K):
    assert betti_table_koszul(K, coeff) == betti_table_full_complex(K, coeff)


@pytest.mark.parametrize("p", [2, 3])
@given(K=complexes(max_m=6))
def test_rational_vs_mod_p_explained_by_torsion(p, K):
    tq, tp, tz = betti_table_koszul(K, QQ), betti_table_koszul(K, GF(p)), betti_table_koszul(K, ZZ)

    def tors(neg_i, j2):
        g = tz.entries.get((neg_i, j2))
        return sum(1 for q in g.torsion if q % p == 0) if g else 0

    keys = set(tq.entries) | set(tp.entries) | set(tz.entries)
    for neg_i, j2 in keys:
        assert tq.rank(neg_i, j2) == tz.rank(neg_i, j2)
        assert tp.rank(neg_i, j2) - tq.rank(neg_i, j2) == tors(neg_i, j2) + tors(neg_i + 1, j2)


def test_torsion_explains_mod2_jump_on_rp2():
    K = rp2()
    tq, t2, tz = (betti_table_koszul(K, c) for c in (QQ, GF(2), ZZ))
    jumps = {k: t2.rank(*k) - tq.rank(*k) for k in t2.entries if t2.rank(*k) != tq.rank(*k)}
    assert jumps == {(-3, 12): 1, (-4, 12): 1}
    assert [k for k, g in tz.entries.items() if g.torsion] == [(-3, 12)]


@given(complexes(max_m=6))
def test_multigraded_refinement_sums(K):
    t = betti_table_koszul(K, QQ, multigraded=True)
    sums = {}
    for (neg_i, w), r in t.multigraded.items():
        key = (neg_i, 2 * bin(w).count("1"))
        sums[key] = sums.get(key, 0) + r
    assert sums == t.ranks()


def test_betti_table_json_round_trip():
    t = betti_table_koszul(rp2(), ZZ, multigraded=True)
    d = t.to_dict()
    assert d["schema"] == 1 and d["field"] == "z"
    back = BettiTable.from_dict(d)
    assert back == t and back.multigraded == t.multigraded
    assert t.total_betti()[0] == 1


def test_threads_do_not_change_result():
    K = mgon(7)
    assert betti_table_koszul(K, ZZ, threads=4).to_dict() == betti_table_koszul(K, ZZ).to_dict()


def test_cup_product_rules():
    K = boundary_simplex(3)
    assert not parse_element(K, "u1v2").is_cocycle()
    one = KoszulElement.one(K)
    z = parse_element(K, "u3v1v2")
    assert z.is_cocycle()
    assert cup_product(one, z) == z
    with pytest.raises(ValueError):
        cup_product(parse_element(K, "u1"), one)


def test_points_products_vanish_in_cohomology():
    K = points(4)
    H = KoszulCohomology(K, QQ)
    classes = [c for t in range(1, 8) for c in H.basis_in_degree(t)]
    assert classes
    for a in classes:
        for b in classes:
            assert H.is_coboundary(cup_product(a, b))


def test_sphere_class_is_u1_v_rest():
    for m in range(2, 7):
        K = boundary_simplex(m)
        H = KoszulCohomology(K, QQ)
        x = KoszulElement.monomial(K, [1], range(2, m + 1))
        assert x.is_cocycle() and not H.is_coboundary(x)
        [basis] = H.basis(K.full_mask, 1)
        key = (K.full_mask, 1)
        cx, cb = H.coordinates(x), H.coordinates(basis)
        assert list(cx) == list(cb) == [key]
        assert cx[key] in (cb[key], [-c for c in cb[key]])


def test_preimage_solves():
    H = KoszulCohomology(SQUARE, QQ)
    b = parse_element(SQUARE, "v1v2")
    e = H.preimage(b)
    assert e is not None and e.d() == b
    assert H.preimage(b, order="last").d() == b
    assert H.preimage(parse_element(SQUARE, "u1v3")) is None


def test_string_and_json_forms():
    K = boundary_simplex(4)
    x = parse_element(K, "u1v2 - 2*u3v1 + 1/2*v1v2")
    assert format_element(x) == "1/2*v1v2 + v2 u1 - 2*v1 u3"
    assert format_element(-parse_element(K, "u1")) == "-u1"
    assert KoszulElement.from_list(K, x.to_list()) == x
    assert load_element(K, '[{"omega": [1], "sigma": [2], "coeff": 1}]') == parse_element(K, "u1v2")
    assert parse_element(K, "v2u1") == parse_element(K, "u1v2")
    assert parse_element(K, "u2u1") == -parse_element(K, "u1u2")
    assert parse_element(K, "0") == KoszulElement.zero(K)
    for bad in ("u9", "x1", "u1 +"):
        with pytest.raises(ValueError):
            parse_element(K, bad)
    with pytest.raises(ValueError):
        KoszulElement.from_list(K, [{"omega": [1], "sigma": [1], "coeff": 1}])


@given(complex_with_elements(n=1))
def test_format_parse_round_trip(data):
    K, x = data
    assert parse_element(K, format_element(x)) == x
    assert [t["omega"] for t in x.to_list()] == [list(to_vertices(w)) for w in
                                                 [k[0] for k in sorted(x.terms, key=lambda k: (
                                                     to_vertices(k[0] | k[1]), to_vertices(k[0])))]]
