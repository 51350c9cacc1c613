import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tamecoh.cech import (
    FreeComplex,
    HomogeneityError,
    PolyMap,
    box,
    cech_oracle,
    chain_homology,
    complex_hp_homology,
    dual_map,
    hp_basis,
    hp_matrix,
    hq_basis,
    hq_matrix,
    identity_map,
    monomial,
    multiplication_map,
    pairing_check,
    pairing_matrix,
    poly_add,
    taylor_complex,
    verify_complex_duality,
)
from tamecoh.grading import GradingSpec, InputError, NotSharpError
from tamecoh.linalg import Matrix

STD11 = GradingSpec.standard(1, 1)
STD21 = GradingSpec.standard(2, 1)
STD22 = GradingSpec.standard(2, 2)

X1_11 = monomial((1,), (0,))
Y1_11 = monomial((0,), (1,))


def basis_set(piece):
    return {(s, p) for _, s, p in piece.basis}


def test_hp_basis_examples():
    assert basis_set(hp_basis(STD21, (0, 0), (-2, 0))) == {((0, 0), (0,))}
    assert hp_basis(STD21, (0, 0), (0, 0)).dimension == 0
    assert basis_set(hp_basis(STD21, (0, 0), (-3, 1))) == {((1, 0), (1,)), ((0, 1), (1,))}


def test_hq_basis_examples():
    assert basis_set(hq_basis(STD21, (0, 0), (0, -1))) == {((0, 0), (0,))}
    assert hq_basis(STD21, (0, 0), (0, 0)).dimension == 0
    assert basis_set(hq_basis(STD21, (0, 0), (1, -1))) == {((1, 0), (0,)), ((0, 1), (0,))}


def test_shift_moves_the_piece():
    assert hp_basis(STD21, (1, 2), (-1, 2)) == hp_basis(STD21, (0, 0), (-2, 0))


def test_non_sharp_refused():
    with pytest.raises(NotSharpError):
        hp_basis(GradingSpec(((1,),), ((1,),)), (0,), (0,))


def test_hp_matrix_x1_lowers_s():
    phi = multiplication_map(STD11, X1_11)  # S(-(1,0)) -> S
    for gamma in box(2, 3):
        mat = hp_matrix(phi, gamma)
        src = hp_basis(STD11, (1, 0), gamma)
        tgt = hp_basis(STD11, (0, 0), gamma)
        tidx = tgt.index()
        for col, (_, s, p) in enumerate(src.basis):
            column = [mat.rows[r][col] for r in range(mat.nrows)]
            if s[0] == 0:
                assert not any(column)
            else:
                expect = [0] * mat.nrows
                expect[tidx[(0, (s[0] - 1,), p)]] = 1
                assert column == expect


def test_identity_and_y1_maps():
    ident = identity_map(STD11, [(0, 0)])
    phi = multiplication_map(STD11, Y1_11)
    for gamma in box(2, 3):
        mat = hp_matrix(ident, gamma)
        assert mat.equals(Matrix.identity(mat.nrows))
        assert hq_matrix(ident, gamma).equals(Matrix.identity(hq_basis(STD11, (0, 0), gamma).dimension))
        m = hp_matrix(phi, gamma)
        assert m.rank() == m.ncols  # injective on P-side
        q = hq_matrix(multiplication_map(STD11, X1_11), gamma)
        assert q.rank() == q.ncols  # x acts injectively on Q-side


def test_hq_matrix_y1_lowers_q():
    phi = multiplication_map(STD11, Y1_11)
    for gamma in box(2, 3):
        mat = hq_matrix(phi, gamma)
        src = hq_basis(STD11, (0, 1), gamma)
        for col, (_, t, q) in enumerate(src.basis):
            nz = sum(1 for r in range(mat.nrows) if mat.rows[r][col])
            assert nz == (1 if q[0] >= 1 else 0)


def test_dual_map_examples():
    sigma = STD22.sigma
    ident = identity_map(STD22, [(1, 1)])
    d = dual_map(ident)
    assert d.source == d.target == ((1, 1),)  # sigma - (1,1)
    x = monomial((1, 0), (0, 0))
    phi = multiplication_map(STD22, x)
    dphi = dual_map(phi)
    assert dphi.source == (sigma,) and dphi.target == ((1, 2),)
    assert dphi.entries == [[x]]
    two = PolyMap(STD22, [(1, 0)], [(0, 0), (0, 0)], [[x], [monomial((0, 1), (0, 0), 3)]])
    dtwo = dual_map(two)
    assert len(dtwo.entries) == 1 and len(dtwo.entries[0]) == 2
    assert dtwo.entries[0][1] == two.entries[1][0]
    back = dual_map(dtwo)
    assert back.source == two.source and back.target == two.target and back.entries == two.entries


def test_homogeneity_enforced():
    with pytest.raises(HomogeneityError):
        PolyMap(STD11, [(0, 0)], [(0, 0)], [[X1_11]])
    with pytest.raises(HomogeneityError):
        multiplication_map(STD11, poly_add(X1_11, Y1_11))


def test_pairing_examples():
    ident = identity_map(STD11, [(0, 0)])
    x1 = multiplication_map(STD11, X1_11)
    f = poly_add(monomial((1, 0), (1, 0)), monomial((0, 1), (0, 1)))
    quad = multiplication_map(STD22, f)
    for gamma in box(2, 3):
        assert pairing_check(ident, gamma)
        assert pairing_check(x1, gamma)
        assert pairing_check(quad, gamma)


def test_pairing_is_perfect():
    for spec in (STD21, STD22, GradingSpec.rees(2, (1, 3))):
        for gamma in box(2, 3):
            for a in [(0, 0), (1, -1), (2, 1)]:
                mat = pairing_matrix(spec, [a], gamma)
                assert mat.is_permutation()


def test_pairing_degree_matches_untwisted_form():
    # P-side of S in degree g pairs with Q-side of S in degree -g - sigma
    for spec in (STD21, STD22):
        for g in box(2, 4):
            neg_g_sigma = tuple(-c - s for c, s in zip(g, spec.sigma))
            assert hp_basis(spec, spec.zero, g).dimension == hq_basis(spec, spec.zero, neg_g_sigma).dimension


def test_pairing_detects_a_wrong_map():
    # corrupt the Q-side by replacing phi^v with a scaled copy
    x1 = multiplication_map(STD11, X1_11)
    bad = multiplication_map(STD11, monomial((1,), (0,), 2))
    gamma = (-2, 0)
    d_src = pairing_matrix(STD11, x1.source, gamma)
    d_tgt = pairing_matrix(STD11, x1.target, gamma)
    left = d_tgt @ hp_matrix(x1, gamma)
    right = hq_matrix(dual_map(bad), (2, 0)).T @ d_src
    assert left.nrows and not left.equals(right)


def test_functoriality():
    spec = STD22
    x1 = monomial((1, 0), (0, 0))
    y2 = monomial((0, 0), (0, 1))
    f = multiplication_map(spec, x1, target_shift=(0, 1))  # S(-(1,1)) -> S(-(0,1))
    g = multiplication_map(spec, y2)  # S(-(0,1)) -> S
    gf = g.compose(f)
    for gamma in box(2, 3):
        assert hp_matrix(gf, gamma).equals(hp_matrix(g, gamma) @ hp_matrix(f, gamma))
        assert hq_matrix(gf, gamma).equals(hq_matrix(g, gamma) @ hq_matrix(f, gamma))


def test_taylor_ranks():
    one = taylor_complex(STD22, [((1, 0), (0, 0))])
    assert [len(m) for m in one.modules] == [1, 1]
    kos = taylor_complex(STD22, [((1, 0), (0, 0)), ((0, 0), (1, 0))])
    assert [len(m) for m in kos.modules] == [1, 2, 1]
    tay = taylor_complex(STD22, [((1, 0), (1, 0)), ((1, 0), (0, 1))])
    assert [len(m) for m in tay.modules] == [1, 2, 1]
    assert tay.modules[2] == ((1, 2),)  # lcm x1 y1 y2
    with pytest.raises(InputError):
        taylor_complex(STD22, [poly_add(monomial((1, 0), (0, 0)), monomial((0, 1), (0, 0)))])


def test_d_squared_checked():
    x1 = monomial((1,), (0,))
    d1 = PolyMap(STD11, [(1, 0)], [(0, 0)], [[x1]])
    d2 = PolyMap(STD11, [(2, 0)], [(1, 0)], [[x1]])
    with pytest.raises(InputError):
        FreeComplex(STD11, [((0, 0),), ((1, 0),), ((2, 0),)], [d1, d2])


def test_complex_json_roundtrip():
    cx = taylor_complex(STD22, [((1, 0), (1, 0)), ((0, 1), (0, 1)), ((1, 1), (0, 0))])
    back = FreeComplex.from_json(cx.to_json())
    assert back.modules == cx.modules
    assert [d.entries for d in back.maps] == [d.entries for d in cx.maps]


def test_fraction_coefficients_json():
    phi = multiplication_map(STD11, monomial((1,), (0,), Fraction(2, 3)))
    cx = FreeComplex(STD11, [phi.target, phi.source], [phi])
    obj = cx.to_json()
    assert obj["maps"][0][0][0][0]["coeff"] == "2/3"
    assert FreeComplex.from_json(obj).maps[0].entries == phi.entries


def test_free_module_homology_examples():
    cx = FreeComplex(STD21, [((0, 0),)], [])
    assert complex_hp_homology(cx, 2, (-2, 0)) == 1
    for i in (0, 1, 3):
        assert complex_hp_homology(cx, i, (-2, 0)) == 0
    # concentration: a free module has local cohomology only in degree m
    for g in box(2, 3):
        assert chain_homology(cx, g) == [hp_basis(STD21, (0, 0), g).dimension]


def test_homology_matches_oracle_examples():
    gens = [((1, 0), (0,))]
    cx = taylor_complex(STD21, gens)
    for g in box(2, 4):
        for i in range(3):
            assert complex_hp_homology(cx, i, g) == cech_oracle(STD21, gens, i, g)
    gens = [((1,), (1,))]
    cx = taylor_complex(STD11, gens)
    assert complex_hp_homology(cx, 1, (-1, -1)) == cech_oracle(STD11, gens, 1, (-1, -1))


def test_oracle_examples():
    for g in box(2, 3):
        assert cech_oracle(STD21, [], 2, g) == hp_basis(STD21, (0, 0), g).dimension
    # S/(x1) with m = 1 is P-torsion: only H^0, equal to (S/I)_g = K[y]_g
    gens = [((1,), (0,))]
    for g in box(2, 3):
        assert cech_oracle(STD11, gens, 1, g) == 0
        assert cech_oracle(STD11, gens, 0, g) == (1 if g[0] == 0 and g[1] >= 0 else 0)


def test_duality_examples():
    for g in box(2, 3):
        assert verify_complex_duality(FreeComplex(STD21, [((0, 0),)], []), g)
        assert verify_complex_duality(taylor_complex(STD22, [((1, 0), (0, 0)), ((0, 0), (1, 0))]), g)
        assert verify_complex_duality(taylor_complex(STD22, [((1, 0), (1, 0)), ((0, 1), (0, 1))]), g)


def test_prime_field_mode():
    spec = STD11
    two_x = multiplication_map(spec, monomial((1,), (0,), 2))
    cx = FreeComplex(spec, [two_x.target, two_x.source], [two_x])
    g = (-2, 0)
    # over F_2 the map vanishes, so the homology doubles up
    assert chain_homology(cx, g, 0) == [0, 0]
    assert chain_homology(cx, g, 2) == [1, 1]
    assert verify_complex_duality(cx, g, 2)
    assert pairing_check(two_x, g, 2)


monos22 = st.tuples(
    st.tuples(st.integers(0, 2), st.integers(0, 2)),
    st.tuples(st.integers(0, 2), st.integers(0, 2)),
).filter(lambda mono: any(mono[0]) or any(mono[1]))


@settings(max_examples=40, deadline=None)
@given(st.lists(monos22, min_size=1, max_size=3, unique=True),
       st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
def test_oracle_equivalence_random_ideals(gens, gamma):
    cx = taylor_complex(STD22, gens)
    for i in range(3):
        assert complex_hp_homology(cx, i, gamma) == cech_oracle(STD22, gens, i, gamma)
    assert verify_complex_duality(cx, gamma)


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.tuples(st.integers(0, 2), st.integers(0, 2)),
       st.integers(-3, 3), st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
def test_pairing_random_binomials(xe, ye, c, gamma):
    spec = STD22
    # binomial x^xe y^ye + c x^ye y^xe is homogeneous in the standard bigrading iff |xe| = |ye|
    f = monomial(xe, ye)
    if sum(xe) == sum(ye) and xe != ye and c:
        f = poly_add(f, monomial(ye, xe, c))
    phi = multiplication_map(spec, f, target_shift=(1, -1))
    assert pairing_check(phi, gamma)


def test_oracle_in_rees_grading():
    spec = GradingSpec.rees(2, (1, 0))
    gens = [((1, 0), (1, 0)), ((0, 1), (0, 1))]
    cx = taylor_complex(spec, gens)
    for g in itertools.product(range(-3, 4), repeat=2):
        for i in range(3):
            assert complex_hp_homology(cx, i, g) == cech_oracle(spec, gens, i, g)
