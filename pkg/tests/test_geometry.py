import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tamecoh.families import A3_D, A3_F1, A3_F2, C1, C2, DELTA
from tamecoh.geometry import (
    EXE_LATTICE,
    AbelianT,
    CohomVector,
    DomainError,
    Elliptic,
    GenusTwo,
    abelian_surface_h,
    abelianT_h,
    elliptic_h,
    floor_div_sqrt2,
    genus2_h,
    kunneth,
    p_power_exponent,
    product_h,
    serre_dual_check,
)
from tamecoh.grading import InputError


def test_elliptic_examples():
    assert elliptic_h(0).dims == (1, 1)
    assert elliptic_h(2).dims == (6, 0)
    assert elliptic_h(-1).dims == (0, 3)


def test_abelian_t_examples():
    assert abelianT_h(3).dims == (9, 0, 0)
    assert abelianT_h(0).dims == (1, 2, 1)
    assert abelianT_h(-2).dims == (0, 0, 4)


def test_genus2_examples():
    assert genus2_h(1, -11, 11).dims == (1, 1)
    assert genus2_h(0, -5, 11).dims == (0, 1)
    assert genus2_h(-2, -7, 11).dims == (0, 3)
    assert genus2_h(4, -1, 11).dims == (3, 0)
    assert genus2_h(1, -121, 11).dims == (1, 1)
    assert genus2_h(1, -12, 11).dims == (0, 0)
    assert genus2_h(2, -3, 11).dims == (1, 0)


def test_genus2_domain():
    for r in (0, 1, 2):
        with pytest.raises(DomainError):
            genus2_h(r, 0, 11)
        with pytest.raises(DomainError):
            genus2_h(r, 4, 11)
    assert genus2_h(-1, 5, 11).dims == (0, 2)
    assert genus2_h(3, 0, 11).dims == (2, 0)


def test_p_power_exponent():
    assert p_power_exponent(1, 7) == 0
    assert p_power_exponent(7 ** 40, 7) == 40
    assert p_power_exponent(7 ** 40 + 1, 7) is None
    assert p_power_exponent(0, 7) is None


def test_lattice_constants():
    assert C1 * C1 == C2 * C2 == DELTA * DELTA == 0
    assert DELTA * C1 == DELTA * C2 == C1 * C2 == 1
    assert A3_F1 * A3_F1 == 2 * 162 == 324
    assert A3_F2 * A3_F2 == 31 * 162 == 5022
    assert A3_F1 * A3_F2 == 8 * 162 == 1296
    assert A3_F2.coords == (3 * A3_D + 3 * A3_F1).coords


def test_trichotomy_examples():
    assert abelian_surface_h(A3_F1, A3_F1).dims == (162, 0, 0)
    assert abelian_surface_h(-A3_F1, A3_F1).dims == (0, 0, 162)
    g = EXE_LATTICE.cls(18, -9, 0)
    assert g * g == -324
    assert abelian_surface_h(g, A3_F1).dims == (0, 162, 0)
    g = 4 * A3_F1 - A3_F2
    assert g * g == -162
    assert abelian_surface_h(g, A3_F1).dims == (0, 81, 0)
    assert abelian_surface_h(EXE_LATTICE.cls(0, 0, 0), A3_F1).dims == (1, 2, 1)


def test_trichotomy_errors():
    with pytest.raises(DomainError):
        abelian_surface_h(C1, A3_F1)
    with pytest.raises(InputError):
        abelian_surface_h(C1, C1)


def test_kunneth_examples():
    e0 = elliptic_h(0)
    assert kunneth([e0, e0, e0]).dims == (1, 3, 3, 1)
    assert kunneth([abelianT_h(0), genus2_h(0, -5, 11)]).dims == (0, 1, 2, 1)
    assert kunneth([abelianT_h(2)]).dims == (4, 0, 0)
    assert product_h([Elliptic(1), Elliptic(-1)]).dims == (0, 9, 0)
    assert product_h([AbelianT(0), GenusTwo(0, -1, 11)]).dims == (0, 1, 2, 1)


def test_serre_examples():
    assert serre_dual_check(elliptic_h(2), elliptic_h(-2))
    assert serre_dual_check(abelian_surface_h(A3_F1, A3_F1), abelian_surface_h(-A3_F1, A3_F1))
    assert serre_dual_check(abelianT_h(0), abelianT_h(0))
    assert not serre_dual_check(elliptic_h(2), elliptic_h(2))


def test_floor_div_sqrt2_exact():
    for j in range(0, 3000):
        r = floor_div_sqrt2(j)
        assert 2 * r * r <= j * j < 2 * (r + 1) ** 2
    big = 10 ** 40
    r = floor_div_sqrt2(big)
    assert 2 * r * r <= big * big < 2 * (r + 1) ** 2


@settings(max_examples=200, deadline=None)
@given(st.integers(-50, 50))
def test_serre_duality_curves_and_t(r):
    assert serre_dual_check(elliptic_h(r), elliptic_h(-r))
    assert serre_dual_check(abelianT_h(r), abelianT_h(-r))
    assert elliptic_h(r).euler() == 3 * r
    assert abelianT_h(r).euler() == r * r


ns_coord = st.integers(-20, 20)


@settings(max_examples=300, deadline=None)
@given(ns_coord, ns_coord, ns_coord)
def test_abelian_surface_properties(a, b, c):
    g = EXE_LATTICE.cls(a, b, c)
    if not g.is_zero() and g * g == 0:
        with pytest.raises(DomainError):
            abelian_surface_h(g, A3_F1)
        return
    v = abelian_surface_h(g, A3_F1)
    assert serre_dual_check(v, abelian_surface_h(-g, A3_F1))
    assert v.euler() == (g * g) // 2
    if not g.is_zero():
        assert sum(1 for h in v if h) == 1


@settings(max_examples=200, deadline=None)
@given(st.integers(-30, 30), st.integers(-10 ** 6, -1), st.sampled_from([11, 17, 23]))
def test_genus2_riemann_roch(r, s, p):
    v = genus2_h(r, s, p)
    assert v[0] - v[1] == r - 1


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.integers(0, 9), min_size=1, max_size=4), min_size=1, max_size=4))
def test_kunneth_multiplicative(vectors):
    factors = [CohomVector(tuple(v)) for v in vectors]
    prod = kunneth(factors)
    total = 1
    for f in factors:
        total *= sum(f)
    assert sum(prod) == total
    assert prod.dim == sum(f.dim for f in factors)
    euler = 1
    for f in factors:
        euler *= f.euler()
    assert prod.euler() == euler
