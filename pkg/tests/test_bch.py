from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from parabolic_rigidity.bch import (
    NoInvariantNormalization, PPlusElement, ad_s, apply_sequence, bch, eigen_buckets, invariantize,
    lie_bracket, symmetry_defect, transform_defect,
)
from parabolic_rigidity.center_sym import CenterElement, ExactValue
from parabolic_rigidity.lie_core import SimpleType, build_root_system
from parabolic_rigidity.parabolic import build_grading


def grading(tag, sigma):
    return build_grading(build_root_system(SimpleType.parse(tag)), sigma)


PROJ = grading("A3", (1,))
PATH = grading("A3", (1, 2))
GRADINGS = [PROJ, PATH, grading("G2", (1,)), grading("B3", (1, 2, 3)), grading("C3", (1, 3))]

coeff = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def elements(draw, pg):
    roots = draw(st.lists(st.sampled_from(pg.positive_part_roots), max_size=4, unique=True))
    return PPlusElement.make(pg, {r: draw(coeff) for r in roots})


def center(pg, draw_phase):
    return CenterElement(pg.sigma, tuple(ExactValue(p) for p in draw_phase))


phases = st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(2, 3)])


# --------------------------------------------------------------------- BCH
@given(st.data())
def test_abelian_case(data):
    x, y = data.draw(elements(PROJ)), data.draw(elements(PROJ))
    assert bch(PROJ, x, y) == x + y


@given(st.data())
def test_depth_two_truncation(data):
    x, y = data.draw(elements(PATH)), data.draw(elements(PATH))
    assert bch(PATH, x, y) == x + y + lie_bracket(x, y).scale(Fraction(1, 2))


@pytest.mark.parametrize("pg", GRADINGS, ids=repr)
@given(data=st.data())
def test_group_laws(pg, data):
    x, y, z = (data.draw(elements(pg)) for _ in range(3))
    zero = PPlusElement.zero(pg)
    assert bch(pg, x, zero) == x == bch(pg, zero, x)
    assert bch(pg, x, -x).is_zero()
    assert bch(pg, bch(pg, x, y), z) == bch(pg, x, bch(pg, y, z))


@pytest.mark.parametrize("pg", GRADINGS, ids=repr)
@given(data=st.data())
def test_lowest_component_linear(pg, data):
    x, y = data.draw(elements(pg)), data.draw(elements(pg))
    c = bch(pg, x, y)
    low = min((d for d in x.degrees() + y.degrees()), default=None)
    if low is not None:
        assert c.component(low) == x.component(low) + y.component(low)
        assert all(d >= low for d in c.degrees())


def test_reject_non_pplus_root():
    with pytest.raises(Exception):
        PPlusElement.make(PATH, {(-1, 0, 0): 1})


# ------------------------------------------------------------------ defects
@pytest.mark.parametrize("pg", GRADINGS, ids=repr)
@given(data=st.data())
def test_defect_vanishes_iff_fixed(pg, data):
    y = data.draw(elements(pg))
    s = center(pg, [data.draw(phases) for _ in pg.sigma])
    fixed = ad_s(pg, s, y) == y.to(ad_s(pg, s, y).dom)
    assert symmetry_defect(pg, y, s).is_zero() == fixed


@given(st.data())
def test_abelian_defect_formula(data):
    y = data.draw(elements(PROJ))
    a = ExactValue(data.draw(phases))
    s = CenterElement((1,), (a,))
    d = symmetry_defect(PROJ, y, s)
    want = y - ad_s(PROJ, s, y, -1)
    assert d == want


def test_abelian_defect_scalar():
    y = PPlusElement.make(PROJ, {(1, 0, 0): 1, (1, 1, 0): 2})
    s = CenterElement.of((1,), [3])
    # every g_1 root has multigrade 1, eigenvalue 3: defect = (1 - 1/3) Y
    assert symmetry_defect(PROJ, y, s) == y.scale(Fraction(2, 3))


@given(st.data())
def test_lowest_component_misses_one_eigenspace(data):
    s = CenterElement.of((1, 2), [1, -1])
    y = data.draw(elements(PATH))
    d = symmetry_defect(PATH, y, s)
    if not d.is_zero():
        low = d.component(d.lowest_degree)
        one = ExactValue()
        assert one not in eigen_buckets(PATH, s, low)


# --------------------------------------------------------------- transform
@given(st.data())
def test_transform_identities(data):
    pg = PATH
    s = center(pg, [data.draw(phases) for _ in pg.sigma])
    d, u = data.draw(elements(pg)), data.draw(elements(pg))
    assert transform_defect(pg, d, PPlusElement.zero(pg), s) == d
    assert transform_defect(pg, PPlusElement.zero(pg), u, s) == symmetry_defect(pg, u, s)


@given(r=coeff, modulus=st.sampled_from([Fraction(2), Fraction(1, 3), Fraction(5)]), sign=st.booleans())
def test_bucket_coefficient(r, modulus, sign):
    # defect tau(a) and upsilon r*tau(a) in one degree-1 bucket of eigenvalue a
    s = CenterElement.of((1, 2), [modulus if not sign else -modulus, 1])
    tau = PPlusElement.make(PATH, {(1, 0, 0): 1})
    a = modulus if not sign else -modulus
    out = transform_defect(PATH, tau, tau.scale(r), s)
    assert out.component(1) == tau.scale((r * (a - 1) + a) / a)


# ------------------------------------------------------------- invariantize
def test_invariantize_zero():
    s = CenterElement.of((1, 2), [1, -1])
    assert invariantize(PATH, PPlusElement.zero(PATH), s) == []


@given(a=st.sampled_from([Fraction(2), Fraction(-1), Fraction(1, 5), Fraction(-3)]))
def test_invariantize_abelian(a):
    s = CenterElement.of((1,), [a])
    tau = PPlusElement.make(PROJ, {(1, 1, 0): 1})
    (ups,) = invariantize(PROJ, tau, s)
    assert ups == tau.scale(a / (1 - a))
    assert transform_defect(PROJ, tau, ups, s).is_zero()


@given(st.data())
def test_invariantize_path_geometry(data):
    s = CenterElement.of((1, 2), [1, -1])
    d = symmetry_defect(PATH, data.draw(elements(PATH)), s)
    ups = invariantize(PATH, d, s)
    assert len(ups) <= 2
    assert apply_sequence(PATH, d, ups, s).is_zero()


@pytest.mark.parametrize("pg", GRADINGS, ids=repr)
@given(data=st.data())
def test_invariantize_terminates_cyclotomic(pg, data):
    s = center(pg, [data.draw(phases) for _ in pg.sigma])
    if s.is_identity:
        return
    d = symmetry_defect(pg, data.draw(elements(pg)), s)
    ups = invariantize(pg, d, s)
    assert len(ups) <= pg.k
    assert apply_sequence(pg, d, ups, s).is_zero()


def test_obstruction_reported():
    s = CenterElement.of((1, 2), [1, -1])
    tau = PPlusElement.make(PATH, {(0, 1, 0): 1})  # multigrade (0,1): eigenvalue -1
    one = PPlusElement.make(PATH, {(1, 0, 0): 1})  # multigrade (1,0): eigenvalue 1
    with pytest.raises(NoInvariantNormalization) as err:
        invariantize(PATH, tau + one, s)
    assert err.value.degree == 1
