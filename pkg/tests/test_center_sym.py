from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, strategies as st

from parabolic_rigidity.center_sym import (
    CenterElement, ConstraintSet, ExactValue, Shape, classify_shape, eigenvalue_monomial, one_eigenspace,
    rigidity_locus, solve_constraints,
)
from parabolic_rigidity.errors import InputError
from parabolic_rigidity.kostant import find_component, harmonic_components
from parabolic_rigidity.lattice import Lattice
from parabolic_rigidity.lie_core import SimpleType, build_root_system
from parabolic_rigidity.notation import parse_condition
from parabolic_rigidity.parabolic import build_grading, parabolic_closure
from parabolic_rigidity.prolong import a_spaces, inserts_trivially

from test_lie_core import bracket


def grading(tag, sigma):
    return build_grading(build_root_system(SimpleType.parse(tag)), sigma)


def lat_of(text, sigma):
    return parse_condition(text).lattice(sigma)


# ----------------------------------------------------------------- monomials
def test_root_monomial():
    assert eigenvalue_monomial(grading("A3", (1, 2)), (-1, -1, 0)) == (-1, -1)


def test_component_monomials_path_geometry():
    pg = grading("A3", (1, 2))
    fix21 = ConstraintSet.from_monomials(pg.sigma, [eigenvalue_monomial(pg, find_component(pg, (2, 1)))])
    assert fix21.lattice == lat_of("j1=j2^-2", pg.sigma)
    fix23 = ConstraintSet.from_monomials(pg.sigma, [eigenvalue_monomial(pg, find_component(pg, (2, 3)))])
    assert fix23.lattice == lat_of("j1=j2^2", pg.sigma)


@given(st.sampled_from([("A4", (1, 3)), ("B3", (1, 2, 3)), ("E6", (2, 4)), ("G2", (1, 2)), ("F4", (1, 4))]),
       st.data())
def test_monomial_additivity(case, data):
    pg = grading(*case)
    rs = pg.rs
    a, b = data.draw(st.sampled_from(rs.roots)), data.draw(st.sampled_from(rs.roots))
    s = tuple(x + y for x, y in zip(a, b))
    assume(rs.is_root(s))
    ma, mb = eigenvalue_monomial(pg, a), eigenvalue_monomial(pg, b)
    assert tuple(x + y for x, y in zip(ma, mb)) == eigenvalue_monomial(pg, s)


# --------------------------------------------------------------------- loci
def test_path_geometry_locus():
    pg = grading("A3", (1, 2))
    solved = solve_constraints(rigidity_locus(pg, [find_component(pg, (2, 1))]).pr)
    assert solved.text == "j1=1, j2=-1"


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_projective_locus(n):
    pg = grading(f"A{n}", (1,))
    solved = solve_constraints(rigidity_locus(pg, [find_component(pg, (1, 2))]).pr)
    assert solved.text == "j1=-1" and solved.pretty == "j1=−1"


def test_rigid_triple_keeps_fix_only():
    for tag, sigma in [("A3", (1, 2)), ("B3", (3,)), ("G2", (2,)), ("C3", (1, 3))]:
        pg = grading(tag, sigma)
        for hc in harmonic_components(pg):
            loc = rigidity_locus(pg, [hc])
            if not any(sp.roots for sp in a_spaces(pg, [hc])):
                assert loc.pr.lattice == loc.fix.lattice


def test_empty_mu_set_rejected():
    with pytest.raises(InputError):
        rigidity_locus(grading("A2", (1,)), [])


# ------------------------------------------------------------------ solving
def test_cube_root_rendering():
    solved = solve_constraints(ConstraintSet.from_monomials((1,), [(3,)]))
    assert solved.torsion == (3,) and solved.text == "j1=sqrt[3](1)" and solved.pretty == "j1=∛1"


def test_two_relations():
    solved = solve_constraints(ConstraintSet.from_monomials((1, 2), [(1, 2), (0, 2)]))
    assert solved.text == "j1=1, j2=-1"


def test_independent_torsion_round_trips():
    solved = solve_constraints(ConstraintSet.from_monomials((1, 2), [(2, 0), (0, 2)]))
    assert lat_of(solved.text, (1, 2)) == solved.lattice
    assert not solved.sample().is_identity


def test_identity_only():
    solved = solve_constraints(ConstraintSet.from_monomials((1,), [(1,)]))
    assert not solved.qualifying and solved.text == "no qualifying s" and solved.sample() is None


def _assignments(n, order):
    for phases in product(range(order), repeat=n):
        yield CenterElement.of(tuple(range(1, n + 1)), [ExactValue(Fraction(p, order)) for p in phases])


vec2 = st.lists(st.integers(-4, 4), min_size=2, max_size=2)


@given(st.lists(vec2, min_size=1, max_size=3))
def test_solver_soundness_rank2(monos):
    cs = ConstraintSet.from_monomials((1, 2), monos)
    solved = solve_constraints(cs)
    if solved.qualifying:
        assert lat_of(solved.text, (1, 2)) == cs.lattice
        s = solved.sample()
        assert not s.is_identity and cs.admits(s)
    assert solve_constraints(ConstraintSet((1, 2), lat_of(solved.text, (1, 2)) if solved.qualifying
                                           else cs.lattice)).text == solved.text
    for order in range(1, 9):
        for s in _assignments(2, order):
            want = all(s.evaluate(m).is_one() for m in monos)
            assert solved.check(s) == want


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3))
def test_solver_soundness_rank3(monos):
    cs = ConstraintSet.from_monomials((1, 2, 3), monos)
    solved = solve_constraints(cs)
    if solved.qualifying:
        assert lat_of(solved.text, (1, 2, 3)) == cs.lattice
    for order in (2, 3, 4):
        for s in _assignments(3, order):
            assert solved.check(s) == all(s.evaluate(m).is_one() for m in monos)


def test_exact_values():
    a = ExactValue(Fraction(1, 3))
    assert (a ** 3).is_one() and a.order == 3
    assert str(ExactValue(Fraction(1, 2))) == "-1"
    assert ExactValue(0, Fraction(2)).order is None
    with pytest.raises(InputError):
        ExactValue(0, Fraction(0))
    with pytest.raises(InputError):
        CenterElement.of((1,), [0])


def test_center_kernel_matches_evaluation():
    s = CenterElement.of((1, 2, 3), [ExactValue(Fraction(1, 4)), Fraction(2), -1])
    k = s.kernel()
    for m in product(range(-4, 5), repeat=3):
        assert k.contains(m) == s.evaluate(m).is_one()


# ------------------------------------------------------------- eigenspaces
def test_path_geometry_one_eigenspace():
    pg = grading("A3", (1, 2))
    hc = find_component(pg, (2, 1))
    roots, shape = one_eigenspace(pg, CenterElement.of(pg.sigma, [1, -1]), [hc])
    assert roots == {(-1, 0, 0)}
    assert shape.shape is Shape.PARABOLIC and shape.sigma_prime == ((2,),)


@pytest.mark.parametrize("n", [3, 5])
def test_projective_zero_eigenspace(n):
    pg = grading(f"A{n}", (1,))
    roots, shape = one_eigenspace(pg, CenterElement.of((1,), [-1]), [find_component(pg, (1, 2))])
    assert roots == frozenset() and shape.shape is Shape.ZERO


def test_identity_s_rejected():
    pg = grading("A3", (1, 2))
    with pytest.raises(InputError):
        one_eigenspace(pg, CenterElement.of(pg.sigma, [1, 1]))


def test_no_qualifying_shape():
    pg = grading("A2", (1,))
    assert classify_shape(pg, Lattice.full(1), []).shape is Shape.NONE


@pytest.mark.parametrize("tag,sigma", [("A3", (1, 2)), ("A4", (1, 2)), ("C3", (1, 2)), ("B3", (1, 2)), ("D4", (1, 2))])
def test_parabolic_shape_gives_closed_q(tag, sigma):
    pg = grading(tag, sigma)
    rs = pg.rs
    for hc in harmonic_components(pg):
        solved = solve_constraints(rigidity_locus(pg, [hc]).pr)
        if not solved.qualifying or len(solved.torsion) > 1:
            continue
        s = solved.sample()
        roots, shape = one_eigenspace(pg, s, [hc])
        if shape.shape is not Shape.PARABOLIC:
            continue
        assert parabolic_closure(pg, roots) is not None
        assert inserts_trivially(pg, hc, roots)
        q = set(roots) | {r for r in rs.roots if pg.height(r) >= 0}
        for a, b in product(q, repeat=2):
            c = tuple(x + y for x, y in zip(a, b))
            if rs.is_root(c) and rs.structure_constant(a, b):
                assert c in q
