import random
from fractions import Fraction
from itertools import product

import pytest

from parabolic_rigidity.center_sym import eigenvalue_monomial, rigidity_locus, solve_constraints
from parabolic_rigidity.errors import InputError
from parabolic_rigidity.kostant import act_g0, find_component, harmonic_components
from parabolic_rigidity.lie_core import SimpleType, bracket, build_root_system
from parabolic_rigidity.notation import parse_condition
from parabolic_rigidity.parabolic import build_grading
from parabolic_rigidity.prolong import (
    ProlongationSpace, a_spaces, annihilator, in_prolongation, inserts_trivially, inserts_trivially_dense,
    intersect_prolongations, prolongation, prolongation_chain, prolongation_dense,
)


def grading(tag, sigma):
    return build_grading(build_root_system(SimpleType.parse(tag)), sigma)


SMALL = [("A2", (1,)), ("A2", (1, 2)), ("A3", (1,)), ("A3", (1, 2)), ("A3", (1, 3)), ("B2", (1,)),
         ("B2", (1, 2)), ("C3", (1,)), ("C3", (2, 3)), ("G2", (1,)), ("G2", (2,)), ("B3", (1, 2))]


def cases(grids=SMALL):
    for tag, sigma in grids:
        pg = grading(tag, sigma)
        for hc in harmonic_components(pg):
            yield pg, hc


# --------------------------------------------------------------- annihilator
@pytest.mark.parametrize("tag,sigma", SMALL)
def test_annihilator_weight_matches_dense(tag, sigma):
    pg = grading(tag, sigma)
    for hc in harmonic_components(pg):
        w, d = annihilator(pg, hc), annihilator(pg, hc, method="dense")
        assert w.roots == d.roots and w.dim == d.dim


def test_annihilator_contains_kernel_of_weight_and_lowering():
    for pg, hc in cases():
        ann = annihilator(pg, hc)
        rs = pg.rs
        for v in ann.cartan:
            assert sum(c * x for c, x in zip(v, hc.lowest_weight)) == 0
        assert {b for b in pg.g0_roots if not rs.is_positive(b)} <= ann.roots
        for v in ann.vectors():
            image = {}
            for k, c in v.items():
                for key, val in act_g0(pg, k, hc.lowest_cochain()).items():
                    image[key] = image.get(key, 0) + c * val
            assert not any(image.values())


def test_annihilator_dense_dim_a3_projective():
    pg = grading("A3", (1,))
    hc = find_component(pg, (1, 2))
    assert annihilator(pg, hc).dim == annihilator(pg, hc, method="dense").dim


def test_annihilator_is_subalgebra():
    for pg, hc in cases():
        ann = annihilator(pg, hc)
        vs = ann.vectors()
        for u, v in product(vs, repeat=2):
            assert ann.contains(bracket(pg.rs, u, v))


def test_zero_cochain_rejected():
    pg = grading("A2", (1,))
    with pytest.raises(InputError):
        annihilator(pg, {})


# -------------------------------------------------------------- prolongation
def test_empty_layer_gives_zero():
    pg = grading("A3", (2,))
    ann = annihilator(pg, harmonic_components(pg)[0])
    assert prolongation(pg, ann, 2).dim == 0


def test_buckets_are_homogeneous():
    for pg, hc in cases():
        for sp in prolongation_chain(pg, annihilator(pg, hc)):
            for mg, roots in sp.buckets.items():
                assert {pg.multigrade(r) for r in roots} == {mg}


@pytest.mark.parametrize("tag,sigma", SMALL)
def test_prolongation_matches_dense_solve(tag, sigma):
    pg = grading(tag, sigma)
    for hc in harmonic_components(pg):
        ann = annihilator(pg, hc)
        for i in range(1, pg.k + 1):
            sp = prolongation(pg, ann, i)
            dense = prolongation_dense(pg, ann, i)
            assert len(dense) == sp.dim
            assert all(sp.contains(v) for v in dense)


def test_path_geometry_a1_gives_table_condition():
    pg = grading("A3", (1, 2))
    hc = find_component(pg, (2, 1))
    a1 = a_spaces(pg, [hc])[0]
    monomials = sorted({eigenvalue_monomial(pg, r) for r in a1.roots})
    assert monomials == [(1, 0)]
    pr = rigidity_locus(pg, [hc]).pr
    assert pr.lattice == parse_condition("j1=1, j2=-1").lattice(pg.sigma)


def test_nesting_and_membership():
    for pg, hc in cases():
        ann = annihilator(pg, hc)
        chain = prolongation_chain(pg, ann)
        rs = pg.rs
        prev_ok = lambda v, i: ann.contains(v) if i == 0 else chain[i - 1].contains(v)
        for i, sp in enumerate(chain, start=1):
            for v in sp.vectors():
                assert in_prolongation(pg, ann, v, i)
                for x in pg.layers[-1]:
                    assert prev_ok(bracket(rs, {rs.index[x]: Fraction(1)}, v), i - 1)


# -------------------------------------------------------------- intersection
def test_intersection_trivial_cases():
    pg = grading("A3", (1, 2))
    sp = prolongation(pg, annihilator(pg, find_component(pg, (2, 1))), 1)
    assert intersect_prolongations([sp]).roots == sp.roots
    zero = ProlongationSpace(pg, 1, frozenset())
    assert intersect_prolongations([sp, zero]).dim == 0
    with pytest.raises(InputError):
        intersect_prolongations([sp, ProlongationSpace(pg, 2, frozenset())])


def test_two_component_locus_sl4():
    pg = grading("A3", (1, 2))
    comps = [find_component(pg, (2, 3)), find_component(pg, (2, 1))]
    solved = solve_constraints(rigidity_locus(pg, comps).pr)
    want = parse_condition("j1=sqrt[4](1)^2, j2=sqrt[4](1)").lattice(pg.sigma)
    assert solved.lattice == want


# ------------------------------------------------------------------ insertion
def test_inserts_trivially_vacuous():
    for pg, hc in cases():
        assert inserts_trivially(pg, hc, [])


def test_path_geometry_inserts_trivially():
    pg = grading("A3", (1, 2))
    assert inserts_trivially(pg, find_component(pg, (2, 1)), [(-1, 0, 0)])
    assert inserts_trivially_dense(pg, find_component(pg, (2, 1)), [(-1, 0, 0)])


def test_torsion_insertion_by_evaluation():
    pg = grading("A3", (1, 2))
    hc = find_component(pg, (1, 2))
    assert inserts_trivially(pg, hc, [(-1, 0, 0)]) == inserts_trivially_dense(pg, hc, [(-1, 0, 0)]) is False


def test_structural_insertion_matches_dense():
    rng = random.Random(3)
    for pg, hc in cases():
        neg = list(pg.negative_roots)
        for _ in range(4):
            q = rng.sample(neg, rng.randint(1, min(3, len(neg))))
            assert inserts_trivially(pg, hc, q) == inserts_trivially_dense(pg, hc, q)
