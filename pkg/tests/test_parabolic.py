from itertools import product

import pytest
from hypothesis import given, strategies as st

from parabolic_rigidity.errors import InputError
from parabolic_rigidity.lie_core import SimpleType, build_root_system, bracket_basis
from parabolic_rigidity.parabolic import (
    build_grading, check_layer_brackets, g0_components, parabolic_closure, q_minus,
)


def grading(tag, sigma):
    return build_grading(build_root_system(SimpleType.parse(tag)), sigma)


def test_a3_contact_like():
    pg = grading("A3", (2,))
    assert pg.k == 1 and pg.layer_dim(-1) == 4


def test_a3_one_two_layers():
    pg = grading("A3", (1, 2))
    assert pg.k == 2
    assert set(pg.layers[-1]) == {(-1, 0, 0), (0, -1, 0), (0, -1, -1)}
    assert set(pg.layers[-2]) == {(-1, -1, 0), (-1, -1, -1)}


def test_g2_depth():
    assert grading("G2", (1,)).k == 3


def test_empty_sigma_rejected():
    with pytest.raises(InputError):
        grading("A3", ())
    with pytest.raises(InputError):
        grading("A3", (4,))


def test_components_a3_one_two():
    pg = grading("A3", (1, 2))
    comps = {c.multigrade: set(c.roots) for c in g0_components(pg, -1)}
    assert comps == {(-1, 0): {(-1, 0, 0)}, (0, -1): {(0, -1, 0), (0, -1, -1)}}
    (c2,) = g0_components(pg, -2)
    assert c2.multigrade == (-1, -1) and set(c2.roots) == {(-1, -1, 0), (-1, -1, -1)}


def test_projective_single_component():
    (c,) = g0_components(grading("A3", (1,)), -1)
    assert c.dim == 3


def test_parabolic_closure_examples():
    pg = grading("A3", (1, 2))
    assert parabolic_closure(pg, [(-1, 0, 0)]) == (2,)
    assert parabolic_closure(pg, []) == (1, 2)
    assert parabolic_closure(pg, pg.negative_roots) == ()
    # not a subalgebra together with p
    assert parabolic_closure(pg, [(-1, -1, 0)]) is None


GRADINGS = [("A3", (1, 2)), ("B3", (1, 3)), ("C3", (2,)), ("G2", (1, 2)), ("D4", (1, 3, 4)), ("F4", (2,)),
            ("E6", (1, 6)), ("A5", (2, 4))]


@pytest.mark.parametrize("tag,sigma", GRADINGS)
def test_grading_invariants(tag, sigma):
    pg = grading(tag, sigma)
    rs = pg.rs
    assert pg.k == pg.height(rs.highest_root)
    assert sorted(r for lay in pg.layers.values() for r in lay) == sorted(rs.roots)
    assert check_layer_brackets(pg)
    total = rs.rank
    for i in range(-pg.k, pg.k + 1):
        comps = g0_components(pg, i)
        assert sorted(r for c in comps for r in c.roots) == sorted(pg.layers[i])
        total += sum(c.dim for c in comps)
        for c in comps:
            assert {pg.multigrade(r) for r in c.roots} == {c.multigrade}
            if i == 0:
                continue
            span = set(c.roots)
            for r, b in product(c.roots, pg.g0_roots):
                for idx in bracket_basis(rs, rs.index[b], rs.index[r]):
                    assert idx >= rs.rank and rs.roots[idx - rs.rank] in span
    assert total == rs.dim


@given(st.sampled_from(GRADINGS), st.data())
def test_multigrade_additive(case, data):
    pg = grading(*case)
    rs = pg.rs
    a = data.draw(st.sampled_from(rs.roots))
    b = data.draw(st.sampled_from(rs.roots))
    s = tuple(x + y for x, y in zip(a, b))
    if rs.is_root(s):
        assert tuple(x + y for x, y in zip(pg.multigrade(a), pg.multigrade(b))) == pg.multigrade(s)


@pytest.mark.parametrize("tag,sigma", GRADINGS)
def test_q_minus_standard_parabolics(tag, sigma):
    pg = grading(tag, sigma)
    for k in range(len(sigma) + 1):
        for sub in __import__("itertools").combinations(sigma, k):
            assert parabolic_closure(pg, q_minus(pg, sub)) == tuple(sub)
