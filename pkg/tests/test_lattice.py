from itertools import product

from hypothesis import given, strategies as st

from parabolic_rigidity.lattice import Lattice, cyclic_refinements, intersect, integer_kernel, restrict

vecs = st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), max_size=4)
BOX = list(product(range(-6, 7), repeat=3))


def members(lat, box=BOX):
    return {v for v in box if lat.contains(v)}


@given(vecs)
def test_span_contains_generators(vs):
    lat = Lattice.span(3, vs)
    assert all(lat.contains(v) for v in vs)
    assert Lattice.span(3, list(lat.basis)) == lat


@given(vecs, vecs)
def test_intersection_is_set_intersection(a, b):
    la, lb = Lattice.span(3, a), Lattice.span(3, b)
    assert members(intersect(la, lb)) == members(la) & members(lb)


@given(vecs)
def test_saturation_and_index(vs):
    lat = Lattice.span(3, vs)
    sat = lat.saturation()
    assert lat <= sat
    assert sat.saturation() == sat and sat.index() == 1
    if lat.rank == 3:
        assert lat.index() == abs(__import__("sympy").Matrix(lat.basis).det())


@given(vecs)
def test_cyclic_refinements(vs):
    lat = Lattice.span(3, vs)
    for k in cyclic_refinements(lat):
        assert lat <= k <= lat.saturation()
        assert len(k.quotient().torsion) <= 1 or k.rank < 3 and len(k.quotient().torsion) <= 1


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=2))
def test_integer_kernel(rows):
    ker = integer_kernel(rows, 3)
    for v in BOX:
        in_ker = all(sum(r[i] * v[i] for i in range(3)) == 0 for r in rows)
        assert ker.contains(v) == in_ker


def test_restrict():
    lat = Lattice.span(3, [(1, 0, 1), (0, 2, -1)])
    assert restrict(lat, 2) == Lattice.span(2, [(1, 2)])


def test_full_and_zero():
    assert Lattice.full(2).is_full() and not Lattice.zero(2).is_full()
    assert Lattice.span(2, [(2, 0), (0, 1)]).index() == 2
