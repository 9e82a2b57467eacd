from hypothesis import given, settings, strategies as st

from ternary_pythagoras.combinatorics import degrees_from_partition, enumerate_partitions, minimalize
from ternary_pythagoras.forms import Form, monomials
from ternary_pythagoras.linalg import nullspace, rank, rank_mod_p, LARGE_PRIMES
from ternary_pythagoras.toric import StackedPolytope, dilate_count, ehrhart, idp_check

from oracles import hilbert_series

coeff = st.integers(-20, 20)


@st.composite
def forms(draw, degree):
    vals = draw(st.lists(coeff, min_size=len(monomials(degree)), max_size=len(monomials(degree))))
    return Form.from_vector(degree, vals)


@st.composite
def partitions(draw):
    d = draw(st.integers(1, 7))
    k = draw(st.integers(1, d + 1))
    parts = enumerate_partitions(d, k)
    return parts[draw(st.integers(0, len(parts) - 1))]


@given(forms(2), forms(3), forms(1))
def test_ring_axioms(f, g, h):
    assert f * (g * h) == (f * g) * h
    assert f * g == g * f
    assert f * (h * f) == (f * f) * h
    assert (f + f) * g == f * g + f * g


@given(forms(3), st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)))
def test_evaluation_homomorphism(f, pt):
    g = f * f
    assert g(*pt) == f(*pt) ** 2


@given(partitions())
def test_degree_data_round_trip(p):
    full = degrees_from_partition(p)
    m = minimalize(full)
    n = 2 * p.d
    assert sum(m.P) - sum(m.Q) == n + 3
    assert m.Q[0] == p.k
    assert minimalize(m) == m
    assert list(m.hilbert()) == hilbert_series(n, full.Q, full.P)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=6))
def test_rank_nullity(rows):
    r = rank(rows)
    assert r + len(nullspace(rows, 4)) == 4
    assert rank_mod_p(rows, LARGE_PRIMES[1]) == r


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3))
@settings(max_examples=25, deadline=None)
def test_stacked_polytopes(sizes):
    p = StackedPolytope(tuple(sorted(sizes, reverse=True)))
    coeffs = ehrhart(p)
    t = p.dim + 3
    assert sum(c * t**e for e, c in enumerate(coeffs)) == dilate_count(p, t)
    assert coeffs[0] == 1
    assert idp_check(p)
