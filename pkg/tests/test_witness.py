from fractions import Fraction

import numpy as np
import pytest
import sympy

from ternary_pythagoras.combinatorics import DegreeData, hilbert_from_degrees
from ternary_pythagoras.forms import X1, X2, X3, Form, sum_of_squares
from ternary_pythagoras.sieve import sieve
from ternary_pythagoras.toric import build_polytope, in_toric_ideal
from ternary_pythagoras.witness import (
    DegenerateInstance,
    DependentBasis,
    DependentInput,
    QuadraticWitness,
    SkewMatrix,
    ZeroWitness,
    binomial_vanishes,
    check_independent,
    ci8_syzygy_witness,
    common_factor_from_linear_syzygy,
    derive_rng,
    exact_quotient,
    graded_piece,
    ideal_basis,
    pfaffian,
    pfaffian_generators,
    pfaffian_instance,
    quadratic_syzygies,
    reduce_length,
    relation_residuals,
    signed_subpfaffians,
    toric_coordinates,
    toric_relation_check,
    validate_instance,
)

from oracles import pfaffian_sympy, quadratic_kernel_dim, to_sympy

DD344 = DegreeData.from_diagonal(8, (5, 3, 3), minimal=True)
DD_5 = DegreeData.from_diagonal(10, (5, 3, 3, 3, -1), minimal=True)


def _case(d, Q):
    return next(c for c in sieve(d) if c.Q == Q)


def test_graded_piece_monomials():
    gens = [X1**4, X2**4, X3**5]
    assert graded_piece(gens, 5).dim == 7
    assert graded_piece(gens, 3).dim == 0
    assert len(graded_piece(gens, 5).forms()) == 7


def test_skew_degree_patterns():
    M = SkewMatrix.random((3, 4, 4), 8, derive_rng(1))
    assert [M.entry_degree(i, j) for i, j in ((0, 1), (0, 2), (1, 2))] == [4, 4, 3]
    Q = (4, 5, 5, 5, 7)
    M = SkewMatrix.random(Q, 10, derive_rng(2))
    pattern = [[M.entry_degree(i, j) for j in range(i + 1, 5)] for i in range(4)]
    assert pattern == [[4, 4, 4, 2], [3, 3, 1], [3, 1], [1]]
    assert M[1, 0] == -M[0, 1]
    assert signed_subpfaffians(M)[0].degree == 4


def test_pfaffian_matches_permutation_formula():
    rng = derive_rng(3)
    n = 6
    vals = {(i, j): int(rng.integers(-9, 10)) for i in range(n) for j in range(i + 1, n)}
    M = SkewMatrix(tuple([0] * n), -3, {k: Form.constant(v) if v else Form.zero(0) for k, v in vals.items()})
    S = sympy.zeros(n, n)
    for (i, j), v in vals.items():
        S[i, j], S[j, i] = v, -v
    ours = pfaffian(M, tuple(range(n)))
    ours = ours.coeffs.get((0, 0, 0), 0)
    assert ours == pfaffian_sympy(S)
    assert ours**2 == S.det()


def test_pfaffian_344_instance():
    gens = pfaffian_generators(4, DD344, seed=11)
    assert [g.degree for g in gens] == [3, 4, 4]
    T = hilbert_from_degrees(8, (3, 4, 4), (8, 7, 7))
    assert validate_instance(gens, T)
    assert graded_piece(gens, 4).dim == 5


def test_pfaffian_rows_are_relations():
    inst = pfaffian_instance(DD_5, seed=5)
    assert inst.generator_degrees() == (4, 5, 5, 5, 7)
    assert all(r.is_zero() for r in relation_residuals(inst.matrix, inst.generators))


def test_pfaffian_needs_matching_socle():
    with pytest.raises(ValueError):
        pfaffian_generators(5, DD344, seed=1)


def test_degenerate_instance_raised(monkeypatch):
    import ternary_pythagoras.witness as w

    monkeypatch.setattr(w, "validate_instance", lambda *a, **k: w.ValidationReport(False, [], [], 0))
    with pytest.raises(DegenerateInstance):
        pfaffian_instance(DD344, seed=1, max_attempts=3)


def test_validate_rejects_single_cubic():
    T = hilbert_from_degrees(8, (3, 4, 4), (8, 7, 7))
    rep = validate_instance([X1**3], T)
    assert not rep and rep.first_mismatch == 4


def test_validate_full_vs_minimal_generators():
    inst = pfaffian_instance(DD344, seed=4)
    T = inst.degrees.hilbert()
    extra = inst.generators + [X1 * inst.generators[0], X2 * inst.generators[1]]
    assert bool(validate_instance(inst.generators, T)) == bool(validate_instance(extra, T)) is True


def test_validate_modular_and_both_agree():
    inst = pfaffian_instance(DD_5, seed=6)
    T = inst.degrees.hilbert()
    a = validate_instance(inst.generators, T, method="exact")
    b = validate_instance(inst.generators, T, method="modular")
    c = validate_instance(inst.generators, T, method="both", rng=derive_rng(1))
    assert a.dims == b.dims == c.dims and c.primes
    with pytest.raises(ValueError):
        validate_instance(inst.generators, T, method="fast")


def test_check_independent():
    assert check_independent([X1, X2, X3])
    assert not check_independent([X1, X2, X1 + X2])


def test_quadratic_syzygy_example_5():
    inst = pfaffian_instance(DD_5, seed=8)
    W = ideal_basis(inst.generators, 5)
    ws = quadratic_syzygies(W, 5)
    assert len(ws) >= 1
    assert len(ws) == quadratic_kernel_dim(W)
    for w in ws:
        assert w.expand().is_zero()


def test_quadratic_syzygy_monomials_none():
    assert quadratic_syzygies([X1**5, X2**5], 5) == []


def test_quadratic_syzygy_veronese():
    c = _case(6, (3, 6, 6))
    inst = pfaffian_instance(c.degrees, seed=2)
    W = ideal_basis(inst.generators, 6)[:10]
    assert len(W) == 10
    assert len(quadratic_syzygies(W, 6)) >= 6


def test_quadratic_syzygy_errors():
    with pytest.raises(DependentInput):
        quadratic_syzygies([X1**2, X1**2], 2)
    with pytest.raises(ValueError):
        quadratic_syzygies([X1**2, X2**3], 2)


def test_witness_must_vanish():
    with pytest.raises(AssertionError):
        QuadraticWitness((X1, X2), ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(0))))


def test_reduce_length_example():
    h = [X1**2, X2**2, X1 * X2]
    w = QuadraticWitness(tuple(h), ((0, Fraction(1, 2), 0), (Fraction(1, 2), 0, 0), (0, 0, -1)))
    red = reduce_length(h, w)
    assert red.exact and len(red) == 2
    assert red.forms[0] == X1**2 + Fraction(1, 2) * X2**2
    assert red.weights == [1, Fraction(3, 4)]
    assert red.squares() == sum_of_squares(h)


def test_reduce_length_zero_witness():
    h = [X1, X2]
    z = QuadraticWitness(tuple(h), ((Fraction(0),) * 2,) * 2)
    with pytest.raises(ZeroWitness):
        reduce_length(h, z)


def test_reduce_length_pipeline_5():
    inst = pfaffian_instance(DD_5, seed=9)
    W = ideal_basis(inst.generators, 5)
    assert len(W) == 6
    red = reduce_length(W, quadratic_syzygies(W, 5)[0])
    assert len(red) == 5
    target = sum_of_squares(W)
    diff = target - red.squares()
    assert diff.max_norm() <= 1e-6 * target.max_norm()
    assert red.residual < 1e-6


def test_exact_quotient():
    f = Form.random(3, np.random.default_rng(4))
    assert exact_quotient(X1 * f, X1) == f
    assert exact_quotient(X1**2 + X2**2, X1) is None


def test_common_factor_cubic():
    f = Form.random(3, np.random.default_rng(5))
    g = common_factor_from_linear_syzygy(X3 * f, -X1 * f)
    assert g == f.normalized()


def test_common_factor_none_for_generic():
    rng = np.random.default_rng(6)
    assert common_factor_from_linear_syzygy(Form.random(4, rng), Form.random(4, rng)) is None


def test_common_factor_hand_example():
    c = X1**3 + X2**3
    assert common_factor_from_linear_syzygy(X2 * c, -X1 * c) == c


def test_common_factor_proportional():
    f = X1**2 + X2 * X3
    assert common_factor_from_linear_syzygy(f, 3 * f) == f


def test_divisor_case_instances_share_cubic():
    c = _case(6, (4, 4, 6, 6, 10))
    inst = pfaffian_instance(c.degrees, seed=3)
    f1, f2 = [g for g in inst.generators if g.degree == 4]
    cf = common_factor_from_linear_syzygy(f1, f2)
    assert cf is not None and cf.degree == 3
    assert exact_quotient(f1, cf) is not None and exact_quotient(f2, cf) is not None


@pytest.mark.parametrize("seed", range(10))
def test_ci8_random(seed):
    rng = derive_rng(seed, "ci8")
    m = [Form.random(1, rng) for _ in range(3)]
    if not check_independent(m):
        pytest.skip("dependent draw")
    c0, c1, f = (Form.random(3, rng) for _ in range(3))
    w = ci8_syzygy_witness(*m, c0, c1, f)
    assert w.expansion().is_zero()
    assert to_sympy(w.expansion()) == 0


def test_ci8_zero_and_hand_example():
    f = X1**3 + X3**3
    w = ci8_syzygy_witness(X1, X2, X3, Form.zero(3), Form.zero(3), f)
    assert w.a.is_zero()
    w = ci8_syzygy_witness(X1, X2, X3, X2**3, X1**3, f)
    assert w.a == X1 * X2**3 + X1**3 * X2
    assert w.expansion().is_zero()


def test_ci8_errors():
    with pytest.raises(DependentBasis):
        ci8_syzygy_witness(X1, X2, X1 + X2, X1**3, X2**3, X3**3)
    with pytest.raises(ValueError):
        ci8_syzygy_witness(X1**2, X2, X3, X1**3, X2**3, X3**3)


def test_toric_relations_445_example():
    c = _case(5, (4, 4, 5))
    inst = pfaffian_instance(c.degrees, seed=1)
    t = toric_coordinates(5, inst.generators)
    assert binomial_vanishes(t, [(1, 1, 0), (2, 0, 1)], [(1, 0, 1), (2, 1, 0)])
    assert toric_relation_check(5, inst.generators)


def test_monomial_example_quartic_relation():
    gens = [X1**4, X2**4, X3**5]
    t = toric_coordinates(5, gens)
    p = build_polytope(5, (4, 4, 5))
    # t1 = x1^5, t2 = x1^4 x2, t4 = x1 x2^4
    assert t[(1, 1, 0)] == X1**5 and t[(1, 0, 1)] == X1**4 * X2 and t[(2, 1, 0)] == X1 * X2**4
    lhs, rhs = [(1, 0, 1)] * 4, [(1, 1, 0)] * 3 + [(2, 1, 0)]
    assert binomial_vanishes(t, lhs, rhs)
    assert not in_toric_ideal(p, lhs, rhs)
    assert toric_relation_check(5, gens)


def test_same_generator_commutation():
    gens = [X1**4, X2**4, X3**5]
    t = toric_coordinates(5, gens)
    w1, w2 = (1, 1, 0), (2, 0, 1)
    assert binomial_vanishes(t, [w1, w2], [w2, w1])


def test_rng_streams_independent_and_stable():
    a = derive_rng(7, "10.(1)", 0).integers(0, 10**9)
    b = derive_rng(7, "10.(1)", 0).integers(0, 10**9)
    c = derive_rng(7, "10.(1)", 1).integers(0, 10**9)
    assert a == b != c
