import random
from fractions import Fraction

import pytest
import sympy

from ternary_pythagoras.linalg import (
    LARGE_PRIMES,
    bareiss_echelon,
    determinant,
    nullspace,
    rank,
    rank_mod_p,
    rref,
    solve,
)

from oracles import sympy_rank


def _random_matrix(rng, n, m, r):
    """Rank ``<= r`` integer matrix as a product of random factors."""
    A = [[rng.randint(-5, 5) for _ in range(r)] for _ in range(n)]
    B = [[rng.randint(-5, 5) for _ in range(m)] for _ in range(r)]
    return [[sum(A[i][k] * B[k][j] for k in range(r)) for j in range(m)] for i in range(n)]


def test_primes_are_prime():
    assert all(sympy.isprime(p) for p in LARGE_PRIMES)
    assert len(set(LARGE_PRIMES)) == len(LARGE_PRIMES)


@pytest.mark.parametrize("seed", range(12))
def test_rank_matches_sympy(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 9), rng.randint(1, 9)
    M = _random_matrix(rng, n, m, rng.randint(1, min(n, m)))
    assert rank(M) == sympy_rank(M)
    assert rank_mod_p(M, LARGE_PRIMES[0]) == sympy_rank(M)


def test_rank_mod_small_prime_drops():
    M = [[1, 0], [0, 7]]
    assert rank(M) == 2
    assert rank_mod_p(M, 7) == 1


def test_rational_rank():
    M = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]
    assert rank(M) == 1


def test_echelon_pivots():
    rows, piv = bareiss_echelon([[0, 2, 4], [0, 1, 2], [1, 0, 0]])
    assert piv == [0, 1]
    assert len(rows) == 2


@pytest.mark.parametrize("seed", range(8))
def test_nullspace_annihilates(seed):
    rng = random.Random(100 + seed)
    M = _random_matrix(rng, 5, 7, 3)
    ker = nullspace(M)
    assert len(ker) == 7 - sympy_rank(M)
    for v in ker:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in M)


def test_nullspace_empty_matrix():
    assert len(nullspace([], 3)) == 3


def test_rref_identity():
    red, piv = rref([[2, 4], [1, 3]])
    assert red == [[1, 0], [0, 1]] and piv == [0, 1]


def test_solve_consistent_and_not():
    x = solve([[1, 1], [1, -1]], [3, 1])
    assert x == [2, 1]
    assert solve([[1, 1], [2, 2]], [1, 3]) is None


@pytest.mark.parametrize("seed", range(6))
def test_determinant_matches_sympy(seed):
    rng = random.Random(200 + seed)
    n = rng.randint(1, 6)
    M = [[Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
    assert determinant(M) == sympy.Matrix(M).det()


def test_rank_mod_p_rejects_huge_prime():
    with pytest.raises(ValueError):
        rank_mod_p([[1]], 2**61 - 1)
