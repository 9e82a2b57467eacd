"""Explicit Gorenstein instances and syzygy certificates.

Instances are built from random graded skew-symmetric matrices: the signed
sub-Pfaffians of a ``(2k+1) x (2k+1)`` skew matrix whose ``(i, j)`` entry
has degree ``n + 3 - q_i - q_j`` generate a height-3 Gorenstein ideal with
generator degrees ``q_i``.  Everything except :func:`reduce_length` in
numeric mode is exact.
"""

from __future__ import annotations

import logging
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, sqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .combinatorics import DegreeData, HilbertFunction, dim_forms
from .forms import Form, X1, X2, X3, monomial_index, monomials, sum_forms, sum_of_squares
from .linalg import LARGE_PRIMES, bareiss_echelon, integer_rows, nullspace, rank, rank_mod_p, solve
from .toric import build_polytope, quadric_binomials

log = logging.getLogger(__name__)

VARS = (X1, X2, X3)
COEFF_RANGE = (-9, 9)
MAX_ATTEMPTS = 10


class DegenerateInstance(RuntimeError):
    """No random draw produced the expected Hilbert function."""


class DependentInput(ValueError):
    pass


class DependentBasis(ValueError):
    pass


class ZeroWitness(ValueError):
    pass


class RankMismatch(RuntimeError):
    """Modular and rational ranks disagree for every prime tried."""


def _key_int(k) -> int:
    if isinstance(k, int):
        return k
    return zlib.crc32(str(k).encode())


def derive_rng(seed, *keys) -> np.random.Generator:
    """Independent stream for ``(seed, *keys)``; keys may be strings."""
    ss = np.random.SeedSequence(entropy=_key_int(seed), spawn_key=tuple(_key_int(k) for k in keys))
    return np.random.default_rng(ss)


# graded pieces ----------------------------------------------------------


def multiplication_rows(gens: Sequence[Form], t: int) -> List[List]:
    """Coefficient rows of ``m * g`` for every generator and monomial ``m``."""
    idx = monomial_index(t)
    ncols = len(idx)
    rows = []
    for g in gens:
        if g.is_zero():
            continue
        for mono in monomials(t - g.degree):
            row = [0] * ncols
            for e, c in g.coeffs.items():
                row[idx[(e[0] + mono[0], e[1] + mono[1], e[2] + mono[2])]] = c
            rows.append(row)
    return rows


@dataclass
class GradedPiece:
    degree: int
    dim: int
    basis: List[List[int]]
    pivots: List[int]

    def forms(self) -> List[Form]:
        return [Form.from_vector(self.degree, row) for row in self.basis]


def graded_piece(gens: Sequence[Form], t: int) -> GradedPiece:
    """Echelon basis of ``<gens>_t`` over Q (fraction-free)."""
    rows = multiplication_rows(gens, t)
    if not rows:
        return GradedPiece(t, 0, [], [])
    basis, pivots = bareiss_echelon(integer_rows(rows))
    return GradedPiece(t, len(pivots), basis, pivots)


def piece_dim(gens: Sequence[Form], t: int) -> int:
    rows = multiplication_rows(gens, t)
    return rank(rows) if rows else 0


def piece_dim_mod_p(gens: Sequence[Form], t: int, p: int) -> int:
    rows = multiplication_rows(gens, t)
    return rank_mod_p(rows, p) if rows else 0


# Pfaffian instances -----------------------------------------------------


@dataclass
class SkewMatrix:
    degrees: Tuple[int, ...]
    socle: int
    entries: Dict[Tuple[int, int], Form]

    @property
    def size(self) -> int:
        return len(self.degrees)

    def entry_degree(self, i: int, j: int) -> int:
        return self.socle + 3 - self.degrees[i] - self.degrees[j]

    def __getitem__(self, ij) -> Form:
        i, j = ij
        if i == j:
            return Form.zero(self.entry_degree(i, j))
        if i < j:
            return self.entries[(i, j)]
        return -self.entries[(j, i)]

    @classmethod
    def random(cls, degrees: Sequence[int], socle: int, rng) -> "SkewMatrix":
        lo, hi = COEFF_RANGE
        entries = {}
        s = len(degrees)
        for i in range(s):
            for j in range(i + 1, s):
                e = socle + 3 - degrees[i] - degrees[j]
                f = Form.random(e, rng, lo, hi)
                if e == 0:
                    while f.is_zero():
                        f = Form.random(e, rng, lo, hi)
                entries[(i, j)] = f
        return cls(tuple(degrees), socle, entries)


def pfaffian(M: SkewMatrix, idx: Tuple[int, ...], _memo=None) -> Form:
    """Pfaffian of the principal submatrix on ``idx`` (even length)."""
    if _memo is None:
        _memo = {}
    if not idx:
        return Form.constant(1)
    if idx in _memo:
        return _memo[idx]
    first, rest = idx[0], idx[1:]
    terms = []
    for pos, j in enumerate(rest):
        entry = M[first, j]
        if entry.is_zero():
            continue
        sub = pfaffian(M, tuple(x for x in rest if x != j), _memo)
        term = entry * sub
        terms.append(term if pos % 2 == 0 else -term)
    deg = sum(M.degrees[i] for i in idx)
    out = sum_forms(terms, terms[0].degree) if terms else Form.zero(-1)
    _memo[idx] = out
    return out


def signed_subpfaffians(M: SkewMatrix) -> List[Form]:
    memo: dict = {}
    s = M.size
    gens = []
    for i in range(s):
        pf = pfaffian(M, tuple(x for x in range(s) if x != i), memo)
        gens.append(pf if i % 2 == 0 else -pf)
    return gens


@dataclass
class ValidationReport:
    ok: bool
    dims: List[int]
    expected: List[int]
    first_mismatch: Optional[int] = None
    method: str = "exact"
    primes: List[int] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate_instance(
    gens: Sequence[Form],
    T: HilbertFunction,
    *,
    method: str = "exact",
    rng=None,
) -> ValidationReport:
    """Compare ``dim <gens>_t`` with ``dim S_t - T_t`` for ``t = 0..n``.

    ``method`` is ``"exact"`` (rational ranks), ``"modular"`` (ranks over a
    prime near 2**31) or ``"both"``, where every rational rank is checked
    against a modular one and disagreement raises :class:`RankMismatch`
    after three primes.
    """
    if method not in ("exact", "modular", "both"):
        raise ValueError(f"unknown rank method {method!r}")
    if rng is None:
        rng = derive_rng(0, "validate")
    n = T.socle
    expected = [T.ideal_dim(t) for t in range(n + 1)]
    dims: List[int] = []
    primes: List[int] = []
    prime = int(rng.choice(LARGE_PRIMES))
    for t in range(n + 1):
        rows = multiplication_rows(gens, t)
        if not rows:
            dims.append(0)
        elif method == "modular":
            primes.append(prime)
            dims.append(rank_mod_p(rows, prime))
        else:
            exact = rank(rows)
            if method == "both":
                for attempt in range(3):
                    primes.append(prime)
                    if rank_mod_p(rows, prime) == exact:
                        break
                    log.warning("rank mismatch mod %d in degree %d, retrying", prime, t)
                    prime = int(rng.choice([p for p in LARGE_PRIMES if p != prime]))
                else:
                    raise RankMismatch(f"modular ranks never matched rank {exact} in degree {t}")
            dims.append(exact)
        if dims[-1] != expected[t]:
            return ValidationReport(False, dims, expected, t, method, primes)
    return ValidationReport(True, dims, expected, None, method, primes)


@dataclass
class PfaffianInstance:
    degrees: DegreeData
    matrix: SkewMatrix
    generators: List[Form]
    attempts: int
    validation: ValidationReport

    def generator_degrees(self) -> Tuple[int, ...]:
        return tuple(g.degree for g in self.generators)


def pfaffian_instance(
    dd: DegreeData,
    seed,
    *,
    max_attempts: int = MAX_ATTEMPTS,
    method: str = "exact",
) -> PfaffianInstance:
    """Random Pfaffian instance for ``dd`` whose Hilbert function checks out.

    ``seed`` is an int or a tuple of stream keys; attempt ``a`` uses the
    stream ``(*seed, a)``.
    """
    keys = seed if isinstance(seed, tuple) else (seed,)
    T = dd.hilbert()
    for attempt in range(max_attempts):
        rng = derive_rng(*keys, "pfaffian", attempt)
        M = SkewMatrix.random(dd.Q, dd.socle, rng)
        gens = signed_subpfaffians(M)
        if any(g.degree != q or g.is_zero() for g, q in zip(gens, dd.Q)):
            log.info("seed %s attempt %d: vanishing sub-Pfaffian", keys, attempt)
            continue
        report = validate_instance(gens, T, method=method, rng=rng)
        if report:
            return PfaffianInstance(dd, M, gens, attempt + 1, report)
        log.info(
            "seed %s attempt %d: Hilbert function mismatch in degree %s",
            keys, attempt, report.first_mismatch,
        )
    raise DegenerateInstance(f"no valid instance for Q={dd.Q} after {max_attempts} attempts")


def pfaffian_generators(d: int, dd: DegreeData, seed, **kwargs) -> List[Form]:
    if dd.socle != 2 * d:
        raise ValueError("degree data does not have socle 2d")
    return pfaffian_instance(dd, seed, **kwargs).generators


def relation_residuals(M: SkewMatrix, gens: Sequence[Form]) -> List[Form]:
    """``sum_j M[i, j] * gens[j]`` for each row ``i`` (all zero for Pfaffians)."""
    out = []
    for i in range(M.size):
        terms = [M[i, j] * gens[j] for j in range(M.size) if not M[i, j].is_zero()]
        out.append(sum_forms(terms, terms[0].degree) if terms else Form.zero(0))
    return out


# quadratic syzygies and length reduction ---------------------------------


def check_independent(forms: Sequence[Form]) -> bool:
    if not forms:
        return True
    deg = forms[0].degree
    if any(f.degree != deg and not f.is_zero() for f in forms):
        raise ValueError("forms of mixed degree")
    return rank([f.vector() for f in forms]) == len(forms)


def ideal_basis(gens: Sequence[Form], d: int) -> List[Form]:
    """Monomial multiples of the generators of degree ``<= d``, in generator order."""
    out = []
    for g in gens:
        if g.degree <= d:
            out.extend(g.times_monomial(m) for m in monomials(d - g.degree))
    return out


@dataclass
class QuadraticWitness:
    """Symmetric ``alpha`` with ``sum alpha_ij u_i u_j = 0``."""

    basis: Tuple[Form, ...]
    alpha: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.expand().is_zero():
            raise AssertionError("quadratic witness does not expand to zero")

    def expand(self) -> Form:
        n = len(self.basis)
        deg = 2 * self.basis[0].degree
        terms = []
        for i in range(n):
            for j in range(n):
                a = self.alpha[i][j]
                if a:
                    terms.append((self.basis[i] * self.basis[j]) * a)
        return sum_forms(terms, deg)

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.alpha for a in row)


def quadratic_syzygies(W: Sequence[Form], d: Optional[int] = None) -> List[QuadraticWitness]:
    """Kernel of ``Sym^2 span(W) -> S_{2d}``, one witness per basis vector."""
    W = list(W)
    if d is not None and any(w.degree != d for w in W):
        raise ValueError(f"all forms must have degree {d}")
    if not check_independent(W):
        raise DependentInput("forms are linearly dependent")
    n = len(W)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    deg = 2 * W[0].degree
    cols = [(W[i] * W[j]).vector() for i, j in pairs]
    rows = [[col[r] for col in cols] for r in range(dim_forms(deg))]
    out = []
    for v in nullspace(rows, len(pairs)):
        den = lcm(*(x.denominator for x in v))
        alpha = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), x in zip(pairs, v):
            x = x * den
            if i == j:
                alpha[i][i] = x
            else:
                alpha[i][j] = alpha[j][i] = x / 2
        out.append(QuadraticWitness(tuple(W), tuple(tuple(r) for r in alpha)))
    return out


@dataclass
class LengthReduction:
    """``sum h_i^2 = sum weights_k * forms_k^2`` with fewer terms."""

    forms: List[Form]
    weights: List
    exact: bool
    eigenvalue: float
    residual: float

    def __len__(self) -> int:
        return len(self.forms)

    def squares(self) -> Form:
        return sum_of_squares(self.forms, self.weights)


def _ldl_psd(B: List[List[Fraction]]):
    """Exact ``B = sum d_k l_k l_k^T`` for a rational PSD matrix."""
    n = len(B)
    B = [row[:] for row in B]
    out = []
    for k in range(n):
        p = B[k][k]
        if p == 0:
            if any(B[k][j] for j in range(n)):
                raise ValueError("matrix is not positive semidefinite")
            continue
        if p < 0:
            raise ValueError("matrix is not positive semidefinite")
        l = [B[k][j] / p for j in range(n)]
        out.append((p, l))
        for i in range(n):
            for j in range(n):
                B[i][j] -= p * l[i] * l[j]
    return out


def _rational_eigenvalue(A: List[List[Fraction]], lam: float) -> Optional[Fraction]:
    from .linalg import determinant

    cand = Fraction(lam).limit_denominator(10**6)
    n = len(A)
    shifted = [[A[i][j] - (cand if i == j else 0) for j in range(n)] for i in range(n)]
    return cand if determinant(shifted) == 0 else None


def reduce_length(h: Sequence[Form], w: QuadraticWitness, *, tol: float = 1e-9) -> LengthReduction:
    """Rewrite ``sum h_i^2`` with at most ``len(h) - 1`` squares.

    ``sum h_i^2 = h^T (I - tA) h`` for the witness matrix ``A`` and any
    ``t``; ``t = 1/lambda`` for the eigenvalue of largest magnitude makes
    ``I - tA`` positive semidefinite and singular.
    """
    h = list(h)
    if not h:
        raise ValueError("no forms given")
    if w.is_zero():
        raise ZeroWitness("witness matrix is zero")
    if len(w.alpha) != len(h):
        raise ValueError("witness size does not match the forms")
    target = sum_of_squares(h)
    if not sum_forms(
        [(h[i] * h[j]) * w.alpha[i][j] for i in range(len(h)) for j in range(len(h)) if w.alpha[i][j]],
        target.degree,
    ).is_zero():
        raise ValueError("witness does not vanish on these forms")
    n = len(h)
    A = np.array([[float(x) for x in row] for row in w.alpha])
    evals, evecs = np.linalg.eigh(A)
    i = int(np.argmax(np.abs(evals)))
    lam = float(evals[i])
    if lam == 0.0:
        raise ZeroWitness("witness matrix is numerically zero")
    v = evecs[:, i]
    if np.linalg.norm(A @ v - lam * v) > tol * max(1.0, np.linalg.norm(A)):
        raise ArithmeticError("eigenvalue residual above tolerance")

    lam_q = _rational_eigenvalue([list(r) for r in w.alpha], lam)
    if lam_q is not None:
        B = [[Fraction(int(i == j)) - w.alpha[i][j] / lam_q for j in range(n)] for i in range(n)]
        forms, weights = [], []
        for dk, l in _ldl_psd(B):
            forms.append(sum_forms([h[j] * l[j] for j in range(n) if l[j]], h[0].degree))
            weights.append(dk)
        if sum_of_squares(forms, weights) != target:
            raise AssertionError("exact length reduction failed to reproduce the sum")
        return LengthReduction(forms, weights, True, lam, 0.0)

    B = np.eye(n) - A / lam
    sig, V = np.linalg.eigh(B)
    keep = [k for k in range(n) if sig[k] > tol * max(1.0, float(sig.max()))]
    forms = []
    for k in keep:
        s = sqrt(float(sig[k]))
        forms.append(sum_forms([h[j] * float(s * V[j, k]) for j in range(n)], h[0].degree))
    diff = target - sum_of_squares(forms)
    residual = diff.max_norm() / target.max_norm()
    return LengthReduction(forms, [1.0] * len(forms), False, lam, residual)


# divisor reduction and identities ----------------------------------------


def exact_quotient(f: Form, g: Form) -> Optional[Form]:
    """``f / g`` when ``g`` divides ``f`` exactly, else ``None``."""
    e = f.degree - g.degree
    if e < 0 or g.is_zero():
        return None
    cols = [g.times_monomial(m).vector() for m in monomials(e)]
    rows = [[col[r] for col in cols] for r in range(dim_forms(f.degree))]
    x = solve(rows, f.vector())
    if x is None:
        return None
    q = Form.from_vector(e, x)
    return q if q * g == f else None


def linear_syzygies(f1: Form, f2: Form) -> List[Tuple[Form, Form]]:
    """Basis of ``{(l1, l2) linear : l1 f1 + l2 f2 = 0}``."""
    cols = [(v * f).vector() for f in (f1, f2) for v in VARS]
    rows = [[col[r] for col in cols] for r in range(dim_forms(f1.degree + 1))]
    return [(Form.linear(*v[:3]), Form.linear(*v[3:])) for v in nullspace(rows, 6)]


def common_factor_from_linear_syzygy(f1: Form, f2: Form) -> Optional[Form]:
    """Common factor of degree ``deg - 1`` forced by a linear syzygy, if any."""
    if f1.degree != f2.degree:
        raise ValueError("forms must have equal degree")
    if f1.is_zero() or f2.is_zero():
        return None
    syz = linear_syzygies(f1, f2)
    if not syz:
        return None
    if len(syz) > 1:
        # proportional inputs: the common factor is the form itself
        return f1.normalized()
    _, l2 = syz[0]
    c = exact_quotient(f1, l2)
    if c is None or exact_quotient(f2, c) is None:
        raise AssertionError("linear syzygy without a common factor")
    return c.normalized()


@dataclass
class Ci8Witness:
    coefficients: Tuple[Form, Form, Form]
    products: Tuple[Form, Form, Form]
    a: Form

    def expansion(self) -> Form:
        return sum_forms([c * p for c, p in zip(self.coefficients, self.products)], self.a.degree + self.products[0].degree)


def ci8_syzygy_witness(m0: Form, m1: Form, m2: Form, c0: Form, c1: Form, f: Form) -> Ci8Witness:
    """Syzygy ``(-c0 m2, -c1 m2, a)`` on ``(m0 f, m1 f, m2 f)`` with ``a = m0 c0 + m1 c1``."""
    if any(m.degree != 1 for m in (m0, m1, m2)):
        raise ValueError("m0, m1, m2 must be linear")
    if not check_independent([m0, m1, m2]):
        raise DependentBasis("linear forms are dependent")
    a = m0 * c0 + m1 * c1
    w = Ci8Witness((-(c0 * m2), -(c1 * m2), a), (m0 * f, m1 * f, m2 * f), a)
    if not w.expansion().is_zero():
        raise AssertionError("syzygy identity failed")
    return w


# toric relations ---------------------------------------------------------


def toric_coordinates(d: int, gens: Sequence[Form]) -> Dict[Tuple[int, int, int], Form]:
    """``t_w = x1^j x2^k x3^(d - q_i - j - k) f_i`` over the Omega index set."""
    low = [g for g in sorted(gens, key=lambda g: g.degree) if g.degree < d]
    out = {}
    for i, f in enumerate(low, start=1):
        m = d - f.degree
        for (j, k, l) in monomials(m):
            out[(i, j, k)] = f.times_monomial((j, k, l))
    return out


def binomial_vanishes(t: Dict, lhs: Sequence, rhs: Sequence) -> bool:
    def prod(idx):
        out = Form.constant(1)
        for w in idx:
            out = out * t[w]
        return out

    return (prod(lhs) - prod(rhs)).is_zero()


@dataclass
class ToricRelationReport:
    checked: int
    failures: List[Tuple]

    def __bool__(self) -> bool:
        return not self.failures


def toric_relation_check(d: int, gens: Sequence[Form]) -> ToricRelationReport:
    """Every quadric binomial of ``X_K`` vanishes on the ``t_w``."""
    p = build_polytope(d, sorted(g.degree for g in gens))
    t = toric_coordinates(d, gens)
    binoms = quadric_binomials(p)
    fails = [b for b in binoms if not binomial_vanishes(t, b[0], b[1])]
    return ToricRelationReport(len(binoms), fails)
