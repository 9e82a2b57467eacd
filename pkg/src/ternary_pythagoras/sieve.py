"""Dimension filters on Gorenstein candidates of socle degree ``2d``.

A candidate survives when its ideal could contain a base point free space
of degree-``d`` forms generating a hyperplane of ``S_{2d}``:

* ``F0``  no generators of degree 1 or 2;
* ``F1``  at least three generators of degree at most ``d``;
* ``F2``  with exactly three such generators, their degrees sum to at
  most ``2d + 3`` (or exactly ``2d + 3`` with ``ci_sum_equality``);
* ``F3``  ``dim J_d >= d + 1``;
* ``F4``  the initial bound on ``dim <J_d>_{2d}`` reaches ``dim S_{2d} - 1``;
* ``F5``  ``codim J_d = T_d >= 3d - 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .combinatorics import (
    Candidate,
    DegreeData,
    HilbertFunction,
    Partition,
    dim_forms,
    enumerate_candidates,
)

FILTERS = ("F0", "F1", "F2", "F3", "F4", "F5")

FILTER_NAMES = {
    "F0": "min generator degree >= 3",
    "F1": "at least three generators of degree <= d",
    "F2": "three low generators: degree sum vs 2d+3",
    "F3": "dim J_d >= d+1",
    "F4": "initial bound >= dim S_2d - 1",
    "F5": "codim J_d >= 3d-2",
}


def initial_bound(d: int, dd: DegreeData) -> int:
    """Upper bound on ``dim <J_d>_{2d}`` from the low-degree generators.

    Multiples of the generators of degree ``<= d`` are counted, minus the
    relations of degree below ``m``, the least generator degree above ``d``
    (all relations when there is none).
    """
    high = [q for q in dd.Q if q > d]
    m = min(high) if high else None
    gens = sum(dim_forms(2 * d - q) for q in dd.Q if q <= d)
    rels = sum(dim_forms(2 * d - p) for p in dd.P if m is None or p < m)
    return gens - rels


@dataclass(frozen=True)
class FilterVerdict:
    min_generator_degree: int
    low_generator_count: int
    low_degree_sum: Optional[int]
    ideal_dim_d: int
    bound: int
    codim_d: int
    results: Dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    @property
    def first_failure(self) -> Optional[str]:
        return next((f for f in FILTERS if not self.results[f]), None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "minGeneratorDegree": self.min_generator_degree,
            "lowGeneratorCount": self.low_generator_count,
            "lowDegreeSum": self.low_degree_sum,
            "idealDimD": self.ideal_dim_d,
            "initialBound": self.bound,
            "codimD": self.codim_d,
            "results": {f: self.results[f] for f in FILTERS},
            "passed": self.passed,
            "firstFailure": self.first_failure,
        }


def apply_filters(d: int, c: Candidate, *, ci_sum_equality: bool = False) -> FilterVerdict:
    if d < 3:
        raise ValueError("filters assume d >= 3")
    dd, T = c.degrees, c.hilbert
    low = [q for q in dd.Q if q <= d]
    low_sum = sum(low) if len(low) == 3 else None
    dim_jd = T.ideal_dim(d)
    bound = initial_bound(d, dd)
    codim = T[d]
    if low_sum is None:
        f2 = True
    elif ci_sum_equality:
        f2 = low_sum == 2 * d + 3
    else:
        f2 = low_sum <= 2 * d + 3
    results = {
        "F0": min(dd.Q) >= 3,
        "F1": len(low) >= 3,
        "F2": f2,
        "F3": dim_jd >= d + 1,
        "F4": bound >= dim_forms(2 * d) - 1,
        "F5": codim >= 3 * d - 2,
    }
    return FilterVerdict(min(dd.Q), len(low), low_sum, dim_jd, bound, codim, results)


@dataclass
class CaseRecord:
    """A sieve candidate and, once analysed, its downstream results."""

    label: str
    partition: Partition
    degrees: DegreeData
    hilbert: HilbertFunction
    verdict: FilterVerdict
    strategy: Any = None
    toric: Any = None
    witness: Optional[Dict[str, Any]] = None
    py_bound: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    @property
    def Q(self):
        return self.degrees.Q

    @property
    def P(self):
        return self.degrees.P


def _sort_key(c: Candidate):
    return (c.degrees.k, c.degrees.Q)


def evaluate(d: int, *, ci_sum_equality: bool = False):
    """All candidates in (k, Q) order with their verdicts."""
    cands = sorted(enumerate_candidates(d), key=_sort_key)
    return [(c, apply_filters(d, c, ci_sum_equality=ci_sum_equality)) for c in cands]


def stage_counts(evaluated) -> List[Dict[str, Any]]:
    """Candidates entering and leaving each filter, applied in order."""
    n = len(evaluated)
    stages = [{"name": "hilbert functions", "in": n, "out": n}]
    alive = [v for _, v in evaluated]
    for f in FILTERS:
        kept = [v for v in alive if v.results[f]]
        stages.append({"name": f"{f}: {FILTER_NAMES[f]}", "in": len(alive), "out": len(kept)})
        alive = kept
    return stages


def sieve(d: int, *, ci_sum_equality: bool = False) -> List[CaseRecord]:
    """Surviving cases for socle degree ``2d``, labelled ``2d.(i)``."""
    records = []
    for c, v in evaluate(d, ci_sum_equality=ci_sum_equality):
        if v.passed:
            label = f"{2 * d}.({len(records) + 1})"
            records.append(CaseRecord(label, c.partition, c.degrees, c.hilbert, v))
    return records
