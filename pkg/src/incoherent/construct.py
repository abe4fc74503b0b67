"""Seeded rejection sampling of unit columns under a coherence threshold."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import PAPER_BUDGET, required_m
from .errors import InvalidParameterError
from .matrix import SensingMatrix, coherence
from .rng import GENERATOR_ID, check_seed, make_generator

MIN_NORM = 1e-8
MAX_REDRAWS = 100


@dataclass(frozen=True)
class ConstructionParams:
    N: int
    s: int
    seed: int
    m: int | None = None
    budget: int = PAPER_BUDGET
    threshold: float | None = None

    def __post_init__(self):
        for name, lo in (("N", 2), ("s", 1), ("budget", 1)):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < lo:
                raise InvalidParameterError(f"{name} must be an integer >= {lo}, got {v!r}")
        check_seed(self.seed)
        if self.m is None:
            object.__setattr__(self, "m", required_m(self.s, self.N))
        elif isinstance(self.m, bool) or int(self.m) != self.m or self.m < 2:
            raise InvalidParameterError(f"m must be an integer >= 2, got {self.m!r}")
        if self.threshold is None:
            object.__setattr__(self, "threshold", 1.0 / (2 * self.s))
        if not 0 < self.threshold < 1:
            raise InvalidParameterError(f"threshold must lie in (0, 1), got {self.threshold!r}")

    @property
    def threshold_exceeds_recovery_limit(self) -> bool:
        """True when the threshold no longer guarantees ``mu < 1/(2s - 1)``."""
        return self.threshold * (2 * self.s - 1) >= 1


@dataclass
class ConstructionReport:
    """Outcome and work counters of one :func:`construct` run.

    ``failed_column`` is the 1-based column whose budget ran out, or None.
    Column 1 is the fixed first basis vector and counts as one attempt with
    no random draw.
    """

    params: ConstructionParams
    failed_column: int | None
    attempts_per_column: list[int]
    candidates_drawn: int
    inner_products_evaluated: int
    achieved_coherence: float
    elapsed: float = field(compare=False)
    generator: str = GENERATOR_ID

    @property
    def success(self) -> bool:
        return self.failed_column is None

    @property
    def outcome(self) -> str:
        return "success" if self.success else "failed_at_column"

    def to_dict(self) -> dict:
        p = self.params
        return {
            "outcome": self.outcome,
            "failed_column": self.failed_column,
            "N": p.N,
            "s": p.s,
            "m": p.m,
            "seed": p.seed,
            "budget": p.budget,
            "threshold": p.threshold,
            "threshold_exceeds_recovery_limit": p.threshold_exceeds_recovery_limit,
            "generator": self.generator,
            "attempts_per_column": list(self.attempts_per_column),
            "candidates_drawn": self.candidates_drawn,
            "inner_products_evaluated": self.inner_products_evaluated,
            "achieved_coherence": self.achieved_coherence,
            "complexity": verify_complexity_claim(self, p),
        }


def sample_unit_vector(rng: np.random.Generator, m: int) -> np.ndarray:
    """Draw a uniformly distributed unit vector in R^m from ``rng``."""
    if m < 1:
        raise InvalidParameterError(f"m must be >= 1, got {m}")
    for _ in range(MAX_REDRAWS):
        g = rng.standard_normal(m)
        norm = np.linalg.norm(g)
        if norm >= MIN_NORM:
            return g / norm
    raise RuntimeError(f"{MAX_REDRAWS} consecutive near-zero normal draws in dimension {m}")


def candidate_coherence(y, accepted) -> float:
    """Largest ``|<x, y>|`` over the accepted vectors; 0 when none are accepted.

    ``accepted`` is a sequence of vectors or an ``m x j`` array whose
    columns are the vectors.
    """
    y = np.asarray(y, dtype=np.float64)
    if isinstance(accepted, np.ndarray) and accepted.ndim == 2:
        x = accepted
    else:
        if len(accepted) == 0:
            return 0.0
        x = np.column_stack([np.asarray(v, dtype=np.float64) for v in accepted])
    if x.shape[1] == 0:
        return 0.0
    if x.shape[0] != y.shape[0]:
        raise InvalidParameterError(f"dimension mismatch: y has {y.shape[0]}, accepted have {x.shape[0]}")
    return float(np.max(np.abs(x.T @ y)))


def construct(params: ConstructionParams):
    """Run the rejection sampler.

    Returns ``(matrix, report)``; ``matrix`` is None when some column
    exhausted its budget. Identical params give bit-identical output.
    """
    t0 = time.perf_counter()
    m, N, budget, threshold = params.m, params.N, params.budget, params.threshold
    rng = make_generator(params.seed)

    cols = np.zeros((m, N), order="F")
    cols[0, 0] = 1.0
    attempts = [1]
    drawn = 1
    products = 0
    failed = None
    for j in range(1, N):
        accepted = cols[:, :j]
        for k in range(1, budget + 1):
            y = sample_unit_vector(rng, m)
            drawn += 1
            products += j
            if candidate_coherence(y, accepted) <= threshold:
                cols[:, j] = y
                attempts.append(k)
                break
        else:
            failed = j + 1
            attempts.append(budget)
            break

    n_done = len(attempts) if failed is None else len(attempts) - 1
    mu = coherence(cols[:, :n_done])
    matrix = SensingMatrix(cols) if failed is None else None
    report = ConstructionReport(
        params=params,
        failed_column=failed,
        attempts_per_column=attempts,
        candidates_drawn=drawn,
        inner_products_evaluated=products,
        achieved_coherence=mu,
        elapsed=time.perf_counter() - t0,
    )
    return matrix, report


def verify_complexity_claim(report: ConstructionReport, params: ConstructionParams) -> dict:
    """Compare measured work with the stated worst-case figures.

    The quoted figure ``10 m N + N(N-1)/2`` adds scalar operations to inner
    products; it is reported as-is next to the raw counters.
    """
    N, m, budget = params.N, params.m, params.budget
    pairs = N * (N - 1) // 2
    candidate_bound = budget * N
    product_bound = budget * pairs
    literal = 10 * m * N + pairs
    return {
        "candidates_drawn": report.candidates_drawn,
        "candidate_bound": candidate_bound,
        "candidates_within_bound": report.candidates_drawn <= candidate_bound,
        "inner_products_evaluated": report.inner_products_evaluated,
        "inner_product_bound": product_bound,
        "inner_products_within_bound": report.inner_products_evaluated <= product_bound,
        "inner_product_minimum": pairs,
        "inner_products_at_least_minimum": report.inner_products_evaluated >= pairs,
        "literal_complexity": literal,
        "inner_products_within_literal": report.inner_products_evaluated <= literal,
    }
