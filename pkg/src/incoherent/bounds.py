"""Closed-form sizing rules and probability bounds for the rejection sampler."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

from scipy.special import betainc, gammaln

from .errors import InvalidParameterError

PAPER_BUDGET = 10
CLAIMED_SUCCESS_PROBABILITY = 1 - 1e-4


def _require_int(name, value, lo):
    if isinstance(value, bool) or int(value) != value or value < lo:
        raise InvalidParameterError(f"{name} must be an integer >= {lo}, got {value!r}")
    return int(value)


def welch_bound(m: int, N: int) -> float:
    """Lower bound on the coherence of any ``m x N`` unit-column matrix.

    Returns 0 when ``m >= N``; the radicand would otherwise be <= 0.
    """
    m = _require_int("m", m, 1)
    N = _require_int("N", N, 2)
    if m >= N:
        return 0.0
    return math.sqrt((N - m) / ((N - 1) * m))


def required_m(s: int, N: int) -> int:
    """Number of rows ``ceil(8 s^2 ln(2 s N / pi)) + 2`` used by the construction."""
    s = _require_int("s", s, 1)
    N = _require_int("N", N, 1)
    arg = 2 * s * N / math.pi
    if arg <= 1:
        raise InvalidParameterError(
            f"2sN/pi = {arg:.6g} <= 1 makes the logarithm non-positive; use N >= 2"
        )
    return math.ceil(8 * s * s * math.log(arg)) + 2


def _log_cap_factor(s, m):
    # log((1 - 1/(2s)^2)^((m-1)/2)), kept in the log domain for large m
    return 0.5 * (m - 1) * math.log1p(-1.0 / (4.0 * s * s))


def pair_reject_bound(s: int, m: int) -> float:
    """Upper bound ``2s (1 - 1/(2s)^2)^((m-1)/2) / (2 pi)`` on one pairwise rejection."""
    s = _require_int("s", s, 1)
    m = _require_int("m", m, 2)
    return math.exp(math.log(2 * s) + _log_cap_factor(s, m) - math.log(2 * math.pi))


def ball_to_sphere_ratio(m: int) -> float:
    """Volume of the unit ball in R^(m-1) divided by the area of the unit sphere in R^m."""
    m = _require_int("m", m, 2)
    # pi^((m-1)/2)/Gamma((m+1)/2) over 2 pi^(m/2)/Gamma(m/2)
    return math.exp(gammaln(m / 2) - gammaln((m + 1) / 2)) / (2 * math.sqrt(math.pi))


def cap_area_ratio_bound(s: int, m: int) -> float:
    """The cap-area bound ``2s (1 - 1/(2s)^2)^((m-1)/2) V_{m-1}`` divided by ``A_m``."""
    s = _require_int("s", s, 1)
    return math.exp(math.log(2 * s) + _log_cap_factor(s, m)) * ball_to_sphere_ratio(m)


class ColumnSuccessBound(NamedTuple):
    closed_form: float
    budget_form: float


def column_success_bound(j: int, s: int, m: int, N: int, budget: int = PAPER_BUDGET) -> ColumnSuccessBound:
    """Lower bounds on accepting a new column when ``j`` columns are already in place.

    ``closed_form`` is ``1 - (j/(2N))^10``. ``budget_form`` is
    ``1 - (j * pair_reject_bound(s, m))^budget``, i.e. the chance that not
    all ``budget`` candidates are rejected. Both are clamped to [0, 1].
    """
    N = _require_int("N", N, 1)
    j = _require_int("j", j, 0)
    if j > N:
        raise InvalidParameterError(f"j must not exceed N={N}, got {j}")
    budget = _require_int("budget", budget, 1)
    if j == 0:
        return ColumnSuccessBound(1.0, 1.0)
    closed = 1.0 - (j / (2 * N)) ** PAPER_BUDGET
    per_candidate_fail = min(1.0, j * pair_reject_bound(s, m))
    return ColumnSuccessBound(_clamp01(closed), _clamp01(1.0 - per_candidate_fail**budget))


def cap_measure_exact(m: int, t: float) -> float:
    """Probability that a uniform unit vector in R^m has ``|<y, x>| >= t`` for fixed unit x.

    Equal to the regularized incomplete beta ``I_{1-t^2}((m-1)/2, 1/2)``.
    """
    m = _require_int("m", m, 2)
    t = float(t)
    if not 0 < t < 1:
        raise InvalidParameterError(f"t must lie in (0, 1), got {t!r}")
    return float(betainc((m - 1) / 2, 0.5, 1 - t * t))


def width_ratio(m: int, N: int, mu: float) -> float:
    """Implied constant ``m ln(1/mu) / (ln N (1/mu)^2)`` of the width lower bound."""
    m = _require_int("m", m, 1)
    N = _require_int("N", N, 3)
    mu = float(mu)
    if not 0 < mu < 1:
        raise InvalidParameterError(f"mu must lie in (0, 1), got {mu!r}")
    return m * math.log(1 / mu) * mu * mu / math.log(N)


def _clamp01(x):
    return min(1.0, max(0.0, x))


@dataclass(frozen=True)
class BoundsReport:
    s: int
    N: int
    m: int
    budget: int
    welch: float
    welch_vacuous: bool
    required_m: int
    m_meets_requirement: bool
    threshold: float
    recovery_limit: float
    cap_measure_exact: float
    ball_to_sphere_ratio: float
    ball_to_sphere_step_holds: bool
    cap_area_ratio_bound: float
    cap_area_bound_holds: bool
    pair_reject_bound: float
    pair_reject_bound_holds: bool
    worst_j: int
    candidate_success_exact_union_worst: float
    candidate_success_bound_worst: float
    column_success_bound_budget_worst: float
    column_success_bound_worst: float
    budget_form_dominates_closed_form: bool
    overall_success_bound_budget: float
    overall_success_bound_closed_form: float
    claimed_success_probability: float
    width_ratio: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def bounds_report(s: int, N: int, m: int | None = None, budget: int = PAPER_BUDGET) -> BoundsReport:
    """Evaluate every quantity of the success-probability argument for ``(s, N, m)``.

    Each link of the chain is computed on its own so that the claimed
    inequalities can be checked rather than assumed. ``worst_j = N - 1`` is
    the number of columns already accepted when the last column is drawn.
    """
    req = required_m(s, N)
    N = _require_int("N", N, 2)
    budget = _require_int("budget", budget, 1)
    m = req if m is None else _require_int("m", m, 2)
    t = 1.0 / (2 * s)

    exact = cap_measure_exact(m, t)
    ratio = ball_to_sphere_ratio(m)
    cap_bound = cap_area_ratio_bound(s, m)
    p = pair_reject_bound(s, m)
    j = N - 1
    sums_budget = sum(min(1.0, i * p) ** budget for i in range(1, N))
    sums_closed = sum((i / (2 * N)) ** PAPER_BUDGET for i in range(1, N))
    col = column_success_bound(j, s, m, N, budget)
    return BoundsReport(
        s=s,
        N=N,
        m=m,
        budget=budget,
        welch=welch_bound(m, N),
        welch_vacuous=m >= N,
        required_m=req,
        m_meets_requirement=m >= req,
        threshold=t,
        recovery_limit=1.0 / (2 * s - 1),
        cap_measure_exact=exact,
        ball_to_sphere_ratio=ratio,
        ball_to_sphere_step_holds=ratio <= 1 / (2 * math.pi),
        cap_area_ratio_bound=cap_bound,
        cap_area_bound_holds=exact <= cap_bound,
        pair_reject_bound=p,
        pair_reject_bound_holds=exact <= p,
        worst_j=j,
        candidate_success_exact_union_worst=_clamp01(1.0 - j * exact),
        candidate_success_bound_worst=_clamp01(1.0 - j * p),
        column_success_bound_budget_worst=col.budget_form,
        column_success_bound_worst=col.closed_form,
        budget_form_dominates_closed_form=col.budget_form >= col.closed_form,
        overall_success_bound_budget=_clamp01(1.0 - sums_budget),
        overall_success_bound_closed_form=_clamp01(1.0 - sums_closed),
        claimed_success_probability=CLAIMED_SUCCESS_PROBABILITY,
        width_ratio=width_ratio(m, N, t) if N >= 3 else None,
    )
