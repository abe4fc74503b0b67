"""Sparse-recovery and restricted-isometry validators.

Support indices in :class:`SparseSignal`, :class:`RecoveryResult` and
:class:`RicEstimate` are 1-based, matching the usual ``e_1 ... e_N``
numbering of the canonical basis.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, InvalidParameterError
from .matrix import SensingMatrix, _as_array, coherence, max_recoverable_sparsity
from .rng import check_seed, make_generator, substream_seed

DEGENERATE_COND = 1e12
MIN_COEFFICIENT = 1e-6
L0_MAX_N = 20
L0_MAX_S = 3
RIC_MAX_SUPPORTS = 10**6


@dataclass(frozen=True)
class SparseSignal:
    N: int
    support: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        support = tuple(int(i) for i in self.support)
        values = tuple(float(v) for v in self.values)
        if len(support) != len(values):
            raise InvalidParameterError("support and values differ in length")
        if any(b <= a for a, b in zip(support, support[1:])):
            raise InvalidParameterError(f"support must be strictly increasing, got {support}")
        if support and not (1 <= support[0] and support[-1] <= self.N):
            raise InvalidParameterError(f"support indices must lie in [1, {self.N}]")
        if any(v == 0 for v in values):
            raise InvalidParameterError("values must be nonzero")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "values", values)

    def to_dense(self) -> np.ndarray:
        x = np.zeros(self.N)
        if self.support:
            x[np.array(self.support) - 1] = self.values
        return x


@dataclass(frozen=True)
class RecoveryResult:
    recovered_support: tuple[int, ...]
    coefficients: tuple[float, ...]
    support_correct: bool | None
    max_coefficient_error: float | None
    residual_norm: float
    degenerate: bool = False


@dataclass(frozen=True)
class RicEstimate:
    s: int
    delta: float
    argmin_support: tuple[int, ...]
    argmax_support: tuple[int, ...]
    lambda_min: float
    lambda_max: float

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "delta": self.delta,
            "argmin_support": list(self.argmin_support),
            "argmax_support": list(self.argmax_support),
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
        }


def _lstsq(a_sub, b):
    """Least squares on selected columns; flags ill-conditioned systems."""
    cond = np.linalg.cond(a_sub) if a_sub.shape[1] else 1.0
    coef = np.linalg.lstsq(a_sub, b, rcond=None)[0]
    return coef, bool(not np.isfinite(cond) or cond > DEGENERATE_COND)


def omp(A, b, s: int, reference: SparseSignal | None = None) -> RecoveryResult:
    """Orthogonal matching pursuit with at most ``s`` greedy selections.

    Stops early once the residual vanishes (relative 1e-12), so ``b = 0``
    yields an empty support.
    """
    a = _as_array(A)
    m, n = a.shape
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (m,):
        raise InvalidParameterError(f"b must have shape ({m},), got {b.shape}")
    if not np.all(np.isfinite(b)):
        raise InvalidParameterError("b contains NaN or Inf")
    if isinstance(s, bool) or int(s) != s or not 1 <= s <= min(m, n):
        raise InvalidParameterError(f"s must be an integer in [1, {min(m, n)}], got {s!r}")

    stop = 1e-12 * max(1.0, float(np.linalg.norm(b)))
    selected: list[int] = []
    coef = np.zeros(0)
    residual = b.copy()
    degenerate = False
    for _ in range(s):
        if np.linalg.norm(residual) <= stop:
            break
        corr = np.abs(a.T @ residual)
        corr[selected] = -np.inf
        selected.append(int(np.argmax(corr)))
        coef, degenerate = _lstsq(a[:, selected], b)
        residual = b - a[:, selected] @ coef
        if degenerate:
            break

    order = np.argsort(selected)
    support = tuple(selected[i] + 1 for i in order)
    coefficients = tuple(float(coef[i]) for i in order)
    correct = err = None
    if reference is not None:
        if reference.N != n:
            raise InvalidParameterError("reference signal length differs from N")
        x_hat = np.zeros(n)
        if selected:
            x_hat[selected] = coef
        correct = support == reference.support and not degenerate
        err = float(np.max(np.abs(x_hat - reference.to_dense()))) if n else 0.0
    return RecoveryResult(
        recovered_support=support,
        coefficients=coefficients,
        support_correct=correct,
        max_coefficient_error=err,
        residual_norm=float(np.linalg.norm(residual)),
        degenerate=degenerate,
    )


def brute_force_l0(A, b, s_max: int) -> SparseSignal:
    """Sparsest exact solution of ``A x = b`` with at most ``s_max`` nonzeros.

    Supports are tried by size, then lexicographically; the first whose
    least-squares residual is at most ``1e-9 * max(1, ||b||)`` wins.
    Raises :class:`InfeasibleError` when none qualifies.
    """
    a = _as_array(A)
    m, n = a.shape
    if n > L0_MAX_N:
        raise InvalidParameterError(
            f"N = {n} exceeds the enumeration guard N <= {L0_MAX_N}"
        )
    if isinstance(s_max, bool) or int(s_max) != s_max or not 1 <= s_max <= L0_MAX_S:
        raise InvalidParameterError(f"s_max must be an integer in [1, {L0_MAX_S}], got {s_max!r}")
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (m,) or not np.all(np.isfinite(b)):
        raise InvalidParameterError(f"b must be a finite vector of length {m}")

    tol = 1e-9 * max(1.0, float(np.linalg.norm(b)))
    if np.linalg.norm(b) <= tol:
        return SparseSignal(n, (), ())
    for size in range(1, s_max + 1):
        for supp in itertools.combinations(range(n), size):
            sub = a[:, supp]
            coef = np.linalg.lstsq(sub, b, rcond=None)[0]
            if np.linalg.norm(b - sub @ coef) <= tol and np.all(coef != 0):
                return SparseSignal(n, tuple(i + 1 for i in supp), tuple(coef))
    raise InfeasibleError(f"no support of size <= {s_max} reproduces b")


def ric_brute_force(A, s: int, chunk: int = 50_000) -> RicEstimate:
    """Exact restricted isometry constant of order ``s`` by enumerating supports."""
    a = _as_array(A)
    n = a.shape[1]
    if isinstance(s, bool) or int(s) != s or not 1 <= s <= n:
        raise InvalidParameterError(f"s must be an integer in [1, {n}], got {s!r}")
    count = math.comb(n, s)
    if count > RIC_MAX_SUPPORTS:
        raise InvalidParameterError(
            f"binomial({n}, {s}) = {count} supports exceeds the guard {RIC_MAX_SUPPORTS}"
        )
    g = a.T @ a
    lo, hi = math.inf, -math.inf
    lo_supp = hi_supp = None
    combos = itertools.combinations(range(n), s)
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=np.intp)
        if block.size == 0:
            break
        sub = g[block[:, :, None], block[:, None, :]]
        eig = np.linalg.eigvalsh(sub)
        i_lo = int(np.argmin(eig[:, 0]))
        i_hi = int(np.argmax(eig[:, -1]))
        if eig[i_lo, 0] < lo:
            lo, lo_supp = float(eig[i_lo, 0]), block[i_lo]
        if eig[i_hi, -1] > hi:
            hi, hi_supp = float(eig[i_hi, -1]), block[i_hi]
    delta = max(1.0 - lo, hi - 1.0, 0.0)
    return RicEstimate(
        s=s,
        delta=delta,
        argmin_support=tuple(int(i) + 1 for i in lo_supp),
        argmax_support=tuple(int(i) + 1 for i in hi_supp),
        lambda_min=lo,
        lambda_max=hi,
    )


def random_sparse_signal(rng, N: int, s: int, support=None) -> SparseSignal:
    """Uniform random support (unless given) with standard normal values, |v| >= 1e-6."""
    if support is None:
        idx = np.sort(rng.choice(N, size=s, replace=False)) + 1
    else:
        idx = np.asarray(sorted(support))
    values = rng.standard_normal(len(idx))
    while np.any(np.abs(values) < MIN_COEFFICIENT):
        small = np.abs(values) < MIN_COEFFICIENT
        values[small] = rng.standard_normal(int(small.sum()))
    return SparseSignal(N, tuple(int(i) for i in idx), tuple(values))


def _threads():
    raw = os.environ.get("INCOHERENT_THREADS")
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise InvalidParameterError(f"INCOHERENT_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise InvalidParameterError(f"INCOHERENT_THREADS must be a positive integer, got {raw!r}")
    return value


def recovery_experiment(A, s: int, trials: int, seed: int, support=None, threads: int | None = None) -> dict:
    """Recover ``trials`` random ``s``-sparse signals from noiseless measurements with OMP.

    Trial ``i`` draws from its own stream seeded by
    ``substream_seed(seed, i)``, so the summary does not depend on
    ``threads``. ``support`` (1-based) pins every trial to one support.
    """
    a = _as_array(A)
    m, n = a.shape
    check_seed(seed)
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise InvalidParameterError(f"trials must be a positive integer, got {trials!r}")
    if support is not None and len(support) != s:
        raise InvalidParameterError("pinned support must have exactly s entries")
    mu = coherence(a)
    limit = max_recoverable_sparsity(mu)
    threads = _threads() if threads is None else threads

    def one(i):
        rng = make_generator(substream_seed(seed, i))
        x = random_sparse_signal(rng, n, s, support)
        return omp(a, a @ x.to_dense(), s, reference=x)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, range(trials)))
    else:
        results = [one(i) for i in range(trials)]

    successes = sum(1 for r in results if r.support_correct)
    matrix = A if isinstance(A, SensingMatrix) else SensingMatrix(a)
    return {
        "matrix_sha256": matrix.sha256(),
        "s": s,
        "trials": trials,
        "seed": seed,
        "success_rate": successes / trials,
        "successes": successes,
        "degenerate_trials": sum(1 for r in results if r.degenerate),
        "worst_coeff_error": max(r.max_coefficient_error for r in results),
        "coherence": mu,
        "condition_held": s <= limit,
    }


def monte_carlo_cap(m: int, t: float, samples: int, seed: int, chunk: int = 1 << 15) -> tuple[float, float]:
    """Estimate ``P(|<y, e_1>| >= t)`` for uniform unit ``y`` in R^m.

    Returns ``(estimate, standard_error)`` with the binomial standard error
    of the estimate.
    """
    if isinstance(m, bool) or int(m) != m or m < 2:
        raise InvalidParameterError(f"m must be an integer >= 2, got {m!r}")
    if not 0 < t < 1:
        raise InvalidParameterError(f"t must lie in (0, 1), got {t!r}")
    if isinstance(samples, bool) or int(samples) != samples or samples < 1000:
        raise InvalidParameterError(f"samples must be an integer >= 1000, got {samples!r}")
    rng = make_generator(seed)
    hits = 0
    left = samples
    while left:
        k = min(chunk, left)
        g = rng.standard_normal((k, m))
        norms = np.linalg.norm(g, axis=1)
        hits += int(np.count_nonzero(np.abs(g[:, 0]) >= t * norms))
        left -= k
    p = hits / samples
    return p, math.sqrt(p * (1 - p) / samples)
