"""Unit-column sensing matrices, Gram matrices and mutual coherence.

The text file format is::

    # optional comment lines (only before the header)
    m N
    a_11 a_12 ... a_1N
    ...
    a_m1 a_m2 ... a_mN

with every value written using 17 significant digits so that a float64
round-trip is exact.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError, MatrixFormatError

UNIT_TOL = 1e-12
RENORMALIZE_TOL = 1e-6

#: Returned by :func:`max_recoverable_sparsity` when ``mu == 0``.
UNBOUNDED = math.inf


@dataclass(frozen=True, eq=False)
class SensingMatrix:
    """An ``m x N`` float64 matrix whose columns have unit Euclidean norm.

    The stored array is read-only. Use :meth:`from_columns` to normalize
    arbitrary nonzero columns.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.float64, order="F", copy=True)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise InvalidParameterError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidParameterError("matrix contains NaN or Inf")
        norms = np.linalg.norm(a, axis=0)
        bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_TOL)
        if bad.size:
            j = int(bad[0])
            raise InvalidParameterError(
                f"column {j + 1} has norm {norms[j]!r}, expected 1 within {UNIT_TOL}"
            )
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_columns(cls, a) -> "SensingMatrix":
        a = np.asarray(a, dtype=np.float64)
        norms = np.linalg.norm(a, axis=0)
        if np.any(norms == 0):
            raise InvalidParameterError("cannot normalize a zero column")
        return cls(a / norms)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def N(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self):
        return self.entries.shape

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j]

    def sha256(self) -> str:
        """Digest of the canonical text serialization (no comment lines)."""
        return hashlib.sha256(dumps_matrix(self).encode("ascii")).hexdigest()


def _as_array(A) -> np.ndarray:
    if isinstance(A, SensingMatrix):
        return A.entries
    a = np.asarray(A, dtype=np.float64)
    if a.ndim != 2:
        raise InvalidParameterError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


def gram(A) -> np.ndarray:
    """Return the symmetric matrix of pairwise column inner products."""
    a = _as_array(A)
    g = a.T @ a
    # BLAS may leave the two triangles differing in the last bit.
    g = np.triu(g) + np.triu(g, 1).T
    g.flags.writeable = False
    return g


def coherence(A) -> float:
    """Largest absolute normalized inner product between distinct columns.

    A single-column matrix has no pairs and is given coherence 0.
    """
    a = _as_array(A)
    n = a.shape[1]
    if n < 2:
        return 0.0
    g = gram(a)
    d = np.sqrt(np.diag(g))
    normalized = np.abs(g) / np.outer(d, d)
    iu = np.triu_indices(n, 1)
    return float(min(1.0, max(0.0, normalized[iu].max())))


def max_recoverable_sparsity(mu: float):
    """Largest ``s`` with ``mu < 1/(2s - 1)``.

    Returns :data:`UNBOUNDED` for ``mu == 0`` (orthonormal columns) and
    ``0`` when ``mu >= 1``. The strict inequality is decided exactly on
    the binary value of ``mu``.
    """
    mu = float(mu)
    if not math.isfinite(mu) or mu < 0:
        raise InvalidParameterError(f"mu must be a finite value >= 0, got {mu!r}")
    if mu == 0:
        return UNBOUNDED
    if mu >= 1:
        return 0
    exact = Fraction(mu)

    def ok(s):
        return s == 0 or exact * (2 * s - 1) < 1

    s = max(0, math.ceil((1 / mu + 1) / 2) - 1)
    while not ok(s):
        s -= 1
    while ok(s + 1):
        s += 1
    return s


def dumps_matrix(A, comments=()) -> str:
    a = _as_array(A)
    lines = [f"# {c}" for c in comments]
    lines.append(f"{a.shape[0]} {a.shape[1]}")
    for row in a:
        lines.append(" ".join(f"{v:.16e}" for v in row))
    return "\n".join(lines) + "\n"


def save_matrix(A, path, comments=()) -> None:
    Path(path).write_text(dumps_matrix(A, comments), encoding="ascii")


def loads_matrix(text: str) -> SensingMatrix:
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].lstrip().startswith("#"):
        i += 1
    if i == len(lines):
        raise MatrixFormatError("missing 'm N' header", i + 1)
    header = lines[i].split()
    try:
        if len(header) != 2:
            raise ValueError
        m, n = int(header[0]), int(header[1])
    except ValueError:
        raise MatrixFormatError(f"bad header {lines[i]!r}, expected 'm N'", i + 1) from None
    if m < 1 or n < 1:
        raise MatrixFormatError(f"dimensions must be positive, got {m} {n}", i + 1)

    rows = []
    for k in range(i + 1, len(lines)):
        raw = lines[k]
        if not raw.strip():
            continue
        if len(rows) == m:
            raise MatrixFormatError(f"more than {m} data rows", k + 1)
        fields = raw.split()
        if len(fields) != n:
            raise MatrixFormatError(f"expected {n} values, found {len(fields)}", k + 1)
        try:
            row = [float(f) for f in fields]
        except ValueError:
            raise MatrixFormatError(f"unparseable value in {raw.strip()[:60]!r}", k + 1) from None
        if not all(math.isfinite(v) for v in row):
            raise MatrixFormatError("non-finite value", k + 1)
        rows.append(row)
    if len(rows) != m:
        raise MatrixFormatError(f"expected {m} data rows, found {len(rows)}", len(lines) + 1)

    a = np.array(rows, dtype=np.float64)
    norms = np.linalg.norm(a, axis=0)
    dev = np.abs(norms - 1.0)
    if np.any(dev > RENORMALIZE_TOL):
        j = int(np.flatnonzero(dev > RENORMALIZE_TOL)[0])
        raise MatrixFormatError(
            f"column {j + 1} has norm {norms[j]!r}; unit columns required", i + 1
        )
    fix = dev > UNIT_TOL
    if np.any(fix):
        a[:, fix] /= norms[fix]
    return SensingMatrix(a)


def load_matrix(path) -> SensingMatrix:
    return loads_matrix(Path(path).read_text(encoding="ascii"))
