"""Small dense real matrix kernel (n <= 8).

Matrices are plain 2-D ``numpy.float64`` arrays.  LU factorization,
solves and the characteristic polynomial are written out here so that
pivoting and singularity decisions follow fixed, documented thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .jets import Jet, check_compatible, jet_add, jet_mul, jet_neg

SINGULAR_THRESHOLD = 1e-12
MAX_DIMENSION = 8


class SingularMatrix(np.linalg.LinAlgError):
    pass


class DimensionTooLarge(ValueError):
    pass


def as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def max_abs(a) -> float:
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass(frozen=True)
class LUFactor:
    """``P A = L U`` with ``perm[i]`` the row of ``A`` moved to row ``i``."""

    perm: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    sign: int
    singular: bool

    @property
    def permutation(self) -> np.ndarray:
        n = len(self.perm)
        p = np.zeros((n, n))
        p[np.arange(n), self.perm] = 1.0
        return p


def lu_factor(a) -> LUFactor:
    """Partial (row) pivoting LU.

    The factorization always runs to completion; ``singular`` is set when a
    pivot falls below ``SINGULAR_THRESHOLD`` times the largest entry of ``a``.
    """
    a = _square(a)
    n = a.shape[0]
    u = a.copy()
    lower = np.eye(n)
    perm = np.arange(n)
    sign = 1
    cutoff = SINGULAR_THRESHOLD * max_abs(a)
    singular = n > 0 and max_abs(a) == 0.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(u[k:, k])))
        if p != k:
            u[[k, p], :] = u[[p, k], :]
            lower[[k, p], :k] = lower[[p, k], :k]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        pivot = u[k, k]
        if abs(pivot) <= cutoff:
            singular = True
            continue
        factors = u[k + 1:, k] / pivot
        lower[k + 1:, k] = factors
        u[k + 1:, k:] -= np.outer(factors, u[k, k:])
        u[k + 1:, k] = 0.0
    return LUFactor(perm, lower, u, sign, bool(singular))


def det(a) -> float:
    f = lu_factor(a)
    if f.singular:
        return 0.0
    return float(f.sign * np.prod(np.diag(f.upper)))


def _forward(lower: np.ndarray, b: np.ndarray, unit: bool) -> np.ndarray:
    x = b.copy()
    for i in range(len(x)):
        x[i] -= lower[i, :i] @ x[:i]
        if not unit:
            x[i] /= lower[i, i]
    return x


def _backward(upper: np.ndarray, b: np.ndarray, unit: bool) -> np.ndarray:
    x = b.copy()
    for i in range(len(x) - 1, -1, -1):
        x[i] -= upper[i, i + 1:] @ x[i + 1:]
        if not unit:
            x[i] /= upper[i, i]
    return x


def lu_solve(f: LUFactor, b, transpose: bool = False) -> np.ndarray:
    """Solve ``A X = B`` (or ``A^T X = B``) from a factorization of ``A``."""
    if f.singular:
        raise SingularMatrix("matrix is singular to working precision")
    b = np.array(b, dtype=float)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    if b.shape[0] != len(f.perm):
        raise ValueError(f"right-hand side has {b.shape[0]} rows, expected {len(f.perm)}")
    if not transpose:
        x = _backward(f.upper, _forward(f.lower, b[f.perm], unit=True), unit=False)
    else:
        # A^T = U^T L^T P
        z = _backward(f.lower.T, _forward(f.upper.T, b, unit=False), unit=True)
        x = np.empty_like(z)
        x[f.perm] = z
    return x[:, 0] if vector else x


def solve(a, b) -> np.ndarray:
    return lu_solve(lu_factor(a), b)


def trace(a) -> float:
    return float(np.trace(_square(a)))


@dataclass(frozen=True)
class CharPoly:
    """``det(lambda I - A) = lambda^n + c_1 lambda^(n-1) + ... + c_n``.

    ``q_desc = -c`` so that Cayley-Hamilton reads
    ``A^n = q_1 A^(n-1) + ... + q_n I``.  ``residual`` is ``M_n + c_n I``,
    zero in exact arithmetic.
    """

    c: tuple[float, ...]
    residual: np.ndarray

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def q_desc(self) -> tuple[float, ...]:
        return tuple(-x for x in self.c)

    @property
    def residual_norm(self) -> float:
        return max_abs(self.residual)


def faddeev_leverrier(a) -> CharPoly:
    a = _square(a)
    n = a.shape[0]
    if n > MAX_DIMENSION:
        raise DimensionTooLarge(f"n <= {MAX_DIMENSION} required, got {n}")
    eye = np.eye(n)
    m = a.copy()
    c = [-float(np.trace(m))]
    for k in range(2, n + 1):
        m = a @ (m + c[-1] * eye)
        c.append(-float(np.trace(m)) / k)
    return CharPoly(tuple(c), m + c[-1] * eye)


def condition_estimate(a) -> float:
    """1-norm condition number; ``math.inf`` for singular input."""
    a = _square(a)
    f = lu_factor(a)
    if f.singular:
        return math.inf
    inv = lu_solve(f, np.eye(a.shape[0]))
    return float(np.linalg.norm(a, 1) * np.linalg.norm(inv, 1))


def det_jet(rows: Sequence[Sequence[Jet]]) -> Jet:
    """Determinant of a square matrix of jets.

    Laplace expansion along the first column, using only products, sums and
    negation, so zero divisors in the jet ring do no harm.  Minors depend only
    on which rows remain, so they are shared between branches.
    """
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    if n > MAX_DIMENSION:
        raise DimensionTooLarge(f"jet determinant limited to n <= {MAX_DIMENSION}, got {n}")
    first = rows[0][0]
    for row in rows:
        if len(row) != n:
            raise ValueError("jet matrix must be square")
        for entry in row:
            check_compatible(first, entry)

    cache: dict[tuple[int, ...], Jet] = {}

    def minor(available: tuple[int, ...]) -> Jet:
        col = n - len(available)
        if col == n - 1:
            return rows[available[0]][col]
        if available in cache:
            return cache[available]
        total = None
        for pos, r in enumerate(available):
            term = jet_mul(rows[r][col], minor(available[:pos] + available[pos + 1:]))
            if pos % 2:
                term = jet_neg(term)
            total = term if total is None else jet_add(total, term)
        cache[available] = total
        return total

    return minor(tuple(range(n)))
