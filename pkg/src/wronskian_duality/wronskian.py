"""Wronskian matrices of a function system and recovery of its linear ODE.

Every function ``a_k`` of an ``n``-function system satisfies

    a^(n) = p_1 a^(n-1) + p_2 a^(n-2) + ... + p_n a

pointwise wherever the Wronskian determinant is nonzero.  The coefficients
are recovered per sample point, by Cramer's rule and by a direct solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import expr as ex
from .jets import Jet, JetError, derivatives, evaluate_jet, jet_add, jet_scale
from .linalg import (
    LUFactor,
    MAX_DIMENSION,
    SingularMatrix,
    condition_estimate,
    det,
    det_jet,
    lu_factor,
    lu_solve,
    max_abs,
)

DEGENERACY_THRESHOLD = 1e-12
CROSS_CHECK_FACTOR = 1e-7


class DegenerateWronskian(ArithmeticError):
    pass


class CrossCheckViolation(ArithmeticError):
    def __init__(self, message: str, p_solve, p_cramer, tolerance: float):
        super().__init__(message)
        self.p_solve = p_solve
        self.p_cramer = p_cramer
        self.tolerance = tolerance


@dataclass(frozen=True)
class FunctionSystem:
    functions: tuple[ex.Expr, ...]

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        if not 1 <= len(self.functions) <= MAX_DIMENSION:
            raise ValueError(f"a system needs 1..{MAX_DIMENSION} functions, got {len(self.functions)}")

    @classmethod
    def from_strings(cls, sources: Sequence[str]) -> FunctionSystem:
        return cls(tuple(ex.parse_expr(s) for s in sources))

    @property
    def n(self) -> int:
        return len(self.functions)

    def sources(self) -> list[str]:
        return [ex.format_expr(e) for e in self.functions]


@dataclass(frozen=True)
class WronskianData:
    """Derivative data of a system at one point.

    ``derivs[r, k]`` is the r-th derivative of the k-th function for
    ``r = 0..n``; ``W`` is its first ``n`` rows and ``Wprime`` its last ``n``.
    """

    t: float
    derivs: np.ndarray
    w: float
    wprime: float
    jets: tuple[Jet, ...]
    kappa: float
    degenerate: bool
    lu: LUFactor = field(repr=False)

    @property
    def n(self) -> int:
        return self.derivs.shape[1]

    @property
    def W(self) -> np.ndarray:
        return self.derivs[:-1]

    @property
    def Wprime(self) -> np.ndarray:
        return self.derivs[1:]

    @property
    def top_derivatives(self) -> np.ndarray:
        return self.derivs[-1]


def hadamard_bound(W: np.ndarray) -> float:
    return float(np.prod(np.linalg.norm(W, axis=1)))


def evaluate_jets(sys: FunctionSystem, t: float, order: int | None = None) -> tuple[Jet, ...]:
    m = sys.n if order is None else order
    jets = []
    for k, e in enumerate(sys.functions, start=1):
        try:
            jets.append(evaluate_jet(e, t, m))
        except JetError as err:
            raise err.annotate((f"a_{k}",) + err.path, t) from None
    return tuple(jets)


def wronskian_from_jets(jets: Sequence[Jet], t: float | None = None) -> WronskianData:
    """Assemble Wronskian data from jets of order >= n (one per function)."""
    n = len(jets)
    if not 1 <= n <= MAX_DIMENSION:
        raise ValueError(f"need 1..{MAX_DIMENSION} jets, got {n}")
    if any(j.order < n for j in jets):
        raise ValueError(f"jets must have order >= {n}")
    t = jets[0].basepoint if t is None else float(t)
    derivs = np.array([derivatives(j)[:n + 1] for j in jets], dtype=float).T
    if not np.all(np.isfinite(derivs)):
        raise ValueError(f"non-finite derivative data at t={t!r}")
    W = derivs[:-1]
    # entry (r, k) as an order-1 jet: (a_k^(r), a_k^(r+1))
    rows = [[Jet((derivs[r, k], derivs[r + 1, k]), t) for k in range(n)] for r in range(n)]
    wjet = det_jet(rows)
    lu = lu_factor(W)
    w = det(W)
    kappa = condition_estimate(W)
    degenerate = lu.singular or abs(w) <= DEGENERACY_THRESHOLD * hadamard_bound(W)
    return WronskianData(t, derivs, w, wjet[1], tuple(jets), kappa, bool(degenerate), lu)


def build_wronskian(sys: FunctionSystem, t: float) -> WronskianData:
    return wronskian_from_jets(evaluate_jets(sys, t), t)


def _require_regular(d: WronskianData) -> None:
    if d.degenerate:
        raise DegenerateWronskian(f"Wronskian vanishes at t={d.t!r} (w={d.w!r})")


def cramer_coefficients(d: WronskianData) -> np.ndarray:
    """p_i = w_i / w, where w_i replaces row (n+1-i) of W (1-indexed) by the
    row of n-th derivatives."""
    _require_regular(d)
    n = d.n
    p = np.empty(n)
    for i in range(1, n + 1):
        Wi = d.W.copy()
        Wi[n - i] = d.top_derivatives
        p[i - 1] = det(Wi) / d.w
    return p


def cross_check_tolerance(d: WronskianData, p) -> float:
    return CROSS_CHECK_FACTOR * d.kappa * (1.0 + max_abs(p))


def solve_coefficients(d: WronskianData, cross_check: bool = True) -> np.ndarray:
    """Solve ``sum_j p_j a_k^(n-j) = a_k^(n)`` for all k at once.

    With ``cross_check`` the Cramer route is computed as well and a
    :class:`CrossCheckViolation` is raised if the two disagree.
    """
    _require_regular(d)
    # system matrix is W^T with its columns reversed: M[k, j] = a_k^(n-1-j)
    try:
        p = lu_solve(d.lu, d.top_derivatives, transpose=True)[::-1].copy()
    except SingularMatrix as err:
        raise DegenerateWronskian(str(err)) from None
    if cross_check:
        pc = cramer_coefficients(d)
        gap = max_abs(p - pc)
        tol = cross_check_tolerance(d, p)
        if not gap <= tol:
            raise CrossCheckViolation(
                f"Cramer and direct solve disagree by {gap:.3e} (tolerance {tol:.3e}) at t={d.t!r}",
                p, pc, tol)
    return p


def ode_residual(d: WronskianData, p) -> float:
    """Largest |a_k^(n) - sum_j p_j a_k^(n-j)| over the functions."""
    n = d.n
    predicted = sum(p[j - 1] * d.derivs[n - j] for j in range(1, n + 1))
    return max_abs(d.top_derivatives - predicted)


def apply_basis_change(jets: Sequence[Jet], T) -> tuple[Jet, ...]:
    """New system whose k-th function is ``sum_m T[m, k] a_m``; its Wronskian
    matrix is ``W T``."""
    T = np.asarray(T, dtype=float)
    n = len(jets)
    if T.shape != (n, n):
        raise ValueError(f"basis change must be {n}x{n}, got {T.shape}")
    if lu_factor(T).singular:
        raise SingularMatrix("basis change matrix is singular")
    out = []
    for k in range(n):
        acc = jet_scale(jets[0], T[0, k])
        for m in range(1, n):
            acc = jet_add(acc, jet_scale(jets[m], T[m, k]))
        out.append(acc)
    return tuple(out)


def random_basis_change(rng: np.random.Generator, n: int, min_det: float = 0.1) -> np.ndarray:
    """Uniform [-1, 1] entries, rejection-sampled until |det T| >= min_det."""
    while True:
        T = rng.uniform(-1.0, 1.0, size=(n, n))
        if abs(det(T)) >= min_det:
            return T

