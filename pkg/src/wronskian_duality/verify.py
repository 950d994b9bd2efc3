"""Grid sweeps that check the coefficient duality and its companions.

For every sample point the checks are:

``duality_identity``   ||q_desc - p||_inf (char. poly of R vs ODE coefficients)
``duality_reversed``   ||reverse(q_desc) - p||_inf, reported but never gated
``abel_trace``         |trace R - p_1|
``abel_logderiv``      |w'/w - p_1|
``companion``          max(off-companion part of R, ||W' - (a+b) W||)
``cayley_hamilton``    ||M_n + c_n I|| from Faddeev-LeVerrier on R
``cramer_vs_solve``    ||p_cramer - p_solve||_inf
``det_sign``           |det R - (-1)^(n+1) p_n|
``basis_invariance``   ||R(A T) - R(A)|| for a random constant basis change T
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cartan import cartan_analysis, compute_R
from .jets import JetError
from .linalg import det, max_abs, trace
from .wronskian import (
    DegenerateWronskian,
    FunctionSystem,
    apply_basis_change,
    build_wronskian,
    cramer_coefficients,
    random_basis_change,
    solve_coefficients,
    wronskian_from_jets,
)

GATED = (
    "duality_identity",
    "abel_trace",
    "abel_logderiv",
    "companion",
    "cayley_hamilton",
    "cramer_vs_solve",
    "det_sign",
    "basis_invariance",
)
REPORTED = ("duality_reversed",)
CATEGORIES = GATED[:1] + REPORTED + GATED[1:]

PASS, FAIL, DEGENERATE = "pass", "fail", "degenerate"


class InvalidGrid(ValueError):
    pass


class DuplicateRates(ValueError):
    pass


@dataclass
class SampleResult:
    t: float
    index: int = 0
    p: tuple[float, ...] = ()
    p_cramer: tuple[float, ...] = ()
    q_desc: tuple[float, ...] = ()
    q_desc_L: tuple[float, ...] = ()
    p_hat: tuple[float, ...] = ()
    per_index: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    kappa: float = math.inf
    w: float = 0.0
    wprime: float = 0.0
    degenerate: bool = False
    domain_error: str | None = None

    @property
    def usable(self) -> bool:
        return not self.degenerate and self.domain_error is None

    @property
    def failures(self) -> list[str]:
        return [k for k in GATED if not self.residuals[k] <= self.tolerances[k]] if self.usable else []

    @property
    def passed(self) -> bool | None:
        return None if not self.usable else not self.failures

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "t": self.t,
            "degenerate": self.degenerate,
            "domain_error": self.domain_error,
            "w": self.w if self.domain_error is None else None,
            "wprime": self.wprime if self.domain_error is None else None,
            "kappa": self.kappa if self.domain_error is None else None,
            "p": list(self.p),
            "p_cramer": list(self.p_cramer),
            "q_desc": list(self.q_desc),
            "q_desc_L": list(self.q_desc_L),
            "p_hat": list(self.p_hat),
            "per_index": {k: list(v) for k, v in self.per_index.items()},
            "residuals": dict(self.residuals),
            "tolerances": dict(self.tolerances),
            "passed": self.passed,
        }


def tolerances(kappa: float, p, R, Wprime, kappa_basis: float, multiplier: float = 1.0) -> dict:
    """Per-category acceptance bounds for one sample."""
    n = len(p)
    p_scale = 1.0 + max_abs(p)
    r_norm = max_abs(R)
    coeff = 1e-7 * kappa * p_scale
    tol = {
        "duality_identity": coeff,
        "abel_trace": coeff,
        "abel_logderiv": coeff,
        "cramer_vs_solve": coeff,
        "det_sign": 1e-8 * kappa * p_scale,
        "companion": 1e-9 * (1.0 + max_abs(Wprime)),
        "cayley_hamilton": 1e-8 * (1.0 + r_norm ** n),
        "basis_invariance": 1e-8 * max(kappa, kappa_basis) * (1.0 + r_norm),
    }
    return {k: multiplier * v for k, v in tol.items()}


def verify_sample(sys: FunctionSystem, t: float, seed: int, tol: float = 1.0, index: int = 0) -> SampleResult:
    t = float(t)
    result = SampleResult(t=t, index=index)
    try:
        d = build_wronskian(sys, t)
    except (JetError, ValueError) as err:
        result.domain_error = str(err)
        return result
    result.kappa, result.w, result.wprime = d.kappa, d.w, d.wprime
    if d.degenerate:
        result.degenerate = True
        return result
    n = d.n
    try:
        p = solve_coefficients(d, cross_check=False)
        pc = cramer_coefficients(d)
        cd = cartan_analysis(d)
    except DegenerateWronskian:
        result.degenerate = True
        return result

    rng = np.random.default_rng(seed)
    T = random_basis_change(rng, n)
    dT = wronskian_from_jets(apply_basis_change(d.jets, T), t)
    try:
        R_T = compute_R(dT, check=False)
        basis = max_abs(R_T - cd.R)
    except DegenerateWronskian:
        basis = math.inf

    q = np.array(cd.q_desc)
    result.p = tuple(float(x) for x in p)
    result.p_cramer = tuple(float(x) for x in pc)
    result.q_desc = tuple(float(x) for x in q)
    result.q_desc_L = tuple(float(x) for x in cd.q_desc_L)
    result.p_hat = tuple(float(x) for x in cd.p_hat)
    # |q_i - p_i| under both index readings
    result.per_index = {
        "identity": tuple(float(x) for x in np.abs(q - p)),
        "reversed": tuple(float(x) for x in np.abs(q[::-1] - p)),
    }
    result.residuals = {
        "duality_identity": max_abs(q - p),
        "duality_reversed": max_abs(q[::-1] - p),
        "abel_trace": abs(trace(cd.R) - p[0]),
        "abel_logderiv": abs(d.wprime / d.w - p[0]),
        "companion": max(cd.residuals["offcompanion"], cd.residuals["reconstruction"]),
        "cayley_hamilton": cd.residuals["cayley_hamilton"],
        "cramer_vs_solve": max_abs(pc - p),
        "det_sign": abs(det(cd.R) - (-1) ** (n + 1) * p[-1]),
        "basis_invariance": basis,
    }
    result.tolerances = tolerances(d.kappa, p, cd.R, d.Wprime, dT.kappa, tol)
    return result


def grid_points(t0: float, t1: float, samples: int) -> np.ndarray:
    if samples < 1:
        raise InvalidGrid(f"need at least one sample, got {samples}")
    if samples == 1:
        return np.array([float(t0)])
    if not t0 < t1:
        raise InvalidGrid(f"need t0 < t1 for {samples} samples, got [{t0}, {t1}]")
    return np.linspace(t0, t1, samples)


@dataclass
class VerifyReport:
    n: int
    t0: float
    t1: float
    samples: int
    seed: int
    tol: float
    results: list[SampleResult]

    @property
    def degenerate_count(self) -> int:
        return sum(r.degenerate for r in self.results)

    @property
    def domain_error_count(self) -> int:
        return sum(r.domain_error is not None for r in self.results)

    @property
    def usable(self) -> list[SampleResult]:
        return [r for r in self.results if r.usable]

    def worst(self) -> dict:
        usable = self.usable
        return {k: max((r.residuals[k] for r in usable), default=None) for k in CATEGORIES}

    @property
    def verdict(self) -> str:
        usable = self.usable
        if not usable:
            return DEGENERATE
        return PASS if all(r.passed for r in usable) else FAIL

    def summary(self) -> dict:
        return {
            "verdict": self.verdict,
            "worst": self.worst(),
            "failed_samples": sum(r.passed is False for r in self.results),
            "degenerate_samples": self.degenerate_count,
            "domain_error_samples": self.domain_error_count,
            "tolerance_multiplier": self.tol,
        }


def sweep_grid(sys: FunctionSystem, t0: float, t1: float, samples: int, seed: int,
               tol: float = 1.0) -> VerifyReport:
    grid = grid_points(t0, t1, samples)
    results = [verify_sample(sys, t, seed + i, tol, index=i) for i, t in enumerate(grid)]
    return VerifyReport(sys.n, float(t0), float(t1), samples, seed, tol, results)


def elementary_symmetric(values: Sequence[float]) -> list[float]:
    """e_1..e_n of ``values``."""
    e = [1.0]
    for v in values:
        e = [1.0] + [e[j] + v * e[j - 1] for j in range(1, len(e))] + [v * e[-1]]
    return e[1:]


def exponential_oracle(rates: Sequence[float]) -> list[float]:
    """ODE coefficients of ``{exp(r t) : r in rates}``.

    From prod(lambda - r_k) = lambda^n - p_1 lambda^(n-1) - ... - p_n,
    p_j = (-1)^(j+1) e_j(rates).
    """
    if len(set(rates)) != len(rates):
        raise DuplicateRates(f"rates must be pairwise distinct: {list(rates)}")
    return [(-1) ** (j + 1) * e for j, e in enumerate(elementary_symmetric(rates), start=1)]
