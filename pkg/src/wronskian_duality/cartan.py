"""Right and left logarithmic derivatives of the Wronskian matrix.

``R = W' W^-1`` does not depend on the basis of the function system and is
a companion matrix: ones on the superdiagonal, ODE coefficients (reversed)
in its last row.  ``L = W^-1 W'`` is conjugate to it under basis changes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import CharPoly, SingularMatrix, det, faddeev_leverrier, lu_solve, max_abs, trace
from .wronskian import DegenerateWronskian, WronskianData, solve_coefficients


def _regular(d: WronskianData, check: bool) -> None:
    if check and d.degenerate:
        raise DegenerateWronskian(f"Wronskian vanishes at t={d.t!r} (w={d.w!r})")


def compute_R(d: WronskianData, check: bool = True) -> np.ndarray:
    """R solving ``R W = W'``, via a transposed solve against the LU of W."""
    _regular(d, check)
    try:
        return lu_solve(d.lu, d.Wprime.T, transpose=True).T
    except SingularMatrix as err:
        raise DegenerateWronskian(str(err)) from None


def compute_L(d: WronskianData, check: bool = True) -> np.ndarray:
    """L solving ``W L = W'``."""
    _regular(d, check)
    try:
        return lu_solve(d.lu, d.Wprime)
    except SingularMatrix as err:
        raise DegenerateWronskian(str(err)) from None


def shift_matrix(n: int) -> np.ndarray:
    return np.eye(n, k=1)


def companion_split(R) -> tuple[np.ndarray, np.ndarray, float]:
    """Split ``R = a + b`` with ``a`` the superdiagonal shift.

    The third value is the largest entry of ``b`` outside its last row,
    zero when ``R`` really is a companion matrix.
    """
    R = np.asarray(R, dtype=float)
    a = shift_matrix(R.shape[0])
    b = R - a
    return a, b, max_abs(b[:-1])


def extract_p_hat(R) -> np.ndarray:
    """ODE coefficients as read from the last row: ``p_hat_i = R[n, n+1-i]``."""
    R = np.asarray(R, dtype=float)
    return R[-1, ::-1].copy()


@dataclass(frozen=True)
class AbelProbe:
    det_Wprime: float
    ddet_W: float
    trace_R: float
    det_R: float
    p1: float
    pn: float
    w: float

    def as_dict(self) -> dict:
        return {
            "det_Wprime": self.det_Wprime,
            "ddet_W": self.ddet_W,
            "trace_R": self.trace_R,
            "det_R": self.det_R,
            "p1": self.p1,
            "pn": self.pn,
            "w": self.w,
        }


def abel_probe(d: WronskianData, R=None, p=None) -> AbelProbe:
    """Put det(W'), (det W)', trace R, det R, p_1 and p_n side by side.

    trace R = p_1 = (det W)'/w and det R = (-1)^(n+1) p_n hold; det(W') and
    (det W)' differ in general.
    """
    _regular(d, True)
    R = compute_R(d) if R is None else np.asarray(R, dtype=float)
    p = solve_coefficients(d, cross_check=False) if p is None else np.asarray(p, dtype=float)
    return AbelProbe(
        det_Wprime=det(d.Wprime),
        ddet_W=d.wprime,
        trace_R=trace(R),
        det_R=det(R),
        p1=float(p[0]),
        pn=float(p[-1]),
        w=d.w,
    )


@dataclass(frozen=True)
class CartanData:
    R: np.ndarray
    L: np.ndarray
    charpoly: CharPoly
    charpoly_L: CharPoly
    companion_a: np.ndarray
    companion_b: np.ndarray
    p_hat: np.ndarray
    residuals: dict = field(default_factory=dict)

    @property
    def q_desc(self) -> tuple[float, ...]:
        return self.charpoly.q_desc

    @property
    def q_desc_L(self) -> tuple[float, ...]:
        return self.charpoly_L.q_desc


def cartan_analysis(d: WronskianData) -> CartanData:
    R = compute_R(d)
    L = compute_L(d)
    cp, cpl = faddeev_leverrier(R), faddeev_leverrier(L)
    a, b, off = companion_split(R)
    residuals = {
        "offcompanion": off,
        "reconstruction": max_abs(d.Wprime - (a + b) @ d.W),
        "solve_R": max_abs(R @ d.W - d.Wprime),
        "solve_L": max_abs(d.W @ L - d.Wprime),
        "cayley_hamilton": cp.residual_norm,
        "cayley_hamilton_L": cpl.residual_norm,
        "charpoly_R_vs_L": max_abs(np.subtract(cp.q_desc, cpl.q_desc)),
    }
    return CartanData(R, L, cp, cpl, a, b, extract_p_hat(R), residuals)
