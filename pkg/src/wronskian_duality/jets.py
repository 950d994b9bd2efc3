"""Truncated Taylor series ("jets") carrying exact derivatives at a point.

A jet of order ``m`` at ``t0`` stores ``u_k = f^(k)(t0) / k!`` for
``k = 0..m``.  Arithmetic truncates at ``m``; elementary functions use the
usual first-order ODE recurrences, so every coefficient is exact up to
floating-point rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import expr as ex

DIVISION_THRESHOLD = 1e-300


class JetError(ArithmeticError):
    """Base class for jet failures.

    ``path`` (AST path, root first) and ``t0`` are filled in by
    :func:`evaluate_jet` when the error arises inside an expression.
    """

    def __init__(self, message: str, path: tuple[str, ...] = (), t0: float | None = None):
        self.detail = message
        self.path = tuple(path)
        self.t0 = t0
        where = ""
        if t0 is not None:
            where = f" at t={t0!r}"
        if self.path:
            where += f" in {'/'.join(self.path)}"
        super().__init__(message + where)

    def annotate(self, path: tuple[str, ...], t0: float) -> JetError:
        return type(self)(self.detail, path, t0)


class OrderMismatch(JetError):
    pass


class BasepointMismatch(JetError):
    pass


class JetDivisionByZero(JetError, ZeroDivisionError):
    pass


class DomainError(JetError, ValueError):
    pass


class OrderExceeded(JetError, IndexError):
    pass


@dataclass(frozen=True)
class Jet:
    coefficients: tuple[float, ...]
    basepoint: float = 0.0

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a jet needs at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> float:
        return self.coefficients[k]

    def __len__(self) -> int:
        return len(self.coefficients)

    def is_finite(self) -> bool:
        return all(math.isfinite(c) for c in self.coefficients)

    def truncate(self, order: int) -> Jet:
        if order > self.order:
            raise OrderExceeded(f"cannot truncate order {self.order} jet to order {order}")
        return Jet(self.coefficients[:order + 1], self.basepoint)

    def __add__(self, other):
        return jet_add(self, _lift(other, self))

    __radd__ = __add__

    def __sub__(self, other):
        return jet_sub(self, _lift(other, self))

    def __rsub__(self, other):
        return jet_sub(_lift(other, self), self)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return jet_scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return jet_div(self, _lift(other, self))

    def __rtruediv__(self, other):
        return jet_div(_lift(other, self), self)

    def __neg__(self):
        return jet_neg(self)

    def __pow__(self, exponent):
        return jet_pow(self, exponent)


def _lift(value, like: Jet) -> Jet:
    if isinstance(value, Jet):
        return value
    return jet_const(float(value), like.basepoint, like.order)


def check_compatible(f: Jet, g: Jet) -> None:
    if f.order != g.order:
        raise OrderMismatch(f"jet orders differ: {f.order} vs {g.order}")
    if f.basepoint != g.basepoint:
        raise BasepointMismatch(f"jet basepoints differ: {f.basepoint!r} vs {g.basepoint!r}")


def jet_var(t0: float, m: int) -> Jet:
    if m < 0:
        raise ValueError("jet order must be non-negative")
    coeffs = [0.0] * (m + 1)
    coeffs[0] = float(t0)
    if m >= 1:
        coeffs[1] = 1.0
    return Jet(tuple(coeffs), float(t0))


def jet_const(value: float, t0: float, m: int) -> Jet:
    if m < 0:
        raise ValueError("jet order must be non-negative")
    return Jet((float(value),) + (0.0,) * m, float(t0))


def jet_add(f: Jet, g: Jet) -> Jet:
    check_compatible(f, g)
    return Jet(tuple(a + b for a, b in zip(f.coefficients, g.coefficients)), f.basepoint)


def jet_sub(f: Jet, g: Jet) -> Jet:
    check_compatible(f, g)
    return Jet(tuple(a - b for a, b in zip(f.coefficients, g.coefficients)), f.basepoint)


def jet_neg(f: Jet) -> Jet:
    return Jet(tuple(-a for a in f.coefficients), f.basepoint)


def jet_scale(f: Jet, c: float) -> Jet:
    return Jet(tuple(c * a for a in f.coefficients), f.basepoint)


def jet_mul(f: Jet, g: Jet) -> Jet:
    """Truncated Cauchy product."""
    check_compatible(f, g)
    a, b = f.coefficients, g.coefficients
    return Jet(tuple(math.fsum(a[i] * b[k - i] for i in range(k + 1)) for k in range(len(a))),
               f.basepoint)


def jet_div(f: Jet, g: Jet) -> Jet:
    check_compatible(f, g)
    a, b = f.coefficients, g.coefficients
    if abs(b[0]) < DIVISION_THRESHOLD:
        raise JetDivisionByZero(f"division by a jet with constant term {b[0]!r}")
    u: list[float] = []
    for k in range(len(a)):
        acc = a[k] - math.fsum(b[i] * u[k - i] for i in range(1, k + 1))
        u.append(acc / b[0])
    return Jet(tuple(u), f.basepoint)


def _exp_seeded(f: Jet, e0: float) -> Jet:
    # e' = f' e, seeded with a caller-supplied value for exp(f_0)
    a = f.coefficients
    e = [e0]
    for k in range(1, len(a)):
        e.append(math.fsum(i * a[i] * e[k - i] for i in range(1, k + 1)) / k)
    return Jet(tuple(e), f.basepoint)


def _ln(f: Jet) -> Jet:
    a = f.coefficients
    if not a[0] > 0:
        raise DomainError(f"ln of non-positive constant term {a[0]!r}")
    l = [math.log(a[0])]
    for k in range(1, len(a)):
        acc = math.fsum(i * l[i] * a[k - i] for i in range(1, k)) / k
        l.append((a[k] - acc) / a[0])
    return Jet(tuple(l), f.basepoint)


def _sin_cos(f: Jet) -> tuple[Jet, Jet]:
    a = f.coefficients
    s, c = [math.sin(a[0])], [math.cos(a[0])]
    for k in range(1, len(a)):
        s.append(math.fsum(i * a[i] * c[k - i] for i in range(1, k + 1)) / k)
        c.append(-math.fsum(i * a[i] * s[k - i] for i in range(1, k + 1)) / k)
    return Jet(tuple(s), f.basepoint), Jet(tuple(c), f.basepoint)


def jet_elementary(fn: str, f: Jet) -> Jet:
    if fn == "exp":
        return _exp_seeded(f, math.exp(f[0]))
    if fn == "ln":
        return _ln(f)
    if fn == "sin":
        return _sin_cos(f)[0]
    if fn == "cos":
        return _sin_cos(f)[1]
    if fn == "sqrt":
        if not f[0] > 0:
            raise DomainError(f"sqrt of non-positive constant term {f[0]!r}")
        return _exp_seeded(jet_scale(_ln(f), 0.5), math.sqrt(f[0]))
    raise ValueError(f"unknown elementary function {fn!r}")


def _is_integer(x: float) -> bool:
    return math.isfinite(x) and float(x).is_integer()


def jet_pow(f: Jet, exponent: float) -> Jet:
    exponent = float(exponent)
    if _is_integer(exponent):
        k = int(exponent)
        one = jet_const(1.0, f.basepoint, f.order)
        if k < 0:
            return jet_div(one, jet_pow(f, -k))
        result, base = one, f
        while k:
            if k & 1:
                result = jet_mul(result, base)
            k >>= 1
            if k:
                base = jet_mul(base, base)
        return result
    if not f[0] > 0:
        raise DomainError(f"non-integer power {exponent!r} of non-positive base {f[0]!r}")
    return _exp_seeded(jet_scale(_ln(f), exponent), f[0] ** exponent)


def jet_pow_general(f: Jet, g: Jet) -> Jet:
    """``f ** g`` for a non-constant exponent jet, as ``exp(g ln f)``."""
    if not f[0] > 0:
        raise DomainError(f"variable power of non-positive base {f[0]!r}")
    return _exp_seeded(jet_mul(g, _ln(f)), f[0] ** g[0])


def derivative_of(j: Jet, k: int) -> float:
    if not 0 <= k <= j.order:
        raise OrderExceeded(f"derivative {k} requested from order {j.order} jet")
    return math.factorial(k) * j[k]


def derivatives(j: Jet) -> list[float]:
    return [derivative_of(j, k) for k in range(j.order + 1)]


def evaluate_jet(e: ex.Expr, t0: float, m: int) -> Jet:
    """Jet of order ``m`` at ``t0`` of the function denoted by ``e``."""
    return _eval(e, float(t0), m, ())


def _eval(e: ex.Expr, t0: float, m: int, path: tuple[str, ...]) -> Jet:
    here = path + (type(e).__name__ if not isinstance(e, ex.Call) else e.function,)
    try:
        if isinstance(e, ex.Constant):
            return jet_const(e.value, t0, m)
        if isinstance(e, ex.Variable):
            return jet_var(t0, m)
        if isinstance(e, ex.Neg):
            return jet_neg(_eval(e.child, t0, m, here))
        if isinstance(e, ex.Call):
            return jet_elementary(e.function, _eval(e.argument, t0, m, here))
        if isinstance(e, ex.Pow):
            base = _eval(e.base, t0, m, here + ("base",))
            if not ex.contains_variable(e.exponent):
                return jet_pow(base, ex.evaluate(e.exponent))
            return jet_pow_general(base, _eval(e.exponent, t0, m, here + ("exponent",)))
        left = _eval(e.left, t0, m, here + ("left",))
        right = _eval(e.right, t0, m, here + ("right",))
        if isinstance(e, ex.Add):
            return jet_add(left, right)
        if isinstance(e, ex.Sub):
            return jet_sub(left, right)
        if isinstance(e, ex.Mul):
            return jet_mul(left, right)
        return jet_div(left, right)
    except JetError as err:
        if err.path:
            raise
        raise err.annotate(here, t0) from None
    except (ValueError, ZeroDivisionError, OverflowError) as err:
        # constant exponent subtrees are folded with plain floats
        raise DomainError(str(err), here, t0) from None
