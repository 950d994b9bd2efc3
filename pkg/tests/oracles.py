"""Reference implementations used only by the tests.

Each one takes a different route from the package code it checks:
extended-precision finite differences instead of jets, a shunting-yard
evaluator instead of the recursive-descent parser, Leibniz permutation
sums instead of LU and Faddeev-LeVerrier.
"""

import itertools
import math
import random
import re

import mpmath
import numpy as np

from wronskian_duality import expr as ex

# ---------------------------------------------------------------- mpmath

_MP_FUNCS = {"exp": mpmath.exp, "ln": mpmath.log, "sin": mpmath.sin,
             "cos": mpmath.cos, "sqrt": mpmath.sqrt}


def mp_eval(e, t):
    if isinstance(e, ex.Constant):
        return mpmath.mpf(e.value)
    if isinstance(e, ex.Variable):
        return t
    if isinstance(e, ex.Neg):
        return -mp_eval(e.child, t)
    if isinstance(e, ex.Call):
        return _MP_FUNCS[e.function](mp_eval(e.argument, t))
    if isinstance(e, ex.Pow):
        return mpmath.power(mp_eval(e.base, t), mp_eval(e.exponent, t))
    a, b = mp_eval(e.left, t), mp_eval(e.right, t)
    if isinstance(e, ex.Add):
        return a + b
    if isinstance(e, ex.Sub):
        return a - b
    if isinstance(e, ex.Mul):
        return a * b
    return a / b


def central_difference(e, t0, k, h=1e-5, dps=40):
    """k-th derivative (k = 1, 2) by central differences with step h, in
    ``dps``-digit arithmetic so that rounding does not swamp the step."""
    with mpmath.workdps(dps):
        t = mpmath.mpf(t0)
        h = mpmath.mpf(h)
        if k == 1:
            val = (mp_eval(e, t + h) - mp_eval(e, t - h)) / (2 * h)
        elif k == 2:
            val = (mp_eval(e, t + h) - 2 * mp_eval(e, t) + mp_eval(e, t - h)) / h ** 2
        else:
            raise ValueError(k)
        return float(val)


# ---------------------------------------------------------- shunting-yard

_TOKEN = re.compile(r"\s*(\d+\.\d*|\d+|[-+*/^()])")
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}
_RIGHT = {"^", "neg"}


def shunting_yard_eval(source):
    """Evaluate a constants-only expression with Dijkstra's algorithm."""
    tokens, pos = [], 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            if source[pos:].strip() == "":
                break
            raise ValueError(source[pos:])
        tokens.append(m.group(1))
        pos = m.end()

    out, ops = [], []

    def apply(op):
        if op == "neg":
            out.append(-out.pop())
            return
        b, a = out.pop(), out.pop()
        if op == "+":
            out.append(a + b)
        elif op == "-":
            out.append(a - b)
        elif op == "*":
            out.append(a * b)
        elif op == "/":
            out.append(a / b)
        else:
            r = a ** b
            if isinstance(r, complex):
                raise ValueError("complex power")
            out.append(r)

    prev = None
    for tok in tokens:
        if tok[0].isdigit():
            out.append(float(tok))
        elif tok == "(":
            ops.append(tok)
        elif tok == ")":
            while ops[-1] != "(":
                apply(ops.pop())
            ops.pop()
        else:
            unary = tok == "-" and (prev is None or prev in _PREC or prev == "(" or prev == "neg")
            if unary:
                ops.append("neg")
                prev = "neg"
                continue
            while ops and ops[-1] != "(" and (
                    _PREC[ops[-1]] > _PREC[tok] or (_PREC[ops[-1]] == _PREC[tok] and tok not in _RIGHT)):
                apply(ops.pop())
            ops.append(tok)
        prev = tok
    while ops:
        apply(ops.pop())
    (result,) = out
    return result


def random_constant_expression(rng: random.Random, depth: int = 4) -> str:
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(["1", "2", "3", "0.5", "1.25", "7", "10", "4.0", "9"])
    kind = rng.random()
    if kind < 0.15:
        return "-" + random_constant_expression(rng, depth - 1)
    if kind < 0.3:
        return "(" + random_constant_expression(rng, depth - 1) + ")"
    op = rng.choice("+-*/^")
    sep = rng.choice(["", " "])
    return random_constant_expression(rng, depth - 1) + sep + op + sep + random_constant_expression(rng, depth - 1)


# ------------------------------------------------------------ structural fuzz

def random_expr(rng: random.Random, depth: int = 6):
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.5:
            return ex.Variable()
        return ex.Constant(rng.choice([0.0, 1.0, 2.0, 0.5, 3.25, 1e-5, 1e20, 123456.0,
                                       rng.uniform(0, 100), float(rng.randint(0, 50))]))
    kind = rng.randrange(7)
    if kind == 0:
        return ex.Neg(random_expr(rng, depth - 1))
    if kind == 1:
        return ex.Call(rng.choice(ex.FUNCTIONS), random_expr(rng, depth - 1))
    if kind == 2:
        return ex.Pow(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    cls = [ex.Add, ex.Sub, ex.Mul, ex.Div][kind - 3]
    return cls(random_expr(rng, depth - 1), random_expr(rng, depth - 1))


def expr_depth(e) -> int:
    if isinstance(e, (ex.Constant, ex.Variable)):
        return 0
    if isinstance(e, ex.Neg):
        return 1 + expr_depth(e.child)
    if isinstance(e, ex.Call):
        return 1 + expr_depth(e.argument)
    if isinstance(e, ex.Pow):
        return 1 + max(expr_depth(e.base), expr_depth(e.exponent))
    return 1 + max(expr_depth(e.left), expr_depth(e.right))


# -------------------------------------------------------------- brute force

def _perm_sign(perm):
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det_leibniz(A):
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    return math.fsum(_perm_sign(p) * math.prod(A[i, p[i]] for i in range(n))
                     for p in itertools.permutations(range(n)))


def charpoly_leibniz(A):
    """(c_1..c_n) of det(lambda I - A) by expanding the Leibniz sum with
    polynomial entries; coefficient lists are highest degree first."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    total = np.zeros(n + 1)
    for p in itertools.permutations(range(n)):
        term = np.array([float(_perm_sign(p))])
        for i in range(n):
            entry = np.array([1.0, -A[i, i]]) if p[i] == i else np.array([-A[i, p[i]]])
            term = np.polymul(term, entry)
        total[n + 1 - len(term):] += term
    return tuple(total[1:])


# ---------------------------------------------------------------- systems

POOL = ([f"t^{k}" for k in range(5)]
        + [f"exp({r}*t)" for r in (-3, -2, -1, 1, 2, 3)]
        + [f"sin({w}*t)" for w in (1, 2, 3)]
        + [f"cos({w}*t)" for w in (1, 2, 3)]
        + ["t*exp(t)", "exp(-t)*sin(2*t)", "1/(1+t^2)", "sqrt(1+t)"])

# (functions, t0, t1) with w != 0 on the closed interval
FIXTURES = [
    (["t", "t^2"], 0.5, 2.0),
    (["1", "t"], -1.0, 1.0),
    (["cos(t)", "sin(t)"], 0.0, 3.0),
    (["exp(t)", "exp(2*t)"], 0.0, 1.0),
    (["1", "t", "t^2"], -1.0, 1.0),
    (["exp(3*t)"], -1.0, 1.0),
    (["exp(t)", "exp(-t)", "exp(2*t)"], 0.0, 1.0),
    (["t", "t*ln(t)"], 0.5, 3.0),
    (["sin(t)", "cos(t)", "exp(t)", "t*exp(t)"], 0.0, 1.0),
]


def random_exponential_system(rng: np.random.Generator):
    n = int(rng.integers(2, 6))
    rates = [int(r) for r in rng.choice(np.arange(-4, 5), size=n, replace=False)]
    return [f"exp({r}*t)" for r in rates], rates


def random_mixed_system(rng: np.random.Generator, max_n: int = 5):
    n = int(rng.integers(1, max_n + 1))
    return [str(s) for s in rng.choice(POOL, size=n, replace=False)]


def monomial_mix(T):
    """Functions sum_m T[m, k] t^m, written out as text."""
    n = T.shape[0]
    return [" + ".join(f"({float(T[m, k])!r})*t^{m}" for m in range(n)) for k in range(n)]
