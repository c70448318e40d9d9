"""Second-order forward-mode jets.

A :class:`Jet2` carries the value, gradient, and Hessian of a scalar quantity
with respect to ``p`` independent parameters.  Charts and 1-form fields are
plain Python callables built from the primitives in this module; evaluating
them on seeded jets yields exact first and second partial derivatives via
truncated Taylor composition (no finite differencing).

:class:`Jet1` is the first-order analogue, used to push derivatives through
derived linear algebra (Gram-Schmidt frames, metric duals) whose inputs are
assembled from chart 2-jets.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "JetDomainError",
    "Jet2",
    "Jet1",
    "seed_point",
    "eval_jet2",
    "eval_map_jet2",
    "sin",
    "cos",
    "tan",
    "arcsin",
    "arctan",
    "arctan2",
    "sqrt",
    "exp",
    "log",
    "power",
]

# Denominators, tan, sqrt, log are guarded: fail loudly instead of returning
# poisoned derivatives near a singular point.
_GUARD = 1e-13


class JetDomainError(ArithmeticError):
    """Raised when evaluation hits the domain boundary of a primitive."""

    def __init__(self, primitive: str, detail: str = ""):
        self.primitive = primitive
        msg = f"jet evaluation outside the domain of '{primitive}'"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class Jet2:
    """Value, gradient and symmetric Hessian w.r.t. p parameters."""

    __slots__ = ("val", "grad", "hess")

    def __init__(self, val, grad, hess):
        self.val = float(val)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    @property
    def p(self) -> int:
        return self.grad.shape[0]

    @classmethod
    def constant(cls, c, p: int) -> "Jet2":
        return cls(c, np.zeros(p), np.zeros((p, p)))

    @classmethod
    def variable(cls, x, index: int, p: int) -> "Jet2":
        g = np.zeros(p)
        g[index] = 1.0
        return cls(x, g, np.zeros((p, p)))

    def _lift(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return other
        return Jet2.constant(float(other), self.p)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        return Jet2(self.val + o.val, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        o = self._lift(other)
        return Jet2(self.val - o.val, self.grad - o.grad, self.hess - o.hess)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        cross = np.outer(self.grad, o.grad)
        return Jet2(
            self.val * o.val,
            self.val * o.grad + o.val * self.grad,
            self.val * o.hess + o.val * self.hess + cross + cross.T,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if abs(o.val) <= _GUARD:
            raise JetDomainError("div", f"|denominator| = {abs(o.val):.3e}")
        return self * _reciprocal(o)

    def __rtruediv__(self, other):
        if abs(self.val) <= _GUARD:
            raise JetDomainError("div", f"|denominator| = {abs(self.val):.3e}")
        return _reciprocal(self) * other

    def __pow__(self, exponent):
        return power(self, exponent)

    def __repr__(self):
        return f"Jet2({self.val!r}, grad={self.grad!r})"


def _chain1(u: Jet2, f0: float, f1: float, f2: float) -> Jet2:
    """Compose a univariate f with jet u given f(u), f'(u), f''(u)."""
    g = np.outer(u.grad, u.grad)
    return Jet2(f0, f1 * u.grad, f1 * u.hess + f2 * g)


def _reciprocal(u: Jet2) -> Jet2:
    v = u.val
    return _chain1(u, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))


def sin(u):
    if isinstance(u, Jet2):
        return _chain1(u, math.sin(u.val), math.cos(u.val), -math.sin(u.val))
    if hasattr(u, "_sin"):
        return u._sin()
    return math.sin(u)


def cos(u):
    if isinstance(u, Jet2):
        return _chain1(u, math.cos(u.val), -math.sin(u.val), -math.cos(u.val))
    if hasattr(u, "_cos"):
        return u._cos()
    return math.cos(u)


def tan(u):
    if not isinstance(u, Jet2):
        return math.tan(u)
    c = math.cos(u.val)
    if abs(c) <= _GUARD:
        raise JetDomainError("tan", f"|cos| = {abs(c):.3e}")
    t = math.tan(u.val)
    s2 = 1.0 + t * t
    return _chain1(u, t, s2, 2.0 * t * s2)


def arctan(u):
    if not isinstance(u, Jet2):
        return math.atan(u)
    d = 1.0 + u.val * u.val
    return _chain1(u, math.atan(u.val), 1.0 / d, -2.0 * u.val / (d * d))


def arcsin(u):
    if not isinstance(u, Jet2):
        return math.asin(u)
    w = 1.0 - u.val * u.val
    if w <= _GUARD:
        raise JetDomainError("arcsin", f"1 - u^2 = {w:.3e}")
    r = math.sqrt(w)
    return _chain1(u, math.asin(u.val), 1.0 / r, u.val / (w * r))


def sqrt(u):
    if not isinstance(u, Jet2):
        return math.sqrt(u)
    if u.val <= _GUARD:
        raise JetDomainError("sqrt", f"u = {u.val:.3e}")
    r = math.sqrt(u.val)
    return _chain1(u, r, 0.5 / r, -0.25 / (u.val * r))


def exp(u):
    if not isinstance(u, Jet2):
        return math.exp(u)
    e = math.exp(u.val)
    return _chain1(u, e, e, e)


def log(u):
    if not isinstance(u, Jet2):
        return math.log(u)
    if u.val <= _GUARD:
        raise JetDomainError("log", f"u = {u.val:.3e}")
    v = u.val
    return _chain1(u, math.log(v), 1.0 / v, -1.0 / (v * v))


def power(u, exponent):
    if not isinstance(u, Jet2):
        return u**exponent
    if exponent == 0:
        return Jet2.constant(1.0, u.p)
    if exponent == 1:
        return Jet2(u.val, u.grad.copy(), u.hess.copy())
    if isinstance(exponent, int) or float(exponent).is_integer():
        n = int(exponent)
        if n < 0:
            if abs(u.val) <= _GUARD:
                raise JetDomainError("power", f"u = {u.val:.3e}, exponent = {n}")
            return _reciprocal(power(u, -n))
        f1 = n * u.val ** (n - 1)
        f2 = n * (n - 1) * u.val ** (n - 2) if n >= 2 else 0.0
        return _chain1(u, u.val**n, f1, f2)
    if u.val <= _GUARD:
        raise JetDomainError("power", f"u = {u.val:.3e}, exponent = {exponent}")
    return exp(exponent * log(u))


def arctan2(y, x):
    if not isinstance(y, Jet2) and not isinstance(x, Jet2):
        return math.atan2(y, x)
    if isinstance(y, Jet2):
        x = y._lift(x)
    else:
        y = x._lift(y)
    xv, yv = x.val, y.val
    d = xv * xv + yv * yv
    if d <= _GUARD * _GUARD:
        raise JetDomainError("atan2", "argument at the origin")
    f0 = math.atan2(yv, xv)
    fx, fy = -yv / d, xv / d
    d2 = d * d
    fxx = 2.0 * xv * yv / d2
    fyy = -fxx
    fxy = (yv * yv - xv * xv) / d2
    gx, gy = x.grad, y.grad
    grad = fx * gx + fy * gy
    hess = (
        fx * x.hess
        + fy * y.hess
        + fxx * np.outer(gx, gx)
        + fxy * (np.outer(gx, gy) + np.outer(gy, gx))
        + fyy * np.outer(gy, gy)
    )
    return Jet2(f0, grad, hess)


# expression evaluation ------------------------------------------------------


def seed_point(u) -> list:
    """Seed the coordinates of a point as independent Jet2 variables."""
    u = np.asarray(u, dtype=float)
    p = u.shape[0]
    return [Jet2.variable(u[i], i, p) for i in range(p)]


def _check_finite(jet: Jet2) -> Jet2:
    if not (
        math.isfinite(jet.val)
        and np.all(np.isfinite(jet.grad))
        and np.all(np.isfinite(jet.hess))
    ):
        raise JetDomainError("nonfinite", "evaluation produced NaN/Inf")
    return jet


def eval_jet2(expr, u) -> Jet2:
    """Evaluate a scalar expression (callable on seeded jets) at u."""
    out = expr(seed_point(u))
    result = out._lift(out) if isinstance(out, Jet2) else Jet2.constant(out, len(u))
    return _check_finite(result)


def eval_map_jet2(exprs, u) -> list:
    """Evaluate a vector-valued expression at u componentwise.

    ``exprs`` is either a single callable returning a list of jets (so
    components may share subexpressions) or a list of scalar callables.
    """
    seeded = seed_point(u)
    p = len(seeded)
    if callable(exprs):
        outs = exprs(seeded)
    else:
        outs = [e(seeded) for e in exprs]
    lifted = [
        o if isinstance(o, Jet2) else Jet2.constant(o, p) for o in outs
    ]
    return [_check_finite(o) for o in lifted]


# first-order jets -----------------------------------------------------------


class Jet1:
    """Value and gradient only; used to differentiate derived algebra."""

    __slots__ = ("val", "grad")

    def __init__(self, val, grad):
        self.val = float(val)
        self.grad = np.asarray(grad, dtype=float)

    @classmethod
    def constant(cls, c, p: int) -> "Jet1":
        return cls(c, np.zeros(p))

    def _lift(self, other) -> "Jet1":
        if isinstance(other, Jet1):
            return other
        return Jet1.constant(float(other), self.grad.shape[0])

    def __add__(self, other):
        o = self._lift(other)
        return Jet1(self.val + o.val, self.grad + o.grad)

    __radd__ = __add__

    def __neg__(self):
        return Jet1(-self.val, -self.grad)

    def __sub__(self, other):
        o = self._lift(other)
        return Jet1(self.val - o.val, self.grad - o.grad)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return Jet1(self.val * o.val, self.val * o.grad + o.val * self.grad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if abs(o.val) <= _GUARD:
            raise JetDomainError("div", f"|denominator| = {abs(o.val):.3e}")
        inv = 1.0 / o.val
        return Jet1(
            self.val * inv,
            (self.grad - self.val * inv * o.grad) * inv,
        )

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def sqrt(self) -> "Jet1":
        if self.val <= _GUARD:
            raise JetDomainError("sqrt", f"u = {self.val:.3e}")
        r = math.sqrt(self.val)
        return Jet1(r, self.grad * (0.5 / r))

    def __repr__(self):
        return f"Jet1({self.val!r}, grad={self.grad!r})"
