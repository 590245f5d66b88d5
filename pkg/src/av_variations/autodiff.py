"""
second-order forward-mode differentiation

Hyperdual carries a value together with two first-order seeds
and their mixed second derivative.  The seed components may be
plain floats or numpy arrays of equal length, in which case one
evaluation of a function propagates a whole batch of seed pairs
at once (this is how gradient, hessian_vector and the
Euler-Lagrange operator avoid re-evaluating expressions once per
direction).

Dual is a first-order tangent scalar whose components may
themselves be Hyperduals.  Evaluating a function f at x + eps*v
yields <df(x), v> in the eps slot, i.e. the total derivative of f
along v, and because the components are Hyperduals the result can
still be differentiated twice.

The elementary functions (sin, cos, ..., power) are generic:
they dispatch on the scalar type, so user expressions evaluate
unchanged over floats, Hyperduals or Duals.

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

import math

from functools import singledispatch
from typing import (
        Any, Callable, NamedTuple, Optional,
        Protocol, Sequence, Union,
        )

import numpy as np

from .errors import DomainError

Component = Union[float, np.ndarray]


class Scalar(Protocol):
    """
    the subset of numeric behavior user expressions rely on;
    float, Hyperdual and Dual all provide it
    """
    def __add__(self, other : Any, /) -> Any:
        pass
    def __sub__(self, other : Any, /) -> Any:
        pass
    def __mul__(self, other : Any, /) -> Any:
        pass
    def __truediv__(self, other : Any, /) -> Any:
        pass
    def __neg__(self) -> Any:
        pass


def _is_real(x : Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _is_zero(x : Any) -> bool:
    """
    true when every component of x is exactly zero
    """
    if isinstance(x, Hyperdual):
        return x.val == 0.0 and x.is_constant()
    if isinstance(x, Dual):
        return _is_zero(x.val) and _is_zero(x.eps)
    return bool(np.all(np.asarray(x) == 0.0))


def _is_constant(x : Any) -> bool:
    """
    true when x carries no derivative information
    """
    if isinstance(x, Hyperdual):
        return x.is_constant()
    if isinstance(x, Dual):
        return _is_constant(x.val) and _is_zero(x.eps)
    return True


class Hyperdual:
    """
    truncated Taylor algebra in two nilpotent directions:
    val + d1*e1 + d2*e2 + d12*e1*e2 with e1^2 = e2^2 = 0
    """
    __slots__ = ('val', 'd1', 'd2', 'd12')
    # numpy scalars must defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, val : float, d1 : Component = 0.0,
            d2 : Component = 0.0, d12 : Component = 0.0) -> None:
        self.val = float(val)
        self.d1 = d1
        self.d2 = d2
        self.d12 = d12

    def __repr__(self):
        return f'Hyperdual({self.val!r}, {self.d1!r}, {self.d2!r}, {self.d12!r})'

    def chain(self, f0 : float, f1 : float, f2 : float) -> "Hyperdual":
        """
        apply a scalar function with value f0, first derivative f1
        and second derivative f2 at self.val
        """
        return Hyperdual(f0, f1 * self.d1, f1 * self.d2,
                f1 * self.d12 + f2 * self.d1 * self.d2)

    def __neg__(self) -> "Hyperdual":
        return Hyperdual(-self.val, -self.d1, -self.d2, -self.d12)

    def __add__(self, other : Any) -> Any:
        if isinstance(other, Hyperdual):
            return Hyperdual(self.val + other.val, self.d1 + other.d1,
                    self.d2 + other.d2, self.d12 + other.d12)
        if _is_real(other):
            return Hyperdual(self.val + other, self.d1, self.d2, self.d12)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other : Any) -> Any:
        if isinstance(other, Hyperdual):
            return Hyperdual(self.val - other.val, self.d1 - other.d1,
                    self.d2 - other.d2, self.d12 - other.d12)
        if _is_real(other):
            return Hyperdual(self.val - other, self.d1, self.d2, self.d12)
        return NotImplemented

    def __rsub__(self, other : Any) -> Any:
        if _is_real(other):
            return Hyperdual(other - self.val, -self.d1, -self.d2, -self.d12)
        return NotImplemented

    def __mul__(self, other : Any) -> Any:
        if isinstance(other, Hyperdual):
            return Hyperdual(self.val * other.val,
                    self.val * other.d1 + self.d1 * other.val,
                    self.val * other.d2 + self.d2 * other.val,
                    (self.val * other.d12 + self.d1 * other.d2
                        + self.d2 * other.d1 + self.d12 * other.val))
        if _is_real(other):
            return Hyperdual(self.val * other, self.d1 * other,
                    self.d2 * other, self.d12 * other)
        return NotImplemented

    __rmul__ = __mul__

    def is_constant(self) -> bool:
        return _is_zero(self.d1) and _is_zero(self.d2) and _is_zero(self.d12)

    def lazy_chain(self, f0 : float, f1 : Callable[[], float],
            f2 : Callable[[], float]) -> "Hyperdual":
        """
        chain() for functions whose derivatives may not exist at
        self.val; f1 and f2 are only called when a seed needs them
        """
        g1 = 0.0 if self.is_constant() else f1()
        g2 = 0.0 if _is_zero(self.d1 * self.d2) else f2()
        return self.chain(f0, g1, g2)

    def quotient(self, other : "Hyperdual") -> "Hyperdual":
        b = other.val
        if b == 0.0:
            raise DomainError('division by zero')
        # q*b = a differentiated twice
        q = self.val / b
        q1 = (self.d1 - q * other.d1) / b
        q2 = (self.d2 - q * other.d2) / b
        q12 = (self.d12 - q * other.d12 - q1 * other.d2 - q2 * other.d1) / b
        return Hyperdual(q, q1, q2, q12)

    def __truediv__(self, other : Any) -> Any:
        if isinstance(other, Hyperdual):
            return self.quotient(other)
        if _is_real(other):
            if other == 0:
                raise DomainError('division by zero')
            return Hyperdual(self.val / other, self.d1 / other,
                    self.d2 / other, self.d12 / other)
        return NotImplemented

    def __rtruediv__(self, other : Any) -> Any:
        if _is_real(other):
            return Hyperdual(other).quotient(self)
        return NotImplemented

    def __pow__(self, exponent : Any) -> Any:
        return power(self, exponent)

    def __rpow__(self, base : Any) -> Any:
        return power(base, self)


class Dual:
    """
    first-order tangent scalar val + eps*e, e^2 = 0, over any
    component scalar type
    """
    __slots__ = ('val', 'eps')
    __array_ufunc__ = None

    def __init__(self, val : Any, eps : Any = 0.0) -> None:
        self.val = val
        self.eps = eps

    def __repr__(self):
        return f'Dual({self.val!r}, {self.eps!r})'

    @staticmethod
    def _parts(other : Any) -> Optional[tuple[Any, Any]]:
        if isinstance(other, Dual):
            return other.val, other.eps
        if _is_real(other) or isinstance(other, Hyperdual):
            return other, 0.0
        return None

    def __neg__(self) -> "Dual":
        return Dual(-self.val, -self.eps)

    def __add__(self, other : Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return Dual(self.val + parts[0], self.eps + parts[1])

    __radd__ = __add__

    def __sub__(self, other : Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return Dual(self.val - parts[0], self.eps - parts[1])

    def __rsub__(self, other : Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return Dual(parts[0] - self.val, parts[1] - self.eps)

    def __mul__(self, other : Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        val, eps = parts
        return Dual(self.val * val, self.val * eps + self.eps * val)

    __rmul__ = __mul__

    def __truediv__(self, other : Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        val, eps = parts
        q = divide(self.val, val)
        return Dual(q, divide(self.eps - q * eps, val))

    def __rtruediv__(self, other : Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return Dual(parts[0], parts[1]) / self

    def __pow__(self, exponent : Any) -> Any:
        return power(self, exponent)

    def __rpow__(self, base : Any) -> Any:
        return power(base, self)


#--------------------
# generic elementary functions
#--------------------

@singledispatch
def real_part(x : Any) -> float:
    """
    innermost value of a (possibly nested) scalar
    """
    return float(x)

@real_part.register
def _(x : Hyperdual) -> float:
    return x.val

@real_part.register
def _(x : Dual) -> float:
    return real_part(x.val)


def divide(a : Any, b : Any) -> Any:
    if _is_real(b):
        if b == 0:
            raise DomainError('division by zero')
        return a / b
    return a / b


def _real_pow(x : float, y : float) -> float:
    if x < 0.0 and not float(y).is_integer():
        raise DomainError(f'negative base {x!r} with non-integer exponent {y!r}')
    if x == 0.0 and y < 0.0:
        raise DomainError(f'zero raised to negative exponent {y!r}')
    try:
        return float(x) ** float(y)
    except OverflowError:
        raise DomainError(f'{x!r}^{y!r} overflows')


def sign(x : Any) -> float:
    """
    sign of the real part, with sign(0) == 0
    """
    r = real_part(x)
    return float((r > 0) - (r < 0))


@singledispatch
def sin(x : Any) -> Any:
    return math.sin(x)

@sin.register
def _(x : Hyperdual) -> Hyperdual:
    s, c = math.sin(x.val), math.cos(x.val)
    return x.chain(s, c, -s)

@sin.register
def _(x : Dual) -> Dual:
    return Dual(sin(x.val), cos(x.val) * x.eps)


@singledispatch
def cos(x : Any) -> Any:
    return math.cos(x)

@cos.register
def _(x : Hyperdual) -> Hyperdual:
    s, c = math.sin(x.val), math.cos(x.val)
    return x.chain(c, -s, -c)

@cos.register
def _(x : Dual) -> Dual:
    return Dual(cos(x.val), -sin(x.val) * x.eps)


@singledispatch
def tan(x : Any) -> Any:
    return math.tan(x)

@tan.register
def _(x : Hyperdual) -> Hyperdual:
    t = math.tan(x.val)
    sec2 = 1.0 + t * t
    return x.chain(t, sec2, 2.0 * t * sec2)

@tan.register
def _(x : Dual) -> Dual:
    t = tan(x.val)
    return Dual(t, (1.0 + t * t) * x.eps)


@singledispatch
def exp(x : Any) -> Any:
    try:
        return math.exp(x)
    except OverflowError:
        raise DomainError(f'exp({x!r}) overflows')

@exp.register
def _(x : Hyperdual) -> Hyperdual:
    e = exp(x.val)
    return x.chain(e, e, e)

@exp.register
def _(x : Dual) -> Dual:
    e = exp(x.val)
    return Dual(e, e * x.eps)


@singledispatch
def log(x : Any) -> Any:
    if x <= 0:
        raise DomainError(f'log of non-positive value {x!r}')
    return math.log(x)

@log.register
def _(x : Hyperdual) -> Hyperdual:
    v = log(x.val)
    r = 1.0 / x.val
    return x.chain(v, r, -r * r)

@log.register
def _(x : Dual) -> Dual:
    return Dual(log(x.val), divide(x.eps, x.val))


@singledispatch
def sqrt(x : Any) -> Any:
    if x < 0:
        raise DomainError(f'sqrt of negative value {x!r}')
    return math.sqrt(x)

@sqrt.register
def _(x : Hyperdual) -> Hyperdual:
    s = sqrt(x.val)
    def positive() -> None:
        if s == 0.0:
            raise DomainError(f'sqrt is not differentiable at {x.val!r}')
    def slope() -> float:
        positive()
        return 0.5 / s
    def curvature() -> float:
        positive()
        return -0.25 / (s * x.val)
    return x.lazy_chain(s, slope, curvature)

@sqrt.register
def _(x : Dual) -> Dual:
    s = sqrt(x.val)
    if _is_zero(x.eps):
        return Dual(s, x.eps)
    return Dual(s, divide(x.eps, 2.0 * s))


@singledispatch
def absolute(x : Any) -> Any:
    return abs(x)

@absolute.register
def _(x : Hyperdual) -> Hyperdual:
    # derivative at the kink is taken as 0
    return x.chain(abs(x.val), sign(x.val), 0.0)

@absolute.register
def _(x : Dual) -> Dual:
    return Dual(absolute(x.val), sign(x.val) * x.eps)


@singledispatch
def _power_const(base : Any, n : float) -> Any:
    return _real_pow(base, n)

@_power_const.register
def _(base : Hyperdual, n : float) -> Hyperdual:
    x = base.val
    f0 = _real_pow(x, n)
    def slope() -> float:
        return n * _real_pow(x, n - 1.0) if n != 0.0 else 0.0
    def curvature() -> float:
        return n * (n - 1.0) * _real_pow(x, n - 2.0) if n not in (0.0, 1.0) else 0.0
    return base.lazy_chain(f0, slope, curvature)

@_power_const.register
def _(base : Dual, n : float) -> Dual:
    if n == 0.0 or _is_zero(base.eps):
        return Dual(_power_const(base.val, n), 0.0 * base.eps)
    return Dual(_power_const(base.val, n),
            n * _power_const(base.val, n - 1.0) * base.eps)


@singledispatch
def _with_value(x : Any, value : float) -> Any:
    return value

@_with_value.register
def _(x : Hyperdual, value : float) -> Hyperdual:
    return Hyperdual(value, x.d1, x.d2, x.d12)

@_with_value.register
def _(x : Dual, value : float) -> Dual:
    return Dual(_with_value(x.val, value), x.eps)


def power(base : Any, exponent : Any) -> Any:
    """
    base^exponent over any scalar type

    A constant exponent uses the power rule (negative bases are
    allowed for integer exponents).  A variable exponent goes
    through exp(exponent*log(base)) and so needs a positive base;
    the value component is still computed as a plain real power so
    that it agrees exactly with evaluation over floats.
    """
    if _is_real(exponent):
        return _power_const(base, float(exponent))
    if _is_constant(exponent):
        return _power_const(base, real_part(exponent))
    value = _real_pow(real_part(base), real_part(exponent))
    if real_part(base) <= 0.0:
        raise DomainError('variable exponent requires a positive base')
    return _with_value(exp(exponent * log(base)), value)


#--------------------
# seeding and derivatives
#--------------------

def lift_const(c : float) -> Hyperdual:
    return Hyperdual(c, 0.0, 0.0, 0.0)

def lift_seed(c : float, s1 : float, s2 : float) -> Hyperdual:
    return Hyperdual(c, s1, s2, 0.0)


class Jet(NamedTuple):
    """
    value of f and, for each seed pair (u_k, w_k),
    first[k] = <grad f, u_k>, second[k] = <grad f, w_k>,
    mixed[k] = u_k^T H w_k
    """
    value : float
    first : np.ndarray
    second : np.ndarray
    mixed : np.ndarray


VectorFunction = Callable[[Sequence[Any]], Any]


def _component(part : Component, count : int) -> np.ndarray:
    return np.broadcast_to(np.asarray(part, dtype=float), (count,)).copy()


def directional_jet(f : VectorFunction, p : Sequence[float],
        first : np.ndarray, second : np.ndarray) -> Jet:
    """
    evaluate f once over Hyperduals carrying a batch of seed pairs;
    first and second are (m, n) arrays of seed directions
    """
    first = np.atleast_2d(np.asarray(first, dtype=float))
    second = np.atleast_2d(np.asarray(second, dtype=float))
    count = first.shape[0]
    args = [Hyperdual(float(p[j]), first[:, j], second[:, j],
        np.zeros(count)) for j in range(len(p))]
    out = f(args)
    if not isinstance(out, Hyperdual):
        return Jet(real_part(out), np.zeros(count),
                np.zeros(count), np.zeros(count))
    return Jet(out.val, _component(out.d1, count),
            _component(out.d2, count), _component(out.d12, count))


def gradient(f : VectorFunction, p : Sequence[float]) -> np.ndarray:
    n = len(p)
    identity = np.eye(n)
    return directional_jet(f, p, identity, np.zeros((n, n))).first


def hessian_vector(f : VectorFunction, p : Sequence[float],
        w : Sequence[float]) -> np.ndarray:
    n = len(p)
    ws = np.tile(np.asarray(w, dtype=float), (n, 1))
    return directional_jet(f, p, np.eye(n), ws).mixed


def hessian(f : VectorFunction, p : Sequence[float]) -> np.ndarray:
    n = len(p)
    identity = np.eye(n)
    firsts = np.repeat(identity, n, axis=0)
    seconds = np.tile(identity, (n, 1))
    return directional_jet(f, p, firsts, seconds).mixed.reshape(n, n)


def curve_jet(f : Callable[[Any], Any], t : float) -> tuple[float, float, float]:
    """
    value, first and second derivative of a function of one
    parameter, seeding both directions with 1
    """
    out = f(Hyperdual(t, 1.0, 1.0, 0.0))
    if not isinstance(out, Hyperdual):
        return (real_part(out), 0.0, 0.0)
    return (out.val, float(out.d1), float(out.d12))


def tangent_lift(f : VectorFunction, x : Sequence[Any],
        v : Sequence[Any]) -> Any:
    """
    <df(x), v>, computed by evaluating f at x + eps*v;
    x and v may already be Hyperduals
    """
    out = f([Dual(xi, vi) for xi, vi in zip(x, v)])
    if isinstance(out, Dual):
        return out.eps
    return 0.0


# vim: et ai si sts=4
