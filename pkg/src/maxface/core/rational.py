"""Complex rational functions p/q in the global coordinate z of the sphere."""
from __future__ import annotations

import warnings
from typing import Iterable

import numpy as np

from ..config import TOL
from ..errors import NotAPole, UndefinedOrder, ValidationError
from .polynomial import Polynomial, poly_roots


class _Infinity:
    """The point at infinity of the Riemann sphere (also the value at a pole)."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(x) -> bool:
    return x is INF


def _poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return Polynomial([x])
    return Polynomial(x)


def _abs_scale(p: Polynomial, z: complex) -> float:
    c = p.coeffs
    return float(np.sum(np.abs(c) * abs(z) ** np.arange(len(c))))


class RationalMap:
    """Reduced quotient ``num/den`` of complex polynomials.

    Construction rejects a zero denominator and numerators sharing a root with the
    denominator; reduced data must be supplied by the caller.
    """

    __slots__ = ("num", "den", "_poles")

    def __init__(self, num, den=(1.0,), *, _reduced: bool = False):
        if callable(num) and not isinstance(num, Polynomial):
            from ..errors import NonRationalInput

            raise NonRationalInput("only rational functions given by coefficients are supported")
        n, d = _poly(num), _poly(den)
        if d.is_zero():
            raise ValidationError("denominator is the zero polynomial")
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)
        object.__setattr__(self, "_poles", None)
        if not _reduced:
            self._check_coprime()

    def __setattr__(self, name, value):
        raise AttributeError("RationalMap is immutable")

    # -- construction helpers --------------------------------------------
    @classmethod
    def const(cls, c: complex) -> "RationalMap":
        return cls(Polynomial([c]), Polynomial([1.0]), _reduced=True)

    @classmethod
    def z(cls) -> "RationalMap":
        return cls(Polynomial([0, 1]), Polynomial([1.0]), _reduced=True)

    @classmethod
    def reduced(cls, num, den) -> "RationalMap":
        """Build from possibly non-coprime data by cancelling common roots."""
        n, d = _poly(num), _poly(den)
        if d.is_zero():
            raise ValidationError("denominator is the zero polynomial")
        if n.is_zero():
            return cls(Polynomial(), Polynomial([1.0]), _reduced=True)
        if d.degree >= 1:
            for r, m in poly_roots(d):
                k = min(m, _poly_order(n, r))
                if k:
                    n = n.divmod_linear_power(r, k)
                    d = d.divmod_linear_power(r, k)
        lead = d.lead
        return cls(Polynomial(n.coeffs / lead), Polynomial(d.coeffs / lead), _reduced=True)

    def _check_coprime(self):
        if self.den.degree < 1 or self.num.is_zero():
            return
        for r, _ in self.poles_with_multiplicity(raw=True):
            scale = _abs_scale(self.num, r)
            if abs(self.num(r)) <= TOL.coprime_tol * max(scale, 1e-300):
                raise ValidationError(
                    f"numerator and denominator share the root {r:.6g}; supply reduced data"
                )

    # -- basic queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    @property
    def degree(self) -> int:
        """Degree as a map of the sphere."""
        return max(self.num.degree, self.den.degree, 0)

    def poles_with_multiplicity(self, raw: bool = False) -> list[tuple[complex, int]]:
        if self._poles is None:
            poles = poly_roots(self.den) if self.den.degree >= 1 else []
            object.__setattr__(self, "_poles", poles)
        return list(self._poles)

    def poles(self) -> list[tuple[complex, int]]:
        """Finite poles with their orders."""
        return self.poles_with_multiplicity()

    def zeros(self) -> list[tuple[complex, int]]:
        if self.num.degree < 1:
            return []
        return poly_roots(self.num)

    # -- evaluation --------------------------------------------------------
    def __call__(self, z):
        """Scalar evaluation returns ``INF`` at a pole; arrays get ``inf`` entries."""
        if np.ndim(z):
            z = np.asarray(z, dtype=complex)
            n = self.num(z) if not self.num.is_zero() else np.zeros_like(z)
            d = self.den(z)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = n / d
            out[~np.isfinite(out)] = complex(np.inf, 0)
            return out
        if z is INF:
            if self.is_zero():
                return 0j
            k = self.order_at_inf()
            if k < 0:
                return INF
            if k > 0:
                return 0j
            return self.num.lead / self.den.lead
        z = complex(z)
        d = self.den(z)
        if abs(d) <= TOL.eval_tol * _abs_scale(self.den, z):
            if self.is_zero():
                return 0j
            return INF
        n = self.num(z) if not self.num.is_zero() else 0j
        return n / d

    def eval_array(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        n = self.num(z) if not self.num.is_zero() else np.zeros_like(z)
        return n / self.den(z)

    # -- algebra -----------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalMap.reduced(self.num + o.num, self.den)
        return RationalMap.reduced(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalMap(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            return RationalMap.const(0)
        if o.is_constant():
            return RationalMap(self.num * (o.num.lead / o.den.lead), self.den, _reduced=True)
        if self.is_constant():
            return RationalMap(o.num * (self.num.lead / self.den.lead), o.den, _reduced=True)
        return RationalMap.reduced(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational map")
        return RationalMap.reduced(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalMap.const(1.0) / (self ** (-k))
        out = RationalMap.const(1.0)
        for _ in range(k):
            out = out * self
        return out

    def reciprocal(self) -> "RationalMap":
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of zero")
        return RationalMap(self.den, self.num, _reduced=True)

    def derivative(self) -> "RationalMap":
        """Quotient-rule derivative, reduced."""
        n, d = self.num, self.den
        if d.degree == 0:
            return RationalMap.reduced(n.derivative() * (1.0 / d.lead), Polynomial([1.0]))
        return RationalMap.reduced(n.derivative() * d - n * d.derivative(), d * d)

    def compose_inverse(self) -> "RationalMap":
        """``w -> f(1/w)``."""
        dn, dd = self.num.degree, self.den.degree
        m = max(dn, dd, 0)
        if self.is_zero():
            return self
        return RationalMap.reduced(self.num.reversed(m), self.den.reversed(m))

    def form_at_infinity(self) -> "RationalMap":
        """Coefficient of the 1-form ``f(z) dz`` in the chart ``w = 1/z``:
        ``-f(1/w) / w**2``."""
        inv = self.compose_inverse()
        return RationalMap.reduced(-inv.num, inv.den * Polynomial([0, 0, 1]))

    def equals(self, other: "RationalMap", tol: float = 0.0) -> bool:
        """Equality as rational functions, by cross multiplication."""
        lhs = self.num * other.den
        rhs = other.num * self.den
        diff = lhs - rhs
        if tol == 0.0:
            return diff.is_zero()
        scale = max(lhs.scale(), rhs.scale(), 1e-300)
        return diff.is_zero(tol, scale)

    def __repr__(self):
        return f"RationalMap(num={self.num.coeffs.tolist()!r}, den={self.den.coeffs.tolist()!r})"

    # -- valuations and Laurent data --------------------------------------
    def order_at_inf(self) -> int:
        if self.is_zero():
            raise UndefinedOrder("identically zero function has no order")
        return self.den.degree - self.num.degree

    def order_at(self, p) -> int:
        """Valuation at ``p``: negative is a pole order, positive a zero order."""
        if self.is_zero():
            raise UndefinedOrder("identically zero function has no order")
        if p is INF:
            return self.order_at_inf()
        p = complex(p)
        return _poly_order(self.num, p) - _poly_order(self.den, p)

    def laurent(self, p: complex, n_terms: int) -> tuple[int, np.ndarray]:
        """Laurent coefficients at a finite point.

        Returns ``(k0, c)`` with ``f = sum_j c[j] (z-p)**(k0+j)``, ``j < n_terms``.
        """
        if self.is_zero():
            return 0, np.zeros(n_terms, complex)
        p = complex(p)
        kn = _poly_order(self.num, p)
        kd = _poly_order(self.den, p)
        ns = self.num.shift(p).coeffs[kn:]
        ds = self.den.shift(p).coeffs[kd:]
        out = np.zeros(n_terms, complex)
        # power series division ns / ds
        for j in range(n_terms):
            acc = ns[j] if j < len(ns) else 0j
            for i in range(1, min(j, len(ds) - 1) + 1):
                acc -= ds[i] * out[j - i]
            out[j] = acc / ds[0]
        return kn - kd, out

    def residue_at(self, p) -> complex:
        """Coefficient of ``(z-p)**-1``; warns and returns 0 away from poles."""
        if p is INF:
            return self.residue_at_infinity()
        k = self.order_at(p) if not self.is_zero() else 0
        if k >= 0:
            warnings.warn(NotAPoleWarning(f"{p!r} is not a pole; residue is zero by convention"))
            return 0j
        k0, c = self.laurent(p, -k)
        return complex(c[-1 - k0]) if -1 - k0 < len(c) else 0j

    def residue_at_infinity(self) -> complex:
        """Residue of the 1-form ``f dz`` at infinity, i.e. of ``-f(1/w)/w**2`` at ``w = 0``."""
        if self.is_zero():
            return 0j
        # expand num/den in powers of 1/z from the leading coefficients
        a = self.num.coeffs[::-1]
        b = self.den.coeffs[::-1]
        j = len(a) - len(b) + 1          # index of the 1/z term
        if j < 0:
            return 0j
        q = []
        for k in range(j + 1):
            acc = a[k] if k < len(a) else 0j
            acc -= sum(b[i] * q[k - i] for i in range(1, min(k, len(b) - 1) + 1))
            q.append(acc / b[0])
        return complex(-q[j])


class NotAPoleWarning(UserWarning):
    pass


def _poly_order(p: Polynomial, r: complex) -> int:
    if p.is_zero():
        return 0
    return p.order_at(r)


def _coerce(x):
    if isinstance(x, RationalMap):
        return x
    if isinstance(x, Polynomial):
        return RationalMap(x, Polynomial([1.0]), _reduced=True)
    if isinstance(x, (int, float, complex, np.number)):
        return RationalMap.const(x)
    return NotImplemented


__all__ = ["INF", "RationalMap", "is_inf", "NotAPole", "NotAPoleWarning"]
