"""Dense complex polynomials (lowest degree first) and their roots."""
from __future__ import annotations

from typing import Iterable

import numpy as np
from numpy.polynomial import polynomial as P

from ..config import TOL
from ..errors import NoRoots, RootFindingFailure

_EPS = np.finfo(float).eps
# coefficients below this multiple of the rounding bound are exact cancellations
_CANCEL = 16 * _EPS


def _as_coeffs(coeffs) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel().copy()
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        return np.zeros(0, dtype=complex)
    return arr[: nz[-1] + 1]


class Polynomial:
    """Immutable polynomial with complex coefficients, ``coeffs[k]`` multiplies ``z**k``.

    The zero polynomial has an empty coefficient array.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] | np.ndarray = ()):
        c = _as_coeffs(coeffs)
        c.flags.writeable = False
        object.__setattr__(self, "_c", c)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "Polynomial":
        arr = np.zeros(k + 1, dtype=complex)
        arr[k] = c
        return cls(arr)

    @classmethod
    def from_roots(cls, roots: Iterable[complex], lead: complex = 1.0) -> "Polynomial":
        r = list(roots)
        if not r:
            return cls([lead])
        return cls(lead * P.polyfromroots(np.asarray(r, dtype=complex)))

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    @property
    def lead(self) -> complex:
        return complex(self._c[-1]) if len(self._c) else 0j

    def is_zero(self, tol: float = 0.0, scale: float | None = None) -> bool:
        if not len(self._c):
            return True
        if tol == 0.0:
            return False
        s = self.scale() if scale is None else scale
        return bool(np.all(np.abs(self._c) <= tol * s))

    def scale(self) -> float:
        return float(np.max(np.abs(self._c))) if len(self._c) else 0.0

    def __call__(self, z):
        if not len(self._c):
            return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
        out = P.polyval(np.asarray(z, dtype=complex), self._c)
        return complex(out) if np.ndim(out) == 0 else out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return len(self._c) == len(other._c) and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(tuple(self._c.tolist()))

    def __repr__(self):
        return f"Polynomial({self._c.tolist()!r})"

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        n = max(len(a), len(b))
        aa = np.zeros(n, complex)
        bb = np.zeros(n, complex)
        aa[: len(a)] = a
        bb[: len(b)] = b
        out = aa + bb
        out[np.abs(out) <= _CANCEL * (np.abs(aa) + np.abs(bb))] = 0
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self._c)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not len(self._c) or not len(other._c):
            return Polynomial()
        out = P.polymul(self._c, other._c)
        bound = P.polymul(np.abs(self._c), np.abs(other._c))
        out[np.abs(out) <= _CANCEL * bound] = 0
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial([1.0])
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "Polynomial":
        if len(self._c) <= 1:
            return Polynomial()
        return Polynomial(P.polyder(self._c))

    def conj_coeffs(self) -> "Polynomial":
        return Polynomial(np.conj(self._c))

    def shift(self, p: complex) -> "Polynomial":
        """Coefficients of ``t -> self(p + t)``."""
        c = self._c
        n = len(c)
        if n == 0:
            return self
        out = np.zeros(n, dtype=complex)
        # Horner-style Taylor shift
        out[:] = c
        with np.errstate(over="ignore", invalid="ignore"):
            for i in range(n - 1):
                for k in range(n - 2, i - 1, -1):
                    out[k] += p * out[k + 1]
        return Polynomial(out)

    def reversed(self, n: int | None = None) -> "Polynomial":
        """``z**n * self(1/z)`` with ``n`` defaulting to the degree."""
        d = self.degree
        n = d if n is None else n
        if d < 0:
            return self
        if n < d:
            raise ValueError("reversal degree below polynomial degree")
        out = np.zeros(n + 1, complex)
        out[n - d:] = self._c[::-1]
        return Polynomial(out)

    def divmod_linear_power(self, r: complex, k: int) -> "Polynomial":
        """Quotient by ``(z - r)**k``, discarding the (numerically zero) remainder."""
        c = self._c
        for _ in range(k):
            n = len(c)
            if n <= 1:
                return Polynomial()
            q = np.zeros(n - 1, complex)
            acc = c[-1]
            q[-1] = acc
            for i in range(n - 2, 0, -1):
                acc = c[i] + r * acc
                q[i - 1] = acc
            c = q
        return Polynomial(c)

    def order_at(self, p: complex, tol: float | None = None) -> int:
        """Multiplicity of ``p`` as a root; tail coefficients of the shifted polynomial
        below ``tol`` times their scale count as zero."""
        if not len(self._c):
            raise ValueError("zero polynomial has no finite order")
        tol = TOL.zero_tol if tol is None else tol
        t = np.abs(self.shift(p).coeffs)
        # scale: coefficients of the shifted polynomial bounded by |c_j| (1+|p|)^j
        with np.errstate(over="ignore", invalid="ignore"):
            scale = float(np.nanmax(np.abs(self._c) * (1.0 + abs(p)) ** np.arange(len(self._c))))
        k = 0
        while k < len(t) - 1 and t[k] <= tol * scale:
            k += 1
        return k


def _coerce(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return Polynomial([x])
    return NotImplemented


# -- roots ----------------------------------------------------------------

def _aberth(c: np.ndarray, max_iter: int = 500) -> tuple[np.ndarray, bool]:
    """Aberth-Ehrlich simultaneous iteration on monic-normalised coefficients."""
    n = len(c) - 1
    a = c / c[-1]
    # Fujiwara-style radius for the starting circle
    rad = 2.0 * max(abs(a[n - k]) ** (1.0 / k) for k in range(1, n + 1))
    rad = max(rad, 1e-3)
    ang = 2 * np.pi * np.arange(n) / n + 0.4
    z = 0.5 * rad * np.exp(1j * ang)
    dc = P.polyder(a)
    converged = False
    for _ in range(max_iter):
        pv = P.polyval(z, a)
        dv = P.polyval(z, dc)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        z = z - w
        if np.all(np.abs(w) <= 4 * _EPS * np.maximum(1.0, np.abs(z))):
            converged = True
            break
    return z, converged


def _taylor_at(c: np.ndarray, x: complex) -> np.ndarray:
    return Polynomial(c).shift(x).coeffs


def _cluster(c: np.ndarray, raw: np.ndarray) -> list[tuple[complex, int]]:
    """Group near-coincident approximations into multiple roots.

    A group of size m around centre x is accepted when the shifted Taylor
    coefficients satisfy ``|t_k / t_m| ** (1/(m-k)) < root_cluster_tol * max(1, |x|)``,
    i.e. every root of the group lies within that relative distance of ``x``.
    """
    n = len(raw)
    order = np.argsort(np.abs(raw))
    unused = set(range(n))
    out: list[tuple[complex, int]] = []
    for i in order:
        if i not in unused:
            continue
        unused.discard(i)
        group = [i]
        probe = 1e-3 * max(1.0, abs(raw[i]))
        changed = True
        while changed:
            changed = False
            for j in sorted(unused):
                if min(abs(raw[j] - raw[g]) for g in group) < probe:
                    group.append(j)
                    unused.discard(j)
                    changed = True
        if len(group) == 1:
            out.append((complex(raw[i]), 1))
            continue
        accepted = _accept_group(c, raw[group])
        if accepted is None:
            out.extend((complex(raw[g]), 1) for g in group)
        else:
            out.append(accepted)
    return out


def _accept_group(c: np.ndarray, pts: np.ndarray):
    m = len(pts)
    x = complex(np.mean(pts))
    # polish the centre on the (m-1)-th derivative, which has a simple root there
    d = Polynomial(c)
    for _ in range(m - 1):
        d = d.derivative()
    dd = d.derivative()
    for _ in range(20):
        fv, dv = d(x), dd(x)
        if dv == 0:
            break
        step = fv / dv
        x -= step
        if abs(step) <= 4 * _EPS * max(1.0, abs(x)):
            break
    t = np.abs(_taylor_at(c, x))
    # rounding floor of each shifted coefficient
    floor = 8 * len(c) * _EPS * np.abs(Polynomial(np.abs(c)).shift(abs(x)).coeffs)
    if t[m] <= floor[m]:
        return None
    lim = TOL.root_cluster_tol * max(1.0, abs(x))
    for k in range(m):
        if t[k] > floor[k] and (t[k] / t[m]) ** (1.0 / (m - k)) >= lim:
            return None
    return (x, m)


def _polish(c: np.ndarray, x: complex) -> complex:
    dc = P.polyder(c)
    for _ in range(5):
        fv = P.polyval(x, c)
        dv = P.polyval(x, dc)
        if dv == 0:
            break
        step = fv / dv
        if not np.isfinite(step) or abs(step) > 1e-6 * max(1.0, abs(x)):
            break
        x = x - step
        if abs(step) <= 2 * _EPS * max(1.0, abs(x)):
            break
    return complex(x)


def poly_roots(p: Polynomial) -> list[tuple[complex, int]]:
    """Roots with multiplicities, sorted by (real, imag).

    Aberth-Ehrlich iteration with companion-matrix eigenvalues as fallback;
    clustered approximations are merged into multiple roots.
    """
    # badly scaled inputs overflow in intermediate iterates; results are still checked
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _poly_roots(p)


def _poly_roots(p: Polynomial) -> list[tuple[complex, int]]:
    if p.degree < 1:
        raise NoRoots(f"degree {p.degree} polynomial has no roots")
    c = p.coeffs
    # factor out exact zeros at the origin first
    k0 = int(np.flatnonzero(c)[0])
    out: list[tuple[complex, int]] = [(0j, k0)] if k0 else []
    c = c[k0:]
    if len(c) > 1:
        if len(c) == 2:
            raw = np.array([-c[0] / c[1]])
        else:
            raw, ok = _aberth(c)
            if not ok or not np.all(np.isfinite(raw)):
                raw = P.polyroots(c)
        out.extend(_cluster(c, raw))
        out = [(r, m) if m > 1 or r == 0 else (_polish(c, r), m) for r, m in out]
    deg = sum(m for _, m in out)
    if deg != p.degree:
        raise RootFindingFailure("multiplicities do not sum to the degree")
    scale = float(np.sum(np.abs(p.coeffs) * np.maximum(1.0, max(abs(r) for r, _ in out)) ** np.arange(len(p.coeffs))))
    res = [abs(p(r)) for r, _ in out]
    if max(res) > 1e-8 * scale:
        raise RootFindingFailure("root residuals too large", residuals=res)
    out.sort(key=lambda rm: (round(rm[0].real, 12), round(rm[0].imag, 12)))
    return out
