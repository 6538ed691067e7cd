"""Weierstrass data of maxfaces and the quantities derived from it.

Surfaces are ``f = Re int_{z0}^{z} Phi`` with ``Phi = (-2g, 1+g^2, i(1-g^2)) omega_hat dz``
in Minkowski space with metric ``-(dx0)^2 + (dx1)^2 + (dx2)^2``.  Companion minimal
surfaces in Euclidean space use ``Phi = (1-g0^2, i(1+g0^2), 2 g0) omega_hat dz``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .config import TOL
from .core import INF, RationalMap, is_inf
from .core.quadrature import Path, PathSpec, integrate_pieces, route, _check_guard
from .errors import InvalidDeformation, NonRationalInput, ValidationError

MAXFACE = "maxface"
MINIMAL = "minimal"

_I = 1j


def _fmt(p) -> str:
    return "inf" if is_inf(p) else f"{complex(p):.6g}"


def _same_point(p, q, tol=1e-12) -> bool:
    if is_inf(p) or is_inf(q):
        return is_inf(p) and is_inf(q)
    return abs(complex(p) - complex(q)) <= tol * max(1.0, abs(p))


@dataclass(frozen=True, eq=False)
class WeierstrassData:
    """Gauss map ``g`` and 1-form ``omega_hat dz`` on the sphere minus ``punctures``."""

    g: RationalMap
    omega_hat: RationalMap
    punctures: tuple = ()
    base_point: complex = 0j
    label: str = ""
    convention: str = MAXFACE

    def __post_init__(self):
        for name in ("g", "omega_hat"):
            v = getattr(self, name)
            if not isinstance(v, RationalMap):
                if callable(v):
                    raise NonRationalInput(
                        f"{name}: transcendental or callable input is not supported; "
                        "give a rational function by coefficients"
                    )
                raise ValidationError(f"{name}: expected a RationalMap")
        if self.convention not in (MAXFACE, MINIMAL):
            raise ValidationError(f"unknown convention {self.convention!r}")
        punct = tuple(INF if is_inf(p) else complex(p) for p in self.punctures)
        object.__setattr__(self, "punctures", punct)
        object.__setattr__(self, "base_point", complex(self.base_point))
        self._validate()

    # -- validation ----------------------------------------------------------
    def _validate(self):
        g, w = self.g, self.omega_hat
        if w.is_zero():
            raise ValidationError("omega_hat is identically zero")
        for i, p in enumerate(self.punctures):
            for q in self.punctures[i + 1:]:
                if _same_point(p, q):
                    raise ValidationError(f"punctures are not distinct ({_fmt(p)})")
        if self.convention == MAXFACE and g.is_constant():
            c = g(0)
            if abs(abs(c) - 1.0) <= TOL.zero_tol:
                raise ValidationError("g is a constant of modulus 1: (1-|g|^2)^2 vanishes identically")
        self._check_metric_condition()
        b = self.base_point
        if self.is_puncture(b):
            raise ValidationError(f"base point {_fmt(b)} is a puncture")
        for k, phi in enumerate(self.phi):
            if not phi.is_zero() and phi.order_at(b) < 0:
                raise ValidationError(f"base point {_fmt(b)} is a pole of Phi^{k}")

    def is_puncture(self, p) -> bool:
        return any(_same_point(p, q, 1e-9) for q in self.punctures)

    def _check_metric_condition(self):
        g, w = self.g, self.omega_hat
        for p, m in w.poles():
            if not self.is_puncture(p):
                raise ValidationError(
                    f"metric condition violated at {_fmt(p)}: omega_hat has a pole of order {m} "
                    "off the punctures"
                )
        gpoles = {} if g.is_constant() else dict(g.poles())
        for p, k in gpoles.items():
            if self.is_puncture(p):
                continue
            zo = w.order_at(p)
            if zo != 2 * k:
                raise ValidationError(
                    f"metric condition violated at {_fmt(p)}: g has a pole of order {k} but "
                    f"omega_hat vanishes to order {zo} (need exactly {2 * k})"
                )
        for p, m in w.zeros():
            if self.is_puncture(p):
                continue
            if not any(_same_point(p, q, 1e-9) for q in gpoles):
                raise ValidationError(
                    f"metric condition violated at {_fmt(p)}: omega_hat has a zero of order {m} "
                    "where g is finite (branch point)"
                )
        if not self.is_puncture(INF):
            kg = 0 if g.is_zero() else g.order_at(INF)
            kw = w.order_at(INF) - 2
            need = -2 * kg if kg < 0 else 0
            if kw != need:
                raise ValidationError(
                    f"metric condition violated at inf: omega has order {kw} there, need {need}"
                )

    # -- derived rational maps ---------------------------------------------
    @cached_property
    def phi(self) -> tuple:
        return phi_forms(self)

    @cached_property
    def dg(self) -> RationalMap:
        return self.g.derivative()

    @cached_property
    def h(self) -> RationalMap:
        """``1/g`` (used where ``|g| > 1``)."""
        return self.g.reciprocal() if not self.g.is_zero() else RationalMap.const(0)

    @cached_property
    def dh(self) -> RationalMap:
        return self.h.derivative()

    @cached_property
    def g2w(self) -> RationalMap:
        """``g^2 omega_hat``, finite at the poles of ``g``."""
        return self.g * self.g * self.omega_hat

    @cached_property
    def alpha(self) -> RationalMap:
        """``g' / (g^2 omega_hat)``."""
        if self.g2w.is_zero():
            return RationalMap.const(0)
        return self.dg / self.g2w

    @cached_property
    def dalpha(self) -> RationalMap:
        return self.alpha.derivative()

    @cached_property
    def obstacles(self) -> list:
        """Finite punctures and poles of Phi, in a fixed order."""
        pts = [p for p in self.punctures if not is_inf(p)]
        for phi in self.phi:
            for p, _ in phi.poles():
                if not any(_same_point(p, q, 1e-9) for q in pts):
                    pts.append(p)
        return sorted(pts, key=lambda c: (c.real, c.imag))

    def with_(self, **kw) -> "WeierstrassData":
        args = dict(g=self.g, omega_hat=self.omega_hat, punctures=self.punctures,
                    base_point=self.base_point, label=self.label, convention=self.convention)
        args.update(kw)
        return WeierstrassData(**args)

    def __repr__(self):
        return (f"WeierstrassData(label={self.label!r}, g={self.g!r}, omega_hat={self.omega_hat!r}, "
                f"punctures={[_fmt(p) for p in self.punctures]}, base_point={self.base_point!r}, "
                f"convention={self.convention!r})")


def phi_forms(data: WeierstrassData) -> tuple:
    """The three holomorphic forms (coefficients of ``dz``)."""
    g, w = data.g, data.omega_hat
    g2 = g * g
    if data.convention == MAXFACE:
        return (-2 * g * w, (1 + g2) * w, _I * (1 - g2) * w)
    return ((1 - g2) * w, _I * (1 + g2) * w, 2 * g * w)


def phi_numerators(data: WeierstrassData) -> tuple:
    """Numerators of Phi over the common unreduced denominator ``gd^2 wd``."""
    gn, gd = data.g.num, data.g.den
    wn, wd = data.omega_hat.num, data.omega_hat.den
    gn2, gd2 = gn * gn, gd * gd
    if data.convention == MAXFACE:
        nums = (-2 * gn * gd * wn, (gd2 + gn2) * wn, _I * (gd2 - gn2) * wn)
    else:
        nums = ((gd2 - gn2) * wn, _I * (gd2 + gn2) * wn, 2 * gn * gd * wn)
    return nums, gd2 * wd


def lorentz_nullity(data: WeierstrassData) -> RationalMap:
    """``-(Phi0)^2 + (Phi1)^2 + (Phi2)^2`` (Euclidean sum of squares for minimal data).

    Formed over the common denominator so that the cancellation is exact.
    """
    (a, b, c), den = phi_numerators(data)
    sign = -1 if data.convention == MAXFACE else 1
    num = sign * (a * a) + b * b + c * c
    return RationalMap.reduced(num, den * den)


# -- immersion -------------------------------------------------------------

def _phi_func(data: WeierstrassData):
    phis = data.phi

    def f(z):
        return np.stack([p.eval_array(z) for p in phis])

    return f


def default_path(data: WeierstrassData, z: complex, start: complex | None = None) -> Path:
    start = data.base_point if start is None else complex(start)
    return route(start, complex(z), data.obstacles)


def lift_many(data: WeierstrassData, paths: Sequence[Path], tol: float | None = None) -> np.ndarray:
    """Complex integrals of Phi along each path; shape ``(len(paths), 3)``."""
    pieces, owner = [], []
    for i, p in enumerate(paths):
        _check_guard(p, data.obstacles)
        pieces.extend(p.pieces)
        owner.extend([i] * len(p.pieces))
    if not pieces:
        return np.zeros((0, 3), complex)
    vals = integrate_pieces(_phi_func(data), pieces, tol)
    out = np.zeros((len(paths), 3), complex)
    np.add.at(out, np.asarray(owner), vals.T)
    return out


def holomorphic_lift(data: WeierstrassData, z: complex, path: PathSpec | Path | None = None) -> np.ndarray:
    """``int_{z0}^{z} Phi`` as a complex triple."""
    if path is None:
        path = default_path(data, z)
    elif isinstance(path, PathSpec):
        path = path.to_path()
    return lift_many(data, [path])[0]


def evaluate_immersion(data: WeierstrassData, z: complex, path: PathSpec | Path | None = None) -> np.ndarray:
    """Surface point ``Re int Phi`` as ``(x0, x1, x2)``."""
    return holomorphic_lift(data, z, path).real


def evaluate_immersion_many(data: WeierstrassData, zs) -> np.ndarray:
    """Immersion at many points along default routes from the base point."""
    zs = np.atleast_1d(np.asarray(zs, complex)).ravel()
    return lift_many(data, [default_path(data, z) for z in zs]).real


# -- pointwise geometry ----------------------------------------------------

def _branch(data: WeierstrassData, z: complex):
    """Return ``('g', g, g', omega_hat)`` where ``|g| <= 1`` else ``('h', h, h', g^2 omega_hat)``."""
    gv = data.g(z)
    if not is_inf(gv) and abs(gv) <= 1.0:
        return "g", gv, data.dg(z), data.omega_hat(z)
    hv = data.h(z)
    return "h", hv, data.dh(z), data.g2w(z)


def _check_regular(data: WeierstrassData, z):
    if data.is_puncture(z):
        raise ValidationError(f"{_fmt(z)} is a puncture")


def normals(data: WeierstrassData, z: complex):
    """Lorentzian unit normal (``None`` on the singular set) and Euclidean unit normal."""
    z = complex(z)
    kind, v, _, _ = _branch(data, z)
    if is_inf(v):
        v = 0j
    s = abs(v) ** 2
    if kind == "g":
        num_nu = np.array([-(1 + s), 2 * v.real, 2 * v.imag])
        den = 1 - s
        n = np.array([1 + s, 2 * v.real, 2 * v.imag])
    else:
        # multiply through by |h|^2 with g = 1/h
        num_nu = np.array([-(1 + s), 2 * v.real, -2 * v.imag])
        den = s - 1
        n = np.array([1 + s, 2 * v.real, -2 * v.imag])
    n = n / math.sqrt((1 + s) ** 2 + 4 * s)
    if abs(den) < TOL.zero_tol:
        return None, n
    return num_nu / den, n


def metric_and_curvature(data: WeierstrassData, z: complex):
    """``(ds2_factor, dsigma2_factor, K_induced, K_lift)`` at ``z``.

    ``K_induced`` is ``math.inf`` on the singular set.
    """
    z = complex(z)
    _check_regular(data, z)
    kind, v, dv, w = _branch(data, z)
    s = abs(v) ** 2
    aw = abs(w) ** 2
    one_minus = (1 - s) if kind == "g" else (s - 1)
    ds2 = one_minus ** 2 * aw
    dsig2 = (1 + s) ** 2 * aw
    ad = abs(dv) ** 2
    k_lift = -4 * ad / ((1 + s) ** 4 * aw) if aw else -math.inf
    if one_minus == 0 or aw == 0:
        k_ind = math.inf if ad or one_minus == 0 else 0.0
    else:
        k_ind = 4 * ad / (one_minus ** 4 * aw)
    return ds2, dsig2, k_ind, k_lift


def lambda_indicator(data: WeierstrassData, z: complex) -> float:
    """``(|g|^2 - 1) |omega_hat|^2 sqrt((1+|g|^2)^2 + 4|g|^2)``, negative where ``|g| < 1``."""
    z = complex(z)
    kind, v, _, w = _branch(data, z)
    s = abs(v) ** 2
    root = math.sqrt((1 + s) ** 2 + 4 * s)
    if kind == "g":
        return (s - 1) * abs(w) ** 2 * root
    return (1 - s) * abs(w) ** 2 * root


@dataclass(frozen=True)
class SurfaceSample:
    z: complex
    f: np.ndarray
    nu: np.ndarray | None
    n_euc: np.ndarray
    ds2_factor: float
    dsigma2_factor: float
    K_induced: float
    K_lift: float
    lam: float
    sheet: int = field(default=0)   # sign of 1 - |g|^2: +1 lower sheet, -1 upper, 0 singular


def sample(data: WeierstrassData, z: complex, path=None) -> SurfaceSample:
    z = complex(z)
    f = evaluate_immersion(data, z, path)
    nu, n = normals(data, z)
    ds2, dsig2, ki, kl = metric_and_curvature(data, z)
    lam = lambda_indicator(data, z)
    sheet = 0 if nu is None else (1 if lam < 0 else -1)
    return SurfaceSample(z, f, nu, n, ds2, dsig2, ki, kl, lam, sheet)


# -- transforms ------------------------------------------------------------

def companion(data: WeierstrassData) -> WeierstrassData:
    """Euclidean minimal companion: Gauss map ``-i g``, same ``omega_hat``."""
    if data.convention != MAXFACE:
        raise ValidationError("companion expects maxface data")
    return data.with_(g=-_I * data.g, label=(data.label + " companion").strip(), convention=MINIMAL)


def companion_inverse(data: WeierstrassData) -> WeierstrassData:
    """Maxface whose companion is the given minimal data: ``g = i g0``."""
    if data.convention != MINIMAL:
        raise ValidationError("companion_inverse expects minimal-surface data")
    label = data.label[: -len(" companion")] if data.label.endswith(" companion") else data.label
    return data.with_(g=_I * data.g, label=label, convention=MAXFACE)


def lopez_ros(data: WeierstrassData, lam: float) -> WeierstrassData:
    """Deformation ``(g, omega) -> (lam g, omega / lam)`` for real nonzero ``lam``."""
    if isinstance(lam, complex):
        if lam.imag != 0:
            raise InvalidDeformation("Lopez-Ros parameter must be real")
        lam = lam.real
    lam = float(lam)
    if lam == 0 or not math.isfinite(lam):
        raise InvalidDeformation("Lopez-Ros parameter must be a finite nonzero real")
    label = f"{data.label} lopez-ros({lam:g})".strip()
    return data.with_(g=lam * data.g, omega_hat=data.omega_hat * (1.0 / lam), label=label)
