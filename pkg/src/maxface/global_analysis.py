"""Global verification: periods, ends, completeness, Osserman inequality, total curvature."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .core import INF, RationalMap, contour_integral, is_inf
from .core.quadrature import local_spacing
from .errors import (
    BadPunctureGeometry,
    InternalInconsistency,
    PeriodConditionFailed,
    QuadratureFailure,
    ValidationError,
)
from .weierstrass import MAXFACE, WeierstrassData

TWO_PI_I = 2j * math.pi


def _c(z):
    return "inf" if is_inf(z) else [complex(z).real, complex(z).imag]


# -- periods -------------------------------------------------------------------

@dataclass
class PuncturePeriod:
    puncture: object
    periods: np.ndarray           # from residues, complex triple
    quadrature: np.ndarray        # from contour quadrature, complex triple
    loop_radius: float

    def to_dict(self):
        return {
            "puncture": _c(self.puncture),
            "periods": [[p.real, p.imag] for p in self.periods],
            "quadrature": [[p.real, p.imag] for p in self.quadrature],
            "loop_radius": self.loop_radius,
        }


@dataclass
class PeriodReport:
    per_puncture: list
    max_re_violation: float
    max_disagreement: float
    passes: bool

    def to_dict(self):
        return {
            "per_puncture": [p.to_dict() for p in self.per_puncture],
            "max_re_violation": self.max_re_violation,
            "max_residue_quadrature_disagreement": self.max_disagreement,
            "passes": self.passes,
        }


def _phi_residues(data: WeierstrassData, p) -> np.ndarray:
    out = np.zeros(3, complex)
    for k, phi in enumerate(data.phi):
        if phi.is_zero():
            continue
        if is_inf(p):
            out[k] = phi.residue_at_infinity()
        elif phi.order_at(p) < 0:
            out[k] = phi.residue_at(p)
    return out


def _phi_func(data):
    phis = data.phi
    return lambda z: np.stack([f.eval_array(z) for f in phis])


def compute_periods(data: WeierstrassData) -> PeriodReport:
    """Periods of Phi around every puncture, by residues and by contour quadrature.

    Finite punctures use a circle of half the distance to the nearest other
    obstacle; the loop around infinity is a large clockwise circle.
    """
    obs = data.obstacles
    func = _phi_func(data)
    rows = []
    for p in data.punctures:
        res = _phi_residues(data, p)
        per = TWO_PI_I * res
        if is_inf(p):
            R = 2.0 * max([1.0] + [abs(q) for q in obs])
            quad = np.asarray(contour_integral(func, (0j, R, -1)))
            rad = R
        else:
            rad = 0.5 * local_spacing(p, obs)
            quad = np.asarray(contour_integral(func, (p, rad, 1)))
        rows.append(PuncturePeriod(p, per, quad, rad))
    if not rows:
        return PeriodReport([], 0.0, 0.0, True)
    viol = max(float(np.max(np.abs(r.periods.real))) for r in rows)
    dis = max(float(np.max(np.abs(r.periods - r.quadrature))) for r in rows)
    if dis > 1e-6:
        raise InternalInconsistency(f"residue and quadrature periods disagree by {dis:.3g}")
    return PeriodReport(rows, viol, dis, viol < TOL.period_tol)


# -- degree --------------------------------------------------------------------

def gauss_degree(data: WeierstrassData) -> int:
    """Degree of ``g`` as a map of the sphere (0 for constant ``g``, a planar surface)."""
    if data.g.is_constant():
        return 0
    return data.g.degree


# -- ends ----------------------------------------------------------------------

@dataclass
class EndReport:
    puncture: object
    g_modulus: float
    end_complete: bool
    phi_pole_order: int
    df_order_ok: bool
    embedded: bool
    end_type: str
    coefficients: tuple | None = None      # (a, c)
    horizontal_phase: float | None = None
    normalization: dict | None = None
    prop48_violation: bool = False

    def to_dict(self):
        return {
            "puncture": _c(self.puncture),
            "g_modulus": "inf" if math.isinf(self.g_modulus) else self.g_modulus,
            "end_complete": self.end_complete,
            "phi_pole_order": self.phi_pole_order,
            "df_order_ok": self.df_order_ok,
            "embedded": self.embedded,
            "end_type": self.end_type,
            "coefficients": None if self.coefficients is None
            else {"a": self.coefficients[0], "c": self.coefficients[1]},
            "horizontal_phase": self.horizontal_phase,
            "normalization": self.normalization,
            "prop48_violation": self.prop48_violation,
        }


def _local_chart(data: WeierstrassData, p):
    """``(g, omega_hat, point)`` in a chart where the end sits at a finite point."""
    if is_inf(p):
        return data.g.compose_inverse(), data.omega_hat.form_at_infinity(), 0j
    return data.g, data.omega_hat, complex(p)


def _maxface_phi(g: RationalMap, w: RationalMap):
    g2 = g * g
    return (-2 * g * w, (1 + g2) * w, 1j * (1 - g2) * w)


def _end_coefficients(g: RationalMap, w: RationalMap, p: complex):
    """Normalise ``g(p) = 0`` by a reflection and a Lorentz boost, then read the end
    expansion ``(a/r)(cos, sin) + c log r`` from Laurent coefficients."""
    note = {"reflected": False, "boost": [0.0, 0.0]}
    gv = g(p)
    if is_inf(gv) or abs(gv) > 1:
        # (g, w) -> (1/g, g^2 w) is the reflection x2 -> -x2
        w = g * g * w
        g = g.reciprocal()
        note["reflected"] = True
        gv = g(p)
    b = complex(gv)
    if b != 0:
        s = 1.0 - abs(b) ** 2
        one = RationalMap.const(1.0)
        w = ((one - b.conjugate() * g) ** 2) * w * (1.0 / s)
        g = (g - b) / (one - b.conjugate() * g)
        note["boost"] = [b.real, b.imag]
    phi = _maxface_phi(g, w)
    k0, c1 = phi[1].laurent(p, 3)
    A1 = complex(c1[-2 - k0]) if 0 <= -2 - k0 < len(c1) else 0j
    res0 = phi[0].residue_at(p) if not phi[0].is_zero() and phi[0].order_at(p) < 0 else 0j
    a = -abs(A1)
    c = res0.real
    return (a, c), math.atan2(A1.imag, A1.real), note


def analyze_end(data: WeierstrassData, puncture) -> EndReport:
    """Gauss-map modulus, pole order of the forms and end type at one puncture."""
    if not data.is_puncture(puncture):
        raise ValidationError(f"{_c(puncture)} is not a puncture of the data")
    p_in = INF if is_inf(puncture) else complex(puncture)
    if not is_inf(p_in):
        for q in data.obstacles:
            if q != p_in and abs(q - p_in) < 1e-6 * max(1.0, abs(p_in)):
                raise BadPunctureGeometry(f"pole {q} is not isolated from puncture {p_in}")
    gv = data.g(p_in)
    gmod = math.inf if is_inf(gv) else abs(gv)
    complete = math.isinf(gmod) or abs(gmod - 1.0) >= TOL.class_tol
    g, w, p = _local_chart(data, p_in)
    phis = _maxface_phi(g, w) if data.convention == MAXFACE else None
    if phis is None:
        g2 = g * g
        phis = ((1 - g2) * w, 1j * (1 + g2) * w, 2 * g * w)
    orders = [-f.order_at(p) for f in phis if not f.is_zero()]
    order = max([0] + orders)
    df_ok = order >= 2
    embedded = order == 2
    coeffs = phase = note = None
    if not complete:
        end_type = "Simple-candidate"
    elif order < 2:
        end_type = "LowOrder"
    elif order > 2:
        end_type = "HigherOrder"
    else:
        if data.convention == MAXFACE:
            coeffs, phase, note = _end_coefficients(g, w, p)
            tol = TOL.zero_tol * max(1.0, abs(coeffs[0]))
            end_type = "Catenoidal" if abs(coeffs[1]) > tol else "Planar"
        else:
            end_type = "Catenoidal"
    return EndReport(p_in, gmod, complete, order, df_ok, embedded, end_type, coeffs, phase, note,
                     prop48_violation=complete and order < 2)


# -- completeness -----------------------------------------------------------------

@dataclass(frozen=True)
class Completeness:
    kind: str                  # "Complete" | "WeaklyCompleteOnly" | "Incomplete"
    violating: tuple = ()

    def __str__(self):
        return self.kind


def classify_completeness(data: WeierstrassData, periods: PeriodReport | None = None,
                          ends: list | None = None) -> Completeness:
    """Complete iff every end has ``|g(p)| != 1``; ends where the forms stay holomorphic
    are not even weakly complete."""
    periods = compute_periods(data) if periods is None else periods
    if not periods.passes:
        raise PeriodConditionFailed(
            f"period condition fails (max |Re P| = {periods.max_re_violation:.3g}); "
            "the surface is not well defined"
        )
    ends = [analyze_end(data, p) for p in data.punctures] if ends is None else ends
    removable = tuple(e.puncture for e in ends if e.phi_pole_order == 0)
    if removable:
        return Completeness("Incomplete", removable)
    bad = tuple(e.puncture for e in ends if not e.end_complete)
    if bad:
        return Completeness("WeaklyCompleteOnly", bad)
    return Completeness("Complete", ())


# -- total curvature -------------------------------------------------------------

def _fs_density(g: RationalMap, dg: RationalMap, h: RationalMap, dh: RationalMap, z: np.ndarray):
    """``4|g'|^2 / (1+|g|^2)^2`` evaluated through ``1/g`` where ``|g| > 1``."""
    with np.errstate(all="ignore"):
        gv = g.eval_array(z)
        big = ~np.isfinite(gv) | (np.abs(gv) > 1)
        out = np.empty(z.shape)
        gs, dgs = gv[~big], dg.eval_array(z[~big])
        out[~big] = 4 * np.abs(dgs) ** 2 / (1 + np.abs(gs) ** 2) ** 2
        if np.any(big):
            hv = h.eval_array(z[big])
            dhv = dh.eval_array(z[big])
            out[big] = 4 * np.abs(dhv) ** 2 / (1 + np.abs(hv) ** 2) ** 2
    return out


def _disk_integral(func, n_r: int, n_t: int) -> float:
    x, wts = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * (x + 1)
    wr = 0.5 * wts
    t = 2 * np.pi * np.arange(n_t) / n_t
    z = r[:, None] * np.exp(1j * t[None, :])
    vals = func(z)
    return float(np.sum(vals.mean(axis=1) * 2 * np.pi * r * wr))


def total_curvature_numeric(data: WeierstrassData, rtol: float = 1e-8, n_max: int = 4096) -> float:
    """Integral of the pulled-back Fubini-Study density over the sphere (two unit disks)."""
    g = data.g
    if g.is_constant():
        return 0.0
    charts = []
    for gg in (g, g.compose_inverse()):
        h = gg.reciprocal()
        charts.append((gg, gg.derivative(), h, h.derivative()))

    def total(n_r, n_t):
        return sum(_disk_integral(lambda z, c=c: _fs_density(*c, z), n_r, n_t) for c in charts)

    n_r, n_t = 32, 64
    prev = total(n_r, n_t)
    while n_t <= n_max:
        n_r, n_t = 2 * n_r, 2 * n_t
        cur = total(n_r, n_t)
        if abs(cur - prev) <= rtol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise QuadratureFailure("total curvature quadrature did not converge", estimates=(prev, cur))


# -- report ----------------------------------------------------------------------

def lopez_ros_excluded(data: WeierstrassData) -> list:
    """``lambda > 0`` for which ``|lambda g(p_j)| = 1`` at some end."""
    out = set()
    for p in data.punctures:
        gv = data.g(p)
        if not is_inf(gv) and abs(gv) > 0:
            out.add(1.0 / abs(gv))
    return sorted(out)


@dataclass
class GlobalReport:
    label: str
    period: PeriodReport
    ends: list
    deg_g: int
    n_ends: int
    euler_punctured: int
    completeness: Completeness | None
    osserman_lhs: int | None = None
    osserman_rhs: int | None = None
    equality: bool | None = None
    all_ends_embedded: bool | None = None
    total_curvature_numeric: float | None = None
    lopez_ros_excluded: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def osserman_applies(self) -> bool:
        return self.completeness is not None and self.completeness.kind == "Complete"

    def to_dict(self):
        comp = None if self.completeness is None else self.completeness.kind
        return {
            "label": self.label,
            "periods": self.period.to_dict(),
            "ends": [e.to_dict() for e in self.ends],
            "deg_g": self.deg_g,
            "n_ends": self.n_ends,
            "euler_punctured": self.euler_punctured,
            "completeness": comp,
            "violating_ends": [] if self.completeness is None
            else [_c(p) for p in self.completeness.violating],
            "osserman": None if self.osserman_lhs is None else {
                "lhs": self.osserman_lhs,
                "rhs": self.osserman_rhs,
                "equality": self.equality,
                "all_ends_embedded": self.all_ends_embedded,
            },
            "total_curvature_numeric": self.total_curvature_numeric,
            "total_curvature_over_4pi": None if self.total_curvature_numeric is None
            else self.total_curvature_numeric / (4 * math.pi),
            "lopez_ros_excluded": self.lopez_ros_excluded,
            "notes": list(self.notes),
        }


def global_report(data: WeierstrassData, with_curvature: bool = True) -> GlobalReport:
    """Assemble every global check; Osserman fields are filled only for complete surfaces."""
    period = compute_periods(data)
    ends = [analyze_end(data, p) for p in data.punctures]
    n = len(data.punctures)
    deg = gauss_degree(data)
    notes = []
    if deg == 0:
        notes.append("constant Gauss map: the image is planar")
    comp = None
    if period.passes:
        comp = classify_completeness(data, period, ends)
    else:
        notes.append("period condition fails: completeness and Osserman checks skipped")
    rep = GlobalReport(
        label=data.label, period=period, ends=ends, deg_g=deg, n_ends=n,
        euler_punctured=2 - n, completeness=comp,
        lopez_ros_excluded=lopez_ros_excluded(data), notes=notes,
    )
    if any(e.prop48_violation for e in ends):
        notes.append("complete end with pole order < 2: impossible for a well-defined maxface")
    if rep.osserman_applies:
        rep.osserman_lhs = 2 * deg
        rep.osserman_rhs = -(2 - n) + n
        rep.equality = rep.osserman_lhs == rep.osserman_rhs
        rep.all_ends_embedded = all(e.embedded for e in ends)
        if rep.osserman_lhs < rep.osserman_rhs:
            raise InternalInconsistency("Osserman inequality violated by a complete maxface")
        if rep.equality != rep.all_ends_embedded:
            raise InternalInconsistency("Osserman equality does not match the embedded-ends criterion")
    if with_curvature:
        rep.total_curvature_numeric = total_curvature_numeric(data)
    return rep


def osserman_report(data: WeierstrassData, with_curvature: bool = True) -> GlobalReport:
    """Global report for a complete maxface; raises if periods fail or the surface is
    only weakly complete."""
    rep = global_report(data, with_curvature)
    if rep.completeness is None:
        raise PeriodConditionFailed("period condition fails")
    if rep.completeness.kind != "Complete":
        raise ValidationError(f"Osserman inequality needs a complete maxface (got {rep.completeness.kind})")
    return rep
