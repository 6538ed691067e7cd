"""Singular set ``{|g| = 1}``: seeding, predictor-corrector tracing, classification.

A singular point is a cuspidal edge when ``alpha = g'/(g^2 omega_hat)`` has nonzero real
and imaginary parts, a swallowtail when ``alpha`` is real nonzero and
``Re[(g/g') alpha'] != 0``, and not a front when ``Re alpha = 0``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .config import TOL
from .core import is_inf
from .core.quadrature import local_spacing
from .errors import BadSeed, NotSingular, TracingStalled, ValidationError
from .weierstrass import WeierstrassData

H_MIN = 1e-4
H_MAX = 1e-1
TURN = 0.03          # target turning angle per step (radians)
MAX_NEWTON = 5


class Tag(str, enum.Enum):
    CUSPIDAL_EDGE = "CuspidalEdge"
    SWALLOWTAIL = "Swallowtail"
    NOT_A_FRONT = "NotAFront"
    DEGENERATE = "DegenerateGaussMap"
    BORDERLINE = "Borderline"


@dataclass(frozen=True)
class SingularClass:
    tag: Tag
    alpha: complex
    dg_abs: float
    swallowtail_second: float | None = None
    band: float = TOL.class_tol

    @property
    def re_alpha(self) -> float:
        return self.alpha.real

    @property
    def im_alpha(self) -> float:
        return self.alpha.imag

    def to_dict(self) -> dict:
        return {
            "tag": self.tag.value,
            "alpha": [self.alpha.real, self.alpha.imag],
            "re_alpha": self.alpha.real,
            "im_alpha": self.alpha.imag,
            "swallowtail_second": self.swallowtail_second,
            "dg_abs": self.dg_abs,
            "band": self.band,
        }


@dataclass(frozen=True)
class SingularSamplePoint:
    z: complex
    classification: SingularClass
    tangent: complex
    null_dir: complex


@dataclass
class SingularCurve:
    samples: list
    closed: bool
    swallowtail_points: list = field(default_factory=list)
    not_a_front_points: list = field(default_factory=list)
    borderline_points: list = field(default_factory=list)
    degenerate_endpoints: list = field(default_factory=list)

    @property
    def points(self) -> np.ndarray:
        return np.array([s.z for s in self.samples], complex)

    def to_dict(self) -> dict:
        def c(z):
            return [z.real, z.imag]

        return {
            "closed": self.closed,
            "n_samples": len(self.samples),
            "samples": [
                {"z": c(s.z), "tag": s.classification.tag.value,
                 "tangent": c(s.tangent), "null_dir": c(s.null_dir)}
                for s in self.samples
            ],
            "swallowtails": [c(z) for z in self.swallowtail_points],
            "not_a_front": [c(z) for z in self.not_a_front_points],
            "borderline": [c(z) for z in self.borderline_points],
            "degenerate_endpoints": [c(z) for z in self.degenerate_endpoints],
        }


# -- regions ---------------------------------------------------------------

@dataclass(frozen=True)
class Annulus:
    center: complex = 0j
    r_min: float = 0.0
    r_max: float = 2.0

    def inside(self, z) -> np.ndarray:
        r = np.abs(np.asarray(z) - self.center)
        return (r >= self.r_min) & (r <= self.r_max)

    def scan_grid(self, n_r: int = 48, n_t: int = 160) -> np.ndarray:
        r0 = max(self.r_min, 1e-6 * max(1.0, self.r_max))
        r = np.linspace(r0, self.r_max, n_r)
        t = 2 * np.pi * np.arange(n_t + 1) / n_t
        return self.center + r[:, None] * np.exp(1j * t[None, :])


@dataclass(frozen=True)
class Box:
    lo: complex = -2 - 2j
    hi: complex = 2 + 2j

    def inside(self, z) -> np.ndarray:
        z = np.asarray(z)
        return ((z.real >= self.lo.real) & (z.real <= self.hi.real)
                & (z.imag >= self.lo.imag) & (z.imag <= self.hi.imag))

    def scan_grid(self, n_u: int = 96, n_v: int = 96) -> np.ndarray:
        u = np.linspace(self.lo.real, self.hi.real, n_u)
        v = np.linspace(self.lo.imag, self.hi.imag, n_v)
        return u[None, :] + 1j * v[:, None]


def default_region(data: WeierstrassData) -> Box:
    """Square around the origin covering the finite punctures, poles and zeros of g."""
    pts = [abs(p) for p in data.obstacles]
    if not data.g.is_constant():
        pts += [abs(p) for p, _ in data.g.poles()] + [abs(p) for p, _ in data.g.zeros()]
    R = 2.0 * max([1.0] + pts)
    return Box(complex(-R, -R), complex(R, R))


class _Domain:
    """Region minus small disks around the obstacles of the data."""

    def __init__(self, data: WeierstrassData, region):
        self.region = region
        obs = data.obstacles
        self.disks = [(p, 1e-2 * local_spacing(p, obs)) for p in obs]

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z)
        ok = self.region.inside(z)
        for p, r in self.disks:
            ok = ok & (np.abs(z - p) > r)
        return ok

    def contains1(self, z: complex) -> bool:
        return bool(self.contains(np.array([z]))[0])


# -- pointwise ---------------------------------------------------------------

def _logabs_g(data: WeierstrassData, z: complex) -> float:
    gv = data.g(z)
    if is_inf(gv):
        return math.inf
    return math.log(abs(gv)) if gv != 0 else -math.inf


def _dlog_g(data: WeierstrassData, z: complex) -> complex:
    """``g'/g`` evaluated stably on either side of the unit circle."""
    gv = data.g(z)
    if not is_inf(gv) and abs(gv) <= 1.0:
        return data.dg(z) / gv if gv != 0 else complex(math.inf)
    hv = data.h(z)
    return -data.dh(z) / hv


def null_direction(data: WeierstrassData, z: complex) -> complex:
    """``i / (g omega_hat)``, the kernel of ``df`` at a singular point."""
    z = complex(z)
    gw = data.g(z) * data.omega_hat(z)
    if gw == 0:
        raise ValidationError(f"omega_hat vanishes at {z}: metric condition violated on the singular set")
    return 1j / gw


def singular_tangent(data: WeierstrassData, z: complex) -> complex:
    """Unit vector along ``i conj(g'/g)``."""
    d = _dlog_g(data, complex(z))
    t = 1j * d.conjugate()
    return t / abs(t)


def classify_singular_point(data: WeierstrassData, z: complex, tau: float | None = None,
                            on_set_tol: float = 1e-6) -> SingularClass:
    """Decision tree of the cuspidal-edge / swallowtail criteria with a tolerance band."""
    tau = TOL.class_tol if tau is None else tau
    z = complex(z)
    gv = data.g(z)
    if is_inf(gv) or abs(abs(gv) - 1.0) >= on_set_tol:
        raise NotSingular(f"{z} is not on the singular set (|g| = {abs(gv) if not is_inf(gv) else 'inf'})")
    dgv = data.dg(z)
    dg_abs = abs(dgv)
    alpha = data.alpha(z)
    alpha = complex(alpha) if not is_inf(alpha) else complex(math.inf)
    if dg_abs < tau:
        return SingularClass(Tag.DEGENERATE, alpha, dg_abs, None, tau)
    aa = abs(alpha)
    if abs(alpha.real) < tau * aa or aa == 0:
        return SingularClass(Tag.NOT_A_FRONT, alpha, dg_abs, None, tau)
    if abs(alpha.imag) >= tau * aa:
        return SingularClass(Tag.CUSPIDAL_EDGE, alpha, dg_abs, None, tau)
    da = complex(data.dalpha(z))
    ratio = gv / dgv
    s = (ratio * da).real
    scale = max(1.0, abs(da) * abs(ratio))
    tag = Tag.SWALLOWTAIL if abs(s) >= tau * scale else Tag.BORDERLINE
    return SingularClass(tag, alpha, dg_abs, s, tau)


def _sample(data, z) -> SingularSamplePoint:
    return SingularSamplePoint(z, classify_singular_point(data, z), singular_tangent(data, z),
                               null_direction(data, z))


# -- tracing -----------------------------------------------------------------

def _correct(data: WeierstrassData, z: complex, steps: int = MAX_NEWTON) -> tuple[complex, bool]:
    """Newton on ``log|g| = 0`` along the gradient direction: ``z -= log|g| / (g'/g)``."""
    for _ in range(steps):
        u = _logabs_g(data, z)
        if not math.isfinite(u):
            return z, False
        d = _dlog_g(data, z)
        if d == 0 or not cmath.isfinite(d):
            return z, False
        dz = u / d
        z = z - dz
        if abs(dz) <= 1e-15 * max(1.0, abs(z)):
            break
    gv = data.g(z)
    ok = (not is_inf(gv)) and abs(abs(gv) ** 2 - 1.0) < TOL.trace_tol
    return z, ok


def _critical_points_on_set(data: WeierstrassData) -> list:
    if data.g.is_constant():
        return []
    if data.dg.num.degree < 1:
        return []
    out = []
    for c, _ in data.dg.zeros():
        gv = data.g(c)
        if not is_inf(gv) and abs(abs(gv) - 1.0) < 1e-8:
            out.append(c)
    return out


def _seg_dist(a: complex, b: complex, p: complex) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    t = max(0.0, min(1.0, ((p - a) * d.conjugate()).real / abs(d) ** 2))
    return abs(a + t * d - p)


def _trace_direction(data, z0, sign, dom, crit, max_samples):
    pts = [z0]
    z = z0
    h = 0.25 * H_MAX
    travelled = 0.0
    T = sign * singular_tangent(data, z)
    while len(pts) < max_samples:
        while True:
            zc, ok = _correct(data, z + h * T)
            if ok and abs(zc - z) < 2 * h:
                Tn = sign * singular_tangent(data, zc)
                turn = abs(cmath.phase(Tn / T))
                if turn <= 3 * TURN or h <= H_MIN:
                    break
            if h <= H_MIN:
                raise TracingStalled("step size collapsed while tracing the singular curve", last_point=z)
            h = max(H_MIN, 0.5 * h)
        # closure against the start point
        if travelled > 6 * h and _seg_dist(z, zc, z0) < 0.5 * h:
            return pts, "closed", None
        for c in crit:
            if _seg_dist(z, zc, c) < h or abs(zc - c) < h:
                return pts, "degenerate", c
        if not dom.contains1(zc):
            return pts, "exit", None
        pts.append(zc)
        travelled += abs(zc - z)
        kappa = turn / max(abs(zc - z), 1e-300)
        z, T = zc, Tn
        h = min(H_MAX, max(H_MIN, TURN / kappa if kappa > 0 else H_MAX))
    return pts, "limit", None


def trace_singular_curve(data: WeierstrassData, seed: complex, region=None,
                         max_samples: int = 20000) -> SingularCurve:
    """Trace the component of ``{|g| = 1}`` through ``seed``.

    Steps follow ``i conj(g'/g)`` and are pulled back onto the level set by Newton
    corrections.  Tracing ends on closure, on leaving the region (or nearing a
    puncture), or at a critical point of ``g`` on the set, which is appended as a
    ``DegenerateGaussMap`` endpoint.
    """
    region = default_region(data) if region is None else region
    seed = complex(seed)
    gv = data.g(seed)
    if is_inf(gv) or abs(abs(gv) ** 2 - 1.0) > 1e-6:
        raise BadSeed(f"seed {seed} is not on the singular set")
    z0, ok = _correct(data, seed)
    if not ok:
        raise BadSeed(f"seed {seed} could not be projected onto the singular set")
    if abs(data.dg(z0)) < TOL.class_tol:
        raise BadSeed(f"seed {seed} is a critical point of g")
    dom = _Domain(data, region)
    crit = _critical_points_on_set(data)
    fwd, why, cf = _trace_direction(data, z0, 1, dom, crit, max_samples)
    degenerate = []
    if why == "closed":
        pts, closed = fwd, True
    else:
        bwd, why_b, cb = _trace_direction(data, z0, -1, dom, crit, max_samples)
        pts = bwd[::-1] + fwd[1:]
        closed = False
        if cb is not None:
            degenerate.append(cb)
        if cf is not None:
            degenerate.append(cf)
    samples = [_sample(data, complex(z)) for z in pts]
    curve = SingularCurve(samples=samples, closed=closed, degenerate_endpoints=degenerate)
    special = locate_special_points(data, curve)
    curve.swallowtail_points = special["swallowtail"]
    curve.borderline_points = special["borderline"]
    curve.not_a_front_points = special["not_a_front"]
    return curve


# -- special points ------------------------------------------------------------

def _on_set(data, a: complex, b: complex, s: float) -> complex:
    z, _ = _correct(data, a + s * (b - a), steps=8)
    return z


def _refine_zero(data, a, b, part):
    def fn(s):
        z = _on_set(data, a, b, s)
        al = complex(data.alpha(z))
        return (al.imag if part == "im" else al.real) / abs(al)

    fa, fb = fn(0.0), fn(1.0)
    if fa == 0:
        return _on_set(data, a, b, 0.0)
    if fb == 0:
        return _on_set(data, a, b, 1.0)
    s = brentq(fn, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return _on_set(data, a, b, s)


def _zero_candidates(data, curve: SingularCurve, part: str) -> list:
    pts = list(curve.points)
    n = len(pts)
    if n < 2:
        return []
    vals = []
    for z in pts:
        al = complex(data.alpha(z))
        v = (al.imag if part == "im" else al.real)
        vals.append(0.0 if abs(v) <= 1e-10 * abs(al) else v)
    pairs = [(i, i + 1) for i in range(n - 1)]
    if curve.closed:
        pairs.append((n - 1, 0))
    zero = [v == 0.0 for v in vals]
    out = []
    for i in range(n):
        if zero[i]:
            if curve.closed:
                nb = [(i - 1) % n, (i + 1) % n]
            else:
                nb = [j for j in (i - 1, i + 1) if 0 <= j < n]
            if not any(zero[j] for j in nb):
                out.append(pts[i])
    for i, j in pairs:
        if zero[i] or zero[j]:
            continue
        if (vals[i] > 0) != (vals[j] > 0):
            out.append(_refine_zero(data, pts[i], pts[j], part))
    # dedupe
    uniq = []
    for z in out:
        if not any(abs(z - u) < 1e-8 for u in uniq):
            uniq.append(z)
    return uniq


def locate_special_points(data: WeierstrassData, curve: SingularCurve) -> dict:
    """Refined zeros of ``Im alpha`` (swallowtail / borderline candidates) and of
    ``Re alpha`` (non-front points) along a traced curve."""
    sw, bl, nf = [], [], []
    for z in _zero_candidates(data, curve, "im"):
        z = complex(z)
        tag = classify_singular_point(data, z).tag
        if tag == Tag.SWALLOWTAIL:
            sw.append(z)
        elif tag == Tag.BORDERLINE:
            bl.append(z)
    for z in _zero_candidates(data, curve, "re"):
        z = complex(z)
        if classify_singular_point(data, z).tag == Tag.NOT_A_FRONT:
            nf.append(z)
    key = lambda c: (round(c.real, 9), round(c.imag, 9))
    return {"swallowtail": sorted(sw, key=key), "borderline": sorted(bl, key=key),
            "not_a_front": sorted(nf, key=key)}


def locate_swallowtails(data: WeierstrassData, curve: SingularCurve) -> list:
    """Confirmed swallowtails on the curve (borderline candidates are in
    :func:`locate_special_points`)."""
    return locate_special_points(data, curve)["swallowtail"]


# -- seeds -------------------------------------------------------------------

def _scan_candidates(data: WeierstrassData, region) -> list:
    dom = _Domain(data, region)
    grid = region.scan_grid()
    g = data.g.eval_array(grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.log(np.abs(g))
    valid = dom.contains(grid) & ~np.isnan(u)
    cands = []
    for axis in (0, 1):
        a = grid[:-1, :] if axis == 0 else grid[:, :-1]
        b = grid[1:, :] if axis == 0 else grid[:, 1:]
        ua = u[:-1, :] if axis == 0 else u[:, :-1]
        ub = u[1:, :] if axis == 0 else u[:, 1:]
        va = valid[:-1, :] if axis == 0 else valid[:, :-1]
        vb = valid[1:, :] if axis == 0 else valid[:, 1:]
        hit = va & vb & np.isfinite(ua) & np.isfinite(ub) & (np.sign(ua) != np.sign(ub))
        for za, zb in zip(a[hit], b[hit]):
            fn = lambda s: _logabs_g(data, za + s * (zb - za))
            try:
                s = brentq(fn, 0.0, 1.0, xtol=1e-14)
            except ValueError:
                continue
            z, ok = _correct(data, za + s * (zb - za))
            if ok and dom.contains1(z):
                cands.append(complex(z))
    cands.sort(key=lambda c: (round(c.real, 9), round(c.imag, 9)))
    return cands


def _polyline_dist(pts: np.ndarray, z: complex, closed: bool) -> float:
    if len(pts) == 1:
        return abs(pts[0] - z)
    a = pts[:-1]
    b = pts[1:]
    if closed:
        a = np.append(a, pts[-1])
        b = np.append(b, pts[0])
    d = b - a
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.clip(((z - a) * np.conj(d)).real / np.abs(d) ** 2, 0, 1)
    t = np.nan_to_num(t)
    return float(np.min(np.abs(a + t * d - z)))


def singular_curves(data: WeierstrassData, region=None) -> tuple[list, list]:
    """Seeds (one per component met by the region) and the traced curves."""
    region = default_region(data) if region is None else region
    if data.g.is_constant():
        return [], []
    seeds, curves = [], []
    for c in _scan_candidates(data, region):
        if any(_polyline_dist(cv.points, c, cv.closed) < 2e-3 for cv in curves):
            continue
        if abs(data.dg(c)) < TOL.class_tol:
            continue
        curve = trace_singular_curve(data, c, region)
        seeds.append(c)
        curves.append(curve)
    return seeds, curves


def singular_seeds(data: WeierstrassData, region=None) -> list:
    """One point on each connected component of ``{|g| = 1}`` inside the region."""
    return singular_curves(data, region)[0]
