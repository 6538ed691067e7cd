"""Contour and path quadrature for analytic integrands.

Integrands are vectorised callables ``f(z_array) -> array`` whose trailing axis
matches the points (leading axes are integrated component-wise).  A
:class:`RationalMap` is accepted directly and supplies its own poles for the
guard check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from ..config import TOL
from ..errors import PathThroughSingularity, QuadratureFailure, ValidationError

_GL_N = 10
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_N)
# map to [0, 1]
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    def point(self, t):
        return self.a + t * (self.b - self.a)

    def length(self) -> float:
        return abs(self.b - self.a)

    def distance_to(self, p: complex) -> float:
        d = self.b - self.a
        if d == 0:
            return abs(p - self.a)
        t = ((p - self.a) * np.conj(d)).real / abs(d) ** 2
        t = min(1.0, max(0.0, t))
        return abs(p - self.point(t))


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    def point(self, t):
        return self.center + self.radius * np.exp(1j * (self.theta0 + t * (self.theta1 - self.theta0)))

    def length(self) -> float:
        return abs(self.radius * (self.theta1 - self.theta0))

    def distance_to(self, p: complex) -> float:
        # sample-based bound is adequate for the guard test
        ts = np.linspace(0.0, 1.0, 257)
        return float(np.min(np.abs(self.point(ts) - p)))


Piece = Union[Segment, Arc]


@dataclass(frozen=True)
class Path:
    """Concatenation of segments and circular arcs."""

    pieces: tuple

    @property
    def start(self) -> complex:
        return complex(self.pieces[0].point(0.0))

    @property
    def end(self) -> complex:
        return complex(self.pieces[-1].point(1.0))

    def length(self) -> float:
        return sum(p.length() for p in self.pieces)

    def distance_to(self, p: complex) -> float:
        return min(pc.distance_to(p) for pc in self.pieces)

    def __add__(self, other: "Path") -> "Path":
        return Path(self.pieces + other.pieces)


@dataclass(frozen=True)
class PathSpec:
    """User-facing contour description: a polyline through ``waypoints`` or a circle."""

    waypoints: tuple = ()
    kind: str = "polyline"
    center: complex = 0j
    radius: float = 1.0
    orientation: int = 1

    def __post_init__(self):
        if self.kind == "polyline":
            w = [complex(x) for x in self.waypoints]
            if len(w) < 2:
                raise ValidationError("polyline needs at least two waypoints")
            if any(w[i] == w[i + 1] for i in range(len(w) - 1)):
                raise ValidationError("consecutive waypoints must be distinct")
            object.__setattr__(self, "waypoints", tuple(w))
        elif self.kind == "circle":
            if not self.radius > 0:
                raise ValidationError("circle radius must be positive")
            if self.orientation not in (1, -1):
                raise ValidationError("orientation must be +1 or -1")
        else:
            raise ValidationError(f"unknown path kind {self.kind!r}")

    @classmethod
    def polyline(cls, *points) -> "PathSpec":
        return cls(waypoints=tuple(points), kind="polyline")

    @classmethod
    def circle(cls, center: complex, radius: float, orientation: int = 1) -> "PathSpec":
        return cls(kind="circle", center=complex(center), radius=float(radius), orientation=orientation)

    def to_path(self) -> Path:
        if self.kind == "polyline":
            w = self.waypoints
            return Path(tuple(Segment(w[i], w[i + 1]) for i in range(len(w) - 1)))
        t1 = 2 * math.pi * self.orientation
        return Path((Arc(self.center, self.radius, 0.0, t1),))


# -- helpers ---------------------------------------------------------------

def _as_func(f) -> tuple[Callable, list]:
    from .rational import RationalMap

    if isinstance(f, RationalMap):
        return f.eval_array, [p for p, _ in f.poles()]
    if isinstance(f, (list, tuple)) and f and all(isinstance(g, RationalMap) for g in f):
        poles = sorted({p for g in f for p, _ in g.poles()}, key=lambda c: (c.real, c.imag))
        return (lambda z: np.stack([g.eval_array(z) for g in f])), poles
    return f, []


def local_spacing(p: complex, points: Sequence[complex]) -> float:
    others = [abs(p - q) for q in points if q != p]
    return min(others) if others else 1.0


def guard_radius(p: complex, poles: Sequence[complex]) -> float:
    return TOL.guard_factor * local_spacing(p, poles)


def _check_guard(path: Path, poles: Iterable[complex]):
    poles = list(poles)
    for p in poles:
        g = guard_radius(p, poles)
        d = path.distance_to(p)
        if d < g:
            raise PathThroughSingularity(
                f"pole {p:.6g} lies within guard radius {g:.3g} of the path (distance {d:.3g})",
                pole=p,
            )


class _PieceTable:
    """Array form of a list of pieces for vectorised parametrisation."""

    def __init__(self, pieces: Sequence[Piece]):
        self.arc = np.array([isinstance(p, Arc) for p in pieces], bool)
        self.a = np.array([p.a if isinstance(p, Segment) else p.center for p in pieces], complex)
        self.b = np.array([p.b if isinstance(p, Segment) else 0j for p in pieces], complex)
        self.rad = np.array([p.radius if isinstance(p, Arc) else 0.0 for p in pieces])
        self.th0 = np.array([p.theta0 if isinstance(p, Arc) else 0.0 for p in pieces])
        self.th1 = np.array([p.theta1 if isinstance(p, Arc) else 0.0 for p in pieces])

    def param(self, idx: np.ndarray, t: np.ndarray):
        """Points and dz/dt for piece indices ``idx`` at parameters ``t``."""
        z = np.empty(t.shape, complex)
        dz = np.empty(t.shape, complex)
        arc = self.arc[idx]
        seg = ~arc
        ii = idx[seg]
        z[seg] = self.a[ii] + t[seg] * (self.b[ii] - self.a[ii])
        dz[seg] = self.b[ii] - self.a[ii]
        if np.any(arc):
            ii = idx[arc]
            th = self.th0[ii] + t[arc] * (self.th1[ii] - self.th0[ii])
            e = np.exp(1j * th)
            z[arc] = self.a[ii] + self.rad[ii] * e
            dz[arc] = 1j * self.rad[ii] * (self.th1[ii] - self.th0[ii]) * e
        return z, dz


def integrate_pieces(func: Callable, pieces: Sequence[Piece], tol: float | None = None,
                     max_depth: int = 40) -> np.ndarray:
    """Adaptive composite Gauss-Legendre integral of ``func`` over each piece.

    Returns an array of shape ``(..., len(pieces))``.  Intervals are halved until
    the difference between the one-panel and two-panel estimates is below
    ``tol * max(1, |estimate|)`` scaled by the interval length.
    """
    tol = TOL.quad_tol if tol is None else tol
    table = _PieceTable(pieces)
    npc = len(pieces)
    idx = np.arange(npc)
    lo = np.zeros(npc)
    hi = np.ones(npc)
    depth = np.zeros(npc, int)
    total = None
    first = True
    scale = None
    nx = _GL_N

    def panel(ii, a, h):
        # returns integrals over [a, a+h] for each item
        tt = a[:, None] + h[:, None] * _GL_X[None, :]
        ij = np.repeat(ii, nx)
        z, dz = table.param(ij, tt.ravel())
        vals = np.asarray(func(z)) * dz
        vals = vals.reshape(vals.shape[:-1] + (len(ii), nx))
        return (vals * _GL_W).sum(axis=-1) * h

    while idx.size:
        h = hi - lo
        whole = panel(idx, lo, h)
        left = panel(idx, lo, 0.5 * h)
        right = panel(idx, lo + 0.5 * h, 0.5 * h)
        halves = left + right
        if total is None:
            total = np.zeros(halves.shape[:-1] + (npc,), complex)
        if first:
            mag = np.abs(whole)
            mag = mag.reshape(-1, mag.shape[-1]).max(axis=0) if mag.ndim > 1 else mag
            scale = np.maximum(1.0, mag)
            first = False
        err = np.abs(whole - halves)
        err = err.reshape(-1, err.shape[-1]).max(axis=0) if err.ndim > 1 else err
        ok = err <= tol * scale[idx] * np.maximum(h, 1e-3) + 1e-15 * np.abs(halves).reshape(-1, len(idx)).max(axis=0)
        if np.any(ok):
            np.add.at(total.T, idx[ok], np.moveaxis(halves[..., ok], -1, 0))
        bad = ~ok
        if not np.any(bad):
            break
        if np.any(depth[bad] >= max_depth):
            raise QuadratureFailure("adaptive Gauss-Legendre did not converge",
                                    estimates=(whole[..., bad], halves[..., bad]))
        bi, blo, bh, bd = idx[bad], lo[bad], h[bad], depth[bad]
        idx = np.concatenate([bi, bi])
        lo = np.concatenate([blo, blo + 0.5 * bh])
        hi = np.concatenate([blo + 0.5 * bh, blo + bh])
        depth = np.concatenate([bd + 1, bd + 1])
    return total


def path_integral(f, path, *, poles: Iterable[complex] | None = None, tol: float | None = None):
    """Integral of ``f(z) dz`` along a polyline/arc path.

    Raises :class:`PathThroughSingularity` when a known pole lies within the guard
    radius of the path.
    """
    func, fpoles = _as_func(f)
    if isinstance(path, PathSpec):
        path = path.to_path()
    allp = list(fpoles) + list(poles or [])
    _check_guard(path, allp)
    per_piece = integrate_pieces(func, path.pieces, tol)
    out = per_piece.sum(axis=-1)
    return complex(out) if np.ndim(out) == 0 else out


def contour_integral(f, c, *, tol: float | None = None, n0: int = 16, n_max: int = 1 << 16):
    """Closed circle integral by the periodic trapezoid rule, doubling nodes until
    successive estimates agree."""
    func, _ = _as_func(f)
    if isinstance(c, PathSpec):
        if c.kind != "circle":
            raise ValidationError("contour_integral needs a circle PathSpec")
        center, radius, orient = c.center, c.radius, c.orientation
    else:
        center, radius, orient = c
    tol = TOL.quad_tol if tol is None else tol
    prev = None
    n = n0
    while n <= n_max:
        th = 2 * math.pi * np.arange(n) / n
        e = np.exp(1j * th)
        z = center + radius * e
        vals = np.asarray(func(z)) * (1j * radius * e)
        est = vals.mean(axis=-1) * 2 * math.pi * orient
        if prev is not None:
            diff = np.max(np.abs(est - prev))
            if diff <= tol * max(1.0, float(np.max(np.abs(est)))):
                return complex(est) if np.ndim(est) == 0 else est
        prev = est
        n *= 2
    raise QuadratureFailure("trapezoid rule did not converge", estimates=(prev, est))


def route(a: complex, b: complex, obstacles: Sequence[complex]) -> Path:
    """Straight path from ``a`` to ``b``, detouring around obstacles by circular arcs.

    Each obstacle closer to the segment than its detour radius
    (``detour_factor`` times the local obstacle spacing, capped midway between the
    guard radius and the nearer endpoint) is bypassed along the shorter arc.
    """
    a, b = complex(a), complex(b)
    if a == b:
        return Path((Segment(a, b),))
    d = b - a
    L = abs(d)
    u = d / L
    hits = []
    obstacles = list(obstacles)
    for p in obstacles:
        # stay between the guard radius and the nearer endpoint
        near = min(abs(p - a), abs(p - b))
        rho = min(TOL.detour_factor * local_spacing(p, obstacles), 0.5 * (near + guard_radius(p, obstacles)))
        if near == 0:
            raise PathThroughSingularity(f"path endpoint coincides with pole {p}", pole=p)
        q = (p - a) * np.conj(u)
        s, off = q.real, q.imag
        if abs(off) < rho and 0 < s < L:
            hits.append((s, p, rho, off))
    if not hits:
        return Path((Segment(a, b),))
    hits.sort(key=lambda h: h[0])
    pieces: list = []
    cur = a
    for s, p, rho, off in hits:
        half = math.sqrt(rho * rho - off * off)
        e1 = a + u * (s - half)
        e2 = a + u * (s + half)
        pieces.append(Segment(cur, e1))
        t1 = np.angle(e1 - p)
        t2 = np.angle(e2 - p)
        # the shorter arc lies on the side of the chord away from the centre;
        # centre on the left of travel means a counterclockwise sweep
        sweep = (t2 - t1) % (2 * math.pi)
        if off < 0:
            sweep -= 2 * math.pi
        pieces.append(Arc(p, rho, float(t1), float(t1 + sweep)))
        cur = e2
    pieces.append(Segment(cur, b))
    pieces = [pc for pc in pieces if not (isinstance(pc, Segment) and pc.a == pc.b)]
    return Path(tuple(pieces))
