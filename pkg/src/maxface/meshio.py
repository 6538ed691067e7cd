"""Structured grids over the parameter domain, surface meshes and file export.

The holomorphic lift is integrated incrementally along the edges of a spanning
tree of the grid, so the cost is linear in the number of nodes.  Positions are
the real parts of the lift: ``(x0, x1, x2)`` for maxfaces and Euclidean
``(x1, x2, x3)`` for minimal data.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .core import INF, is_inf
from .core.quadrature import guard_radius, route
from .errors import EmptyGrid, IOFailure, ValidationError
from .singular import Annulus, Box, singular_curves
from .weierstrass import MAXFACE, WeierstrassData, holomorphic_lift, lift_many

IDENTITY = "identity"
INVERSION = "inversion"


@dataclass(frozen=True)
class PolarSpec:
    center: complex
    r_min: float
    r_max: float
    n_r: int
    n_theta: int

    def __post_init__(self):
        if not (0 <= self.r_min < self.r_max) or self.n_r < 2 or self.n_theta < 3:
            raise ValidationError("polar grid needs 0 <= r_min < r_max, n_r >= 2, n_theta >= 3")


@dataclass(frozen=True)
class RectSpec:
    lo: complex
    hi: complex
    n_u: int
    n_v: int

    def __post_init__(self):
        if not (self.lo.real < self.hi.real and self.lo.imag < self.hi.imag) or min(self.n_u, self.n_v) < 2:
            raise ValidationError("rect grid needs lo < hi componentwise and at least 2 nodes per side")


@dataclass
class ChartGrid:
    """Grid nodes in chart coordinates with a validity mask.

    Polar grids are indexed ``[ring, angle]`` and wrap in the angle; rectangular
    grids are indexed ``[v, u]``.
    """

    chart: str
    kind: str
    nodes: np.ndarray
    mask: np.ndarray
    spec: object
    snapped_radii: list = field(default_factory=list)
    curves: list | None = None

    @property
    def wrap(self) -> bool:
        return self.kind == "polar"

    @property
    def shape(self) -> tuple:
        return self.nodes.shape

    @property
    def z(self) -> np.ndarray:
        """Node positions in the original coordinate (``1/w`` for the inversion chart)."""
        if self.chart == IDENTITY:
            return self.nodes
        with np.errstate(divide="ignore", invalid="ignore"):
            return 1.0 / self.nodes

    def region(self):
        s = self.spec
        if self.kind == "polar":
            return Annulus(s.center, s.r_min, s.r_max)
        return Box(s.lo, s.hi)


def chart_data(data: WeierstrassData, chart: str = IDENTITY):
    """Data expressed in the chart coordinate and the lift offset at the chart base point.

    For the inversion chart ``w = 1/z`` the base point moves to ``1/z0`` (or to a
    nearby regular point when ``z0 = 0``) and the offset is the lift from ``z0``
    to that point in the original chart.
    """
    if chart == IDENTITY:
        return data, np.zeros(3, complex)
    if chart != INVERSION:
        raise ValidationError(f"unknown chart {chart!r}")

    def inv(p):
        if is_inf(p):
            return 0j
        return INF if p == 0 else 1.0 / complex(p)

    punct = tuple(inv(p) for p in data.punctures)
    g = data.g.compose_inverse()
    w = data.omega_hat.form_at_infinity()
    offset = np.zeros(3, complex)
    z0 = complex(data.base_point)
    if z0 != 0:
        wb = 1.0 / z0
    else:
        for wb in (1.0, 1j, -1.0, -1j, 2.0, 0.5 + 0.5j):
            try:
                offset = holomorphic_lift(data, 1.0 / wb)
                break
            except Exception:
                continue
    out = WeierstrassData(g, w, punct, wb, data.label, data.convention)
    return out, offset


def _centered_radius(curve, center) -> float | None:
    if not curve.closed or len(curve.samples) < 8:
        return None
    r = np.abs(curve.points - center)
    if np.ptp(r) < 1e-9 * max(1.0, r.mean()):
        return float(r.mean())
    return None


def build_chart_grid(data: WeierstrassData, spec, chart: str = IDENTITY,
                     mask_radius: float | None = None) -> ChartGrid:
    """Nodes of a polar or rectangular grid with obstacles masked out.

    Nodes closer than the guard radius (or ``mask_radius``) to a puncture or pole
    of the forms are masked.  For polar grids, a ring is moved exactly onto each
    singular circle centred at the grid centre.
    """
    cdata, _ = chart_data(data, chart)
    curves = None
    snapped = []
    if isinstance(spec, PolarSpec):
        radii = np.linspace(spec.r_min, spec.r_max, spec.n_r)
        if cdata.convention == MAXFACE and not cdata.g.is_constant():
            _, curves = singular_curves(cdata, Annulus(spec.center, spec.r_min, spec.r_max))
            for cv in curves:
                rho = _centered_radius(cv, spec.center)
                if rho is not None and spec.r_min <= rho <= spec.r_max:
                    k = int(np.argmin(np.abs(radii - rho)))
                    radii[k] = rho
                    snapped.append(rho)
        th = 2 * math.pi * np.arange(spec.n_theta) / spec.n_theta
        nodes = spec.center + radii[:, None] * np.exp(1j * th)[None, :]
        kind = "polar"
    elif isinstance(spec, RectSpec):
        u = np.linspace(spec.lo.real, spec.hi.real, spec.n_u)
        v = np.linspace(spec.lo.imag, spec.hi.imag, spec.n_v)
        nodes = u[None, :] + 1j * v[:, None]
        kind = "rect"
    else:
        raise ValidationError("grid spec must be PolarSpec or RectSpec")
    mask = np.ones(nodes.shape, bool)
    obs = cdata.obstacles
    for p in obs:
        rad = guard_radius(p, obs) if mask_radius is None else mask_radius
        mask &= np.abs(nodes - p) > rad
    if chart == INVERSION:
        mask &= nodes != 0
    if not mask.any():
        raise EmptyGrid("every grid node lies within the guard radius of a puncture or pole")
    return ChartGrid(chart, kind, nodes, mask, spec, snapped, curves)


@dataclass
class Polyline:
    label: str
    indices: list
    closed: bool = False


@dataclass
class SurfaceMesh:
    """Triangulated surface with per-vertex scalars.

    ``node_vertex[i, j]`` is the vertex index of grid node ``(i, j)`` (``-1`` when
    masked).  ``lift`` keeps the complex integrals so the companion shuffle can be
    applied afterwards.
    """

    z: np.ndarray
    lift: np.ndarray
    ds2: np.ndarray
    abs_g: np.ndarray
    singular: np.ndarray
    faces: np.ndarray
    polylines: list
    node_vertex: np.ndarray
    convention: str = MAXFACE
    label: str = ""
    seam: bool = False
    report: dict | None = None

    @property
    def positions(self) -> np.ndarray:
        return self.lift.real

    @property
    def vertices(self) -> list:
        return [(tuple(p), float(d), float(a), bool(s))
                for p, d, a, s in zip(self.positions, self.ds2, self.abs_g, self.singular)]

    def companion_positions(self) -> np.ndarray:
        """Companion minimal surface ``Re(L1, L2, i L0)`` from a maxface lift."""
        L = self.lift
        return np.stack([L[:, 1].real, L[:, 2].real, -L[:, 0].imag], axis=1)


def _scalars(data: WeierstrassData, z: np.ndarray):
    z = np.asarray(z, complex)
    with np.errstate(all="ignore"):
        gv = data.g.eval_array(z)
        w = data.omega_hat.eval_array(z)
        hv = data.h.eval_array(z)
        g2w = data.g2w.eval_array(z)
    ag = np.abs(gv)
    big = ~np.isfinite(ag) | (ag > 1)
    s = np.where(big, np.abs(hv) ** 2, ag ** 2)
    aw = np.where(big, np.abs(g2w) ** 2, np.abs(w) ** 2)
    if data.convention == MAXFACE:
        ds2 = (1 - s) ** 2 * aw
    else:
        ds2 = (1 + s) ** 2 * aw
    with np.errstate(divide="ignore"):
        ag = np.where(big, 1 / np.abs(hv), ag)
    sing = np.abs(ag - 1) < TOL.zero_tol if data.convention == MAXFACE else np.zeros(z.shape, bool)
    return ds2, ag, sing


def _neighbours(i, j, shape, wrap, allow_wrap):
    n0, n1 = shape
    if i > 0:
        yield i - 1, j
    if i + 1 < n0:
        yield i + 1, j
    if j > 0:
        yield i, j - 1
    elif wrap and allow_wrap:
        yield i, n1 - 1
    if j + 1 < n1:
        yield i, j + 1
    elif wrap and allow_wrap:
        yield i, 0


def _spanning_tree(grid: ChartGrid, base: complex):
    """BFS parent pointers over valid nodes, avoiding the angular wrap when possible."""
    valid = grid.mask
    shape = grid.shape
    parent = {}
    order = []
    cand = np.where(valid, np.abs(grid.nodes - base), np.inf)
    root = np.unravel_index(int(np.argmin(cand)), shape)
    root = (int(root[0]), int(root[1]))
    for allow_wrap in (False, True):
        if root not in parent:
            parent[root] = None
            order.append(root)
        q = deque(order)
        while q:
            cur = q.popleft()
            for nb in _neighbours(*cur, shape, grid.wrap, allow_wrap):
                if valid[nb] and nb not in parent:
                    parent[nb] = cur
                    order.append(nb)
                    q.append(nb)
    # nodes cut off by the mask hang directly from the base point
    for ij in zip(*np.nonzero(valid)):
        ij = (int(ij[0]), int(ij[1]))
        if ij not in parent:
            parent[ij] = None
            order.append(ij)
    return parent, order


def generate_mesh(data: WeierstrassData, grid: ChartGrid, *, with_curves: bool = True,
                  seam_tol: float = 1e-8) -> SurfaceMesh:
    """Integrate the immersion over the grid and triangulate it.

    Each node's lift is its tree parent's lift plus the integral along the
    connecting edge (detouring around obstacles).  On polar grids whose rings do
    not close up (a real period around the centre), duplicate vertices are added
    along the seam.
    """
    cdata, offset = chart_data(data, grid.chart)
    obs = cdata.obstacles
    base = complex(cdata.base_point)
    parent, order = _spanning_tree(grid, base)
    nodes = grid.nodes
    paths = []
    for ij in order:
        p = parent[ij]
        start = base if p is None else nodes[p]
        paths.append(route(start, nodes[ij], obs))
    inc = lift_many(cdata, paths)
    node_lift = {}
    for k, ij in enumerate(order):
        p = parent[ij]
        prev = offset if p is None else node_lift[p]
        node_lift[ij] = prev + inc[k]

    shape = grid.shape
    node_vertex = -np.ones(shape, int)
    zs, lifts = [], []
    for ij in sorted(node_lift):
        node_vertex[ij] = len(zs)
        zs.append(nodes[ij])
        lifts.append(node_lift[ij])

    # seam duplicates where rings fail to close
    seam_vertex = None
    seam = False
    if grid.wrap:
        n1 = shape[1]
        rings = [i for i in range(shape[0]) if grid.mask[i, n1 - 1] and grid.mask[i, 0]]
        wrap = lift_many(cdata, [route(nodes[i, n1 - 1], nodes[i, 0], obs) for i in rings])
        closing = {i: node_lift[(i, n1 - 1)] + wrap[k] for k, i in enumerate(rings)}
        for i in rings:
            ref = node_lift[(i, 0)].real
            if np.max(np.abs(closing[i].real - ref)) > seam_tol * max(1.0, np.max(np.abs(ref))):
                seam = True
                break
        if seam:
            seam_vertex = -np.ones(shape[0], int)
            for i in rings:
                seam_vertex[i] = len(zs)
                zs.append(nodes[i, 0])
                lifts.append(closing[i])

    faces = []
    n0, n1 = shape
    ncols = n1 if grid.wrap else n1 - 1
    for i in range(n0 - 1):
        for j in range(ncols):
            j2 = (j + 1) % n1
            a, b = node_vertex[i, j], node_vertex[i + 1, j]
            c, d = node_vertex[i + 1, j2], node_vertex[i, j2]
            if seam and j2 == 0:
                c, d = seam_vertex[i + 1], seam_vertex[i]
            for tri in ((a, b, c), (a, c, d)):
                if min(tri) >= 0:
                    faces.append(tri)

    zs_arr = np.array(zs, complex)
    mesh = SurfaceMesh(
        z=zs_arr if grid.chart == IDENTITY else 1.0 / zs_arr,
        lift=np.array(lifts, complex).reshape(-1, 3),
        ds2=None, abs_g=None, singular=None,
        faces=np.array(faces, int).reshape(-1, 3),
        polylines=[], node_vertex=node_vertex,
        convention=data.convention, label=data.label, seam=seam,
    )
    mesh.ds2, mesh.abs_g, mesh.singular = _scalars(cdata, zs_arr)
    if with_curves and cdata.convention == MAXFACE and not cdata.g.is_constant():
        _append_curves(cdata, grid, mesh, node_lift, obs)
    return mesh


def _append_curves(cdata, grid, mesh, node_lift, obs):
    curves = grid.curves
    if curves is None:
        _, curves = singular_curves(cdata, grid.region())
    extra_z, extra_paths, extra_start = [], [], []
    pending = []
    valid = [ij for ij in sorted(node_lift)]
    vnodes = np.array([grid.nodes[ij] for ij in valid])

    def attach(z):
        k = int(np.argmin(np.abs(vnodes - z)))
        extra_z.append(z)
        extra_paths.append(route(vnodes[k], z, obs))
        extra_start.append(node_lift[valid[k]])
        return len(mesh.z) + len(extra_z) - 1

    for n, cv in enumerate(curves):
        rho = _centered_radius(cv, grid.spec.center) if grid.kind == "polar" else None
        ring = None
        if rho is not None and rho in grid.snapped_radii:
            ring = int(np.argmin(np.abs(np.abs(grid.nodes[:, 0] - grid.spec.center) - rho)))
        if ring is not None and grid.mask[ring].all():
            idx = [int(v) for v in mesh.node_vertex[ring]]
            pending.append(Polyline(f"singular_{n}", idx, True))
        else:
            idx = [attach(complex(z)) for z in cv.points]
            pending.append(Polyline(f"singular_{n}", idx, cv.closed))
        for z in cv.swallowtail_points:
            pending.append(Polyline("swallowtail", [attach(complex(z))], False))
    if extra_z:
        inc = lift_many(cdata, extra_paths)
        lifts = np.array(extra_start) + inc
        ez = np.array(extra_z, complex)
        ds2, ag, sing = _scalars(cdata, ez)
        mesh.z = np.concatenate([mesh.z, ez if grid.chart == IDENTITY else 1.0 / ez])
        mesh.lift = np.concatenate([mesh.lift, lifts])
        mesh.ds2 = np.concatenate([mesh.ds2, ds2])
        mesh.abs_g = np.concatenate([mesh.abs_g, ag])
        mesh.singular = np.concatenate([mesh.singular, np.ones(len(ez), bool)])
    mesh.polylines.extend(pending)


# -- export ------------------------------------------------------------------

def _num(x: float) -> str:
    return repr(float(x))


def obj_text(mesh: SurfaceMesh) -> str:
    """OBJ with Lorentzian coordinates written as ``x1 x2 x0`` (time axis up)."""
    out = []
    P = mesh.positions
    if mesh.convention == MAXFACE:
        P = P[:, [1, 2, 0]]
    for p in P:
        out.append(f"v {_num(p[0])} {_num(p[1])} {_num(p[2])}")
    for f in mesh.faces:
        out.append(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}")
    for pl in mesh.polylines:
        idx = [i + 1 for i in pl.indices]
        if pl.closed and len(idx) > 1:
            idx.append(idx[0])
        out.append(f"# {pl.label}")
        out.append(("l " if len(idx) > 1 else "p ") + " ".join(map(str, idx)))
    return "\n".join(out) + "\n"


def parse_obj(text: str) -> dict:
    """Minimal OBJ reader returning vertices (as written), faces and polylines (0-based)."""
    verts, faces, lines = [], [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(x.split("/")[0]) - 1 for x in parts[1:]])
        elif parts[0] in ("l", "p"):
            lines.append([int(x) - 1 for x in parts[1:]])
    return {"vertices": np.array(verts).reshape(-1, 3), "faces": faces, "polylines": lines}


CSV_HEADER = ["z_re", "z_im", "x0", "x1", "x2", "ds2_factor", "abs_g", "singular"]


def csv_text(mesh: SurfaceMesh) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for z, p, d, a, s in zip(mesh.z, mesh.positions, mesh.ds2, mesh.abs_g, mesh.singular):
        w.writerow([_num(z.real), _num(z.imag), _num(p[0]), _num(p[1]), _num(p[2]),
                    _num(d), _num(a), int(bool(s))])
    return buf.getvalue()


def report_text(obj) -> str:
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    elif isinstance(obj, SurfaceMesh):
        obj = obj.report or {}
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serialisable: {type(o).__name__}")


def export(obj, fmt: str, destination=None) -> bytes:
    """Serialise a mesh (``obj``, ``csv``) or report (``report-json``) and optionally write it.

    ``destination`` may be a path or a binary/text file object.
    """
    if fmt == "obj":
        text = obj_text(obj)
    elif fmt == "csv":
        text = csv_text(obj)
    elif fmt == "report-json":
        text = report_text(obj)
    else:
        raise ValidationError(f"unknown export format {fmt!r}")
    data = text.encode()
    if destination is None:
        return data
    try:
        if isinstance(destination, (str, os.PathLike)):
            with open(destination, "wb") as fh:
                fh.write(data)
        elif isinstance(destination, io.TextIOBase):
            destination.write(text)
        else:
            destination.write(data)
    except OSError as exc:
        raise IOFailure(f"cannot write {destination}: {exc}") from exc
    return data
