"""Independent reference computations used across the tests."""
import math

import numpy as np

from maxface.core import is_inf
from maxface.core.quadrature import Path, Segment, integrate_pieces
from maxface.gallery import gallery
from maxface.weierstrass import metric_and_curvature

LORENTZ = np.diag([-1.0, 1.0, 1.0])

GALLERY = [
    ("plane", {}),
    ("catenoid", {"a": 1.0}),
    ("catenoid", {"a": -0.7}),
    ("enneper", {}),
    ("lopez-ros-catenoid", {"a": 1.0, "lam": 2.0}),
    ("lopez-ros-enneper", {"lam": 0.5}),
    ("jorge-meeks-companion", {"n": 2}),
    ("jorge-meeks-companion", {"n": 3}),
    ("jorge-meeks-companion", {"n": 4}),
]


def gallery_data():
    return [gallery(name, **params) for name, params in GALLERY]


def ids():
    return [f"{n}-{'-'.join(f'{k}{v:g}' for k, v in p.items())}".rstrip("-") for n, p in GALLERY]


def lorentz(u, v):
    return float(np.asarray(u) @ LORENTZ @ np.asarray(v))


def catenoid_closed_form(z, a=1.0):
    """Re of the antiderivatives ``-2a log z, a(z - 1/z), i a(-1/z - z)`` with base point 1."""
    z = np.asarray(z, complex)
    r, th = np.abs(z), np.angle(z)
    return np.stack([-2 * a * np.log(r), a * (r - 1 / r) * np.cos(th), a * (r - 1 / r) * np.sin(th)], axis=-1)


def enneper_closed_form(z):
    z = np.asarray(z, complex)
    return np.stack([(-z ** 2).real, (z + z ** 3 / 3).real, (1j * (z - z ** 3 / 3)).real], axis=-1)


def regular_points(data, n, rng, radius=2.0, band=0.1, keep=0.15):
    """Random points away from punctures, poles of the forms and the singular set."""
    obs = data.obstacles
    out = []
    while len(out) < n:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if any(abs(z - p) < keep for p in obs):
            continue
        gv = data.g(z)
        if is_inf(gv) or abs(abs(gv) - 1) <= band:
            continue
        if abs(data.omega_hat(z)) < 1e-3:
            continue
        out.append(z)
    return out


def _secant(data, z, h):
    pieces = [Segment(z - h, z + h), Segment(z - 1j * h, z + 1j * h)]
    phi = data.phi
    vals = integrate_pieces(lambda w: np.stack([p.eval_array(w) for p in phi]), pieces, 1e-14)
    return vals[:, 0].real / (2 * h), vals[:, 1].real / (2 * h)


def local_derivatives(data, z, h=None):
    """``f_u, f_v`` by Richardson-extrapolated central differences of the immersion."""
    if h is None:
        h = 1e-2 * feature_size(data, z)
    (u1, v1), (u2, v2) = _secant(data, z, h), _secant(data, z, h / 2)
    return (4 * u2 - u1) / 3, (4 * v2 - v1) / 3


def feature_size(data, z):
    """Rough distance from ``z`` to the singular set and to the obstacles."""
    d = [abs(z - p) for p in data.obstacles] + [1.0]
    gv, dg = data.g(z), data.dg(z)
    if not is_inf(gv) and not is_inf(dg) and abs(dg) > 0:
        d.append(abs(abs(gv) - 1) / abs(dg))
    return min(d)


def fd_curvature(data, z, h=None):
    """``-Laplacian(log c) / c^2`` with ``c^2 = ds2_factor``, fourth-order stencil."""
    if h is None:
        h = 0.05 * feature_size(data, z)
    def logc(w):
        return 0.5 * math.log(metric_and_curvature(data, w)[0])

    def d2(e):
        return (-logc(z + 2 * h * e) + 16 * logc(z + h * e) - 30 * logc(z)
                + 16 * logc(z - h * e) - logc(z - 2 * h * e)) / (12 * h * h)

    c2 = metric_and_curvature(data, z)[0]
    return -(d2(1) + d2(1j)) / c2


def plane_fit_residual(points):
    P = np.asarray(points, float)
    P = P - P.mean(axis=0)
    return float(np.linalg.svd(P, compute_uv=False)[-1])
