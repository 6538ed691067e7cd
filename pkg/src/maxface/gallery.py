"""Built-in example surfaces."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import INF, Polynomial, RationalMap
from .errors import UsageError, ValidationError
from .weierstrass import WeierstrassData, lopez_ros


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    params: dict
    summary: str
    build: Callable


def _plane():
    return WeierstrassData(RationalMap.const(0), RationalMap.const(1), (INF,), 0j, "plane")


def _catenoid(a: float = 1.0):
    w = RationalMap(Polynomial([a]), Polynomial([0, 0, 1]))
    return WeierstrassData(RationalMap.z(), w, (0j, INF), 1 + 0j, f"catenoid(a={a:g})")


def _enneper():
    return WeierstrassData(RationalMap.z(), RationalMap.const(1), (INF,), 0j, "enneper")


def _lopez_ros_catenoid(a: float = 1.0, lam: float = 2.0):
    return lopez_ros(_catenoid(a), lam)


def _lopez_ros_enneper(lam: float = 2.0):
    return lopez_ros(_enneper(), lam)


def _jorge_meeks_companion(n: int = 3):
    g = RationalMap(Polynomial.monomial(n - 1, 1j), Polynomial([1.0]))
    den = Polynomial([-1.0] + [0.0] * (n - 1) + [1.0])
    w = RationalMap(Polynomial([1.0]), den * den)
    roots = tuple(complex(np.exp(2j * math.pi * k / n)) for k in range(n))
    return WeierstrassData(g, w, roots, 0j, f"jorge-meeks-companion(n={n})")


ENTRIES = {
    "plane": GalleryEntry("plane", {}, "spacelike plane, g = 0, omega_hat = 1", _plane),
    "catenoid": GalleryEntry("catenoid", {"a": 1.0}, "g = z, omega_hat = a/z^2, ends at 0 and inf", _catenoid),
    "enneper": GalleryEntry("enneper", {}, "g = z, omega_hat = 1, one end at inf", _enneper),
    "lopez-ros-catenoid": GalleryEntry("lopez-ros-catenoid", {"a": 1.0, "lam": 2.0},
                                       "catenoid data deformed to (lam g, omega/lam)", _lopez_ros_catenoid),
    "lopez-ros-enneper": GalleryEntry("lopez-ros-enneper", {"lam": 2.0},
                                      "Enneper data deformed to (lam g, omega/lam)", _lopez_ros_enneper),
    "jorge-meeks-companion": GalleryEntry("jorge-meeks-companion", {"n": 3},
                                          "g = i z^(n-1), omega_hat = 1/(z^n - 1)^2, ends at the n-th roots of unity",
                                          _jorge_meeks_companion),
}


def names() -> list:
    return list(ENTRIES)


def gallery(name: str, **params) -> WeierstrassData:
    """Weierstrass data of a named example.  Unknown names or bad parameters raise UsageError."""
    entry = ENTRIES.get(name)
    if entry is None:
        raise UsageError(f"unknown gallery entry {name!r}; choose from {', '.join(ENTRIES)}")
    params = {k: v for k, v in params.items() if v is not None}
    extra = set(params) - set(entry.params)
    if extra:
        raise UsageError(f"{name} takes no parameter(s) {', '.join(sorted(extra))}")
    args = dict(entry.params, **params)
    if "a" in args:
        args["a"] = float(args["a"])
        if args["a"] == 0 or not math.isfinite(args["a"]):
            raise UsageError("a must be a finite nonzero real")
    if "lam" in args:
        args["lam"] = float(args["lam"])
        if args["lam"] == 0 or not math.isfinite(args["lam"]):
            raise UsageError("lam must be a finite nonzero real")
    if "n" in args:
        n = args["n"]
        if isinstance(n, float) and n.is_integer():
            n = int(n)
        if not isinstance(n, int) or isinstance(n, bool) or n < 2:
            raise UsageError("n must be an integer >= 2")
        args["n"] = n
    try:
        return entry.build(**args)
    except ValidationError as exc:
        raise UsageError(str(exc)) from exc
