"""Central tolerance record shared by every module.

``MAXFACE_TOL`` in the environment may override it, either as a plain float
(applied to ``zero_tol``) or as a JSON object of field overrides.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    eval_tol: float = 1e-12
    zero_tol: float = 1e-9          # relative "numerically zero" for classification of data
    quad_tol: float = 1e-10
    coprime_tol: float = 1e-9
    root_cluster_tol: float = 1e-8
    class_tol: float = 1e-7         # tau band for singular-point classification
    trace_tol: float = 1e-10        # | |g|^2 - 1 | on traced samples
    period_tol: float = 1e-9
    guard_factor: float = 1e-3      # guard radius = guard_factor * local pole spacing
    detour_factor: float = 0.25     # auto-routing arc radius = detour_factor * spacing


def _from_env() -> Tolerances:
    raw = os.environ.get("MAXFACE_TOL")
    base = Tolerances()
    if not raw:
        return base
    raw = raw.strip()
    try:
        return replace(base, zero_tol=float(raw))
    except ValueError:
        pass
    overrides = json.loads(raw)
    known = {f.name for f in fields(Tolerances)}
    unknown = set(overrides) - known
    if unknown:
        raise ValueError(f"MAXFACE_TOL: unknown fields {sorted(unknown)}")
    return replace(base, **{k: float(v) for k, v in overrides.items()})


TOL = _from_env()
