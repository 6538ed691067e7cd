"""JSON surface descriptions.

A description is an object with ``label``, ``g`` and ``omega_hat`` (each
``{"num": [[re, im], ...], "den": [[re, im], ...]}``, lowest degree first),
``punctures`` (``[re, im]`` pairs or ``"inf"``) and ``base_point`` (``[re, im]``).
An optional ``convention`` of ``"minimal"`` marks Euclidean minimal data.
"""
from __future__ import annotations

import json
import math

from .core import INF, Polynomial, RationalMap, is_inf
from .errors import IOFailure, NonRationalInput, ValidationError
from .weierstrass import MAXFACE, MINIMAL, WeierstrassData


def _complex(v, where: str) -> complex:
    if isinstance(v, bool) or not isinstance(v, (list, tuple)) or len(v) != 2:
        raise ValidationError(f"{where}: expected a [re, im] pair, got {v!r}")
    re, im = v
    for x in (re, im):
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
            raise ValidationError(f"{where}: expected finite numbers, got {v!r}")
    return complex(float(re), float(im))


def _poly(v, where: str) -> Polynomial:
    if isinstance(v, str):
        raise NonRationalInput(f"{where}: expression strings such as {v!r} are not accepted; "
                               "give coefficient pairs lowest degree first")
    if not isinstance(v, list) or not v:
        raise ValidationError(f"{where}: expected a non-empty list of [re, im] coefficient pairs")
    return Polynomial([_complex(c, f"{where}[{k}]") for k, c in enumerate(v)])


def _rational(v, where: str) -> RationalMap:
    if isinstance(v, str):
        raise NonRationalInput(f"{where}: expression strings such as {v!r} are not accepted; "
                               "give {\"num\": [...], \"den\": [...]} coefficient pairs")
    if not isinstance(v, dict):
        raise ValidationError(f"{where}: expected an object with 'num' and 'den'")
    missing = {"num", "den"} - set(v)
    if missing:
        raise ValidationError(f"{where}: missing {', '.join(sorted(missing))}")
    num = _poly(v["num"], f"{where}.num")
    den = _poly(v["den"], f"{where}.den")
    if den.is_zero():
        raise ValidationError(f"{where}.den: denominator is zero")
    try:
        return RationalMap(num, den)
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def from_dict(d: dict) -> WeierstrassData:
    """Parse a description object; errors name the offending field."""
    if not isinstance(d, dict):
        raise ValidationError("description must be a JSON object")
    for key in ("g", "omega_hat"):
        if key not in d:
            raise ValidationError(f"{key}: missing")
    g = _rational(d["g"], "g")
    w = _rational(d["omega_hat"], "omega_hat")
    raw = d.get("punctures", [])
    if not isinstance(raw, list):
        raise ValidationError("punctures: expected a list")
    punct = []
    for k, p in enumerate(raw):
        if p == "inf":
            punct.append(INF)
        else:
            punct.append(_complex(p, f"punctures[{k}]"))
    base = _complex(d.get("base_point", [0, 0]), "base_point")
    label = d.get("label", "")
    if not isinstance(label, str):
        raise ValidationError("label: expected a string")
    conv = d.get("convention", MAXFACE)
    if conv not in (MAXFACE, MINIMAL):
        raise ValidationError(f"convention: expected 'maxface' or 'minimal', got {conv!r}")
    return WeierstrassData(g, w, tuple(punct), base, label, conv)


def _pairs(p: Polynomial) -> list:
    c = p.coeffs if len(p.coeffs) else [0j]
    return [[float(complex(x).real), float(complex(x).imag)] for x in c]


def to_dict(data: WeierstrassData) -> dict:
    out = {
        "label": data.label,
        "g": {"num": _pairs(data.g.num), "den": _pairs(data.g.den)},
        "omega_hat": {"num": _pairs(data.omega_hat.num), "den": _pairs(data.omega_hat.den)},
        "punctures": ["inf" if is_inf(p) else [p.real, p.imag] for p in data.punctures],
        "base_point": [complex(data.base_point).real, complex(data.base_point).imag],
    }
    if data.convention != MAXFACE:
        out["convention"] = data.convention
    return out


def loads(text: str) -> WeierstrassData:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not valid JSON: {exc}") from exc
    return from_dict(d)


def dumps(data: WeierstrassData) -> str:
    return json.dumps(to_dict(data), indent=2) + "\n"


def load(path) -> WeierstrassData:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from exc
    return loads(text)


def save(data: WeierstrassData, path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dumps(data))
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc
