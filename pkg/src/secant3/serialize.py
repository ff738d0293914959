"""Versioned JSON codecs for every value the CLI reads or writes.

All documents carry ``"schema": "secant3/1"``.  Rationals serialize as
``"num/den"`` strings (denominator omitted when 1), complex values as
``[re, im]`` pairs of decimal strings; output is emitted with sorted keys
so exact-mode runs are byte-identical across platforms.
"""

from __future__ import annotations

import json

from .decompose import (Certificate, Jet3, PointPlusTangent, ThreePoints,
                        TwoTangentsOnLine)
from .errors import InvalidInput
from .curves import CurveMap
from .scalars import format_scalar, parse_scalar
from .sylvester import RncDecomposition
from .tensorspace import (Decomposition, Format, JetScheme, MultiJet, PSTensor)

SCHEMA = "secant3/1"


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _check_schema(doc):
    if not isinstance(doc, dict):
        raise InvalidInput("expected a JSON object")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise InvalidInput(f"unsupported schema {schema!r}, expected {SCHEMA!r}")
    return doc


# -- format -----------------------------------------------------------------

def format_to_json(fmt: Format) -> dict:
    return {"k": fmt.k, "n": list(fmt.n), "d": list(fmt.d)}


def format_from_json(doc) -> Format:
    if not isinstance(doc, dict) or "n" not in doc or "d" not in doc:
        raise InvalidInput("format needs 'n' and 'd' lists")
    fmt = Format(tuple(doc["n"]), tuple(doc["d"]))
    if "k" in doc and int(doc["k"]) != fmt.k:
        raise InvalidInput("format field 'k' disagrees with 'n'")
    return fmt


# -- scalars / vectors ------------------------------------------------------

def _vec_to_json(v):
    return [format_scalar(x) for x in v]


def _vec_from_json(doc):
    return tuple(parse_scalar(x) for x in doc)


def point_to_json(x) -> list:
    return [_vec_to_json(v) for v in x]


def point_from_json(doc):
    return tuple(_vec_from_json(v) for v in doc)


# -- tensors ----------------------------------------------------------------

def tensor_to_json(t: PSTensor) -> dict:
    return {"schema": SCHEMA, "format": format_to_json(t.format),
            "coeffs": _vec_to_json(t.coeffs)}


def tensor_from_json(doc) -> PSTensor:
    doc = _check_schema(doc)
    fmt = format_from_json(doc["format"])
    return PSTensor(fmt, _vec_from_json(doc["coeffs"]))


# -- jets -------------------------------------------------------------------

def jet_to_json(jet: JetScheme) -> dict:
    return {"schema": SCHEMA, "format": format_to_json(jet.format),
            "order": jet.order,
            "factors": [[_vec_to_json(p) for p in factor]
                        for factor in jet.factors]}


def jet_from_json(doc) -> JetScheme:
    doc = _check_schema(doc)
    fmt = format_from_json(doc["format"])
    factors = tuple(tuple(_vec_from_json(p) for p in factor)
                    for factor in doc["factors"])
    return JetScheme(fmt, int(doc["order"]), factors)


def multijet_to_json(mj: MultiJet) -> dict:
    return {"schema": SCHEMA,
            "components": [jet_to_json(c) for c in mj.components]}


def multijet_from_json(doc) -> MultiJet:
    doc = _check_schema(doc)
    return MultiJet(tuple(jet_from_json(c) for c in doc["components"]))


# -- curves -----------------------------------------------------------------

def curve_to_json(curve: CurveMap) -> dict:
    return {"schema": SCHEMA, "format": format_to_json(curve.format),
            "multidegree": list(curve.multidegree),
            "factors": [[_vec_to_json(f) for f in forms]
                        for forms in curve.factors]}


def curve_from_json(doc) -> CurveMap:
    doc = _check_schema(doc)
    fmt = format_from_json(doc["format"])
    factors = tuple(tuple(_vec_from_json(f) for f in forms)
                    for forms in doc["factors"])
    return CurveMap(fmt, factors)


# -- decompositions ---------------------------------------------------------

def decomposition_to_json(dec: Decomposition) -> dict:
    return {"schema": SCHEMA, "format": format_to_json(dec.format),
            "terms": [{"coeff": format_scalar(c), "point": point_to_json(x)}
                      for c, x in dec.terms]}


def decomposition_from_json(doc) -> Decomposition:
    doc = _check_schema(doc)
    fmt = format_from_json(doc["format"])
    terms = tuple((parse_scalar(t["coeff"]), point_from_json(t["point"]))
                  for t in doc["terms"])
    return Decomposition(fmt, terms)


def rnc_to_json(dec: RncDecomposition) -> dict:
    return {"schema": SCHEMA, "a": dec.degree,
            "params": [[format_scalar(s), format_scalar(t)]
                       for s, t in dec.params],
            "coeffs": [format_scalar(c) for c in dec.coeffs]}


# -- certificates -----------------------------------------------------------

def certificate_to_json(cert: Certificate) -> dict:
    doc = {"schema": SCHEMA, "bound": cert.bound, "size": cert.size,
           "mode": cert.mode, "residual": cert.residual,
           "flatteningMaxRank": cert.flattening_max_rank, "seed": cert.seed,
           "status": cert.status, "fallback": cert.fallback,
           "inputDigest": cert.input_digest,
           "timings": {k: round(v, 6) for k, v in cert.timings.items()}}
    if cert.border_slope is not None:
        doc["borderSlope"] = cert.border_slope
    if cert.lower_bound_note:
        doc["lowerBoundNote"] = cert.lower_bound_note
    return doc


# -- presentations ----------------------------------------------------------

def presentation_to_json(pres) -> dict:
    if isinstance(pres, ThreePoints):
        return {"schema": SCHEMA, "type": "three_points",
                "points": [point_to_json(x) for x in pres.points()]}
    if isinstance(pres, PointPlusTangent):
        return {"schema": SCHEMA, "type": "point_plus_tangent",
                "point": point_to_json(pres.point), "jet": jet_to_json(pres.jet)}
    if isinstance(pres, Jet3):
        return {"schema": SCHEMA, "type": "jet3", "jet": jet_to_json(pres.jet)}
    if isinstance(pres, TwoTangentsOnLine):
        return {"schema": SCHEMA, "type": "two_tangents_on_line",
                "v": jet_to_json(pres.v), "w": jet_to_json(pres.w),
                "sharedFactor": pres.shared_factor}
    raise InvalidInput(f"cannot serialize {type(pres).__name__}")


def presentation_from_json(doc):
    doc = _check_schema(doc)
    kind = doc.get("type")
    if kind == "three_points":
        pts = [point_from_json(x) for x in doc["points"]]
        return ThreePoints(*pts)
    if kind == "point_plus_tangent":
        return PointPlusTangent(point_from_json(doc["point"]),
                                jet_from_json(doc["jet"]))
    if kind == "jet3":
        return Jet3(jet_from_json(doc["jet"]))
    if kind == "two_tangents_on_line":
        return TwoTangentsOnLine(jet_from_json(doc["v"]),
                                 jet_from_json(doc["w"]),
                                 int(doc["sharedFactor"]))
    if kind == "multijet" or "components" in doc:
        return multijet_from_json(doc)
    raise InvalidInput(f"unknown presentation type {kind!r}")
