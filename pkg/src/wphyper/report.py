"""JSON documents for family reports.

Integers are written as decimal strings so that no consumer loses precision;
rationals are written as ``"p/q"``.  :func:`report_from_json` inverts
:func:`report_to_json`.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from importlib import metadata

from .rationality import (Certificate, DelsarteDet, FamilyReport, Field, LinearCone,
                          LowDegree, QuadricBundle, TwoWeight)
from .singularities import CyclicQuotientType, SingularityVerdict

SCHEMA_ID = "wphyper-report/1"
CERTIFICATE_KINDS = {c.__name__: c for c in
                     (LinearCone, LowDegree, DelsarteDet, QuadricBundle, TwoWeight)}


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0.0.0"


def encode(value):
    """Convert ints, fractions and nested sequences to JSON-safe values."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {k: encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    raise TypeError(f"cannot encode {type(value).__name__}")


def _ints(values):
    return tuple(int(v) for v in values)


def _qtype(t: CyclicQuotientType) -> dict:
    return {"r": str(t.r), "weights": encode(t.c), "text": str(t)}


def certificate_to_json(cert: Certificate) -> dict:
    fields = {f.name: encode(getattr(cert, f.name)) for f in dataclasses.fields(cert)
              if f.name != "assumptions"}
    return {"kind": cert.kind, "fields": fields, "witness": encode(cert.witness()),
            "assumptions": list(cert.assumptions)}


def certificate_from_json(doc: dict) -> Certificate:
    cls = CERTIFICATE_KINDS[doc["kind"]]
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name == "assumptions":
            continue
        raw = doc["fields"][f.name]
        if isinstance(raw, str) and f.name != "scope":
            kwargs[f.name] = int(raw)
        elif f.name == "rows":
            kwargs[f.name] = tuple(_ints(r) for r in raw)
        elif isinstance(raw, list):
            kwargs[f.name] = _ints(raw)
        else:
            kwargs[f.name] = raw
    return cls(**kwargs, assumptions=tuple(doc["assumptions"]))


def _verdict_to_json(v: SingularityVerdict | None):
    if v is None:
        return None
    return {
        "klt": v.klt, "canonical": v.canonical, "terminal": v.terminal,
        "witnesses": [{"subset": encode(s), "type": _qtype(t), "failsAt": str(i), "mode": m}
                      for s, t, i, m in v.witnesses],
        "undecided": [{"subset": encode(s), "type": _qtype(t)} for s, t in v.undecided],
    }


def _qtype_from(doc) -> CyclicQuotientType:
    return CyclicQuotientType(int(doc["r"]), _ints(doc["weights"]))


def _verdict_from_json(doc) -> SingularityVerdict | None:
    if doc is None:
        return None
    return SingularityVerdict(
        doc["klt"], doc["canonical"], doc["terminal"],
        [(_ints(w["subset"]), _qtype_from(w["type"]), int(w["failsAt"]), w["mode"])
         for w in doc["witnesses"]],
        [(_ints(u["subset"]), _qtype_from(u["type"])) for u in doc["undecided"]])


def _opt_int(x):
    return None if x is None else str(x)


def report_to_json(report: FamilyReport, echo: dict | None = None) -> dict:
    v = report.singularities
    certs = report.certificates
    family = [c for c in certs if getattr(c, "scope", "family") == "family"]
    assumptions = sorted({a for c in certs for a in c.assumptions})
    return {
        "schema": SCHEMA_ID,
        "tool": {"name": "wphyper", "version": tool_version()},
        "input": encode(echo or {"weights": list(report.weights), "degree": report.degree}),
        "weights": encode(report.weights),
        "sortedWeights": encode(sorted(report.weights, reverse=True)),
        "degree": str(report.degree),
        "dimension": str(report.dimension),
        "field": {"characteristic": str(report.base_field.characteristic),
                  "algebraicallyClosed": report.base_field.algebraically_closed},
        "wellFormed": report.well_formed,
        "fano": report.fano,
        "degreeCriterion": report.degree_criterion,
        "monomialCount": str(report.monomial_count),
        "basisSize": str(report.basis_size),
        "basisComplete": report.basis_complete,
        "dimAut": _opt_int(report.dim_aut),
        "moduliLowerBound": _opt_int(report.moduli_lower_bound),
        "quasismooth": report.quasismooth,
        "klt": None if v is None else v.klt,
        "canonical": None if v is None else v.canonical,
        "terminal": None if v is None else v.terminal,
        "singularities": _verdict_to_json(v),
        "rational": family[0].kind if family else None,
        "certificates": [certificate_to_json(c) for c in certs],
        "assumptions": assumptions,
        "answersQuestion": report.answers_question,
        "notes": list(report.notes),
    }


def report_from_json(doc: dict) -> FamilyReport:
    f = doc["field"]
    return FamilyReport(
        weights=_ints(doc["weights"]),
        degree=int(doc["degree"]),
        base_field=Field(int(f["characteristic"]), f["algebraicallyClosed"]),
        well_formed=doc["wellFormed"],
        fano=doc["fano"],
        degree_criterion=doc["degreeCriterion"],
        monomial_count=int(doc["monomialCount"]),
        basis_size=int(doc["basisSize"]),
        basis_complete=doc["basisComplete"],
        dim_aut=None if doc["dimAut"] is None else int(doc["dimAut"]),
        moduli_lower_bound=(None if doc["moduliLowerBound"] is None
                            else int(doc["moduliLowerBound"])),
        quasismooth=doc["quasismooth"],
        singularities=_verdict_from_json(doc["singularities"]),
        certificates=[certificate_from_json(c) for c in doc["certificates"]],
        answers_question=doc["answersQuestion"],
        notes=list(doc["notes"]),
    )

