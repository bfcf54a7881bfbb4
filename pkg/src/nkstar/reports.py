"""Report documents: the structured-text format every command emits.

One JSON document per command with fixed field names, so reports stay
re-parseable and byte-identical across runs of the same inputs and schema
version.  Timing fields ("elapsed-ms", "created-at") are the only volatile
parts; :func:`strip_volatile` removes them for identity comparisons.
"""

from __future__ import annotations

import json
from typing import Any

from .cuts import CutCertificate, SearchResult
from .harness import VerificationReport
from .perms import perm_text
from .stargraph import StarGraph

SCHEMA_VERSION = 1

_VOLATILE_KEYS = {"elapsed-ms", "created-at"}


def make_report(command: str, parameters: dict, status: str, body: dict,
                elapsed_ms: float) -> dict:
    doc: dict[str, Any] = {
        "schema-version": SCHEMA_VERSION,
        "command": command,
        "parameters": parameters,
        "status": status,
    }
    doc.update(body)
    doc["elapsed-ms"] = round(elapsed_ms, 3)
    return doc


def render(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def strip_volatile(doc: Any) -> Any:
    """Recursively drop timing fields; the remainder is the report identity."""
    if isinstance(doc, dict):
        return {key: strip_volatile(value) for key, value in doc.items()
                if key not in _VOLATILE_KEYS}
    if isinstance(doc, list):
        return [strip_volatile(item) for item in doc]
    return doc


def certificate_payload(g: StarGraph, cert: CutCertificate | None) -> dict | None:
    if cert is None:
        return None
    return {
        "cut": [perm_text(g.verts[v]) for v in cert.cut],
        "witness": [perm_text(g.verts[v]) for v in cert.witness],
        "h": cert.h,
        "size": cert.size,
        "valid": cert.valid,
    }


def certificate_from_payload(g: StarGraph, payload: dict | None) -> CutCertificate | None:
    if payload is None:
        return None
    from .perms import parse_perm

    return CutCertificate(
        cut=tuple(g.id_of(parse_perm(text)) for text in payload["cut"]),
        witness=tuple(g.id_of(parse_perm(text)) for text in payload["witness"]),
        h=payload["h"],
        valid=payload["valid"],
    )


def search_payload(g: StarGraph, result: SearchResult) -> dict:
    return {
        "value": result.value if result.value is not None else "none-found",
        "exhaustive_below": result.exhaustive_below,
        "certificate": certificate_payload(g, result.certificate),
        "budget_hit": result.budget_hit,
        "candidates_checked": result.candidates_checked,
        "checkpoint": list(result.checkpoint) if result.checkpoint else None,
        "elapsed-ms": round(result.elapsed_ms, 3),
    }


def search_from_payload(g: StarGraph, h: int, payload: dict) -> SearchResult:
    value = payload["value"]
    checkpoint = payload.get("checkpoint")
    return SearchResult(
        h=h,
        value=None if value == "none-found" else value,
        certificate=certificate_from_payload(g, payload.get("certificate")),
        exhaustive_below=payload["exhaustive_below"],
        elapsed_ms=payload.get("elapsed-ms", 0.0),
        budget_hit=payload["budget_hit"],
        candidates_checked=payload["candidates_checked"],
        checkpoint=tuple(checkpoint) if checkpoint else None,
    )


def verification_payload(report: VerificationReport) -> dict:
    return {
        "target": report.target,
        "parameters": report.parameters,
        "status": report.status,
        "details": report.details,
        "elapsed-ms": round(report.elapsed_ms, 3),
    }
