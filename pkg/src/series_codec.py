"""Series Codec — canonical JSON and human-readable forms of a Series."""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path

import jsonschema

from src.series import Series, UsageError, VarTable

log = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent
SCHEMA_PATH = PROJECT_ROOT / "templates" / "series.schema.json"

_schema_cache: dict | None = None


def _schema() -> dict:
    global _schema_cache
    if _schema_cache is None:
        with open(SCHEMA_PATH) as f:
            _schema_cache = json.load(f)
    return _schema_cache


def to_json(f: Series) -> dict:
    """Series -> JSON-ready dict with terms sorted by exponent vector."""
    return {
        "vars": list(f.ring.names),
        "caps": list(f.ring.caps),
        "terms": [
            {"e": list(e), "n": str(c.numerator), "d": str(c.denominator)}
            for e, c in f.items()
        ],
    }


def dumps(f: Series) -> str:
    return json.dumps(to_json(f), separators=(",", ":"))


def from_json(payload: dict | str) -> Series:
    """Parse and validate a Series document; malformed input is a UsageError."""
    if isinstance(payload, str):
        try:
            payload = json.loads(payload)
        except json.JSONDecodeError as e:
            raise UsageError(f"Series document is not valid JSON: {e}")
    try:
        jsonschema.validate(payload, _schema())
    except jsonschema.ValidationError as e:
        raise UsageError(f"Series document rejected: {e.message}")

    ring = VarTable(tuple(payload["vars"]), tuple(payload["caps"]))
    terms = {}
    for item in payload["terms"]:
        exps = tuple(item["e"])
        if len(exps) != ring.arity:
            raise UsageError(f"Term {exps} has wrong arity for {ring.names}")
        if not ring.fits(exps):
            raise UsageError(f"Term {exps} exceeds caps {ring.caps}")
        value = Fraction(int(item["n"]), int(item["d"]))
        if value == 0:
            raise UsageError(f"Zero coefficient stored for {exps}")
        terms[exps] = value
    log.debug(f"decoded series over {ring.names} with {len(terms)} terms")
    return Series(ring, terms)


def format_monomial(names: tuple[str, ...], exps: tuple[int, ...]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_series(f: Series) -> str:
    """Human-readable polynomial, terms in lexicographic exponent order."""
    if f.is_zero:
        return "0"
    pieces = []
    for exps, c in f.items():
        mono = format_monomial(f.ring.names, exps)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text
