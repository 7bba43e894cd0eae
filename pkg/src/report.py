"""Verification reports — exact/numeric identity comparison and rendering."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from jinja2 import Environment, FileSystemLoader

from src.series import Series, SeriesError, first_difference
from src.series_codec import format_monomial

log = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent
TEMPLATES_DIR = PROJECT_ROOT / "templates"

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 3}


@dataclass
class VerificationReport:
    identity: str
    status: str
    params: dict = field(default_factory=dict)
    caps: dict = field(default_factory=dict)
    first_difference: dict | None = None
    residual: float | None = None
    tol: float | None = None
    tail_bound: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_dict(self) -> dict:
        return asdict(self)


class IdentityMismatchError(SeriesError):
    def __init__(self, report: VerificationReport):
        self.report = report
        diff = report.first_difference or {}
        super().__init__(
            f"{report.identity} failed at {diff.get('monomial', '?')}: "
            f"{diff.get('left', '?')} != {diff.get('right', '?')}"
        )


def perturbed(f: Series) -> Series:
    """Add 1 to the coefficient of the largest stored monomial (checker self-test)."""
    if f.is_zero:
        return f + 1
    exps, c = f.items()[-1]
    terms = f.terms
    terms[exps] = c + 1
    return Series(f.ring, terms)


def compare_series(identity: str, left: Series, right: Series, params: dict | None = None,
                   left_name: str = "lhs", right_name: str = "rhs") -> VerificationReport:
    """Exact term-map comparison reporting the lexicographically first difference."""
    diff = first_difference(left, right)
    report = VerificationReport(
        identity=identity,
        status=PASS if diff is None else FAIL,
        params=dict(params or {}),
        caps=left.ring.caps_dict(),
    )
    if diff is not None:
        exps, a, b = diff
        report.first_difference = {
            "monomial": format_monomial(left.ring.names, exps) or "1",
            "exponents": list(exps),
            "left_name": left_name,
            "left": str(a),
            "right_name": right_name,
            "right": str(b),
        }
    log.info(
        f"{identity}: {left_name} vs {right_name} -> {report.status}",
        extra={"identity": identity, "status": report.status, "terms": len(left)},
    )
    return report


def compare_pipelines(identity: str, pipelines: dict[str, Series], params: dict | None = None,
                      perturb: bool = False) -> VerificationReport:
    """Compare every pipeline against the first; the first failing pair is reported."""
    names = list(pipelines)
    reference = pipelines[names[0]]
    if perturb:
        reference = perturbed(reference)
    report = None
    for name in names[1:]:
        report = compare_series(identity, reference, pipelines[name], params,
                                left_name=names[0], right_name=name)
        if not report.passed:
            break
    report.notes.append("pipelines: " + ", ".join(names))
    return report


def require_equal(identity: str, left: Series, right: Series, params: dict | None = None):
    report = compare_series(identity, left, right, params)
    if not report.passed:
        raise IdentityMismatchError(report)
    return report


def render_report(report: VerificationReport, as_json: bool = False) -> str:
    if as_json:
        return json.dumps(report.to_dict(), sort_keys=True, default=_json_default)
    env = Environment(loader=FileSystemLoader(str(TEMPLATES_DIR)), autoescape=False)
    template = env.get_template("report.txt.j2")
    return template.render(**report.to_dict()).rstrip() + "\n"


def _json_default(value):
    if isinstance(value, Fraction):
        return str(value)
    raise TypeError(f"Not JSON serializable: {type(value).__name__}")
