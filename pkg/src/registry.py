"""Identity Registry — maps each verifiable identity name to its checker."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

from src import binpart, qseries, vpv
from src.report import VerificationReport, compare_pipelines, compare_series, perturbed
from src.series import UsageError, mul, project

log = logging.getLogger(__name__)


@dataclass
class CheckRequest:
    n: int | None = None
    k: int | None = None
    caps: dict[str, int] = field(default_factory=dict)
    default_cap: int = 4
    numeric_cap: int = 40
    tol: float = 1e-6
    b: tuple[float, ...] | None = None
    point: tuple[float, ...] | None = None
    perturb: bool = False


Checker = Callable[[CheckRequest], VerificationReport]

CHECKERS: dict[str, Checker] = {}


def register(name: str):
    def wrap(fn: Checker) -> Checker:
        CHECKERS[name] = fn
        return fn
    return wrap


def identity_names() -> list[str]:
    return list(CHECKERS)


def run_check(name: str, request: CheckRequest) -> VerificationReport:
    if name not in CHECKERS:
        raise UsageError(f"Unknown identity {name!r}; choose from {', '.join(CHECKERS)}")
    start = time.perf_counter()
    report = CHECKERS[name](request)
    elapsed = round(time.perf_counter() - start, 3)
    log.info(
        f"{name}: {report.status} in {elapsed}s",
        extra={"identity": name, "status": report.status, "elapsed": elapsed},
    )
    return report


def _caps_for(request: CheckRequest, names: tuple[str, ...]) -> dict[str, int]:
    unknown = set(request.caps) - set(names)
    if unknown:
        raise UsageError(f"Caps given for unknown variables {sorted(unknown)}; expected {list(names)}")
    return {name: request.caps.get(name, request.default_cap) for name in names}


def _dimension(request: CheckRequest, default: int, lowest: int = 1) -> int:
    n = default if request.n is None else request.n
    if n < lowest:
        raise UsageError(f"--n must be at least {lowest}, got {n}")
    return n


@register("qbinom")
def check_qbinom(request: CheckRequest) -> VerificationReport:
    spec = qseries.FnSpec(n=1, caps=request.caps, default_cap=request.default_cap)
    pipelines = {
        "sum": qseries.qbinom_sum(spec),
        "product": qseries.qbinom_product(spec),
        "newton": qseries.expand_F_newton(spec),
    }
    return compare_pipelines("qbinom", pipelines, {"n": 1}, request.perturb)


@register("fn-det")
def check_fn_det(request: CheckRequest) -> VerificationReport:
    n = _dimension(request, 2)
    spec = qseries.FnSpec(n=n, caps=request.caps, default_cap=request.default_cap)
    pipelines = {
        "product": qseries.expand_F_product(spec),
        "det": qseries.expand_F_det(spec),
        "newton": qseries.expand_F_newton(spec),
    }
    return compare_pipelines("fn-det", pipelines, {"n": n}, request.perturb)


@register("gn-det")
def check_gn_det(request: CheckRequest) -> VerificationReport:
    n = _dimension(request, 2)
    spec = qseries.GnSpec(n=n, caps=request.caps, default_cap=request.default_cap)
    pipelines = {
        "product": qseries.expand_G_product(spec),
        "det": qseries.expand_G_det(spec),
        "newton": qseries.expand_G_newton(spec),
    }
    return compare_pipelines("gn-det", pipelines, {"n": n}, request.perturb)


@register("macmahon")
def check_macmahon(request: CheckRequest) -> VerificationReport:
    k = 2 if request.k is None else request.k
    cap = _caps_for(request, ("q",))["q"]
    lhs = qseries.macmahon_lhs(k, cap)
    if request.perturb:
        lhs = perturbed(lhs)
    return compare_series("macmahon", lhs, qseries.macmahon_rhs(k, cap), {"k": k},
                          left_name="specialized", right_name="product")


@register("functional-eq")
def check_functional_eq(request: CheckRequest) -> VerificationReport:
    n = _dimension(request, 2)
    spec = qseries.FnSpec(n=n, caps=request.caps, default_cap=request.default_cap)
    return qseries.functional_eq_check(n, spec, perturb=request.perturb)


@register("quotient-5-6")
def check_g1_quotient(request: CheckRequest) -> VerificationReport:
    caps = _caps_for(request, ("q", "t"))
    pipelines = qseries.g1_quotient_pipelines(caps, request.default_cap)
    ring = pipelines["quotient"].ring
    if caps["t"] <= 4:
        displayed = qseries.g1_quotient_displayed_coefficients(caps["q"])
        assembled = ring.one()
        for k in range(1, caps["t"] + 1):
            assembled = assembled + mul(project(displayed[k - 1], ring), ring.var("t", k)).scale(Fraction(1, factorial(k)))
        pipelines["displayed"] = assembled
    return compare_pipelines("quotient-5-6", pipelines, {}, request.perturb)


@register("vpv-axis")
def check_vpv_axis(request: CheckRequest) -> VerificationReport:
    n = _dimension(request, 3, lowest=2)
    ring = vpv.vpv_ring(n, request.caps, request.default_cap)
    pipelines = {
        "product": vpv.vpv_product_expand(vpv.Region(vpv.AXIS_EXTENDED, n), ring, vpv.DIRECT),
        "rhs": vpv.axis_rhs(ring),
        "binomial": vpv.axis_binomial_terms(ring),
    }
    return compare_pipelines("vpv-axis", pipelines, {"n": n}, request.perturb)


@register("vpv-pyramid")
def check_vpv_pyramid(request: CheckRequest) -> VerificationReport:
    n = _dimension(request, 2, lowest=2)
    ring = vpv.vpv_ring(n, request.caps, request.default_cap)
    pipelines = {
        "product": vpv.vpv_product_expand(vpv.Region(vpv.HYPERPYRAMID, n), ring, vpv.RECIPROCAL),
        "rhs": vpv.pyramid_rhs(ring),
        "newton": vpv.pyramid_newton(ring),
    }
    if n == 2:
        pipelines["taylor"] = vpv.taylor_series(ring)
    return compare_pipelines("vpv-pyramid", pipelines, {"n": n}, request.perturb)


@register("vpv-numeric")
def check_vpv_numeric(request: CheckRequest) -> VerificationReport:
    b = request.b or (0.5, 0.5)
    point = request.point or (0.1,) * len(b)
    names = tuple(f"a{i}" for i in range(1, len(b) + 1))
    unknown = set(request.caps) - set(names)
    if unknown:
        raise UsageError(f"Numeric caps are named {list(names)}, got {sorted(unknown)}")
    bounds = tuple(request.caps.get(name, request.numeric_cap) for name in names)
    return vpv.numeric_verify_hyperquadrant(tuple(b), tuple(point), bounds, request.tol, perturb=request.perturb)


@register("binary-weights")
def check_binary_weights(request: CheckRequest) -> VerificationReport:
    caps = _caps_for(request, ("q", "t"))
    spec = binpart.BinPartSpec(q_cap=caps["q"], t_cap=caps["t"])
    pipelines = {
        "lhs": binpart.lhs_expand(spec),
        "rhs": binpart.rhs_expand(spec),
        "det": binpart.det_coeffs(spec),
        "recurrence": binpart.recurrence_expand(spec),
    }
    report = compare_pipelines("binary-weights", pipelines, {}, request.perturb)
    if not report.passed:
        return report
    functional = binpart.functional_eq_check(spec)
    if not functional.passed:
        return functional
    representation = binpart.binary_representation_check(spec)
    report.notes.append("f(t)(1-qt) = f(t^2) holds")
    if not representation.passed:
        return representation
    report.notes.append("distinct powers of two represent every k")
    return report

