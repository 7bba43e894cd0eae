"""VPV — visible point vector products over lattice regions.

A visible point vector has coordinates with gcd 1. Every nonzero lattice point
of a region is a unique positive multiple of one of them, which turns products
over VPVs into exponentials of plain lattice sums. Exact mode uses the weight
1/a_n (last coordinate); the general-powers weight 1/prod a_i^b_i is checked
numerically through polylogarithms.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product as cartesian

from src.detkit import PowerSums, newton_coeffs
from src.report import FAIL, INCONCLUSIVE, PASS, VerificationReport
from src.series import (
    Series,
    SeriesError,
    Term,
    UsageError,
    VarTable,
    binomial_power,
    coeff_in,
    mul,
    power,
    project,
)

log = logging.getLogger(__name__)

HYPERQUADRANT = "hyperquadrant"
AXIS_EXTENDED = "axis-extended"
HYPERPYRAMID = "hyperpyramid"
REGION_KINDS = (HYPERQUADRANT, AXIS_EXTENDED, HYPERPYRAMID)

LAST_COORDINATE = "last-coordinate"
GENERAL_POWERS = "general-powers"

DIRECT = "direct"
RECIPROCAL = "reciprocal"

VPV_NAMES = {
    2: ("y", "z"),
    3: ("x", "y", "z"),
    4: ("w", "x", "y", "z"),
    5: ("v", "w", "x", "y", "z"),
}

POLYLOG_TAIL = 1e-12
POLYLOG_MAX_TERMS = 100_000


class PrecisionError(SeriesError):
    pass


@dataclass(frozen=True)
class Region:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in REGION_KINDS:
            raise UsageError(f"Unknown region {self.kind!r}; expected one of {', '.join(REGION_KINDS)}")
        if self.n < 1:
            raise UsageError(f"Region dimension must be at least 1, got {self.n}")

    def contains(self, v: tuple[int, ...]) -> bool:
        if len(v) != self.n or any(c < 0 for c in v):
            return False
        if self.kind == HYPERQUADRANT:
            return all(c >= 1 for c in v)
        last = v[-1]
        if last < 1:
            return False
        if self.kind == HYPERPYRAMID:
            return all(c < last for c in v[:-1])
        return True


@dataclass(frozen=True)
class WeightRule:
    """Exponent attached to the factor of VPV a: 1/a_n, or 1/prod a_i^b_i."""

    kind: str = LAST_COORDINATE
    b: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind == LAST_COORDINATE:
            return
        if self.kind != GENERAL_POWERS:
            raise UsageError(f"Unknown weight rule {self.kind!r}")
        if not self.b:
            raise UsageError("General-powers weights need b_1..b_n")
        if any(not 0.0 <= bi <= 1.0 for bi in self.b):
            raise UsageError(f"Weights must lie in [0, 1], got {list(self.b)}")
        if abs(math.fsum(self.b) - 1.0) > 1e-9:
            raise UsageError(f"Weights must sum to 1, got {math.fsum(self.b)}")

    @property
    def exact(self) -> bool:
        return self.kind == LAST_COORDINATE

    def rational(self, v: tuple[int, ...]) -> Fraction:
        if not self.exact:
            raise UsageError("General-powers weights are numeric only")
        return Fraction(1, v[-1])

    def f64(self, v: tuple[int, ...]) -> float:
        if self.exact:
            return 1.0 / v[-1]
        denominator = 1.0
        for a, bi in zip(v, self.b):
            denominator *= float(a) ** bi
        return 1.0 / denominator


# -- lattice ------------------------------------------------------------------

def visible_points(region: Region, bounds: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All VPVs of the region with v_i <= bounds[i], lexicographically sorted."""
    if len(bounds) != region.n:
        raise UsageError(f"{len(bounds)} bounds given for a {region.n}-dimensional region")
    points = [
        v for v in cartesian(*(range(b + 1) for b in bounds))
        if region.contains(v) and math.gcd(*v) == 1
    ]
    log.debug(f"{len(points)} visible points in {region.kind} n={region.n} within {bounds}")
    return points


def lemma_partition_check(region: Region, bounds: tuple[int, ...]) -> VerificationReport:
    """Each nonzero region point inside the box is m*v for exactly one (VPV v, m >= 1)."""
    vpvs = visible_points(region, bounds)
    hits: dict[tuple[int, ...], int] = {}
    for v in vpvs:
        m = 1
        while True:
            point = tuple(m * c for c in v)
            if any(c > b for c, b in zip(point, bounds)):
                break
            hits[point] = hits.get(point, 0) + 1
            m += 1
    report = VerificationReport(identity="vpv-lemma", status=PASS,
                                params={"region": region.kind, "n": region.n, "bounds": list(bounds)})
    for point in cartesian(*(range(b + 1) for b in bounds)):
        if not region.contains(point):
            if point in hits:
                report.status = FAIL
                report.notes.append(f"{list(point)} reached but lies outside the region")
                break
            continue
        if hits.get(point, 0) != 1:
            report.status = FAIL
            report.notes.append(f"{list(point)} represented {hits.get(point, 0)} times")
            break
    return report


# -- exact mode ---------------------------------------------------------------

def vpv_ring(n: int, caps: dict[str, int] | None = None, default_cap: int = 4) -> VarTable:
    """Coordinates map to variables in order; the last one is z."""
    if n < 2:
        raise UsageError(f"VPV identities need n >= 2, got {n}")
    names = VPV_NAMES.get(n) or tuple(f"x{i}" for i in range(1, n)) + ("z",)
    caps = caps or {}
    unknown = set(caps) - set(names)
    if unknown:
        raise UsageError(f"Caps given for unknown variables {sorted(unknown)}; expected {list(names)}")
    return VarTable.of({name: caps.get(name, default_cap) for name in names})


def vpv_product_expand(region: Region, ring: VarTable, sign: str = DIRECT,
                       weight: WeightRule = WeightRule()) -> Series:
    """prod over VPVs of (1 - x^a) ** (+-1/a_n), direct or reciprocal."""
    if sign not in (DIRECT, RECIPROCAL):
        raise UsageError(f"Unknown sign {sign!r}")
    if region.n != ring.arity:
        raise UsageError(f"Region dimension {region.n} does not match ring {ring.names}")
    result = ring.one()
    points = visible_points(region, ring.caps)
    for v in points:
        w = weight.rational(v)
        result = mul(result, binomial_power(ring, Term(Fraction(-1), v), w if sign == DIRECT else -w))
    log.debug(f"{region.kind} product over {len(points)} factors -> {len(result)} terms")
    return result


def _leading(ring: VarTable) -> list[str]:
    return list(ring.names[:-1])


def _geometric_weight(ring: VarTable) -> Series:
    """prod_i 1/(1 - x_i) over the leading variables."""
    w = ring.one()
    for name in _leading(ring):
        w = mul(w, binomial_power(ring, ring.term(-1, **{name: 1}), -1))
    return w


def axis_rhs(ring: VarTable) -> Series:
    """(1 - z) ** prod_i 1/(1 - x_i)."""
    z = ring.names[-1]
    return power(ring.one() - ring.var(z), _geometric_weight(ring))


def axis_binomial_terms(ring: VarTable) -> Series:
    """sum_k (-1)^k C(w, k) z^k with w = prod_i 1/(1 - x_i), no logarithms involved."""
    z = ring.names[-1]
    w = _geometric_weight(ring)
    result = ring.one()
    binom = ring.one()
    for k in range(1, ring.cap_of(z) + 1):
        binom = mul(binom, w - (k - 1)).scale(Fraction(1, k))
        result = result + mul(binom, ring.var(z, k)).scale(-1 if k % 2 else 1)
    return result


def pyramid_power_sum(ring: VarTable, m: int) -> Series:
    """prod_i (1 - x_i^m) / (1 - x_i) over the leading variables."""
    if m < 1:
        raise UsageError(f"Power sum index must be at least 1, got {m}")
    result = ring.one()
    for name in _leading(ring):
        x = ring.term(1, **{name: 1})
        top = ring.one() - ring.from_term(x.power(m))
        result = mul(result, mul(top, binomial_power(ring, Term(Fraction(-1), x.exps), -1)))
    return result


def pyramid_power_sums(ring: VarTable) -> PowerSums:
    z = ring.names[-1]
    return PowerSums(tuple(pyramid_power_sum(ring, m) for m in range(1, ring.cap_of(z) + 1)))


def pyramid_rhs(ring: VarTable) -> Series:
    """prod over subsets S of the leading variables of (1 - x_S z) ** (sign(S) * W).

    sign(S) is +1 for odd |S| and -1 for even |S|, so S = {} contributes
    (1 - z) ** -W with W = prod_i 1/(1 - x_i).
    """
    z = ring.names[-1]
    w = _geometric_weight(ring)
    leading = _leading(ring)
    result = ring.one()
    for size in range(len(leading) + 1):
        exponent = w if size % 2 else -w
        for subset in combinations(leading, size):
            monomial = ring.term(1, **{z: 1}, **{name: 1 for name in subset})
            base = ring.one() - ring.from_term(monomial)
            result = mul(result, power(base, exponent))
    return result


def pyramid_newton(ring: VarTable) -> Series:
    """1 + sum_k B_k z^k with B_k from the pyramid power sums."""
    z = ring.names[-1]
    K = ring.cap_of(z)
    result = ring.one()
    if K == 0:
        return result
    for k, b in enumerate(newton_coeffs(pyramid_power_sums(ring), K)[1:], start=1):
        result = result + mul(b, ring.var(z, k))
    return result


def pyramid_taylor_coeffs(order: int, y_cap: int) -> list[Series]:
    """Ordinary coefficients c_0..c_order of the two-dimensional pyramid product in z.

    n*y*c_n + (n+2)*c_{n+2} = (2 + n + y + n*y)*c_{n+1}, with c_0 = c_1 = 1.
    """
    ring = VarTable(("y",), (y_cap,))
    y = ring.var("y")
    c = [ring.one(), ring.one()]
    for n in range(order - 1):
        lead = mul(y * n + (2 + n) + y, c[n + 1])
        c.append((lead - mul(y, c[n]).scale(n)).scale(Fraction(1, n + 2)))
    return c[:order + 1]


def taylor_numerators(order: int, y_cap: int) -> list[Series]:
    """n! * c_n, the integer polynomials shown against z^n / n!."""
    return [c.scale(math.factorial(n)) for n, c in enumerate(pyramid_taylor_coeffs(order, y_cap))]


def taylor_series(ring: VarTable) -> Series:
    """Reassemble sum c_n z^n inside a two-variable (y, z) ring."""
    if ring.names != ("y", "z"):
        raise UsageError(f"The Taylor recurrence lives in (y, z), not {ring.names}")
    result = ring.zero()
    for n, c in enumerate(pyramid_taylor_coeffs(ring.cap_of("z"), ring.cap_of("y"))):
        result = result + mul(project(c, ring), ring.var("z", n))
    return result


def z_coefficient(f: Series, k: int) -> Series:
    """The z^k slice of a VPV-ring series, moved into the leading variables' ring."""
    ring = f.ring
    leading = VarTable(ring.names[:-1], ring.caps[:-1])
    return project(coeff_in(f, ring.names[-1], k), leading)


# -- numeric mode -------------------------------------------------------------

def _polylog_tail(s: float, ax: float, J: int) -> float:
    return ax ** (J + 1) / ((1.0 - ax) * max(1.0, (J + 1) ** s))


def polylog_f64(s: float, x: float, J: int | None = None) -> float:
    """Li_s(x) = sum_{j=1}^J x^j / j^s, with J picked from the tail bound when omitted."""
    ax = abs(x)
    if ax >= 1.0:
        raise UsageError(f"Polylogarithm needs |x| < 1, got {x}")
    if ax == 0.0:
        return 0.0
    if J is None:
        J = 1
        while _polylog_tail(s, ax, J) >= POLYLOG_TAIL:
            J += 1
            if J > POLYLOG_MAX_TERMS:
                raise PrecisionError(f"Li_{s}({x}) needs more than {POLYLOG_MAX_TERMS} terms")
    elif _polylog_tail(s, ax, J) >= POLYLOG_TAIL:
        raise PrecisionError(f"{J} terms leave a tail above {POLYLOG_TAIL} for Li_{s}({x})")
    return math.fsum(x ** j / j ** s for j in range(1, J + 1))


def truncation_tail(point: tuple[float, ...], caps: tuple[int, ...]) -> float:
    """Bound on the log of the omitted factors (points with some coordinate above its cap)."""
    xmax = max(abs(x) for x in point)
    if xmax == 0.0:
        return 0.0
    n = len(point)
    spread = (xmax / (1.0 - xmax)) ** (n - 1)
    omitted = sum(xmax ** (cap + 1) / (1.0 - xmax) * spread for cap in caps)
    return omitted / (1.0 - xmax)


def numeric_verify_hyperquadrant(b: tuple[float, ...], point: tuple[float, ...], caps: tuple[int, ...],
                                 tol: float, perturb: bool = False) -> VerificationReport:
    """Hyperquadrant product with weights 1/prod a_i^b_i against exp(prod Li_{b_i}(x_i))."""
    n = len(b)
    if len(point) != n or len(caps) != n:
        raise UsageError(f"Need {n} coordinates and {n} caps, got {len(point)} and {len(caps)}")
    if n < 2:
        raise UsageError("The hyperquadrant identity needs n >= 2")
    if any(abs(x) >= 1.0 for x in point):
        raise UsageError(f"Point {list(point)} lies outside the unit polydisc")
    if any(abs(x) > 0.2 for x in point):
        log.warning(f"Point {list(point)} beyond 0.2; tail estimate is loose there")
    weight = WeightRule(GENERAL_POWERS, tuple(b))

    log_left = 0.0
    for v in visible_points(Region(HYPERQUADRANT, n), caps):
        monomial = 1.0
        for x, a in zip(point, v):
            monomial *= x ** a
        if monomial:
            log_left -= weight.f64(v) * math.log1p(-monomial)
    left = math.exp(log_left)
    if perturb:
        left += 1.0

    right_exponent = 1.0
    for bi, x in zip(b, point):
        right_exponent *= polylog_f64(bi, x)
    right = math.exp(right_exponent)

    residual = abs(left - right)
    tail = truncation_tail(point, caps) * max(left, 1.0)
    if tail > tol:
        status = INCONCLUSIVE
    else:
        status = PASS if residual <= tol else FAIL
    report = VerificationReport(
        identity="vpv-numeric",
        status=status,
        params={"b": list(b), "point": list(point), "left": left, "right": right},
        caps={f"a{i}": cap for i, cap in enumerate(caps, start=1)},
        residual=residual,
        tol=tol,
        tail_bound=tail,
    )
    if status == INCONCLUSIVE:
        report.notes.append(f"truncation tail {tail:.3e} exceeds tol; raise the caps")
    log.info(
        f"vpv-numeric: residual {residual:.3e}, tail {tail:.3e} -> {status}",
        extra={"identity": "vpv-numeric", "status": status},
    )
    return report
