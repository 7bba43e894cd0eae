"""Q-Series — the n-space q-binomial products F_n, G_n and their specializations.

    F_n(x; a, t) = prod_{alpha >= 0} (1 - x^alpha a t) / (1 - x^alpha t)
    G_n(x; a, t) = prod_{alpha >= 0} ((1 - x^alpha a t) / (1 - x^alpha t)) ** (1 / alpha!)

Each product is expanded three ways: directly, through Hessenberg determinants
of its power sums, and through the Newton recurrence on the same power sums.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Iterator

from src.detkit import PowerSums, det_coefficient, newton_coeffs
from src.report import VerificationReport, compare_series, perturbed, require_equal
from src.series import (
    Series,
    Term,
    UsageError,
    VarTable,
    binomial_power,
    exp0,
    inverse,
    mul,
    substitute,
)

log = logging.getLogger(__name__)

X_NAMES = {1: ("q",), 2: ("x", "y"), 3: ("x", "y", "z")}


def x_names(n: int) -> tuple[str, ...]:
    return X_NAMES.get(n) or tuple(f"x{i}" for i in range(1, n + 1))


@dataclass
class FnSpec:
    """Dimension, caps and (optionally constant) a for an F_n expansion."""

    n: int
    caps: dict[str, int] = field(default_factory=dict)
    default_cap: int = 4
    a: Fraction | None = None

    def __post_init__(self):
        if self.n < 1:
            raise UsageError(f"Dimension must be at least 1, got {self.n}")
        unknown = set(self.caps) - set(self.names)
        if unknown:
            raise UsageError(f"Caps given for unknown variables {sorted(unknown)}; expected {list(self.names)}")

    @property
    def names(self) -> tuple[str, ...]:
        return x_names(self.n) + (("a",) if self.a is None else ()) + ("t",)

    def ring(self) -> VarTable:
        return VarTable.of({name: self.caps.get(name, self.default_cap) for name in self.names})

    @property
    def order(self) -> int:
        return self.caps.get("t", self.default_cap)

    def xs(self, ring: VarTable) -> list[Term]:
        return [ring.term(1, **{name: 1}) for name in x_names(self.n)]

    def a_term(self, ring: VarTable) -> Term:
        if self.a is None:
            return ring.term(1, a=1)
        return ring.term(self.a)

    def t_term(self, ring: VarTable) -> Term:
        return ring.term(1, t=1)


class GnSpec(FnSpec):
    """Same shape as FnSpec; the factorial weights live in the G builders.

    Definition of G_n lists a trailing parameter s that never enters the
    product, so it is not carried.
    """


# -- factor enumeration -----------------------------------------------------

def factor_grid(ring: VarTable, xs: list[Term], t: Term) -> Iterator[tuple[tuple[int, ...], Term]]:
    """Yield (alpha, x^alpha * t) for every alpha whose monomial survives truncation.

    Factors beyond the caps expand to 1 because every term carries (x^alpha t)^m, m >= 1.
    """
    if t.is_constant:
        raise UsageError("The expansion variable must have positive degree")

    def walk(i: int, alpha: tuple[int, ...], base: Term):
        if i == len(xs):
            yield alpha, base
            return
        x = xs[i]
        if x.is_zero:
            yield from walk(i + 1, alpha + (0,), base)
            return
        if x.is_constant:
            raise UsageError(f"Specialization {x} must be zero or have positive degree")
        k, current = 0, base
        while ring.fits(current.exps):
            yield from walk(i + 1, alpha + (k,), current)
            k += 1
            current = current.times(x)

    yield from walk(0, (), t)


def _ratio_factor(ring: VarTable, a: Term, base: Term, weight: Fraction) -> Series:
    """((1 - a*base) / (1 - base)) ** weight."""
    top = a.times(base)
    numerator = binomial_power(ring, Term(-top.coeff, top.exps), weight)
    denominator = binomial_power(ring, Term(-base.coeff, base.exps), -weight)
    return mul(numerator, denominator)


def product_F(ring: VarTable, xs: list[Term], a: Term, t: Term) -> Series:
    result = ring.one()
    count = 0
    for _, base in factor_grid(ring, xs, t):
        result = mul(result, _ratio_factor(ring, a, base, Fraction(1)))
        count += 1
    log.debug(f"F product over {count} factors -> {len(result)} terms")
    return result


def product_G(ring: VarTable, xs: list[Term], a: Term, t: Term) -> Series:
    result = ring.one()
    count = 0
    for alpha, base in factor_grid(ring, xs, t):
        weight = Fraction(1)
        for k in alpha:
            weight /= factorial(k)
        result = mul(result, _ratio_factor(ring, a, base, weight))
        count += 1
    log.debug(f"G product over {count} factors -> {len(result)} terms")
    return result


# -- F_n ----------------------------------------------------------------------

def _one_minus_a_power(ring: VarTable, a: Term, k: int) -> Series:
    return ring.one() - ring.from_term(a.power(k))


def _check_order(spec: FnSpec, k: int):
    if not 1 <= k <= spec.order:
        raise UsageError(f"Power sum index {k} outside 1..{spec.order}")


def expand_F_product(spec: FnSpec) -> Series:
    ring = spec.ring()
    return product_F(ring, spec.xs(ring), spec.a_term(ring), spec.t_term(ring))


def F_power_sum(spec: FnSpec, k: int) -> Series:
    """(1 - a^k) / prod_i (1 - x_i^k)."""
    _check_order(spec, k)
    ring = spec.ring()
    result = _one_minus_a_power(ring, spec.a_term(ring), k)
    for x in spec.xs(ring):
        result = mul(result, binomial_power(ring, Term(Fraction(-1), x.power(k).exps), -1))
    return result


def F_power_sums(spec: FnSpec) -> PowerSums:
    return PowerSums(tuple(F_power_sum(spec, k) for k in range(1, spec.order + 1)))


def _assemble(ring: VarTable, coefficients: list[Series], var: str = "t") -> Series:
    """1 + sum_k c_k var^k from a coefficient list starting at k = 1."""
    result = ring.one()
    for k, c in enumerate(coefficients, start=1):
        result = result + c * ring.var(var, k)
    return result


def expand_F_det(spec: FnSpec, method: str = "cofactor") -> Series:
    ring = spec.ring()
    if spec.order == 0:
        return ring.one()
    sums = F_power_sums(spec)
    return _assemble(ring, [det_coefficient(sums, k, method) for k in range(1, spec.order + 1)])


def expand_F_newton(spec: FnSpec) -> Series:
    ring = spec.ring()
    if spec.order == 0:
        return ring.one()
    return _assemble(ring, newton_coeffs(F_power_sums(spec), spec.order)[1:])


# -- the classical q-binomial theorem ---------------------------------------

def qbinom_spec(caps: dict[str, int], default_cap: int = 4, a: Fraction | None = None) -> FnSpec:
    return FnSpec(n=1, caps=caps, default_cap=default_cap, a=a)


def qbinom_sum(spec: FnSpec) -> Series:
    """1 + sum_k (a;q)_k / (q;q)_k t^k."""
    if spec.n != 1:
        raise UsageError("The q-binomial sum is one-dimensional")
    ring = spec.ring()
    a = spec.a_term(ring)
    q = ring.term(1, q=1)
    coefficients = []
    a_poch = ring.one()
    q_poch = ring.one()
    for k in range(1, spec.order + 1):
        a_poch = mul(a_poch, ring.one() - ring.from_term(a.times(q.power(k - 1))))
        q_poch = mul(q_poch, ring.one() - ring.from_term(q.power(k)))
        coefficients.append(mul(a_poch, inverse(q_poch)))
    return _assemble(ring, coefficients)


def qbinom_product(spec: FnSpec) -> Series:
    return expand_F_product(spec)


# -- G_n ----------------------------------------------------------------------

def expand_G_product(spec: GnSpec) -> Series:
    ring = spec.ring()
    return product_G(ring, spec.xs(ring), spec.a_term(ring), spec.t_term(ring))


def G_power_sum(spec: GnSpec, k: int) -> Series:
    """(1 - a^k) exp(x_1^k + ... + x_n^k)."""
    _check_order(spec, k)
    ring = spec.ring()
    exponent = ring.zero()
    for x in spec.xs(ring):
        exponent = exponent + ring.from_term(x.power(k))
    return mul(_one_minus_a_power(ring, spec.a_term(ring), k), exp0(exponent))


def G_power_sums(spec: GnSpec) -> PowerSums:
    return PowerSums(tuple(G_power_sum(spec, k) for k in range(1, spec.order + 1)))


def expand_G_det(spec: GnSpec, method: str = "cofactor") -> Series:
    ring = spec.ring()
    if spec.order == 0:
        return ring.one()
    sums = G_power_sums(spec)
    return _assemble(ring, [det_coefficient(sums, k, method) for k in range(1, spec.order + 1)])


def expand_G_newton(spec: GnSpec) -> Series:
    ring = spec.ring()
    if spec.order == 0:
        return ring.one()
    return _assemble(ring, newton_coeffs(G_power_sums(spec), spec.order)[1:])


def _exp_of(ring: VarTable, **powers_with_coeffs: int) -> Series:
    """exp(c1*q^e1 + ...) with keywords like q1=2 meaning 2*q^1."""
    exponent = ring.zero()
    for key, c in powers_with_coeffs.items():
        exponent = exponent + ring.var("q", int(key[1:]), c)
    return exp0(exponent)


def g1_displayed_coefficients(q_cap: int) -> list[Series]:
    """k! [t^k] G_1(q; 0, t) for k = 1..4 as exponential combinations in q."""
    ring = VarTable(("q",), (q_cap,))
    e = lambda **kw: _exp_of(ring, **kw)  # noqa: E731
    return [
        e(q1=1),
        e(q2=1) + e(q1=2),
        2 * e(q3=1) + 3 * e(q2=1, q1=1) + e(q1=3),
        6 * e(q4=1) + 8 * e(q3=1, q1=1) + 3 * e(q2=2) + 6 * e(q2=1, q1=2) + e(q1=4),
    ]


def g1_quotient_displayed_coefficients(q_cap: int) -> list[Series]:
    """k! [t^k] of prod_k (1 + t q^k)^(1/k!) for k = 1..4."""
    ring = VarTable(("q",), (q_cap,))
    e = lambda **kw: _exp_of(ring, **kw)  # noqa: E731
    return [
        e(q1=1),
        e(q1=2) - e(q2=1),
        2 * e(q3=1) - 3 * e(q2=1, q1=1) + e(q1=3),
        e(q1=4) + 3 * e(q2=2) - 6 * e(q4=1) - 6 * e(q1=2, q2=1) + 8 * e(q1=1, q3=1),
    ]


def g1_quotient_pipelines(caps: dict[str, int], default_cap: int = 4) -> dict[str, Series]:
    """G_1(q;0;t) / G_1(q^2;0;t^2) = prod_k (1 + t q^k)^(1/k!), three ways."""
    spec = GnSpec(n=1, caps=caps, default_cap=default_cap, a=Fraction(0))
    ring = spec.ring()
    g1 = expand_G_product(spec)
    shifted = substitute(substitute(g1, "q", ring.term(1, q=2)), "t", ring.term(1, t=2))
    quotient = mul(g1, inverse(shifted))

    direct = ring.one()
    for k in range(ring.cap_of("q") + 1):
        direct = mul(direct, binomial_power(ring, ring.term(1, q=k, t=1), Fraction(1, factorial(k))))

    pipelines = {"quotient": quotient, "product": direct}
    if spec.order:
        sums = PowerSums(tuple(
            exp0(ring.var("q", m)).scale(1 if m % 2 else -1) for m in range(1, spec.order + 1)
        ))
        pipelines["newton"] = _assemble(ring, newton_coeffs(sums, spec.order)[1:])
        pipelines["det"] = _assemble(ring, [det_coefficient(sums, k) for k in range(1, spec.order + 1)])
    return pipelines


# -- specializations ---------------------------------------------------------

def macmahon_rhs(k: int, cap: int) -> Series:
    """prod_j (1 - q^j) ** -min(k, j); k = 0 stands for unlimited rows (exponent j)."""
    ring = VarTable(("q",), (cap,))
    result = ring.one()
    for j in range(1, cap + 1):
        exponent = j if k == 0 else min(k, j)
        result = mul(result, binomial_power(ring, ring.term(-1, q=j), -exponent))
    return result


def macmahon_lhs(k: int, cap: int) -> Series:
    """F_2(q,q; q^k, q) for k >= 1, F_2(q,q; 0, q) for k = 0."""
    if k < 0:
        raise UsageError(f"Row bound must be non-negative, got {k}")
    ring = VarTable(("q",), (cap,))
    q = ring.term(1, q=1)
    a = ring.term(0) if k == 0 else ring.term(1, q=k)
    return product_F(ring, [q, q], a, q)


def macmahon_specials(k: int, cap: int) -> Series:
    """Specialized F_2 checked against the MacMahon product; returns the product side."""
    specialized = macmahon_lhs(k, cap)
    rhs = macmahon_rhs(k, cap)
    require_equal("macmahon", specialized, rhs, {"k": k})
    return rhs


def trace_generating_function(q_cap: int, a_cap: int) -> Series:
    """F_2(q,q; 0, q*a): a^m q^n counts plane partitions of n with trace m."""
    ring = VarTable(("a", "q"), (a_cap, q_cap))
    q = ring.term(1, q=1)
    return product_F(ring, [q, q], ring.term(0), ring.term(1, q=1, a=1))


def trace_product(q_cap: int, a_cap: int) -> Series:
    """prod_{k >= 1} (1 - q^k a) ** -k."""
    ring = VarTable(("a", "q"), (a_cap, q_cap))
    result = ring.one()
    for k in range(1, q_cap + 1):
        result = mul(result, binomial_power(ring, ring.term(-1, q=k, a=1), -k))
    return result


def vector_partition_product(x_cap: int, y_cap: int, mode: str = "unrestricted") -> Series:
    """prod 1/(1 - x^j y^k) or prod (1 + x^j y^k) over (j, k) != (0, 0)."""
    if mode not in ("unrestricted", "distinct"):
        raise UsageError(f"Unknown partition mode {mode!r}")
    ring = VarTable(("x", "y"), (x_cap, y_cap))
    sign, weight = (-1, -1) if mode == "unrestricted" else (1, 1)
    result = ring.one()
    for j in range(x_cap + 1):
        for k in range(y_cap + 1):
            if j or k:
                result = mul(result, binomial_power(ring, ring.term(sign, x=j, y=k), weight))
    return result


# -- functional equation -----------------------------------------------------

def functional_eq_check(n: int, spec: FnSpec | None = None, perturb: bool = False) -> VerificationReport:
    """prod_{|S| even} F(x_S t) / prod_{|S| odd} F(x_S t) == (1 - a t) / (1 - t).

    S runs over subsets of {1..n} with distinct increasing indices.
    """
    spec = spec or FnSpec(n=n)
    if spec.n != n:
        raise UsageError(f"Spec dimension {spec.n} does not match n={n}")
    ring = spec.ring()
    F = expand_F_product(spec)
    names = x_names(n)
    numerator = ring.one()
    denominator = ring.one()
    for size in range(n + 1):
        for subset in combinations(names, size):
            replacement = ring.term(1, t=1, **{name: 1 for name in subset})
            shifted = substitute(F, "t", replacement)
            if size % 2 == 0:
                numerator = mul(numerator, shifted)
            else:
                denominator = mul(denominator, shifted)
    lhs = mul(numerator, inverse(denominator))
    if perturb:
        lhs = perturbed(lhs)
    a, t = spec.a_term(ring), spec.t_term(ring)
    rhs = mul(ring.one() - ring.from_term(a.times(t)), inverse(ring.one() - ring.from_term(t)))
    return compare_series("functional-eq", lhs, rhs, {"n": n})
