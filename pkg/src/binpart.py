"""Binary Partitions — the binary-weight product and its vector-partition counts.

    prod_{k>=0} 1/(1 - q t^(2^k)) = prod_{0<=j<=k} (1 + q^(2^j) t^(2^k)) = 1 + sum_k A_k t^k

The coefficient of q^j t^k counts multisets of <1, 2^b> (left) and sets of
distinct <2^a, 2^b>, a <= b (right), both summing to <j, k>.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from src.detkit import PowerSums, det_coefficient, newton_coeffs
from src.oracle import vector_partitions
from src.report import FAIL, VerificationReport, compare_series, perturbed
from src.series import Series, UsageError, VarTable, binomial_power, coeff, inverse, mul, product, substitute

log = logging.getLogger(__name__)


def _powers_of_two(limit: int) -> list[int]:
    out, p = [], 1
    while p <= limit:
        out.append(p)
        p *= 2
    return out


def two_adic_valuation(k: int) -> int:
    v = 0
    while k % 2 == 0:
        k //= 2
        v += 1
    return v


@dataclass(frozen=True)
class BinPartSpec:
    q_cap: int = 12
    t_cap: int = 12

    def __post_init__(self):
        if self.q_cap < 1 or self.t_cap < 1:
            raise UsageError(f"Caps for q and t must be at least 1, got q={self.q_cap}, t={self.t_cap}")

    def ring(self) -> VarTable:
        return VarTable(("q", "t"), (self.q_cap, self.t_cap))


@dataclass(frozen=True)
class SigmaEntry:
    k: int
    value: Series

    @property
    def summands(self) -> int:
        return len(self.value)


def sigma(k: int, ring: VarTable | None = None) -> SigmaEntry:
    """sum over 2^j | k of 2^j q^(k / 2^j)."""
    if k < 1:
        raise UsageError(f"sigma needs k >= 1, got {k}")
    ring = ring or VarTable(("q",), (k,))
    value = ring.zero()
    for j in range(two_adic_valuation(k) + 1):
        value = value + ring.var("q", k >> j, 2 ** j)
    return SigmaEntry(k=k, value=value)


def lhs_expand(spec: BinPartSpec) -> Series:
    ring = spec.ring()
    return product((binomial_power(ring, ring.term(-1, q=1, t=p), -1) for p in _powers_of_two(spec.t_cap)), ring)


def rhs_expand(spec: BinPartSpec) -> Series:
    ring = spec.ring()
    t_powers = _powers_of_two(spec.t_cap)
    factors = (
        binomial_power(ring, ring.term(1, q=qp, t=tp), 1)
        for k, tp in enumerate(t_powers)
        for qp in t_powers[:k + 1]
        if qp <= spec.q_cap
    )
    return product(factors, ring)


def _sigma_sums(spec: BinPartSpec) -> PowerSums:
    ring = spec.ring()
    return PowerSums(tuple(sigma(k, ring).value for k in range(1, spec.t_cap + 1)))


def det_coeffs(spec: BinPartSpec, method: str = "cofactor") -> Series:
    ring = spec.ring()
    sums = _sigma_sums(spec)
    result = ring.one()
    for k in range(1, spec.t_cap + 1):
        result = result + det_coefficient(sums, k, method) * ring.var("t", k)
    return result


def newton_expand(spec: BinPartSpec) -> Series:
    ring = spec.ring()
    result = ring.one()
    for k, b in enumerate(newton_coeffs(_sigma_sums(spec), spec.t_cap)[1:], start=1):
        result = result + b * ring.var("t", k)
    return result


def recurrence_coeffs(spec: BinPartSpec) -> list[Series]:
    """A_0 = 1, A_k = q A_{k-1} + [k even] A_{k/2}, each a polynomial in q."""
    ring = spec.ring()
    q = ring.var("q")
    A = [ring.one()]
    for k in range(1, spec.t_cap + 1):
        a_k = mul(q, A[k - 1])
        if k % 2 == 0:
            a_k = a_k + A[k // 2]
        A.append(a_k)
    return A


def recurrence_expand(spec: BinPartSpec) -> Series:
    ring = spec.ring()
    result = ring.zero()
    for k, a_k in enumerate(recurrence_coeffs(spec)):
        result = result + mul(a_k, ring.var("t", k))
    return result


def functional_eq_check(spec: BinPartSpec, perturb: bool = False) -> VerificationReport:
    """f(t) (1 - q t) = f(t^2), then the scalar recurrence it implies."""
    ring = spec.ring()
    f = lhs_expand(spec)
    left = mul(f, ring.one() - ring.from_term(ring.term(1, q=1, t=1)))
    if perturb:
        left = perturbed(left)
    right = substitute(f, "t", ring.term(1, t=2))
    report = compare_series("binary-functional-eq", left, right, {"q_cap": spec.q_cap, "t_cap": spec.t_cap},
                            left_name="f(t)(1-qt)", right_name="f(t^2)")
    if not report.passed:
        return report
    recurrence = compare_series("binary-functional-eq", f, recurrence_expand(spec),
                                {"q_cap": spec.q_cap, "t_cap": spec.t_cap},
                                left_name="lhs", right_name="recurrence")
    recurrence.notes.append("functional equation holds")
    return recurrence


def binary_representation_check(spec: BinPartSpec) -> VerificationReport:
    """prod_j (1 + t^(2^j)) = 1/(1 - t): each k >= 1 is one sum of distinct powers of two.

    Inside the two-variable product a single part <1, 2^b> is the only way to
    reach q^1, so the q^1 t^k coefficient is 1 when k is a power of two and 0
    otherwise.
    """
    ring = VarTable(("t",), (spec.t_cap,))
    distinct_powers = product((binomial_power(ring, ring.term(1, t=p), 1) for p in _powers_of_two(spec.t_cap)), ring)
    report = compare_series("binary-representation", distinct_powers, inverse(1 - ring.var("t")),
                            {"t_cap": spec.t_cap}, left_name="distinct powers", right_name="1/(1-t)")
    if not report.passed:
        return report

    f = lhs_expand(spec)
    powers = set(_powers_of_two(spec.t_cap))
    for k in range(1, spec.t_cap + 1):
        c = coeff(f, {"q": 1, "t": k})
        expected = 1 if k in powers else 0
        if c != expected:
            report.status = FAIL
            report.first_difference = {"monomial": f"q*t^{k}", "exponents": [1, k],
                                       "left_name": "lhs", "left": str(c),
                                       "right_name": "expected", "right": str(expected)}
            return report
    report.notes.append("single parts sit at q*t^(2^b) only")
    return report


def count_B(j: int, k: int) -> tuple[int, int]:
    """(distinct-mode, unrestricted-mode) counts of vector partitions of <j, k>."""
    if j < 0 or k < 0:
        raise UsageError(f"count_B needs non-negative targets, got ({j}, {k})")
    pows_k = _powers_of_two(k)
    distinct_parts = [(a, b) for b in pows_k for a in pows_k if a <= b and a <= j]
    unrestricted_parts = [(1, b) for b in pows_k] if j else []
    distinct = sum(1 for _ in vector_partitions((j, k), distinct_parts, distinct=True))
    unrestricted = sum(1 for _ in vector_partitions((j, k), unrestricted_parts))
    log.debug(f"B({j},{k}) = {distinct} distinct, {unrestricted} unrestricted")
    return distinct, unrestricted


def displayed_coefficients() -> dict[int, Series]:
    """A_1..A_10 as printed, in the ring (q,) with cap 12."""
    ring = VarTable(("q",), (12,))

    def poly(*pairs: tuple[int, int]) -> Series:
        out = ring.zero()
        for c, e in pairs:
            out = out + ring.var("q", e, c)
        return out

    return {
        1: poly((1, 1)),
        2: poly((1, 2), (1, 1)),
        3: poly((1, 3), (1, 2)),
        4: poly((1, 4), (1, 3), (1, 2), (1, 1)),
        5: poly((1, 5), (1, 4), (1, 3), (1, 2)),
        6: poly((1, 6), (1, 5), (1, 4), (2, 3), (1, 2)),
        7: poly((1, 7), (1, 6), (1, 5), (2, 4), (1, 3)),
        8: poly((1, 8), (1, 7), (1, 6), (2, 5), (2, 4), (1, 3), (1, 2), (1, 1)),
        9: poly((1, 9), (1, 8), (1, 7), (2, 6), (2, 5), (1, 4), (1, 3), (1, 2)),
        10: poly((1, 10), (1, 9), (1, 8), (2, 7), (2, 6), (2, 5), (2, 4), (2, 3), (1, 2)),
    }
