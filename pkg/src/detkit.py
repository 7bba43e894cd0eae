"""Determinant Kit — lower-Hessenberg determinants built from power sums.

For power sums p_1..p_K the coefficients B_k of exp(sum_k p_k t^k / k) are
B_k = det(H_k) / k!, where H_k has p_{i-j+1} on and below the diagonal and
-i on the superdiagonal of row i. The recurrence k*B_k = sum_j p_j*B_{k-j}
is the production path; the two determinant evaluators check it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Union

from src.series import Series, UsageError, VarTable, inverse

log = logging.getLogger(__name__)

Element = Union[Fraction, int, Series]


def _is_zero(x: Element) -> bool:
    return x.is_zero if isinstance(x, Series) else x == 0


@dataclass(frozen=True)
class PowerSums:
    p: tuple

    def __post_init__(self):
        if len(self.p) < 1:
            raise UsageError("PowerSums needs at least p_1")
        rings = {x.ring for x in self.p if isinstance(x, Series)}
        if len(rings) > 1:
            raise UsageError("All power sums must share one ring")

    @classmethod
    def of(cls, values) -> "PowerSums":
        return cls(tuple(v if isinstance(v, Series) else Fraction(v) for v in values))

    def __len__(self) -> int:
        return len(self.p)

    def at(self, k: int) -> Element:
        """p_k, 1-based."""
        return self.p[k - 1]

    @property
    def ring(self) -> VarTable | None:
        for x in self.p:
            if isinstance(x, Series):
                return x.ring
        return None

    def one(self) -> Element:
        ring = self.ring
        return ring.one() if ring else Fraction(1)

    def zero(self) -> Element:
        ring = self.ring
        return ring.zero() if ring else Fraction(0)


@dataclass(frozen=True)
class HessenbergMatrix:
    order: int
    rows: tuple

    def entry(self, i: int, j: int) -> Element:
        """a_ij, 1-based."""
        return self.rows[i - 1][j - 1]


def hessenberg_matrix(p: PowerSums, k: int) -> HessenbergMatrix:
    if k < 1:
        raise UsageError(f"Matrix order must be at least 1, got {k}")
    if k > len(p):
        raise UsageError(f"Order {k} needs {k} power sums, only {len(p)} given")
    rows = []
    for i in range(1, k + 1):
        row = []
        for j in range(1, k + 1):
            if i >= j:
                row.append(p.at(i - j + 1))
            elif j == i + 1:
                row.append(-i)
            else:
                row.append(0)
        rows.append(tuple(row))
    return HessenbergMatrix(order=k, rows=tuple(rows))


def det(m: HessenbergMatrix, method: str = "cofactor") -> Element:
    if method == "cofactor":
        return _det_cofactor(m)
    if method == "bareiss":
        return _det_bareiss(m)
    raise UsageError(f"Unknown determinant method {method!r}")


def det_by_both(m: HessenbergMatrix) -> Element:
    """Evaluate both ways and insist they agree."""
    a = _det_cofactor(m)
    b = _det_bareiss(m)
    if a != b:
        raise UsageError(f"Cofactor and fraction-free determinants disagree at order {m.order}")
    return a


def _zero_like(m: HessenbergMatrix) -> Element:
    for row in m.rows:
        for x in row:
            if isinstance(x, Series):
                return x.ring.zero()
    return Fraction(0)


def _det_cofactor(m: HessenbergMatrix) -> Element:
    """Expansion along the last row; only one superdiagonal is nonzero, so

    D_k = sum_j (-1)^(k-j) a_kj (a_j,j+1 ... a_k-1,k) D_{j-1}.
    """
    zero = _zero_like(m)
    minors: list[Element] = [1]
    for k in range(1, m.order + 1):
        total: Element = zero
        for j in range(1, k + 1):
            a_kj = m.entry(k, j)
            if _is_zero(a_kj):
                continue
            chain: Element = 1
            for i in range(j, k):
                chain = chain * m.entry(i, i + 1)
            sign = -1 if (k - j) % 2 else 1
            total = total + sign * chain * a_kj * minors[j - 1]
        minors.append(total)
    return minors[m.order]


def _divide(a: Element, b: Element) -> Element:
    if isinstance(b, Series):
        if isinstance(a, Series):
            return a * inverse(b)
        return b.ring.constant(a) * inverse(b)
    return a / Fraction(b) if not isinstance(a, Series) else a.scale(Fraction(1) / Fraction(b))


def _is_unit(x: Element) -> bool:
    if isinstance(x, Series):
        return x.constant_term != 0
    return x != 0


def _det_bareiss(m: HessenbergMatrix) -> Element:
    """Fraction-free elimination. Series pivots must be units; otherwise fall
    back to the cofactor expansion, which needs no division."""
    n = m.order
    a = [list(row) for row in m.rows]
    sign = 1
    prev: Element = 1
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return _zero_like(m)
        if not _is_unit(a[k][k]):
            log.debug(f"Non-unit pivot at step {k}; using cofactor expansion")
            return _det_cofactor(m)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _divide(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    result = a[n - 1][n - 1]
    return result if sign == 1 else -result


def newton_coeffs(p: PowerSums, K: int) -> list[Element]:
    """B_0..B_K from k*B_k = p_k + sum_{j=1}^{k-1} B_j p_{k-j}."""
    if K > len(p):
        raise UsageError(f"Order {K} needs {K} power sums, only {len(p)} given")
    coeffs: list[Element] = [p.one()]
    for k in range(1, K + 1):
        total = p.zero()
        for j in range(1, k + 1):
            total = total + p.at(j) * coeffs[k - j]
        coeffs.append(total * Fraction(1, k))
    return coeffs


def det_coefficient(p: PowerSums, k: int, method: str = "cofactor") -> Element:
    """det(H_k) / k!, the coefficient of t^k."""
    value = det(hessenberg_matrix(p, k), method=method)
    return value * Fraction(1, factorial(k))


def constant_a_sums(ring: VarTable, K: int, var: str = "a") -> PowerSums:
    """p_k = a for every k; det(H_k) is the rising factorial a(a+1)...(a+k-1)."""
    return PowerSums(tuple(ring.var(var) for _ in range(K)))


def powers_a_sums(ring: VarTable, K: int, var: str = "a") -> PowerSums:
    """p_k = a^k; det(H_k) = k! a^k."""
    return PowerSums(tuple(ring.var(var, k) for k in range(1, K + 1)))


def rising_factorial(ring: VarTable, k: int, var: str = "a") -> Series:
    result = ring.one()
    a = ring.var(var)
    for i in range(k):
        result = result * (a + i)
    return result
