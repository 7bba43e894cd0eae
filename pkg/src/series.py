"""Series Core — exact truncated multivariate power series over the rationals.

A ``Series`` lives in a ``VarTable``: an ordered list of variable names with a
per-variable degree cap. Every monomial whose exponent exceeds the cap of any
variable is discarded, so all arithmetic happens in a finite quotient ring and
is exact.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Union

log = logging.getLogger(__name__)

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]


class SeriesError(Exception):
    pass


class UsageError(SeriesError):
    pass


class SingularInputError(SeriesError):
    pass


class DomainError(SeriesError):
    pass


class Term(NamedTuple):
    """A monomial with its coefficient, e.g. the ``x*y*t`` in ``F(x*y*t)``."""

    coeff: Fraction
    exps: Monomial

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    @property
    def is_constant(self) -> bool:
        return not any(self.exps)

    def times(self, other: "Term") -> "Term":
        return Term(self.coeff * other.coeff, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def power(self, k: int) -> "Term":
        return Term(self.coeff ** k, tuple(k * e for e in self.exps))


@dataclass(frozen=True)
class VarTable:
    names: tuple[str, ...]
    caps: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise UsageError(f"Duplicate variable names: {self.names}")
        if len(self.names) != len(self.caps):
            raise UsageError(f"{len(self.names)} names but {len(self.caps)} caps")
        for name, cap in zip(self.names, self.caps):
            if cap < 0:
                raise UsageError(f"Cap for {name} must be non-negative, got {cap}")

    @classmethod
    def of(cls, caps: Mapping[str, int]) -> "VarTable":
        """Build a table from an ordered ``{name: cap}`` mapping."""
        return cls(tuple(caps), tuple(int(c) for c in caps.values()))

    @property
    def arity(self) -> int:
        return len(self.names)

    def cap_of(self, name: str) -> int:
        return self.caps[self.index(name)]

    def caps_dict(self) -> dict[str, int]:
        return dict(zip(self.names, self.caps))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UsageError(f"Unknown variable {name!r}; ring has {list(self.names)}")

    def fits(self, exps: Monomial) -> bool:
        return all(e <= c for e, c in zip(exps, self.caps))

    def exps(self, **powers: int) -> Monomial:
        out = [0] * self.arity
        for name, power in powers.items():
            out[self.index(name)] = power
        return tuple(out)

    def term(self, coeff: Scalar = 1, **powers: int) -> Term:
        return Term(Fraction(coeff), self.exps(**powers))

    def series(self, terms: Mapping[Monomial, Scalar] | None = None) -> "Series":
        return Series(self, terms or {})

    def zero(self) -> "Series":
        return Series(self, {})

    def one(self) -> "Series":
        return self.constant(1)

    def constant(self, c: Scalar) -> "Series":
        return Series(self, {(0,) * self.arity: c})

    def var(self, name: str, power: int = 1, coeff: Scalar = 1) -> "Series":
        return Series(self, {self.exps(**{name: power}): coeff})

    def from_term(self, term: Term) -> "Series":
        return Series(self, {term.exps: term.coeff})


class Series:
    """Immutable truncated power series: a map monomial -> nonzero Fraction."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: VarTable, terms: Mapping[Monomial, Scalar]):
        clean = {}
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) != ring.arity:
                raise UsageError(f"Monomial {exps} has wrong arity for ring {ring.names}")
            if any(e < 0 for e in exps):
                raise UsageError(f"Negative exponent in {exps}")
            if c and ring.fits(exps):
                clean[exps] = Fraction(c)
        self.ring = ring
        self._terms = clean

    @classmethod
    def _wrap(cls, ring: VarTable, terms: dict[Monomial, Fraction]) -> "Series":
        # terms already validated, truncated and free of zeros
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        return obj

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[Monomial, Fraction]]:
        """Terms sorted lexicographically by exponent vector."""
        return sorted(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.ring.arity, Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, Series):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.constant(other)
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        from src.series_codec import format_series
        return f"Series({format_series(self)})"

    # -- operators ----------------------------------------------------------

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            _check_same_ring(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        raise TypeError(f"Cannot combine Series with {type(other).__name__}")

    def __add__(self, other):
        try:
            return add(self, self._coerce(other))
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Series._wrap(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            return add(self, -self._coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return add(self._coerce(other), -self)
        except TypeError:
            return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Series):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Series":
        c = Fraction(c)
        if c == 0:
            return self.ring.zero()
        return Series._wrap(self.ring, {e: v * c for e, v in self._terms.items()})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise SingularInputError("Division of a Series by zero")
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, Series):
            return mul(self, inverse(other))
        return NotImplemented

    def __pow__(self, k: int) -> "Series":
        if not isinstance(k, int) or k < 0:
            raise UsageError(f"Series ** k needs a non-negative integer, got {k!r}")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = mul(result, base)
            base = mul(base, base)
            k >>= 1
        return result


def _check_same_ring(f: Series, g: Series):
    if f.ring != g.ring:
        raise UsageError(f"Ring mismatch: {f.ring.names}{f.ring.caps} vs {g.ring.names}{g.ring.caps}")


def _mul_terms(a: Mapping[Monomial, Fraction], b: Mapping[Monomial, Fraction], caps: Monomial,
               into: dict[Monomial, Fraction] | None = None) -> dict[Monomial, Fraction]:
    """Truncated convolution of two term maps (zeros may remain in the result)."""
    out = {} if into is None else into
    if len(a) > len(b):
        a, b = b, a
    b_items = list(b.items())
    for ea, ca in a.items():
        room = tuple(c - e for c, e in zip(caps, ea))
        for eb, cb in b_items:
            if all(x <= r for x, r in zip(eb, room)):
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, 0) + ca * cb
    return out


def _by_degree(f: Series) -> dict[int, dict[Monomial, Fraction]]:
    parts: dict[int, dict[Monomial, Fraction]] = defaultdict(dict)
    for e, c in f._terms.items():
        parts[sum(e)][e] = c
    return parts


def _collect(ring: VarTable, parts: Iterable[Mapping[Monomial, Fraction]]) -> Series:
    terms = {}
    for part in parts:
        for e, c in part.items():
            if c:
                terms[e] = c
    return Series._wrap(ring, terms)


# -- ring operations --------------------------------------------------------

def add(f: Series, g: Series) -> Series:
    _check_same_ring(f, g)
    out = dict(f._terms)
    for e, c in g._terms.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return Series._wrap(f.ring, out)


def mul(f: Series, g: Series) -> Series:
    _check_same_ring(f, g)
    out = _mul_terms(f._terms, g._terms, f.ring.caps)
    return Series._wrap(f.ring, {e: c for e, c in out.items() if c})


def product(factors: Iterable[Series], ring: VarTable) -> Series:
    result = ring.one()
    for factor in factors:
        result = mul(result, factor)
    return result


def inverse(f: Series) -> Series:
    """Multiplicative inverse, solved degree by degree in total degree."""
    c0 = f.constant_term
    if c0 == 0:
        raise SingularInputError("Cannot invert a series with zero constant term")
    ring = f.ring
    parts = _by_degree(f)
    top = sum(ring.caps)
    zero = (0,) * ring.arity
    g: dict[int, dict[Monomial, Fraction]] = {0: {zero: 1 / c0}}
    for d in range(1, top + 1):
        acc: dict[Monomial, Fraction] = {}
        for j in range(1, d + 1):
            if j in parts and g.get(d - j):
                _mul_terms(parts[j], g[d - j], ring.caps, into=acc)
        g[d] = {e: -c / c0 for e, c in acc.items() if c}
    return _collect(ring, g.values())


def log1(f: Series) -> Series:
    """Logarithm of a series with constant term 1.

    Uses the Euler operator E = sum x_i d/dx_i, which preserves the truncation:
    E(f) = f * E(log f) gives d*L_d = d*f_d - sum_{j<d} j*L_j*f_{d-j}.
    """
    if f.constant_term != 1:
        raise DomainError(f"log1 needs constant term 1, got {f.constant_term}")
    ring = f.ring
    parts = _by_degree(f)
    top = sum(ring.caps)
    logs: dict[int, dict[Monomial, Fraction]] = {}
    for d in range(1, top + 1):
        acc: dict[Monomial, Fraction] = {}
        for j in range(1, d):
            if logs.get(j) and (d - j) in parts:
                _mul_terms({e: j * c for e, c in logs[j].items()}, parts[d - j], ring.caps, into=acc)
        current = dict(parts.get(d, {}))
        for e, c in acc.items():
            current[e] = current.get(e, 0) - c / d
        logs[d] = {e: c for e, c in current.items() if c}
    return _collect(ring, logs.values())


def exp0(f: Series) -> Series:
    """Exponential of a series with zero constant term: d*g_d = sum_j j*f_j*g_{d-j}."""
    if f.constant_term != 0:
        raise DomainError(f"exp0 needs zero constant term, got {f.constant_term}")
    ring = f.ring
    parts = _by_degree(f)
    top = sum(ring.caps)
    zero = (0,) * ring.arity
    g: dict[int, dict[Monomial, Fraction]] = {0: {zero: Fraction(1)}}
    for d in range(1, top + 1):
        acc: dict[Monomial, Fraction] = {}
        for j in range(1, d + 1):
            if j in parts and g.get(d - j):
                _mul_terms({e: j * c for e, c in parts[j].items()}, g[d - j], ring.caps, into=acc)
        g[d] = {e: c / d for e, c in acc.items() if c}
    return _collect(ring, g.values())


def power(f: Series, w: Series | Scalar) -> Series:
    """f ** w for a unit f with constant term 1 and any exponent series w."""
    if f.constant_term != 1:
        raise DomainError(f"power needs constant term 1, got {f.constant_term}")
    if isinstance(w, Series):
        _check_same_ring(f, w)
        return exp0(mul(w, log1(f)))
    if w == 0:
        return f.ring.one()
    return exp0(log1(f).scale(w))


def binomial_power(ring: VarTable, term: Term, w: Scalar) -> Series:
    """(1 + term) ** w by the generalized binomial series, exact for rational w."""
    if term.is_zero:
        return ring.one()
    if term.is_constant:
        raise DomainError("binomial_power needs a term of positive degree")
    w = Fraction(w)
    terms = {}
    binom = Fraction(1)
    k = 0
    while True:
        exps = tuple(k * e for e in term.exps)
        if not ring.fits(exps):
            break
        terms[exps] = binom * term.coeff ** k
        binom = binom * (w - k) / (k + 1)
        k += 1
        if binom == 0:
            break
    return Series(ring, terms)


def substitute(f: Series, var: str, replacement: Term) -> Series:
    """Replace var**e by replacement**e in every term, re-truncating."""
    ring = f.ring
    i = ring.index(var)
    if len(replacement.exps) != ring.arity:
        raise UsageError(f"Replacement {replacement} does not belong to ring {ring.names}")
    if not replacement.is_constant and replacement.exps[i] == 0:
        log.debug(f"Substituting {var} by a monomial free of {var}; truncated terms may be lost")
    out: dict[Monomial, Fraction] = {}
    for exps, c in f._terms.items():
        k = exps[i]
        base = list(exps)
        base[i] = 0
        new = tuple(b + k * r for b, r in zip(base, replacement.exps))
        if not ring.fits(new):
            continue
        v = c * replacement.coeff ** k
        if v:
            out[new] = out.get(new, 0) + v
    return Series._wrap(ring, {e: c for e, c in out.items() if c})


def coeff(f: Series, m: Monomial | Mapping[str, int]) -> Fraction:
    ring = f.ring
    if isinstance(m, Mapping):
        m = ring.exps(**m)
    m = tuple(m)
    if len(m) != ring.arity or not ring.fits(m) or any(e < 0 for e in m):
        raise UsageError(f"Monomial {m} lies outside caps {ring.caps_dict()}")
    return f._terms.get(m, Fraction(0))


def coeff_in(f: Series, var: str, k: int) -> Series:
    """The coefficient of var**k as a series in the remaining variables."""
    ring = f.ring
    i = ring.index(var)
    if k > ring.caps[i]:
        raise UsageError(f"{var}^{k} lies outside cap {ring.caps[i]}")
    out = {}
    for exps, c in f._terms.items():
        if exps[i] == k:
            e = list(exps)
            e[i] = 0
            out[tuple(e)] = c
    return Series._wrap(ring, out)


def project(f: Series, ring: VarTable) -> Series:
    """Move f into another table by variable name, re-truncating to its caps."""
    positions = []
    for i, name in enumerate(f.ring.names):
        positions.append(ring.names.index(name) if name in ring.names else None)
    out = {}
    for exps, c in f._terms.items():
        new = [0] * ring.arity
        for e, pos, name in zip(exps, positions, f.ring.names):
            if pos is None:
                if e:
                    raise UsageError(f"Variable {name!r} is used but absent from {ring.names}")
                continue
            new[pos] = e
        new_t = tuple(new)
        if ring.fits(new_t):
            out[new_t] = c
    return Series._wrap(ring, out)


def first_difference(f: Series, g: Series) -> tuple[Monomial, Fraction, Fraction] | None:
    """Lexicographically smallest monomial where f and g differ."""
    _check_same_ring(f, g)
    keys = sorted(set(f._terms) | set(g._terms))
    for k in keys:
        a = f._terms.get(k, Fraction(0))
        b = g._terms.get(k, Fraction(0))
        if a != b:
            return k, a, b
    return None


def eval_f64(f: Series, point: Mapping[str, float]) -> float:
    """Nested Horner evaluation of the truncated polynomial in double precision."""
    missing = [name for name in f.ring.names if name not in point]
    if missing:
        raise UsageError(f"No value given for {missing}")
    values = [float(point[name]) for name in f.ring.names]
    return _horner([(e, float(c)) for e, c in f._terms.items()], values, 0)


def _horner(terms: list[tuple[Monomial, float]], values: list[float], depth: int) -> float:
    if not terms:
        return 0.0
    if depth == len(values):
        return sum(c for _, c in terms)
    by_power: dict[int, list] = defaultdict(list)
    for e, c in terms:
        by_power[e[depth]].append((e, c))
    acc = 0.0
    for k in range(max(by_power), -1, -1):
        acc = acc * values[depth] + _horner(by_power.get(k, []), values, depth + 1)
    return acc
