"""Tests for the truncated power-series core."""

import random
from fractions import Fraction

import pytest

from src.qseries import FnSpec, expand_F_product, product_F
from src.series import (
    DomainError,
    Series,
    SingularInputError,
    Term,
    UsageError,
    VarTable,
    add,
    binomial_power,
    coeff,
    coeff_in,
    eval_f64,
    exp0,
    first_difference,
    inverse,
    log1,
    mul,
    power,
    product,
    project,
    substitute,
)


@pytest.fixture
def qt():
    return VarTable(("q", "t"), (3, 3))


@pytest.fixture
def rng():
    return random.Random(20240601)


def random_series(ring, rng, constant=None, size=6):
    terms = {}
    for _ in range(size):
        exps = tuple(rng.randint(0, cap) for cap in ring.caps)
        terms[exps] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    zero = (0,) * ring.arity
    if constant is not None:
        terms[zero] = constant
    return Series(ring, terms)


class TestVarTable:
    def test_duplicate_names_rejected(self):
        with pytest.raises(UsageError):
            VarTable(("q", "q"), (1, 1))

    def test_arity_mismatch_rejected(self):
        with pytest.raises(UsageError):
            VarTable(("q", "t"), (1,))

    def test_negative_cap_rejected(self):
        with pytest.raises(UsageError):
            VarTable(("q",), (-1,))

    def test_unknown_variable(self, qt):
        with pytest.raises(UsageError):
            qt.var("x")

    def test_of_keeps_order(self):
        ring = VarTable.of({"x": 2, "a": 1, "t": 3})
        assert ring.names == ("x", "a", "t")
        assert ring.caps == (2, 1, 3)


class TestSeriesValue:
    def test_zero_coefficients_never_stored(self, qt):
        f = Series(qt, {(0, 0): 1, (1, 0): 0})
        assert len(f) == 1

    def test_terms_beyond_caps_dropped(self, qt):
        """Monomials past any cap are truncated on construction."""
        f = Series(qt, {(0, 0): 1, (4, 0): 7})
        assert f == qt.one()

    def test_equality_with_scalars(self, qt):
        assert qt.constant(3) == 3
        assert qt.constant(Fraction(1, 2)) == Fraction(1, 2)

    def test_items_sorted(self, qt):
        f = qt.var("t") + qt.var("q") + 1
        assert [e for e, _ in f.items()] == [(0, 0), (0, 1), (1, 0)]


class TestAdd:
    def test_cancellation(self, qt):
        t = qt.var("t")
        assert add(1 + t, -t) == qt.one()

    def test_identity(self, qt, rng):
        f = random_series(qt, rng)
        assert add(f, qt.zero()) == f

    def test_disjoint_supports(self, qt):
        q, t = qt.var("q"), qt.var("t")
        assert (1 + q) + (1 + t) == 2 + q + t

    def test_ring_mismatch(self, qt):
        other = VarTable(("q", "t"), (2, 2))
        with pytest.raises(UsageError):
            add(qt.one(), other.one())


class TestMul:
    def test_geometric_telescoping(self):
        ring = VarTable(("t",), (3,))
        t = ring.var("t")
        assert mul(1 - t, 1 + t + t ** 2 + t ** 3) == ring.one()

    def test_two_variables(self, qt):
        q, t = qt.var("q"), qt.var("t")
        assert mul(1 + q, 1 + t) == 1 + q + t + q * t

    def test_commutative(self, qt, rng):
        for _ in range(10):
            f, g = random_series(qt, rng), random_series(qt, rng)
            assert mul(f, g) == mul(g, f)

    def test_associative_and_distributive(self, qt, rng):
        for _ in range(5):
            f, g, h = (random_series(qt, rng) for _ in range(3))
            assert mul(mul(f, g), h) == mul(f, mul(g, h))
            assert mul(f, g + h) == mul(f, g) + mul(f, h)

    def test_independent_of_term_order(self, qt, rng):
        """Insertion order of terms never affects products."""
        f, g = random_series(qt, rng, size=8), random_series(qt, rng, size=8)
        shuffled = list(f.terms.items())
        rng.shuffle(shuffled)
        assert mul(Series(qt, dict(shuffled)), g) == mul(f, g)

    def test_product_of_factors(self, qt, rng):
        factors = [random_series(qt, rng) for _ in range(3)]
        assert product(factors, qt) == mul(mul(factors[0], factors[1]), factors[2])

    def test_empty_product_is_one(self, qt):
        assert product([], qt) == qt.one()


class TestInverse:
    def test_geometric_series(self):
        ring = VarTable(("t",), (3,))
        t = ring.var("t")
        assert inverse(1 - t) == 1 + t + t ** 2 + t ** 3

    def test_one(self, qt):
        assert inverse(qt.one()) == qt.one()

    def test_scaled(self):
        ring = VarTable(("t",), (2,))
        t = ring.var("t")
        half = Fraction(1, 2)
        assert inverse(2 - 2 * t) == half + half * t + half * t ** 2

    def test_multiplies_back_to_one(self, qt, rng):
        for _ in range(10):
            f = random_series(qt, rng, constant=Fraction(rng.randint(1, 5), rng.randint(1, 3)))
            assert mul(f, inverse(f)) == qt.one()

    def test_zero_constant_is_singular(self, qt):
        with pytest.raises(SingularInputError):
            inverse(qt.var("t"))


class TestLogExp:
    def test_log_of_one(self, qt):
        assert log1(qt.one()).is_zero

    def test_mercator(self):
        """log(1 - t) = -t - t^2/2 - t^3/3 through the cap."""
        ring = VarTable(("t",), (3,))
        t = ring.var("t")
        assert log1(1 - t) == -t - Fraction(1, 2) * t ** 2 - Fraction(1, 3) * t ** 3

    def test_exp_of_zero(self, qt):
        assert exp0(qt.zero()) == qt.one()

    def test_exponential_series(self):
        ring = VarTable(("q",), (4,))
        q = ring.var("q")
        expected = 1 + q + q ** 2 / 2 + q ** 3 / 6 + q ** 4 / 24
        assert exp0(q) == expected

    def test_round_trips(self, rng):
        ring = VarTable(("x", "y", "t"), (3, 2, 4))
        for _ in range(5):
            unit = random_series(ring, rng, constant=1)
            assert exp0(log1(unit)) == unit
            nilpotent = random_series(ring, rng, constant=0)
            assert log1(exp0(nilpotent)) == nilpotent

    def test_log_domain(self, qt):
        with pytest.raises(DomainError):
            log1(qt.constant(2))

    def test_exp_domain(self, qt):
        with pytest.raises(DomainError):
            exp0(qt.one())


class TestPower:
    def test_square_root_round_trip(self):
        ring = VarTable(("t",), (6,))
        t = ring.var("t")
        root = power(1 - t, Fraction(1, 2))
        assert mul(root, root) == 1 - t

    def test_zero_exponent(self, qt, rng):
        assert power(random_series(qt, rng, constant=1), 0) == qt.one()

    def test_exponents_add(self, qt, rng):
        f = random_series(qt, rng, constant=1)
        w1, w2 = Fraction(2, 3), Fraction(-5, 7)
        assert power(f, w1 + w2) == mul(power(f, w1), power(f, w2))

    def test_series_exponent_is_binomial_theorem(self):
        """(1 - z)^w with w a series in x, y expands term by term."""
        ring = VarTable(("x", "y", "z"), (3, 3, 4))
        x, y, z = ring.var("x"), ring.var("y"), ring.var("z")
        w = inverse(mul(1 - x, 1 - y))
        expected = ring.one()
        binom = ring.one()
        for k in range(1, 5):
            binom = mul(binom, w - (k - 1)) / k
            expected = expected + mul(binom, z ** k) * (-1) ** k
        assert power(1 - z, w) == expected

    def test_binomial_power_matches_power(self):
        ring = VarTable(("q", "t"), (4, 5))
        term = ring.term(Fraction(-2, 3), q=1, t=1)
        assert binomial_power(ring, term, Fraction(3, 4)) == power(1 + ring.from_term(term), Fraction(3, 4))

    def test_binomial_power_needs_positive_degree(self, qt):
        with pytest.raises(DomainError):
            binomial_power(qt, qt.term(2), 1)


class TestSubstitute:
    def test_shift_by_monomial(self):
        ring = VarTable(("x", "t"), (2, 2))
        t = ring.var("t")
        assert substitute(1 + t, "t", ring.term(1, x=1, t=1)) == 1 + ring.var("x") * t

    def test_square(self):
        ring = VarTable(("t",), (4,))
        t = ring.var("t")
        assert substitute(1 + t + t ** 2, "t", ring.term(1, t=2)) == 1 + t ** 2 + t ** 4

    def test_shifted_product_expansion(self):
        """Substituting t -> xyt matches building the product at xyt directly."""
        spec = FnSpec(n=2, default_cap=2)
        ring = spec.ring()
        xyt = ring.term(1, x=1, y=1, t=1)
        shifted = substitute(expand_F_product(spec), "t", xyt)
        direct = product_F(ring, spec.xs(ring), spec.a_term(ring), xyt)
        assert shifted == direct

    def test_unknown_variable(self, qt):
        with pytest.raises(UsageError):
            substitute(qt.one(), "z", Term(Fraction(1), (0, 0)))


class TestCoefficients:
    def test_coeff(self, qt):
        t = qt.var("t")
        assert coeff(1 + 2 * t, (0, 1)) == 2
        assert coeff(qt.one(), {"t": 1}) == 0

    def test_coeff_outside_caps(self, qt):
        with pytest.raises(UsageError):
            coeff(qt.one(), {"t": 4})

    def test_coeff_in_and_project(self, qt):
        q, t = qt.var("q"), qt.var("t")
        f = 1 + q * t + 3 * q ** 2 * t
        target = VarTable(("q",), (3,))
        assert project(coeff_in(f, "t", 1), target) == target.var("q") + 3 * target.var("q", 2)

    def test_project_refuses_live_variable(self, qt):
        """Dropping a variable that carries exponents is an error."""
        with pytest.raises(UsageError):
            project(qt.var("t"), VarTable(("q",), (3,)))

    def test_first_difference(self, qt):
        q, t = qt.var("q"), qt.var("t")
        assert first_difference(1 + q, 1 + q) is None
        assert first_difference(1 + q + t, 1 + q + 2 * t) == ((0, 1), 1, 2)


class TestEval:
    def test_linear(self):
        ring = VarTable(("t",), (1,))
        assert eval_f64(1 + ring.var("t"), {"t": 0.5}) == 1.5

    def test_zero(self, qt):
        assert eval_f64(qt.zero(), {"q": 0.3, "t": 0.2}) == 0.0

    def test_geometric_sum(self):
        ring = VarTable(("t",), (20,))
        value = eval_f64(inverse(1 - ring.var("t")), {"t": 0.1})
        assert abs(value - 1 / 0.9) < 1e-12

    def test_missing_value(self, qt):
        with pytest.raises(UsageError):
            eval_f64(qt.one(), {"q": 0.1})
