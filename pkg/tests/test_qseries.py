"""Tests for F_n, G_n and their specializations."""

from fractions import Fraction
from math import factorial

import pytest

from src.oracle import count_plane_partitions, count_vector_partitions
from src.qseries import (
    FnSpec,
    GnSpec,
    expand_F_det,
    expand_F_newton,
    expand_F_product,
    expand_G_det,
    expand_G_newton,
    expand_G_product,
    functional_eq_check,
    g1_displayed_coefficients,
    g1_quotient_displayed_coefficients,
    g1_quotient_pipelines,
    macmahon_lhs,
    macmahon_rhs,
    macmahon_specials,
    product_F,
    qbinom_product,
    qbinom_spec,
    qbinom_sum,
    trace_generating_function,
    trace_product,
    vector_partition_product,
    x_names,
)
from src.series import UsageError, VarTable, coeff, coeff_in, inverse, mul, project


class TestSpecs:
    def test_variable_names(self):
        assert x_names(1) == ("q",)
        assert x_names(3) == ("x", "y", "z")
        assert x_names(4) == ("x1", "x2", "x3", "x4")

    def test_ring_layout(self):
        ring = FnSpec(n=2, caps={"t": 5}, default_cap=3).ring()
        assert ring.names == ("x", "y", "a", "t")
        assert ring.caps == (3, 3, 3, 5)

    def test_constant_a_drops_variable(self):
        """Specializing a removes it from the ring."""
        assert "a" not in FnSpec(n=1, a=Fraction(1, 2)).names

    def test_unknown_cap_rejected(self):
        with pytest.raises(UsageError):
            FnSpec(n=1, caps={"z": 2})

    def test_dimension_rejected(self):
        with pytest.raises(UsageError):
            FnSpec(n=0)


class TestFnPipelines:
    @pytest.mark.parametrize("n, caps, default_cap", [
        (1, {"a": 3, "t": 4}, 3),
        (2, {"a": 3, "t": 4}, 3),
        (3, {"a": 2, "t": 3}, 2),
    ])
    def test_three_pipelines_agree(self, n, caps, default_cap):
        spec = FnSpec(n=n, caps=caps, default_cap=default_cap)
        product = expand_F_product(spec)
        assert expand_F_newton(spec) == product
        assert expand_F_det(spec) == product

    def test_bareiss_pipeline(self):
        spec = FnSpec(n=1, caps={"q": 4, "a": 2, "t": 3})
        assert expand_F_det(spec, method="bareiss") == expand_F_product(spec)

    def test_zero_t_cap(self):
        spec = FnSpec(n=1, caps={"t": 0})
        assert expand_F_det(spec) == spec.ring().one()
        assert expand_F_product(spec) == spec.ring().one()

    def test_vanishing_coordinate_drops_dimension(self):
        """A zero x_1 in the two-coordinate product gives back F_1."""
        spec = FnSpec(n=1, caps={"q": 4, "a": 2, "t": 3})
        ring = spec.ring()
        specialized = product_F(ring, [ring.term(0), ring.term(1, q=1)], spec.a_term(ring), spec.t_term(ring))
        assert specialized == expand_F_product(spec)


class TestQBinomial:
    @pytest.fixture
    def spec(self):
        return qbinom_spec({"q": 5, "a": 3, "t": 4})

    def test_sum_equals_product(self, spec):
        assert qbinom_sum(spec) == qbinom_product(spec)

    def test_first_coefficient(self, spec):
        ring = spec.ring()
        expected = mul(1 - ring.var("a"), inverse(1 - ring.var("q")))
        assert coeff_in(qbinom_sum(spec), "t", 1) == expected

    def test_a_equal_one_collapses(self):
        spec = qbinom_spec({"q": 4, "t": 4}, a=Fraction(1))
        assert qbinom_sum(spec) == 1
        assert qbinom_product(spec) == 1

    def test_a_equal_zero_is_euler(self):
        """a = 0: the t^2 coefficient is 1/((1 - q)(1 - q^2))."""
        spec = qbinom_spec({"q": 4, "t": 3}, a=Fraction(0))
        ring = spec.ring()
        q = ring.var("q")
        expected = inverse((1 - q) * (1 - q ** 2))
        assert coeff_in(qbinom_sum(spec), "t", 2) == expected

    def test_sum_is_one_dimensional(self):
        with pytest.raises(UsageError):
            qbinom_sum(FnSpec(n=2))


class TestGnPipelines:
    @pytest.mark.parametrize("n", [1, 2])
    def test_three_pipelines_agree(self, n):
        spec = GnSpec(n=n, caps={"a": 2, "t": 3}, default_cap=4)
        product = expand_G_product(spec)
        assert expand_G_newton(spec) == product
        assert expand_G_det(spec) == product

    def test_displayed_coefficients(self):
        spec = GnSpec(n=1, caps={"q": 6, "t": 4}, a=Fraction(0))
        g = expand_G_product(spec)
        target = VarTable(("q",), (6,))
        shown = g1_displayed_coefficients(6)
        for k in range(1, 5):
            assert project(coeff_in(g, "t", k), target).scale(factorial(k)) == shown[k - 1]


class TestQuotient:
    def test_pipelines_agree(self):
        pipelines = g1_quotient_pipelines({"q": 6, "t": 4})
        assert set(pipelines) == {"quotient", "product", "newton", "det"}
        for name, value in pipelines.items():
            assert value == pipelines["quotient"], name

    def test_displayed_coefficients(self):
        quotient = g1_quotient_pipelines({"q": 6, "t": 4})["quotient"]
        target = VarTable(("q",), (6,))
        shown = g1_quotient_displayed_coefficients(6)
        for k in range(1, 5):
            assert project(coeff_in(quotient, "t", k), target).scale(factorial(k)) == shown[k - 1]

    def test_zero_t_cap_skips_power_sums(self):
        """With t capped at 0 only the quotient and product pipelines run."""
        pipelines = g1_quotient_pipelines({"q": 3, "t": 0})
        assert set(pipelines) == {"quotient", "product"}


class TestPlanePartitions:
    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_specialization_matches_product(self, k):
        """F_2(q, q; q^k, q) equals the MacMahon k-rowed product."""
        assert macmahon_lhs(k, 8) == macmahon_rhs(k, 8)

    def test_unlimited_rows_are_plane_partitions(self):
        f = macmahon_specials(0, 8)
        assert [coeff(f, (n,)) for n in range(9)] == [1, 1, 3, 6, 13, 24, 48, 86, 160]

    @pytest.mark.parametrize("k", [1, 2])
    def test_row_bound_matches_enumeration(self, k):
        f = macmahon_rhs(k, 6)
        for n in range(7):
            assert coeff(f, (n,)) == count_plane_partitions(n, rows=k)

    def test_negative_row_bound(self):
        with pytest.raises(UsageError):
            macmahon_lhs(-1, 4)

    def test_trace_refinement(self):
        """a counts the trace in F_2(q, q; 0, qa), checked against enumeration."""
        f = trace_generating_function(q_cap=6, a_cap=6)
        assert f == trace_product(q_cap=6, a_cap=6)
        for n in range(7):
            for m in range(7):
                assert coeff(f, {"a": m, "q": n}) == count_plane_partitions(n, trace_value=m)


class TestVectorPartitions:
    @pytest.mark.parametrize("mode", ["unrestricted", "distinct"])
    def test_product_matches_enumeration(self, mode):
        f = vector_partition_product(5, 5, mode)
        for j in range(6):
            for k in range(6):
                assert coeff(f, (j, k)) == count_vector_partitions((j, k), mode), (j, k)

    def test_unknown_mode(self):
        with pytest.raises(UsageError):
            vector_partition_product(2, 2, "ordered")


class TestFunctionalEquation:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_holds(self, n):
        report = functional_eq_check(n, FnSpec(n=n, caps={"t": 3}, default_cap=2))
        assert report.passed
        assert report.identity == "functional-eq"

    def test_perturbed_fails(self):
        report = functional_eq_check(1, FnSpec(n=1, default_cap=3), perturb=True)
        assert not report.passed
        assert report.first_difference is not None

    def test_dimension_mismatch(self):
        with pytest.raises(UsageError):
            functional_eq_check(2, FnSpec(n=1))
