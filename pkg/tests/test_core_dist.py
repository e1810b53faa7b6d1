import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schureq import (
    Explicit,
    Geometric,
    NonConvergentError,
    Poisson,
    check_n_monotone,
    forward_difference,
    truncate,
)
from schureq.core_dist import point_mass, stirling2_row

from conftest import poisson_pmf_exact, random_base


class TestPmf:
    def test_poisson_at_zero(self):
        assert Poisson(1.0).pmf(0) == pytest.approx(math.exp(-1), abs=1e-15)

    def test_geometric(self):
        # p(x) = S(x) - S(x+1) with S(x) = q^x
        assert Geometric(0.5).pmf(2) == pytest.approx(0.5**2 - 0.5**3, abs=1e-15)

    def test_explicit_out_of_support(self):
        assert Explicit([0.5, 0.5]).pmf(3) == 0.0

    @pytest.mark.parametrize("lam", [0.01, 0.5, 3.0, 40.0, 100.0])
    def test_poisson_matches_factorial_formula(self, lam):
        for x in range(0, int(lam) + 30):
            assert Poisson(lam).pmf(x) == pytest.approx(poisson_pmf_exact(lam, x), rel=1e-12)

    def test_poisson_table_normalized(self):
        d = Poisson(100.0)
        assert math.fsum(d.pmf_array(400)) == pytest.approx(1.0, abs=1e-15)


class TestSurvival:
    def test_geometric(self):
        assert Geometric(0.5).survival(3) == 0.125

    @pytest.mark.parametrize(
        "dist", [Poisson(2.5), Geometric(0.3), Explicit([0.2, 0.3, 0.5])]
    )
    def test_at_zero_is_one(self, dist):
        assert dist.survival(0) == 1.0

    def test_explicit_suffix(self):
        assert Explicit([0.5, 0.5]).survival(1) == 0.5

    @pytest.mark.parametrize("lam", [0.5, 7.0, 60.0])
    def test_poisson_tail_sum(self, lam):
        d = Poisson(lam)
        for x in (1, int(lam), int(lam) + 5, int(lam) + 20):
            direct = math.fsum(poisson_pmf_exact(lam, k) for k in range(x, x + 400))
            assert d.survival(x) == pytest.approx(direct, rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize("dist", [Poisson(3.0), Geometric(0.7), Explicit([0.1, 0.0, 0.6, 0.3])])
    def test_difference_is_pmf(self, dist):
        for x in range(25):
            assert dist.survival(x) - dist.survival(x + 1) == pytest.approx(dist.pmf(x), abs=1e-12)


class TestMoment:
    def test_poisson_second(self):
        direct = math.fsum(x * x * poisson_pmf_exact(1.0, x) for x in range(60))
        assert direct == pytest.approx(2.0, abs=1e-14)
        assert Poisson(1.0).moment(2) == pytest.approx(direct, abs=1e-14)

    def test_bernoulli_mean(self):
        assert Explicit([0.5, 0.5]).moment(1) == 0.5

    def test_geometric_mean_from_survival_sum(self):
        oracle = math.fsum(0.5**h for h in range(1, 200))
        assert Geometric(0.5).moment(1) == pytest.approx(oracle, abs=1e-15)

    @pytest.mark.parametrize("j", range(1, 8))
    @pytest.mark.parametrize("dist", [Poisson(2.0), Geometric(0.4)])
    def test_closed_forms_match_summation(self, dist, j):
        m = 400
        direct = math.fsum(float(x) ** j * dist.pmf(x) for x in range(m))
        assert dist.moment(j) == pytest.approx(direct, rel=1e-12)

    def test_bound_reported(self):
        value, bound = Explicit([0.5, 0.5]).moment_with_bound(2)
        assert (value, bound) == (0.5, 0.0)

    def test_order_zero_rejected(self):
        with pytest.raises(ValueError):
            Poisson(1.0).moment(0)

    def test_stirling_rows(self):
        assert stirling2_row(4) == [0, 1, 7, 6, 1]


class TestForwardDifference:
    def square(self, x):
        return x * x

    def test_first(self):
        assert forward_difference(self.square, 0, 1) == 1

    def test_second(self):
        assert forward_difference(self.square, 0, 2) == 2

    def test_order_zero(self):
        assert forward_difference(self.square, 3, 0) == 9

    def test_geometric_survival(self):
        assert forward_difference(Geometric(0.5).survival, 0, 1) == -0.5

    @given(st.integers(0, 10), st.integers(0, 60))
    def test_binomial_identity(self, j, x):
        assert forward_difference(lambda y: math.comb(y, j), x, j) == 1


class TestCheckNMonotone:
    def test_geometric_holds(self):
        assert check_n_monotone(Geometric(0.5), 5, 50).holds

    def test_bernoulli_is_two_monotone(self):
        # Δ²S(0) = S(2) - 2S(1) + S(0) = 0 - 1 + 1 = 0, Δ²S(1) = 0.5
        report = check_n_monotone(Explicit([0.5, 0.5]), 2, 5)
        assert report.holds
        assert report.first_violation is None

    def test_bernoulli_fails_at_third_order(self):
        report = check_n_monotone(Explicit([0.5, 0.5]), 3, 5)
        assert not report.holds
        v = report.first_violation
        assert (v.order, v.x) == (3, 0)
        assert v.value == pytest.approx(-0.5)

    def test_poisson_one_monotone(self):
        assert check_n_monotone(Poisson(1.0), 1, 30).holds

    def test_violation_exceeds_tolerance(self):
        report = check_n_monotone(Explicit([0.0, 0.0, 1.0]), 2, 5)
        assert not report.holds
        assert abs(report.first_violation.value) > 1e-12

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 25))
    def test_any_survival_is_one_monotone(self, seed, size):
        dist = random_base(np.random.default_rng(seed), size)
        assert check_n_monotone(dist, 1, size + 5).holds


class TestTruncate:
    def test_explicit_passthrough(self):
        d = Explicit([0.5, 0.5])
        assert truncate(d, 1e-12) is d

    def test_poisson(self):
        t = truncate(Poisson(1.0), 1e-12)
        assert math.fsum(t.probabilities) > 1 - 1e-12
        m = t.support_max
        # minimality: cutting one point earlier leaves too much tail
        assert Poisson(1.0).survival(m) >= 1e-12
        assert Poisson(1.0).survival(m + 1) < 1e-12
        assert math.fsum(t.probabilities) + t.discarded == pytest.approx(1.0, abs=1e-12)

    def test_geometric(self):
        q, eps = 0.999, 1e-12
        t = truncate(Geometric(q), eps)
        assert q ** (t.support_max + 1) < eps <= q**t.support_max
        assert abs(t.support_max - math.ceil(math.log(eps) / math.log(q))) <= 1

    def test_ceiling(self):
        with pytest.raises(NonConvergentError):
            truncate(Geometric(0.999, truncation_bound=1000), 1e-12)

    @pytest.mark.parametrize("lam", [0.5, 4.0, 10.0])
    @pytest.mark.parametrize("j", [1, 2, 3, 4])
    def test_preserves_moments(self, lam, j):
        d = Poisson(lam)
        t = truncate(d, 1e-12)
        x = np.arange(t.support_max + 1, dtype=float)
        truncated = math.fsum(x**j * t.probabilities)
        # what the cut leaves out of the j-th moment
        bound = math.fsum(
            float(k) ** j * d.pmf(k) for k in range(t.support_max + 1, t.support_max + 200)
        )
        assert abs(truncated - d.moment(j)) <= bound + 1e-12 * d.moment(j)


class TestExplicitValidation:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            Explicit([0.5, 0.4])

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            Explicit([1.5, -0.5])

    def test_point_mass(self):
        d = point_mass(0)
        assert d.moment(1) == 0.0
        assert d.survival(1) == 0.0

    def test_immutable(self):
        d = Explicit([0.5, 0.5])
        with pytest.raises(ValueError):
            d.probabilities[0] = 1.0
