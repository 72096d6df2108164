"""Statistics cross-checked against scipy (test dependency only; the
package itself computes everything from scratch)."""

import math

import numpy as np
import pytest
from scipy import special, stats as sps

from nodelabel.errors import DomainError, ParameterError
from nodelabel.stats import (
    paired_t_test,
    regularized_incomplete_beta,
    student_t_cdf,
)


class TestIncompleteBeta:
    def test_grid_against_scipy(self):
        worst = 0.0
        for a in (0.5, 1.0, 2.5, 4.5, 10.0, 40.0):
            for b in (0.5, 1.0, 3.0, 7.5, 25.0):
                for x in (1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1 - 1e-6):
                    got = regularized_incomplete_beta(a, b, x)
                    ref = float(special.betainc(a, b, x))
                    worst = max(worst, abs(got - ref))
        assert worst < 1e-12

    def test_boundaries(self):
        assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
        assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0

    def test_reflection_identity(self):
        for a, b, x in [(2.0, 5.0, 0.3), (0.5, 0.5, 0.77), (6.0, 1.5, 0.11)]:
            lhs = regularized_incomplete_beta(a, b, x)
            rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x)
            assert abs(lhs - rhs) < 1e-13

    def test_uniform_special_case(self):
        # I_x(1, 1) is the identity
        for x in (0.1, 0.25, 0.9):
            assert abs(regularized_incomplete_beta(1.0, 1.0, x) - x) < 1e-14

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            regularized_incomplete_beta(0.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            regularized_incomplete_beta(1.0, -2.0, 0.5)
        with pytest.raises(DomainError):
            regularized_incomplete_beta(1.0, 1.0, 1.5)


class TestStudentT:
    def test_grid_against_scipy(self):
        worst = 0.0
        for nu in (1, 2, 3, 5, 9, 14, 30, 100):
            for t in (-8.0, -2.5, -1.0, -0.3, 0.0, 0.4, 1.1, 1.8331, 3.0, 7.5):
                got = student_t_cdf(t, nu)
                ref = float(sps.t.cdf(t, nu))
                worst = max(worst, abs(got - ref))
        assert worst < 1e-10

    def test_symmetry(self):
        for nu in (2, 7, 19):
            for t in (0.3, 1.4, 2.9):
                s = student_t_cdf(t, nu) + student_t_cdf(-t, nu)
                assert abs(s - 1.0) < 1e-13
        assert student_t_cdf(0.0, 5) == 0.5

    def test_pinned_training_threshold(self):
        # the trainer's swap rule compares against p = 0.05 at this exact
        # statistic: one-sided tail of t = 1.8331 with 9 degrees of freedom
        tail = 1.0 - student_t_cdf(1.8331, 9)
        assert abs(tail - 0.05) < 0.001

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            student_t_cdf(1.0, 0)
        with pytest.raises(DomainError):
            student_t_cdf(math.inf, 3)


class TestPairedTTest:
    def test_against_scipy_alternative_less(self):
        rng = np.random.Generator(np.random.PCG64(99))
        for trial in range(30):
            n = int(rng.integers(3, 40))
            base = rng.normal(size=n) * rng.uniform(0.5, 3.0)
            cand = base + rng.normal(size=n) * rng.uniform(0.1, 2.0) \
                + rng.uniform(-1.0, 1.0)
            got = paired_t_test(cand, base)
            ref = float(sps.ttest_rel(cand, base, alternative="less").pvalue)
            assert abs(got - ref) < 1e-10, f"trial {trial}"

    def test_improvement_gives_small_p(self):
        base = np.array([10.0, 11.0, 9.0, 10.5, 10.2, 9.8, 10.9, 10.1])
        cand = base - 1.0 + np.linspace(-0.1, 0.1, 8)
        assert paired_t_test(cand, base) < 0.001

    def test_regression_gives_large_p(self):
        base = np.array([5.0, 6.0, 5.5, 6.2, 5.8, 6.1])
        cand = base + 2.0 + np.linspace(-0.05, 0.05, 6)
        assert paired_t_test(cand, base) > 0.999

    def test_degenerate_cases_pinned(self):
        same = np.array([3.0, 4.0, 5.0])
        assert paired_t_test(same, same) == 0.5
        assert paired_t_test(same - 2.0, same) == 0.0
        assert paired_t_test(same + 2.0, same) == 1.0

    def test_validation(self):
        with pytest.raises(ParameterError):
            paired_t_test([1.0], [2.0])
        with pytest.raises(ParameterError):
            paired_t_test([1.0, 2.0], [1.0, 2.0, 3.0])
        with pytest.raises(ParameterError):
            paired_t_test(np.ones((2, 2)), np.ones((2, 2)))
        with pytest.raises(DomainError):
            paired_t_test([1.0, np.nan], [0.0, 0.0])
