import math

import numpy as np
import pytest

from constants.Constants import CHSH_CLASSICAL_MAX, CHSH_QUANTUM_MAX, QUANTUM_WIN_PROBABILITY
from exceptions.wse_exceptions import ValidationException
from models.security_data import BoundedStorage, TabulatedStorage
from services.analysis.bounds_analyzer import BoundsAnalyzer
from services.analysis.chsh_analyzer import ChshAnalyzer

TRUSTED_RATE = 1 - math.log2(1 + 1 / math.sqrt(2))

class TestMinEntropyRate:

    def test_trusted_anchor(self):
        assert BoundsAnalyzer.h(0.0) == pytest.approx(0.2284, abs=1e-4)
        assert BoundsAnalyzer.trusted_device_rate() == pytest.approx(BoundsAnalyzer.h(0.0), abs=1e-12)

    def test_full_anticommutator_gives_nothing(self):
        assert BoundsAnalyzer.h(1.0) == 0.0

    def test_h_decreasing(self):
        values = [BoundsAnalyzer.h(x) for x in np.linspace(0.0, 1.0, 50)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_h_domain(self):
        for x in (-0.1, 1.1, float("nan")):
            with pytest.raises(ValidationException):
                BoundsAnalyzer.h(x)

class TestFOfBeta:

    def test_classical_value_certifies_nothing(self):
        assert BoundsAnalyzer.eps_plus_max_from_beta(CHSH_CLASSICAL_MAX) == 1.0
        assert BoundsAnalyzer.f_of_beta(CHSH_CLASSICAL_MAX) == 0.0

    def test_tsirelson_value_gives_trusted_rate(self):
        assert BoundsAnalyzer.f_of_beta(CHSH_QUANTUM_MAX) == pytest.approx(TRUSTED_RATE, abs=1e-12)

    def test_curve_strictly_increasing(self):
        rows = BoundsAnalyzer.f_curve(200)
        assert len(rows) == 200
        assert rows[0]["beta"] == CHSH_CLASSICAL_MAX
        values = [row["f_beta"] for row in rows]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_inverse_of_chsh_bound(self):
        for eps in np.linspace(0.0, 1.0, 21):
            beta = ChshAnalyzer.bound_rhs(eps)
            assert BoundsAnalyzer.eps_plus_max_from_beta(beta) == pytest.approx(eps, abs=1e-9)

    def test_beta_below_classical_rejected(self):
        with pytest.raises(ValidationException):
            BoundsAnalyzer.f_of_beta(1.9)

    def test_beta_grid_order(self):
        with pytest.raises(ValidationException):
            BoundsAnalyzer.beta_grid(10, 2.5, 2.2)
        grid = BoundsAnalyzer.beta_grid(3, 2.2, 2.6)
        np.testing.assert_allclose(grid, [2.2, 2.4, 2.6])

class TestStorageBounds:

    def test_bounded_rate(self):
        f = BoundsAnalyzer.f_of_beta(CHSH_QUANTUM_MAX)
        assert BoundsAnalyzer.min_entropy_rate_bounded(CHSH_QUANTUM_MAX, 1, 10) == pytest.approx(f)
        assert BoundsAnalyzer.min_entropy_rate_bounded(CHSH_QUANTUM_MAX, 1024, 10) == pytest.approx(f - 1.0)

    def test_bounded_guessing_probability_capped(self):
        assert BoundsAnalyzer.guessing_probability_bound_bounded(CHSH_CLASSICAL_MAX, 4, 10) == 1.0
        expected = 2.0 * 2.0 ** (-100 * TRUSTED_RATE)
        assert BoundsAnalyzer.guessing_probability_bound_bounded(CHSH_QUANTUM_MAX, 2, 100) == pytest.approx(expected)

    def test_bit_budget(self):
        assert BoundsAnalyzer.storage_bit_budget(0.0, 100, 0.5) == 21
        assert BoundsAnalyzer.storage_bit_budget(1.0, 100, 0.5) == 0
        with pytest.raises(ValidationException):
            BoundsAnalyzer.storage_bit_budget(0.0, 100, 0.0)

    def test_noisy_rate_with_trivial_memory(self):
        rate = BoundsAnalyzer.min_entropy_rate_noisy(0.0, 100, 0.5, BoundedStorage(1))
        assert rate == pytest.approx(0.21)

    def test_noisy_rate_with_table(self):
        storage = TabulatedStorage([1.0, 0.5, 0.25])
        assert storage.success_probability(30) == 0.25
        assert BoundsAnalyzer.min_entropy_rate_noisy(0.0, 100, 0.5, storage) == pytest.approx(0.02)

    def test_noisy_rate_zero_budget(self):
        assert BoundsAnalyzer.min_entropy_rate_noisy(1.0, 100, 0.5, BoundedStorage(4)) == 0.0

    def test_noisy_rate_never_beats_bounded_rate(self):
        epsilon = 0.25
        for beta in np.linspace(2.3, CHSH_QUANTUM_MAX, 5):
            eps_plus = BoundsAnalyzer.eps_plus_max_from_beta(beta)
            for d in (1, 2, 16):
                for n in (50, 200):
                    noisy = BoundsAnalyzer.min_entropy_rate_noisy(eps_plus, n, epsilon, BoundedStorage(d))
                    bounded = BoundsAnalyzer.min_entropy_rate_bounded(beta, d, n)
                    assert noisy <= max(bounded, 0.0) + (math.log2(1 / epsilon) + 1) / n + 1e-12

    def test_storage_validation(self):
        with pytest.raises(ValidationException):
            TabulatedStorage([0.9, 0.5])
        with pytest.raises(ValidationException):
            TabulatedStorage([1.0, 0.5, 0.6])
        with pytest.raises(ValidationException):
            BoundedStorage(0)

class TestTradeoffCurve:

    def test_endpoints(self):
        top, bottom = BoundsAnalyzer.tradeoff_point(1.0), BoundsAnalyzer.tradeoff_point(0.0)
        assert top.p_L == pytest.approx(1.0) and top.p_T == pytest.approx(0.75)
        assert bottom.p_L == pytest.approx(QUANTUM_WIN_PROBABILITY)
        assert bottom.p_T == pytest.approx(QUANTUM_WIN_PROBABILITY)

    def test_curve_monotone(self):
        points = BoundsAnalyzer.tradeoff_curve(11)
        assert [p.t for p in points][0] == 0.0 and points[-1].t == 1.0
        assert all(b.p_L > a.p_L and b.p_T < a.p_T for a, b in zip(points, points[1:]))

    @pytest.mark.parametrize("samples", ["many", None, 2.5, 1, True, float("nan")])
    def test_sample_count_rejected(self, samples):
        with pytest.raises(ValidationException):
            BoundsAnalyzer.tradeoff_curve(samples)

    def test_integral_float_sample_count(self):
        assert len(BoundsAnalyzer.tradeoff_curve(3.0)) == 3

    def test_admissibility(self):
        assert BoundsAnalyzer.is_admissible(1.0, 0.75)
        assert BoundsAnalyzer.is_admissible(QUANTUM_WIN_PROBABILITY, QUANTUM_WIN_PROBABILITY)
        assert BoundsAnalyzer.is_admissible(0.5, 0.8)
        assert not BoundsAnalyzer.is_admissible(1.0, 0.8)
        assert not BoundsAnalyzer.is_admissible(0.9, 0.9)

    def test_uncertainty_bound(self):
        assert BoundsAnalyzer.uncertainty_bound(0.0) == pytest.approx(QUANTUM_WIN_PROBABILITY)
        assert BoundsAnalyzer.uncertainty_bound(1.0) == 1.0
