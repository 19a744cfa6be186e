import math

import numpy as np
import pytest

from config.settings import Settings
from exceptions.wse_exceptions import ValidationException
from models.security_data import TestParams
from services.analysis.alpha_analyzer import AlphaAnalyzer, golden_section_minimize

class TestGoldenSection:

    def test_quadratic_minimum(self):
        result = golden_section_minimize(lambda x: (x - 1.3) ** 2 + 2.0, 0.0, 4.0)
        assert result["converged"]
        assert result["argmin"] == pytest.approx(1.3, abs=1e-6)
        assert result["minimum"] == pytest.approx(2.0, abs=1e-12)

    def test_minimum_on_lower_endpoint(self):
        result = golden_section_minimize(lambda x: x, 0.0, 1.0)
        assert result["argmin"] == 0.0 and result["minimum"] == 0.0

class TestOneRoundObjective:

    @pytest.mark.parametrize("q", np.linspace(0.0, 1.0, 6))
    @pytest.mark.parametrize("gamma", np.linspace(0.75, 1.0, 6))
    def test_g_is_one_at_zero(self, q, gamma):
        value, t_star = AlphaAnalyzer.g(q, gamma, 0.0)
        assert value == pytest.approx(1.0, abs=1e-12)
        assert t_star == 1.0

    @pytest.mark.parametrize("q,gamma", [(0.3, 0.9), (0.5, 0.85), (0.2, 0.78)])
    @pytest.mark.parametrize("k", [0.5, 1.0, 4.0])
    def test_closed_form_matches_grid(self, q, gamma, k):
        closed = AlphaAnalyzer.alpha(q, gamma, k)
        grid = AlphaAnalyzer.grid_maximum(q, gamma, k, points=10_000)
        assert closed >= grid - 1e-12
        assert closed - grid <= 1e-6

    def test_maximiser_on_curve(self):
        value, t_star = AlphaAnalyzer.g(0.5, 0.85, 2.0)
        assert 0.0 <= t_star <= 1.0
        raw = float(AlphaAnalyzer.raw_objective(0.5, 0.85, 2.0, t_star))
        assert raw == pytest.approx(value, abs=1e-12)

    def test_coefficients_at_zero(self):
        a, b, c = AlphaAnalyzer.coefficients(0.4, 0.9, 0.0)
        assert a == pytest.approx(2 * 0.6 / (4 * math.sqrt(2)))
        assert b == 0.0
        assert c == pytest.approx(0.3 + 0.4)

    @pytest.mark.parametrize("q,gamma", [(0.3, 0.9), (0.5, 0.85), (0.9, 0.95)])
    def test_taylor_slope(self, q, gamma):
        assert AlphaAnalyzer.taylor_slope(q, gamma) == pytest.approx(
            AlphaAnalyzer.expected_taylor_slope(q, gamma), abs=1e-4
        )

    def test_negative_k_rejected(self):
        with pytest.raises(ValidationException):
            AlphaAnalyzer.g(0.5, 0.85, -0.1)

    def test_parameter_domain(self):
        with pytest.raises(ValidationException):
            AlphaAnalyzer.g(1.5, 0.85, 1.0)
        with pytest.raises(ValidationException):
            AlphaAnalyzer.alpha_min(0.5, 0.7)

class TestAlphaMin:

    def test_boundary_is_one(self):
        for gamma in (0.75, 0.8, 0.9, 1.0):
            result = AlphaAnalyzer.alpha_min(0.0, gamma)
            assert result.alpha_min == 1.0 and result.k_star == 0.0
        for q in (0.1, 0.5, 1.0):
            assert AlphaAnalyzer.alpha_min(q, 0.75).alpha_min == 1.0

    @pytest.mark.parametrize("q,gamma", [(0.3, 0.9), (0.5, 0.85), (0.7, 0.8)])
    def test_golden_matches_dense_grid(self, q, gamma):
        result = AlphaAnalyzer.alpha_min(q, gamma)
        grid_value, grid_k = AlphaAnalyzer.grid_alpha_min(q, gamma)
        assert result.converged
        assert result.alpha_min < 1.0
        assert result.alpha_min <= grid_value + 1e-9
        assert grid_value - result.alpha_min <= 1e-6
        assert result.k_star == pytest.approx(grid_k, abs=1e-2)

    def test_interior_is_secure(self):
        assert AlphaAnalyzer.security_region_check([0.1, 0.5, 0.9], [0.76, 0.875, 0.99])

    def test_unimodal_on_grid(self):
        assert AlphaAnalyzer.descent_ascent_transitions(0.5, 0.85) <= 1

    def test_gamma_one_hits_ceiling(self):
        result = AlphaAnalyzer.alpha_min(0.5, 1.0)
        assert not result.converged
        assert result.k_star > 1e5
        # limit of g as k -> infinity
        assert result.alpha_min == pytest.approx(math.sqrt(1.5 ** 2 + 0.5 ** 2) / 4 + 0.5, abs=1e-12)

    def test_q_one_flagged_degenerate(self):
        result = AlphaAnalyzer.alpha_min(1.0, 0.9)
        assert result.degenerate
        assert 0.0 < result.alpha_min <= 1.0

    def test_failure_bound(self):
        alpha = AlphaAnalyzer.alpha_min(0.5, 0.85).alpha_min
        assert AlphaAnalyzer.failure_bound(TestParams(0.5, 0.85, 20)) == pytest.approx(alpha ** 20)
        assert AlphaAnalyzer.failure_bound(TestParams(0.5, 0.85, 0)) == 1.0

    def test_grid_order_independent_of_workers(self):
        serial = AlphaAnalyzer.alpha_min_grid([0.2, 0.6], [0.8, 0.9, 0.95], workers=1)
        threaded = AlphaAnalyzer.alpha_min_grid([0.2, 0.6], [0.8, 0.9, 0.95], workers=3)
        assert [(r.q, r.gamma) for r in serial] == [(0.2, 0.8), (0.2, 0.9), (0.2, 0.95),
                                                   (0.6, 0.8), (0.6, 0.9), (0.6, 0.95)]
        assert [r.to_dict() for r in serial] == [r.to_dict() for r in threaded]

    def test_search_settings(self):
        settings = Settings.get_search_settings()
        assert settings["ceiling"] == 1e6
        assert settings["initial_step"] > 0
