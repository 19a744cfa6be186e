import math

import numpy as np
import pytest

from constants.Constants import CHSH_QUANTUM_MAX, QUANTUM_WIN_PROBABILITY, SIGMA_Z, PHI_PLUS
from exceptions.wse_exceptions import DimensionMismatchException, ValidationException
from models.device_setup import DeviceSetup
from models.operators import HermitianOperator, DensityMatrix
from services.analysis.chsh_analyzer import ChshAnalyzer
from services.linalg.matrix_core import MatrixCore
from utils.file_utils import FileUtils

class TestChshValue:

    def test_ideal_setup_reaches_tsirelson(self, ideal_setup):
        assert ChshAnalyzer.chsh_value(ideal_setup) == pytest.approx(CHSH_QUANTUM_MAX, abs=1e-10)

    def test_winning_probability(self):
        assert ChshAnalyzer.winning_probability(CHSH_QUANTUM_MAX) == pytest.approx(QUANTUM_WIN_PROBABILITY)
        assert ChshAnalyzer.winning_probability(2.0) == pytest.approx(0.75)
        with pytest.raises(ValidationException):
            ChshAnalyzer.winning_probability(3.0)

    def test_bound_rhs_endpoints(self):
        assert ChshAnalyzer.bound_rhs(0.0) == pytest.approx(CHSH_QUANTUM_MAX)
        assert ChshAnalyzer.bound_rhs(1.0) == pytest.approx(2.0)

    def test_ideal_setup_is_saturated(self, ideal_setup):
        report = ChshAnalyzer.verify_beta_eps_bound(ideal_setup)
        assert report.eps_plus == pytest.approx(0.0, abs=1e-12)
        assert report.saturated
        assert abs(report.slack) <= 1e-9

    def test_signed_and_absolute_anticommutator_differ(self):
        a0 = HermitianOperator(np.diag([1.0, -1.0, 1.0, -1.0]))
        a1 = HermitianOperator(np.diag([1.0, -1.0, -1.0, 1.0]))
        rho_a = DensityMatrix(np.diag([0.5, 0.0, 0.5, 0.0]))
        assert ChshAnalyzer.effective_anticommutator(a0, a1, rho_a) == pytest.approx(0.0, abs=1e-15)
        assert ChshAnalyzer.absolute_effective_anticommutator(a0, a1, rho_a) == pytest.approx(1.0)

class TestSaturatingFamily:

    @pytest.mark.parametrize("theta", [math.pi / 2, math.pi / 3, math.pi / 6, 0.05])
    def test_closed_forms(self, theta):
        report = ChshAnalyzer.verify_beta_eps_bound(ChshAnalyzer.saturating_setup(theta))
        assert report.beta == pytest.approx(2 * math.sqrt(1 + math.sin(theta)), abs=1e-10)
        assert report.eps_plus == pytest.approx(math.cos(theta), abs=1e-10)
        assert report.saturated

    def test_brute_force_bob_matches_closed_form(self):
        theta = math.pi / 3
        setup = ChshAnalyzer.saturating_setup(theta)
        closed = ChshAnalyzer.optimal_bob_value(*ChshAnalyzer.alice_bloch_vectors(theta))
        assert ChshAnalyzer.brute_force_bob_value(setup) == pytest.approx(closed, abs=1e-6)

    def test_angle_outside_domain(self):
        with pytest.raises(ValidationException):
            ChshAnalyzer.saturating_setup(0.0)
        with pytest.raises(ValidationException):
            ChshAnalyzer.saturating_setup(2.0)

class TestRandomSetups:

    def test_bound_and_chain_hold(self, rng):
        for _ in range(50):
            setup = ChshAnalyzer.random_setup(rng)
            assert ChshAnalyzer.verify_beta_eps_bound(setup).slack >= -1e-9
            assert ChshAnalyzer.bound_chain(setup).is_monotone()

    def test_random_observables_have_bounded_spectrum(self, rng):
        for _ in range(50):
            spectrum = np.linalg.eigvalsh(ChshAnalyzer.random_qubit_observable(rng).entries)
            assert spectrum[0] >= -1 - 1e-12 and spectrum[-1] <= 1 + 1e-12

    def test_chsh_value_linear_in_state(self, rng, ideal_setup):
        first = MatrixCore.random_density_matrix(rng, 4)
        second = MatrixCore.random_density_matrix(rng, 4)
        observables = dict(a0=ideal_setup.a0, a1=ideal_setup.a1, b0=ideal_setup.b0, b1=ideal_setup.b1)
        beta = lambda rho: ChshAnalyzer.chsh_value(DeviceSetup(rho_ab=rho, **observables))
        for weight in (0.2, 0.5, 0.9):
            mixture = DensityMatrix(weight * first.entries + (1.0 - weight) * second.entries)
            expected = weight * beta(first) + (1.0 - weight) * beta(second)
            assert beta(mixture) == pytest.approx(expected, abs=1e-10)

class TestDeviceSetup:

    def test_state_dimension_must_match(self):
        with pytest.raises(DimensionMismatchException):
            DeviceSetup(
                rho_ab=DensityMatrix(np.eye(2) / 2),
                a0=HermitianOperator(SIGMA_Z), a1=HermitianOperator(SIGMA_Z),
                b0=HermitianOperator(SIGMA_Z), b1=HermitianOperator(SIGMA_Z)
            )

    def test_observable_spectrum_checked(self):
        with pytest.raises(ValidationException):
            DeviceSetup(
                rho_ab=DensityMatrix.from_vector(PHI_PLUS),
                a0=HermitianOperator(2 * SIGMA_Z), a1=HermitianOperator(SIGMA_Z),
                b0=HermitianOperator(SIGMA_Z), b1=HermitianOperator(SIGMA_Z)
            )

    def test_setup_file_keeps_chsh_value(self, ideal_setup, tmp_path):
        path = tmp_path / "setup.json"
        FileUtils.save_setup(ideal_setup, str(path))
        loaded = FileUtils.load_setup(str(path))
        assert loaded.dims == (2, 2)
        assert ChshAnalyzer.chsh_value(loaded) == pytest.approx(ChshAnalyzer.chsh_value(ideal_setup), abs=1e-12)

    def test_partial_trace_of_ideal_setup(self, ideal_setup):
        rho_a = ChshAnalyzer.reduced_state_a(ideal_setup)
        np.testing.assert_allclose(rho_a.entries, np.eye(2) / 2, atol=1e-15)
        assert MatrixCore.is_psd(rho_a)
