"""
Covers: every check group of VerificationService at quick scale, check naming,
and the threshold tie guard against an off-by-one comparison.
"""
import pytest

from constants.Constants import CHECK_NAMES
from exceptions.wse_exceptions import ValidationException
from services.simulation.protocol_simulator import ProtocolSimulator
from services.verification_service import VerificationService

GROUPS = [
    "_check_matrix_identities",
    "_check_chsh",
    "_check_bounds",
    "_check_side_information",
    "_check_sequential_gap",
    "_check_guessing",
    "_check_alpha",
    "_check_protocol",
]

@pytest.fixture
def service():
    return VerificationService("quick", seed=7, workers=2)

class TestCheckGroups:

    @pytest.mark.parametrize("group", GROUPS)
    def test_group_passes(self, service, group):
        results = getattr(service, group)()
        assert results
        failing = [(r.name, r.detail) for r in results if not r.passed]
        assert failing == []

    def test_simulation_group(self, service):
        service.counts = dict(service.counts, simulation_trials=400)
        [result] = service._check_simulation()
        assert result.name == "simulation.failure_bound"
        assert result.passed, result.detail
        assert "classical" in result.detail and "curve" in result.detail

    def test_sequential_gap_details(self, service):
        by_name = {r.name: r for r in service._check_sequential_gap()}
        assert by_name["appendixC.general=1/2"].passed
        assert by_name["appendixC.conditioning=3/4*1/2"].detail.endswith("= 1/2 * 3/4")
        assert by_name["appendixC.sequential=3/8"].detail.startswith("sequential gap: ")

    def test_side_information_names(self, service):
        by_name = {r.name: r for r in service._check_side_information()}
        assert set(by_name) == {"appendixA.eps_eff=0", "appendixA.eps_plus=1",
                                "appendixA.pguess_k_theta=1", "appendixA.pguess_theta=3/4"}
        assert by_name["appendixA.eps_plus=1"].passed
        assert by_name["appendixA.eps_plus=1"].detail == "side information: eps_plus=1"

class TestReport:

    def test_names_are_registered_and_unique(self, service, monkeypatch):
        monkeypatch.setattr(VerificationService, "checks",
                            lambda self: [getattr(self, name) for name in GROUPS if name != "_check_alpha"])
        report = service.run()
        names = [c.name for c in report.checks]
        assert len(names) == len(set(names))
        assert set(names) <= set(CHECK_NAMES.values())
        assert report.passed
        assert report.to_dict()["scale"] == "quick"

    def test_group_order(self, service):
        assert [c.__name__ for c in service.checks()] == GROUPS + ["_check_simulation"]

    def test_unknown_scale(self):
        with pytest.raises(ValidationException, match="scale"):
            VerificationService("huge")

class TestThresholdTie:

    def test_tie_passes(self):
        assert VerificationService.threshold_tie_holds()

    def test_strict_comparison_is_caught(self, service, monkeypatch):
        monkeypatch.setattr(ProtocolSimulator, "passes_threshold",
                            staticmethod(lambda s, r, g: s * g.denominator > g.numerator * r))
        assert not VerificationService.threshold_tie_holds()
        tie = next(r for r in service._check_protocol() if r.name == "protocol.threshold_tie")
        assert not tie.passed
