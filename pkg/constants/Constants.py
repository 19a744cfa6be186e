import numpy as np

# Pauli matrices and the two-qubit maximally entangled state
IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)

SQRT2 = float(np.sqrt(2.0))
CHSH_CLASSICAL_MAX = 2.0
CHSH_QUANTUM_MAX = 2.0 * SQRT2
CLASSICAL_WIN_PROBABILITY = 0.75
QUANTUM_WIN_PROBABILITY = 0.5 + 1.0 / (2.0 * SQRT2)

# Sequential test parameters
GAMMA_MIN = 0.75
GAMMA_MAX = 1.0

# CLI commands
CMD_BOUNDS = "bounds"
CMD_TRADEOFF = "tradeoff"
CMD_ALPHA_MIN = "alpha-min"
CMD_SIMULATE = "simulate"
CMD_VERIFY = "verify"
COMMANDS = [CMD_BOUNDS, CMD_TRADEOFF, CMD_ALPHA_MIN, CMD_SIMULATE, CMD_VERIFY]

OUTPUT_FORMATS = ["csv", "json"]
VERIFY_SCALES = ["quick", "full"]

# CSV headers
BOUNDS_COLUMNS = ["beta", "f_beta"]
TRADEOFF_COLUMNS = ["t", "p_L", "p_T"]
ALPHA_MIN_COLUMNS = ["q", "gamma", "alpha_min", "k_star"]
MONTE_CARLO_COLUMNS = [
    "strategy", "admissible", "trials", "seed", "failures", "passes", "vacuous_passes",
    "p_hat", "ci_low", "ci_high", "bound", "p_pass_hat", "conditional_rate",
    "factorization_exact", "bound_violated"
]
VERIFY_COLUMNS = ["name", "passed", "detail"]
CSV_FLOAT_FORMAT = "%.6g"

# Exit codes
EXIT_OK = 0
EXIT_RUNTIME_ERROR = 1
EXIT_VALIDATION_ERROR = 2
EXIT_VERIFICATION_FAILURE = 3

# Protocol phases of an honest run
PROTOCOL_PHASES = ["distribute", "measure", "wait", "announce", "sift"]

# Built-in attack strategies
STRATEGY_CLASSICAL = "classical"
STRATEGY_CURVE = "curve"
STRATEGY_PERFECT = "perfect"
STRATEGY_LAW = "law"
STRATEGY_QUANTUM_BISECTOR = "quantum-bisector"

# Named verification checks
CHECK_NAMES = {
    "matrix_modulus_identity": "matrix.modulus_identity",
    "matrix_operator_inequality": "matrix.operator_inequality",
    "chsh_ideal_value": "chsh.ideal_value",
    "chsh_bound_random": "chsh.bound_random_setups",
    "chsh_saturation": "chsh.saturation_family",
    "bounds_trusted_anchor": "bounds.trusted_rate_anchor",
    "bounds_f_curve": "bounds.f_beta_curve",
    "bounds_roundtrip": "bounds.beta_eps_roundtrip",
    "bounds_tradeoff": "bounds.tradeoff_endpoints",
    "side_info_eps_eff": "appendixA.eps_eff=0",
    "side_info_eps_plus": "appendixA.eps_plus=1",
    "side_info_pguess_k": "appendixA.pguess_k_theta=1",
    "side_info_pguess": "appendixA.pguess_theta=3/4",
    "gap_general": "appendixC.general=1/2",
    "gap_sequential": "appendixC.sequential=3/8",
    "gap_conditioning": "appendixC.conditioning=3/4*1/2",
    "guessing_additivity": "guessing.additivity",
    "guessing_uncertainty_random": "guessing.uncertainty_bound_random",
    "guessing_uncertainty_saturation": "guessing.uncertainty_bound_saturation",
    "alpha_g_zero": "alpha.g_at_zero",
    "alpha_closed_form": "alpha.closed_form_vs_grid",
    "alpha_taylor": "alpha.taylor_slope",
    "alpha_golden": "alpha.golden_vs_grid",
    "alpha_region": "alpha.security_region",
    "protocol_tie": "protocol.threshold_tie",
    "protocol_honest": "protocol.honest_correctness",
    "protocol_uniformity": "protocol.honest_bob_uniformity",
    "simulation_bound": "simulation.failure_bound",
}
