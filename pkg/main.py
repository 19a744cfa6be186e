import argparse
import sys
from typing import Optional, Sequence, Tuple

from config.run_config import RunConfig
from config.settings import Settings
from constants.Constants import (
    ALPHA_MIN_COLUMNS, BOUNDS_COLUMNS, TRADEOFF_COLUMNS, MONTE_CARLO_COLUMNS, VERIFY_COLUMNS,
    CMD_BOUNDS, CMD_TRADEOFF, CMD_ALPHA_MIN, CMD_SIMULATE, CMD_VERIFY, OUTPUT_FORMATS, VERIFY_SCALES,
    EXIT_OK, EXIT_RUNTIME_ERROR, EXIT_VALIDATION_ERROR, EXIT_VERIFICATION_FAILURE
)
from exceptions.wse_exceptions import WseException, ValidationException, VerificationException
from services.analysis.alpha_analyzer import AlphaAnalyzer
from services.analysis.bounds_analyzer import BoundsAnalyzer
from services.export.data_exporter import DataExporter
from services.simulation.monte_carlo import MonteCarloSimulator
from services.simulation.protocol_simulator import ProtocolSimulator
from services.simulation.strategy_factory import StrategyFactory
from services.verification_service import VerificationService
from utils.debug_utils import DebugUtils
from utils.file_utils import FileUtils

# Type aliases
CommandResult = Tuple[str, int]

def cmd_bounds(config: RunConfig) -> CommandResult:
    """f(beta) over the CHSH grid."""
    rows = BoundsAnalyzer.f_curve(config.samples, config.beta_min, config.beta_max)
    return DataExporter.render(rows, BOUNDS_COLUMNS, config.to_dict(), config.output_format), EXIT_OK

def cmd_tradeoff(config: RunConfig) -> CommandResult:
    """(t, p_L, p_T) along the trade-off curve."""
    rows = [point.to_dict() for point in BoundsAnalyzer.tradeoff_curve(config.samples)]
    return DataExporter.render(rows, TRADEOFF_COLUMNS, config.to_dict(), config.output_format), EXIT_OK

def cmd_alpha_min(config: RunConfig) -> CommandResult:
    """alpha_min and k* on the (q, gamma) grid."""
    results = AlphaAnalyzer.alpha_min_grid(config.q_grid, config.gamma_grid, Settings.worker_count())
    rows = [
        {"q": r.q, "gamma": r.gamma, "alpha_min": r.alpha_min, "k_star": r.k_star}
        for r in results
    ]
    if config.output_format == "json":
        # converged/degenerate flags only fit the JSON document
        rows = [r.to_dict() for r in results]
    return DataExporter.render(rows, ALPHA_MIN_COLUMNS, config.to_dict(), config.output_format), EXIT_OK

def cmd_simulate(config: RunConfig) -> CommandResult:
    """
    Monte-Carlo estimate of the failure probability for one strategy.

    Exit status 3 when the lower end of the score interval exceeds [alpha_min]^n.
    """
    params = config.test_params()
    strategy = StrategyFactory.get_strategy(config.strategy, **config.strategy_kwargs())
    if config.transcript:
        transcript = ProtocolSimulator.run_sequential_attack(params, strategy, config.seed, 0)
        FileUtils.save_transcript(transcript, config.transcript)
        DebugUtils.info(f"Wrote first-trial transcript to {config.transcript}")

    report = MonteCarloSimulator.monte_carlo_failure(params, strategy, config.trials, config.seed)
    if config.output_format == "json":
        text = DataExporter.document_to_json({
            "config": config.to_dict(),
            "strategy": strategy.describe(),
            "report": report.to_dict()
        })
    else:
        text = DataExporter.rows_to_csv([report.to_dict()], MONTE_CARLO_COLUMNS, config.to_dict())
    return text, EXIT_VERIFICATION_FAILURE if report.bound_violated else EXIT_OK

def cmd_verify(config: RunConfig) -> CommandResult:
    """Named pass/fail checks across every layer."""
    report = VerificationService(config.verify_scale, config.seed).run()
    if config.output_format == "json":
        text = DataExporter.document_to_json({"config": config.to_dict(), "report": report.to_dict()})
    else:
        rows = [check.to_dict() for check in report.checks]
        text = DataExporter.rows_to_csv(rows, VERIFY_COLUMNS, config.to_dict())
    return text, EXIT_OK if report.passed else EXIT_VERIFICATION_FAILURE

COMMAND_HANDLERS = {
    CMD_BOUNDS: cmd_bounds,
    CMD_TRADEOFF: cmd_tradeoff,
    CMD_ALPHA_MIN: cmd_alpha_min,
    CMD_SIMULATE: cmd_simulate,
    CMD_VERIFY: cmd_verify,
}

# flag destination -> config key
FLAG_KEYS = {
    "seed": "seed", "out": "out", "format": "format", "transcript": "transcript",
    "beta_min": "beta_min", "beta_max": "beta_max", "samples": "samples",
    "q_grid": "q_grid", "gamma_grid": "gamma_grid",
    "q": "q", "gamma": "gamma", "n": "n", "strategy": "strategy", "t": "t",
    "p_live": "p_live", "p_test": "p_test", "angle": "angle", "trials": "trials",
    "scale": "verify_scale",
}

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    common.add_argument("--out", help="output path; stdout when omitted")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="artifact format")
    common.add_argument("--debug", action="store_true", help="enable debug logging")

    parser = argparse.ArgumentParser(
        prog="wse-di",
        description="Security bounds for device-independent weak string erasure"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    bounds = commands.add_parser(CMD_BOUNDS, parents=[common], help="min-entropy rate f(beta)")
    bounds.add_argument("--beta-min", dest="beta_min", type=float)
    bounds.add_argument("--beta-max", dest="beta_max", type=float)
    bounds.add_argument("--samples", type=int)

    tradeoff = commands.add_parser(CMD_TRADEOFF, parents=[common], help="(p_L, p_T) trade-off curve")
    tradeoff.add_argument("--samples", type=int)

    alpha = commands.add_parser(CMD_ALPHA_MIN, parents=[common], help="decay rate alpha_min(q, gamma)")
    alpha.add_argument("--q-grid", dest="q_grid", help="comma-separated q values")
    alpha.add_argument("--gamma-grid", dest="gamma_grid", help="comma-separated gamma values")

    simulate = commands.add_parser(CMD_SIMULATE, parents=[common], help="Monte-Carlo failure probability")
    simulate.add_argument("--q")
    simulate.add_argument("--gamma")
    simulate.add_argument("--n", type=int)
    simulate.add_argument("--strategy", choices=sorted(StrategyFactory.list_strategies()))
    simulate.add_argument("--t", type=float, help="curve strategy parameter")
    simulate.add_argument("--p-live", dest="p_live", help="law strategy live-round success")
    simulate.add_argument("--p-test", dest="p_test", help="law strategy test-round win")
    simulate.add_argument("--angle", type=float, help="quantum-bisector angle in radians")
    simulate.add_argument("--trials", type=int)
    simulate.add_argument("--transcript", help="write the first trial's transcript as JSON lines")

    verify = commands.add_parser(CMD_VERIFY, parents=[common], help="run the named checks")
    verify.add_argument("--scale", choices=VERIFY_SCALES)
    return parser

def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.debug:
        DebugUtils.set_debug_mode(True)
    overrides = {key: getattr(args, dest, None) for dest, key in FLAG_KEYS.items()}
    try:
        config = RunConfig.from_sources(args.command, args.config, overrides)
        text, status = COMMAND_HANDLERS[args.command](config)
        DataExporter.write_text(text, config.out)
        if status == EXIT_VERIFICATION_FAILURE:
            DebugUtils.log_error(VerificationException(f"{args.command} reported a failure"), args.command)
        return status
    except ValidationException as e:
        DebugUtils.log_error(e, args.command)
        return EXIT_VALIDATION_ERROR
    except WseException as e:
        DebugUtils.log_error(e, args.command)
        return EXIT_RUNTIME_ERROR

if __name__ == "__main__":
    sys.exit(main())
