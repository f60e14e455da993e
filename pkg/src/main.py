"""
Command-line entry point.

    python -m src.main keygen --vehicles 5 --out keys
    python -m src.main run --scenario scenarios/honest.txt --seed 7 --out runs/honest
    python -m src.main bench --op verify_aggregate --sizes 1,10,50,100 --iters 20
    python -m src.main game --game signcrypt_auth --trials 100 --seed 1

Exit codes: 0 success, 1 property or invariant failure, 2 usage or config error.
Machine output goes to files under --out; the effective configuration and
human summaries go to standard error.
"""
import argparse
import logging
import os
import random
import sys
from typing import List, Optional, Sequence

from src.errors import BackendUnavailableError, ScenarioConfigError
from src.games.suites import run_suite
from src.pairing import BackendId
from src.processors.benchmark import ProtocolBenchmark
from src.protocols.pseudonyms import KgcState, save_registrations
from src.protocols.signcryption import SystemParams, setup
from src.simulator.config import ScenarioConfig, load_scenario
from src.simulator.engine import run_scenario
from src.utils.logger import initialize_logger
from src.utils.writer import write_jsonl, write_rows_to_csv
from settings import (
    BENCH_CSV_NAME,
    BENCH_FIELDS,
    BENCH_OPS,
    DEFAULT_BACKEND,
    DEFAULT_BENCH_ITERS,
    DEFAULT_BENCH_SIZES,
    DEFAULT_BENCH_WORKERS,
    DEFAULT_GAME_TRIALS,
    DEFAULT_OUT_DIR,
    DEFAULT_SEED,
    DEFAULT_VEHICLES,
    EVENT_LOG_NAME,
    EXTERNAL_SECURITY_LEVEL,
    GAME_IDS,
    METRICS_CSV_NAME,
    METRICS_FIELDS,
    PARAMS_FILE_NAME,
    REGISTRATION_FILE_NAME,
    SUPPORTED_BACKENDS,
    TIMING_FIELDS,
    TIMINGS_CSV_NAME,
    TOY_SECURITY_LEVEL,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _u64(raw: str) -> int:
    try:
        value = int(raw, 0)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not an integer: {raw!r}") from e
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {value}")
    return value


def _size_list(raw: str) -> List[int]:
    try:
        sizes = [int(part) for part in raw.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from e
    if not sizes:
        raise argparse.ArgumentTypeError("at least one size is required")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vanet", description="VANET signcryption and aggregate-beacon toolkit")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    parser.add_argument("--log-file", help="also write log records to this rotating file")
    sub = parser.add_subparsers(dest="command", required=True)

    keygen = sub.add_parser("keygen", help="Generate public parameters and vehicle registrations")
    keygen.add_argument("--seed", type=_u64, default=DEFAULT_SEED)
    keygen.add_argument("--backend", choices=SUPPORTED_BACKENDS, default=DEFAULT_BACKEND)
    keygen.add_argument("--vehicles", type=int, default=DEFAULT_VEHICLES)
    keygen.add_argument("--out", default=DEFAULT_OUT_DIR)
    keygen.set_defaults(func=cmd_keygen)

    run = sub.add_parser("run", help="Run a simulation scenario")
    run.add_argument("--scenario", help="key=value scenario file; defaults apply when omitted")
    run.add_argument("--seed", type=_u64, help="overrides the scenario seed")
    run.add_argument("--backend", choices=SUPPORTED_BACKENDS, help="overrides the scenario backend")
    run.add_argument("--out", default=DEFAULT_OUT_DIR)
    run.set_defaults(func=cmd_run)

    bench = sub.add_parser("bench", help="Time one protocol operation")
    bench.add_argument("--op", required=True, choices=BENCH_OPS)
    bench.add_argument("--iters", type=int, default=DEFAULT_BENCH_ITERS)
    bench.add_argument("--sizes", type=_size_list, default=list(DEFAULT_BENCH_SIZES))
    bench.add_argument("--workers", type=int, default=DEFAULT_BENCH_WORKERS)
    bench.add_argument("--seed", type=_u64, default=DEFAULT_SEED)
    bench.add_argument("--backend", choices=SUPPORTED_BACKENDS, default=DEFAULT_BACKEND)
    bench.add_argument("--out", default=DEFAULT_OUT_DIR)
    bench.set_defaults(func=cmd_bench)

    game = sub.add_parser("game", help="Run a security-game property suite")
    game.add_argument("--game", required=True, choices=GAME_IDS)
    game.add_argument("--trials", type=int, default=DEFAULT_GAME_TRIALS)
    game.add_argument("--seed", type=_u64, default=DEFAULT_SEED)
    game.set_defaults(func=cmd_game)
    return parser


def _print_block(lines: Sequence[str]) -> None:
    sys.stderr.write("".join(f"{line}\n" for line in lines))
    sys.stderr.flush()


def _namespace_lines(args: argparse.Namespace) -> List[str]:
    lines = []
    for key, value in sorted(vars(args).items()):
        if key in ("func", "log_level", "log_file"):
            continue
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key}={value}")
    return lines


def _security_level(backend: str) -> int:
    return TOY_SECURITY_LEVEL if backend == BackendId.TOY.value else EXTERNAL_SECURITY_LEVEL


def params_lines(params: SystemParams) -> List[str]:
    """Public parameters as key=value lines; points are hex-encoded."""
    suite = params.suite
    return [
        f"backend={suite.backend_id.value}",
        f"q={suite.q}",
        f"l1_bits={params.l1_bits}",
        f"l2_bits={params.l2_bits}",
        f"l3_bits={params.l3_bits}",
        f"cipher={params.cipher}",
        f"kgc_id={params.kgc_id.hex()}",
        f"P1={suite.P1.to_bytes().hex()}",
        f"P2={suite.P2.to_bytes().hex()}",
        f"U1={params.U1.to_bytes().hex()}",
        f"U2={params.U2.to_bytes().hex()}",
        f"P_kgc={params.P_kgc.to_bytes().hex()}",
    ]


def cmd_keygen(args: argparse.Namespace) -> int:
    if args.vehicles <= 0:
        logging.error("--vehicles must be positive, got %d", args.vehicles)
        return EXIT_USAGE
    _print_block(_namespace_lines(args))

    rng = random.Random(f"keygen:{args.seed}")
    params, master = setup(_security_level(args.backend), args.backend, rng=rng)
    kgc = KgcState(params, master, rng)
    for i in range(args.vehicles):
        kgc.register_vehicle(f"RID-{i:04d}".encode("utf-8"))

    os.makedirs(args.out, exist_ok=True)
    params_path = os.path.join(args.out, PARAMS_FILE_NAME)
    with open(params_path, "w", newline="\n", encoding="utf-8") as file:
        file.write("".join(f"{line}\n" for line in params_lines(params)))
    save_registrations(os.path.join(args.out, REGISTRATION_FILE_NAME), kgc)
    logging.info("Wrote %s and %d registrations to %s", PARAMS_FILE_NAME, args.vehicles, args.out)
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    config = load_scenario(args.scenario) if args.scenario else ScenarioConfig()
    config = config.with_overrides(seed=args.seed, backend=args.backend)
    _print_block(config.effective_lines())

    metrics, log = run_scenario(config)
    row = metrics.as_row(config.seed, config.backend, config.vehicles, config.rsus, config.epochs)
    write_rows_to_csv([row], os.path.join(args.out, METRICS_CSV_NAME), METRICS_FIELDS)
    write_jsonl(log.records, os.path.join(args.out, EVENT_LOG_NAME))
    write_rows_to_csv(metrics.timings.summary(), os.path.join(args.out, TIMINGS_CSV_NAME), TIMING_FIELDS)

    _print_block([
        f"summary: envelopes={metrics.envelopes_accepted}/{metrics.envelopes_rejected} "
        f"beacons={metrics.beacons_accepted}/{metrics.beacons_rejected} "
        f"aggregates={metrics.aggregates_accepted}/{metrics.aggregates_rejected} "
        f"adversary_successes={metrics.adversary_successes} "
        f"invariant_violations={metrics.invariant_violations}"
    ])
    return EXIT_OK if metrics.invariant_violations == 0 else EXIT_FAILURE


def cmd_bench(args: argparse.Namespace) -> int:
    _print_block(_namespace_lines(args))
    try:
        benchmark = ProtocolBenchmark(args.backend, args.seed, args.iters, args.workers)
        rows = benchmark.run(args.op, args.sizes)
    except ValueError as e:
        logging.error("Invalid benchmark request: %s", str(e))
        return EXIT_USAGE
    if args.backend == BackendId.TOY.value:
        logging.info("Toy backend timings measure protocol logic only, not pairing cost.")
    path = os.path.join(args.out, BENCH_CSV_NAME)
    write_rows_to_csv(rows, path, BENCH_FIELDS)
    logging.info("Benchmark results saved to %s", path)
    return EXIT_OK


def cmd_game(args: argparse.Namespace) -> int:
    _print_block(_namespace_lines(args))
    try:
        results = run_suite(args.game, args.trials, args.seed)
    except ValueError as e:
        logging.error("Invalid game request: %s", str(e))
        return EXIT_USAGE
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        sys.stdout.write(f"{status} {result.name} {result.successes}/{result.trials}\n")
    return EXIT_OK if all(result.passed for result in results) else EXIT_FAILURE


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help
        return int(e.code or 0)

    initialize_logger(level=args.log_level, log_file=args.log_file)
    try:
        return args.func(args)
    except ScenarioConfigError as e:
        logging.error("Scenario configuration error: %s", str(e))
        return EXIT_USAGE
    except BackendUnavailableError as e:
        logging.error("Backend unavailable: %s", str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
