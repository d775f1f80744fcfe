import argparse
import dataclasses
import os
import sys

from harness.experiment import run_experiment
from harness.landscape import emit_landscape
from harness.plots import MissingTracesError, emit_plot_data
from harness.spec import DEFAULT_GENERATION, ExperimentSpecError
from problems.generators import (
    generate_maxcut_instance,
    generate_numpart_instance,
    generate_portfolio_instance,
)
from problems.instance_io import load_instance, save_instance
from quantum_sim.random_source import RandomSource
from utils.spec_loader import ExperimentSpecLoader
from utils.vqa_logging import experiment_logger

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_INVALID = 2


def output_override(default: str) -> str:
    return os.environ.get("ASCVAR_OUTPUT_DIR") or default


def command_run(args) -> int:
    spec = ExperimentSpecLoader(args.spec, logger=experiment_logger).load()

    overrides = {}
    if os.environ.get("ASCVAR_OUTPUT_DIR"):
        overrides["output_dir"] = os.environ["ASCVAR_OUTPUT_DIR"]
    if os.environ.get("ASCVAR_WORKERS"):
        overrides["workers"] = int(os.environ["ASCVAR_WORKERS"])
    if overrides:
        experiment_logger.info(f"Environment overrides: {overrides}")
        spec = dataclasses.replace(spec, **overrides)

    report = run_experiment(spec, experiment_logger)

    experiment_logger.info(
        f"{len(report.completed)} runs completed, {len(report.failed)} failed"
    )
    return EXIT_PARTIAL if report.failed else EXIT_OK


def command_landscape(args) -> int:
    instance = load_instance(args.instance)
    out_dir = output_override(args.out)

    emit_landscape(
        instance,
        alphas=args.alphas,
        resolution=args.res,
        out_dir=out_dir,
        logger=experiment_logger,
        layers=args.p,
    )
    return EXIT_OK


def command_plots(args) -> int:
    emit_plot_data(args.dir, experiment_logger)
    return EXIT_OK


def command_gen_instances(args) -> int:
    out_dir = output_override(args.out)
    master = RandomSource(args.seed)
    defaults = DEFAULT_GENERATION[args.family]

    for index in range(args.count):
        rng = master.derive(f"{args.family}/instance/{index}")

        if args.family == "maxcut":
            instance = generate_maxcut_instance(
                args.n,
                args.graph_family or defaults["graph_family"],
                args.parameter if args.parameter is not None else defaults["parameter"],
                rng,
            )
        elif args.family == "numpart":
            instance = generate_numpart_instance(
                args.n, args.bound or defaults["bound"], rng
            )
        else:
            instance = generate_portfolio_instance(
                args.n, args.q or defaults["q"], rng
            )

        file_path = os.path.join(out_dir, f"{args.family}_{index:03d}_n{args.n}.json")
        save_instance(instance, file_path)
        experiment_logger.info(f"Saved instance to: {file_path}")

    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Ascending-CVaR variational optimisation experiments"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_parser = subparsers.add_parser("run", help="run an experiment spec")
    run_parser.add_argument("spec", help="experiment spec JSON")
    run_parser.set_defaults(handler=command_run)

    landscape_parser = subparsers.add_parser(
        "landscape", help="exact CVaR grids of a depth-1 QAOA circuit"
    )
    landscape_parser.add_argument("instance", help="instance JSON")
    landscape_parser.add_argument(
        "--alphas", type=float, nargs="+", default=[0.05, 0.08, 0.11, 0.14]
    )
    landscape_parser.add_argument("--res", type=int, default=50, help="grid points per axis")
    landscape_parser.add_argument("--p", type=int, default=1, help="QAOA depth")
    landscape_parser.add_argument("--out", default="results/landscape")
    landscape_parser.set_defaults(handler=command_landscape)

    plots_parser = subparsers.add_parser("plots", help="curve CSVs from run traces")
    plots_parser.add_argument("dir", help="directory holding run traces")
    plots_parser.set_defaults(handler=command_plots)

    gen_parser = subparsers.add_parser("gen-instances", help="generate instance files")
    gen_parser.add_argument("family", choices=["maxcut", "numpart", "portfolio"])
    gen_parser.add_argument("--count", type=int, default=20)
    gen_parser.add_argument("--n", type=int, default=10, help="qubits per instance")
    gen_parser.add_argument("--seed", type=int, default=0)
    gen_parser.add_argument("--graph-family", dest="graph_family", default=None)
    gen_parser.add_argument(
        "--p", dest="parameter", type=float, default=None,
        help="edge probability (random-nonregular) or degree (k-regular)",
    )
    gen_parser.add_argument("--bound", type=int, default=None)
    gen_parser.add_argument("--q", type=float, default=None, help="risk factor")
    gen_parser.add_argument("--out", default="instances")
    gen_parser.set_defaults(handler=command_gen_instances)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    try:
        return args.handler(args)
    except (ExperimentSpecError, MissingTracesError) as e:
        experiment_logger.error(str(e))
        return EXIT_INVALID
    except (ValueError, FileNotFoundError, KeyError) as e:
        experiment_logger.error(f"invalid input: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
