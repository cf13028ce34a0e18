import argparse
import sys
from typing import List, Optional

from dotenv import load_dotenv
load_dotenv()

from src.components.experiment_harness import toy_config
from src.constants import EXIT_CONFIG_ERROR, EXIT_DATA_ERROR, EXIT_NUMERICAL_ERROR, EXIT_OK, EXIT_UNEXPECTED
from src.entity.config_entity import DataIngestionConfig, ExperimentConfig
from src.exception import CellFailed, ConfigError, DataError, NumericalError, srcException
from src.logger import get_logger
from src.pipeline.pipeline import pipeline
from src.utils.main_utils import format_matrix
logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lowcon", description="LowCon subsampling experiments")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="run the simulation grid for one (dist, misspec) cell")
    simulate.add_argument("--config", required=True)
    simulate.add_argument("--out")

    emse = commands.add_parser("emse", help="EMSE against full-sample OLS and Huber-M on a CSV dataset")
    emse.add_argument("--config", required=True)
    emse.add_argument("--data", required=True)
    emse.add_argument("--response", required=True)
    emse.add_argument("--predictors", required=True, help="comma-separated column names")
    emse.add_argument("--no-intercept", action="store_true")
    emse.add_argument("--out")

    toy = commands.add_parser("toy", help="one-dimensional toy example: UNIF, BLEV and LOWCON")
    toy.add_argument("--r", type=int, required=True)
    toy.add_argument("--seed", type=int, required=True)
    toy.add_argument("--replicates", type=int)
    toy.add_argument("--out")

    diagnose = commands.add_parser("diagnose", help="condition numbers, worst-case MSE and perturbation bounds")
    diagnose.add_argument("--config", required=True)
    diagnose.add_argument("--alpha", type=float, required=True)
    diagnose.add_argument("--sigma2", type=float, required=True)
    diagnose.add_argument("--out")

    olhd = commands.add_parser("olhd", help="print an orthogonal Latin hypercube design")
    olhd.add_argument("--r", type=int, required=True)
    olhd.add_argument("--p", type=int, required=True)
    olhd.add_argument("--seed", type=int, required=True)

    sweep = commands.add_parser("sweep", help="LOWCON over theta_list next to UNIF")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out")
    return parser


def run_command(args: argparse.Namespace) -> int:
    if args.command == "olhd":
        design = pipeline().start_olhd(args.r, args.p, args.seed)
        for line in format_matrix(design.points):
            print(line)
        print(f"kappa(LᵀL) = {design.kappa:.6f}")
        print(f"max |corr| = {design.max_abs_corr:.6f}")
        return EXIT_OK

    data_ingestion_config = None
    if args.command == "simulate":
        config = ExperimentConfig.from_json(args.config, mode="simulate", output_path=args.out)
    elif args.command == "sweep":
        config = ExperimentConfig.from_json(args.config, mode="sweep", output_path=args.out)
    elif args.command == "diagnose":
        config = ExperimentConfig.from_json(args.config, mode="diagnose", sigma2=args.sigma2,
                                            alpha=args.alpha, output_path=args.out)
    elif args.command == "toy":
        overrides = {"replicates": args.replicates} if args.replicates else {}
        config = toy_config([args.r], args.seed, output_path=args.out, **overrides)
    else:
        config = ExperimentConfig.from_json(args.config, mode="realdata", output_path=args.out)
        predictors = [name.strip() for name in args.predictors.split(",") if name.strip()]
        data_ingestion_config = DataIngestionConfig(
            data_path=args.data,
            response_column=args.response,
            predictor_columns=predictors,
            has_intercept=not args.no_intercept,
        )

    artifact = pipeline(experiment_config=config, data_ingestion_config=data_ingestion_config).run_pipeline()
    print(artifact.results_path)
    if artifact.failed_cells:
        # the CSV is already written; the failed cells carry status "failed"
        raise CellFailed(f"{artifact.failed_cells} cells stayed rank deficient after retries")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run_command(args)
    except ConfigError as e:
        print(f"config error: {e.message}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except DataError as e:
        print(f"data error: {e.message}", file=sys.stderr)
        return EXIT_DATA_ERROR
    except NumericalError as e:
        print(f"numerical failure: {e.message}", file=sys.stderr)
        return EXIT_NUMERICAL_ERROR
    except srcException as e:
        logger.error(f"unexpected failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
