"""
Experiment commands: rate-experiment, epoch-stats
"""
import argparse

from lzhm.services.experiment_service import ExperimentService
from lzhm.services.model_file_service import load_model


def get_experiment_service(model_path: str) -> ExperimentService:
    return ExperimentService(load_model(model_path))


def run_rate_experiment(args: argparse.Namespace) -> int:
    service = get_experiment_service(args.model)
    service.export_rate_csv(service.rate(args.lengths, args.seeds, args.L, args.eps), args.csv)
    return 0


def run_epoch_stats(args: argparse.Namespace) -> int:
    service = get_experiment_service(args.model)
    service.export_epoch_csv(service.epochs(args.L, args.n, args.seeds, args.eps), args.csv)
    return 0


def register(subparsers) -> None:
    p = subparsers.add_parser("rate-experiment", help="LZ and IH bits per symbol on sampled paths")
    p.add_argument("model")
    p.add_argument("--lengths", type=int, nargs="+", required=True)
    p.add_argument("--seeds", type=int, nargs="+", required=True)
    p.add_argument("-L", type=int, required=True, help="IH block length")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--csv", required=True, help="output CSV path")
    p.set_defaults(func=run_rate_experiment)

    p = subparsers.add_parser("epoch-stats", help="epoch counts n_a, n_ab, K_ab against their expectations")
    p.add_argument("model")
    p.add_argument("-L", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seeds", type=int, nargs="+", required=True)
    p.add_argument("--eps", type=float, help="also report eps_2 and warn when L is not eps-mixing")
    p.add_argument("--csv", required=True, help="output CSV path")
    p.set_defaults(func=run_epoch_stats)
