"""
Model commands: validate, sample, mixing, compressive
"""
import argparse
import sys
from pathlib import Path

from lzhm.core.config import settings
from lzhm.models.enums import InitMode
from lzhm.schemas.report import CompressiveResponse, MixingResponse, ValidationResponse
from lzhm.services.container_service import write_symbols
from lzhm.services.entropy import (
    compressive_report,
    entropy_rate_reference,
    fit_block_length,
    smallest_compressive_length,
)
from lzhm.services.markov_core import mixing_deficit, sample_path, smallest_mixing_length, validate_chain
from lzhm.services.model_file_service import load_model


def validate(args: argparse.Namespace) -> int:
    """Exit status 0 when the chain is irreducible and aperiodic, 1 otherwise"""
    hmm = load_model(args.model, require_ergodic=False)
    report = validate_chain(hmm.chain)
    response = ValidationResponse(
        states=hmm.k,
        alphabet=list(hmm.alphabet),
        row_stochastic=report.row_stochastic,
        irreducible=report.irreducible,
        aperiodic=report.aperiodic,
        period=report.period,
        visible=hmm.is_visible,
        stationary=hmm.stationary.tolist() if report.ergodic else None,
    )
    print(response.model_dump_json(indent=2))
    return 0 if report.ergodic else 1


def sample(args: argparse.Namespace) -> int:
    hmm = load_model(args.model)
    states, symbols = sample_path(hmm, args.n, args.seed, InitMode(args.init.upper()))
    alphabet = hmm.alphabet
    text = write_symbols([alphabet[i] for i in symbols.tolist()], alphabet)
    if args.with_states:
        if text and not text.endswith("\n"):
            text += "\n"
        text += " ".join(str(z) for z in states.tolist()) + "\n"
    if args.out:
        Path(args.out).write_bytes(text.encode(settings.symbol_text_encoding))
    else:
        sys.stdout.write(text if text.endswith("\n") or not text else text + "\n")
    return 0


def mixing(args: argparse.Namespace) -> int:
    hmm = load_model(args.model)
    deficit = mixing_deficit(hmm.chain, args.L)
    response = MixingResponse(L=args.L, deficit=deficit)
    if args.eps is not None:
        response.eps = args.eps
        response.mixing = deficit <= args.eps
        response.smallest_mixing_L = smallest_mixing_length(hmm.chain, args.eps, args.l_max)
    print(response.model_dump_json(indent=2))
    return 0


def compressive(args: argparse.Namespace) -> int:
    hmm = load_model(args.model)
    rate, exact = entropy_rate_reference(hmm)
    report = compressive_report(hmm, args.L, args.eps, rate)
    # the search walks every level up to l_max
    search_max = fit_block_length(hmm.alphabet_size, args.l_max)
    response = CompressiveResponse(
        L=args.L,
        eps=args.eps,
        block_entropy=report.block_entropy,
        rate=rate,
        rate_exact=exact,
        bound=report.bound,
        compressive=report.compressive,
        min_length=report.min_length,
        smallest_compressive_L=smallest_compressive_length(hmm, args.eps, rate, search_max),
    )
    print(response.model_dump_json(indent=2))
    return 0


def register(subparsers) -> None:
    p = subparsers.add_parser("validate", help="check a model file and report chain properties")
    p.add_argument("model")
    p.set_defaults(func=validate)

    p = subparsers.add_parser("sample", help="draw a symbol sequence from a model")
    p.add_argument("model")
    p.add_argument("-n", type=int, required=True, help="number of symbols")
    p.add_argument("--seed", type=int, default=settings.default_seed)
    p.add_argument("--init", choices=["stationary", "explicit"], default="stationary",
                   help="draw Z_0 from the stationary law or from the file's pi0")
    p.add_argument("--with-states", action="store_true", help="append the state path as a second line")
    p.add_argument("-o", "--out", help="output file (default: stdout)")
    p.set_defaults(func=sample)

    p = subparsers.add_parser("mixing", help="L-step mixing deficit")
    p.add_argument("model")
    p.add_argument("-L", type=int, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--l-max", type=int, default=1024, help="search bound for the smallest eps-mixing L")
    p.set_defaults(func=mixing)

    p = subparsers.add_parser("compressive", help="eps-compressive check for block length L")
    p.add_argument("model")
    p.add_argument("-L", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--l-max", type=int, default=settings.rate_l_max,
                   help="search bound for the smallest eps-compressive L")
    p.set_defaults(func=compressive)
