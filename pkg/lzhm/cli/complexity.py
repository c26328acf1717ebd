"""
complexity command
"""
import argparse

from lzhm.core.config import settings
from lzhm.schemas.report import ComplexityResponse
from lzhm.services.complexity import lz_length_bound, max_distinct_parse, sqrt_parse
from lzhm.services.lz import lz_encode, lz_parse


def complexity(args: argparse.Namespace) -> int:
    x = args.string
    response = ComplexityResponse(n=len(x), sqrt_t=sqrt_parse(x).t, lz_phrases=0, lz_final_complete=True, lz_bits=0)
    if len(x) <= settings.complexity_n_cap:
        t, witness = max_distinct_parse(x)
        response.exact_t = t
        response.witness = list(witness.pieces)
    if x:
        alphabet = sorted(set(x))
        parse = lz_parse(x, alphabet)
        response.lz_phrases = parse.m
        response.lz_final_complete = parse.final_complete
        response.lz_bits = len(lz_encode(x, alphabet))
        response.lz_length_bound = lz_length_bound(parse.m, alphabet)
    print(response.model_dump_json(indent=2))
    return 0


def register(subparsers) -> None:
    p = subparsers.add_parser("complexity", help="C(X) with its witness, and LZ phrase statistics")
    p.add_argument("string", help="input string; each character is one symbol")
    p.set_defaults(func=complexity)
