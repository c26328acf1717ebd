"""
Codec commands: compress, decompress
"""
import argparse
from typing import Optional

from lzhm.models.enums import CodecId
from lzhm.services.container_service import ContainerService
from lzhm.services.model_file_service import load_model


def get_container_service(model_path: Optional[str]) -> ContainerService:
    return ContainerService(load_model(model_path) if model_path else None)


def compress(args: argparse.Namespace) -> int:
    get_container_service(args.model).compress(args.input, args.output, CodecId.from_name(args.codec), args.L)
    return 0


def decompress(args: argparse.Namespace) -> int:
    get_container_service(args.model).decompress(args.input, args.output)
    return 0


def register(subparsers) -> None:
    p = subparsers.add_parser("compress", help="compress a symbol file into a container")
    p.add_argument("--codec", choices=["lz", "ih"], required=True)
    p.add_argument("--model", help="model file (required for ih; fixes the alphabet for lz)")
    p.add_argument("-L", type=int, help="IH block length")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=compress)

    p = subparsers.add_parser("decompress", help="restore a symbol file from a container")
    p.add_argument("--model", help="model file the container was compressed with (required for ih)")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=decompress)
