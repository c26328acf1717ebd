"""
Model file service - JSON model files to and from HiddenMarkovModel
"""
import json
import logging
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import ValidationError

from lzhm.core.config import settings
from lzhm.core.errors import ChainPropertyError, ModelValidationError
from lzhm.schemas.model_file import MODEL_FILE_VERSION, ModelFile
from lzhm.services.markov_core import HiddenMarkovModel, MarkovChain, validate_chain

logger = logging.getLogger(__name__)


def _location(error: dict) -> str:
    return ".".join(str(part) for part in error["loc"]) or "document"


def parse_model_file(text: str, require_ergodic: bool = True) -> HiddenMarkovModel:
    """
    Parse and validate a model file.

    With require_ergodic the chain must also be irreducible and aperiodic, since every
    downstream operation needs the stationary law. `validate` turns it off to report instead.
    """
    try:
        doc = ModelFile.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0]
        raise ModelValidationError(first["msg"], _location(first))

    if doc.version != MODEL_FILE_VERSION:
        raise ModelValidationError(f"unsupported version {doc.version}, expected {MODEL_FILE_VERSION}", "version")
    if len(doc.transitions) != doc.states:
        raise ModelValidationError(f"expected {doc.states} rows, got {len(doc.transitions)}", "transitions")
    for i, row in enumerate(doc.transitions):
        if len(row) != doc.states:
            raise ModelValidationError(f"expected {doc.states} entries, got {len(row)}", f"transitions[{i}]")
    if len(doc.emissions) != doc.states:
        raise ModelValidationError(f"expected {doc.states} rows, got {len(doc.emissions)}", "emissions")
    for i, row in enumerate(doc.emissions):
        if len(row) != len(doc.alphabet):
            raise ModelValidationError(f"expected {len(doc.alphabet)} entries, got {len(row)}", f"emissions[{i}]")

    hmm = HiddenMarkovModel(
        chain=MarkovChain(np.array(doc.transitions, dtype=np.float64)),
        alphabet=tuple(doc.alphabet),
        emissions=np.array(doc.emissions, dtype=np.float64),
        pi0=None if doc.pi0 is None else np.array(doc.pi0, dtype=np.float64),
    )

    if require_ergodic:
        report = validate_chain(hmm.chain)
        if not report.irreducible:
            raise ChainPropertyError("transitions: chain is not irreducible")
        if not report.aperiodic:
            raise ChainPropertyError(f"transitions: chain has period {report.period}")
    return hmm


def format_model_file(hmm: HiddenMarkovModel) -> str:
    doc = ModelFile(
        version=MODEL_FILE_VERSION,
        alphabet=list(hmm.alphabet),
        states=hmm.k,
        transitions=hmm.chain.matrix.tolist(),
        emissions=hmm.emissions.tolist(),
        pi0=None if hmm.pi0 is None else hmm.pi0.tolist(),
    )
    return json.dumps(doc.model_dump(), indent=2) + "\n"


def load_model(path: Union[str, Path], require_ergodic: bool = True) -> HiddenMarkovModel:
    try:
        text = Path(path).read_text(encoding=settings.symbol_text_encoding)
    except UnicodeDecodeError as e:
        raise ModelValidationError(f"byte {e.start} is not valid {settings.symbol_text_encoding}", "document")
    hmm = parse_model_file(text, require_ergodic=require_ergodic)
    logger.info(f"[MODEL FILE] Loaded {path}: k={hmm.k}, |alphabet|={hmm.alphabet_size}")
    return hmm
