"""
Pydantic schemas for model files, experiment rows and CLI reports
"""
from lzhm.schemas.model_file import ModelFile
from lzhm.schemas.experiment import RateRow, EpochRow, EpochStats
from lzhm.schemas.report import ValidationResponse, MixingResponse, CompressiveResponse, ComplexityResponse

__all__ = [
    "ModelFile",
    "RateRow",
    "EpochRow",
    "EpochStats",
    "ValidationResponse",
    "MixingResponse",
    "CompressiveResponse",
    "ComplexityResponse",
]
