"""
Enums shared by the services, the container format and the CLI
"""
from enum import Enum, IntEnum


class CodecId(IntEnum):
    """Codec byte stored in the container header"""
    LZ = 0
    IH = 1

    @classmethod
    def from_name(cls, name: str) -> "CodecId":
        return cls[name.upper()]


class InitMode(str, Enum):
    """Where Z_0 is drawn from when sampling"""
    EXPLICIT = "EXPLICIT"
    STATIONARY = "STATIONARY"


class TextMode(str, Enum):
    """How a symbol sequence is laid out in a text file"""
    CONTIGUOUS = "CONTIGUOUS"
    LINES = "LINES"
