"""
Exception hierarchy for the laboratory
"""
from typing import Optional


class LzhmError(Exception):
    """Base class for every error the CLI reports instead of crashing"""


class ModelValidationError(LzhmError):
    """A chain, model or model file violates a structural invariant"""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class ChainPropertyError(LzhmError):
    """Operation needs an irreducible aperiodic chain"""


class ParameterError(LzhmError, ValueError):
    """A numeric argument is out of range (L < 1, eps <= 0, ...)"""

    def __init__(self, name: str, message: str):
        self.name = name
        super().__init__(f"{name}: {message}")


class BlockCapError(LzhmError):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"block space of size {size} exceeds cap {cap}")


class SymbolError(LzhmError):
    def __init__(self, symbol: object, position: int):
        self.symbol = symbol
        self.position = position
        super().__init__(f"symbol {symbol!r} at position {position} is not in the alphabet")


class SymbolTextError(SymbolError):
    """Symbol file bytes do not decode in the configured text encoding"""

    def __init__(self, byte_offset: int, encoding: str, reason: str):
        self.symbol = None
        self.position = byte_offset
        self.byte_offset = byte_offset
        LzhmError.__init__(self, f"byte {byte_offset} is not valid {encoding}: {reason}")


class DecodeError(LzhmError):
    """Bit stream is truncated or malformed"""

    def __init__(self, message: str, bit_offset: int):
        self.bit_offset = bit_offset
        super().__init__(f"{message} (bit offset {bit_offset})")


class EndOfStreamError(DecodeError):
    """Reader ran out of bits"""


class BackReferenceError(DecodeError):
    pass


class LengthMismatchError(DecodeError):
    pass


class UnencodableBlockError(LzhmError):
    def __init__(self, block_index: int, block: tuple):
        self.block_index = block_index
        self.block = block
        super().__init__(f"block {block_index} {block!r} has zero model probability")


class BlockAlignmentError(LzhmError):
    def __init__(self, n: int, L: int):
        self.n = n
        self.L = L
        super().__init__(f"input length {n} is not a multiple of block length {L}")


class ComplexityCapError(LzhmError):
    def __init__(self, n: int, cap: int):
        self.n = n
        self.cap = cap
        super().__init__(
            f"exact complexity search is limited to n <= {cap} (got n={n}); "
            "use sqrt_parse or the LZ phrase count as lower bounds"
        )


class ContainerError(LzhmError):
    """Compressed file cannot be read back"""


class MagicMismatchError(ContainerError):
    pass


class VersionMismatchError(ContainerError):
    pass


class FingerprintMismatchError(ContainerError):
    pass


class AlphabetMismatchError(ContainerError):
    pass


class TruncatedContainerError(ContainerError):
    pass
