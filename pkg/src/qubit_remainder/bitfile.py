"""Reading bitstring files.

Accepted bytes are ASCII ``0`` and ``1``; commas, spaces, tabs, carriage
returns and newlines are skipped. Anything else is rejected with its byte
offset.
"""

from __future__ import annotations

from collections.abc import Iterator
from os import PathLike

import numpy as np

from .automaton import BitString
from .errors import BitstringParseError, EmptyInputError

CHUNK_BYTES = 1 << 20

_LUT = np.full(256, 255, dtype=np.uint8)
_LUT[ord("0")] = 0
_LUT[ord("1")] = 1
for _c in b", \t\r\n":
    _LUT[_c] = 254
_SKIP, _BAD = 254, 255


def _decode(raw: bytes, base: int) -> np.ndarray:
    codes = _LUT[np.frombuffer(raw, dtype=np.uint8)]
    bad = np.flatnonzero(codes == _BAD)
    if bad.size:
        i = int(bad[0])
        raise BitstringParseError(base + i, raw[i])
    return codes[codes != _SKIP]


class BitFile:
    """Re-iterable chunked view of a bitstring file, for bounded-memory runs.

    Each iteration re-reads the file and yields uint8 arrays of bits.
    """

    def __init__(self, path: str | PathLike, chunk_bytes: int = CHUNK_BYTES):
        self.path = path
        self.chunk_bytes = chunk_bytes

    def __iter__(self) -> Iterator[np.ndarray]:
        total = 0
        offset = 0
        with open(self.path, "rb") as fh:
            while raw := fh.read(self.chunk_bytes):
                bits = _decode(raw, offset)
                offset += len(raw)
                total += bits.size
                if bits.size:
                    yield bits
        if total == 0:
            raise EmptyInputError(f"{self.path}: no bits found")

    def length(self) -> int:
        return sum(int(c.size) for c in self)


def parse_bitstring_file(path: str | PathLike) -> BitString:
    """Whole file as a :class:`BitString`, in file order."""
    chunks = list(BitFile(path))
    return BitString(np.concatenate(chunks))
