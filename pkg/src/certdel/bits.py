"""Fixed-length bit strings."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import LengthMismatch


class BitString(Sequence[int]):
    """Immutable ordered bits with an explicit length.

    Index 0 is the leftmost (most significant) bit, so ``BitString.from_str
    ("1011")[0] == 1`` and ``to_int`` reads the string as a big-endian number.
    Spaces and underscores in string literals are ignored.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] = ()):
        bits = tuple(int(b) for b in bits)
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bit values must be 0 or 1, got {b}")
        self._bits = bits

    @classmethod
    def _trusted(cls, bits: tuple) -> "BitString":
        obj = cls.__new__(cls)
        obj._bits = bits
        return obj

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        cleaned = text.replace(" ", "").replace("_", "")
        if any(ch not in "01" for ch in cleaned):
            raise ValueError(f"not a bit string: {text!r}")
        return cls._trusted(tuple(int(ch) for ch in cleaned))

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitString":
        if value < 0 or value >> length:
            raise ValueError(f"{value} does not fit in {length} bits")
        return cls._trusted(tuple((value >> (length - 1 - i)) & 1 for i in range(length)))

    @classmethod
    def from_hex(cls, text: str, length: int) -> "BitString":
        """Parse most-significant-bit-first hex into exactly ``length`` bits."""
        cleaned = text.strip().lower()
        if cleaned.startswith("0x"):
            cleaned = cleaned[2:]
        if not cleaned:
            raise ValueError("empty hex string")
        if len(cleaned) != (length + 3) // 4:
            raise LengthMismatch(
                f"expected {(length + 3) // 4} hex digits for {length} bits, got {len(cleaned)}")
        return cls.from_int(int(cleaned, 16), length)

    @classmethod
    def random(cls, length: int, rng: np.random.Generator) -> "BitString":
        return cls._trusted(tuple(int(b) for b in rng.integers(0, 2, size=length)))

    @classmethod
    def zeros(cls, length: int) -> "BitString":
        return cls._trusted((0,) * length)

    def to_int(self) -> int:
        value = 0
        for b in self._bits:
            value = (value << 1) | b
        return value

    def to_hex(self) -> str:
        width = (len(self._bits) + 3) // 4
        return format(self.to_int(), f"0{width}x") if self._bits else ""

    def weight(self) -> int:
        return sum(self._bits)

    def distance(self, other: "BitString") -> int:
        return (self ^ other).weight()

    def __xor__(self, other: "BitString") -> "BitString":
        if len(other) != len(self):
            raise LengthMismatch(f"xor of lengths {len(self)} and {len(other)}")
        return BitString._trusted(tuple(a ^ b for a, b in zip(self._bits, other._bits)))

    def __add__(self, other: "BitString") -> "BitString":
        return BitString._trusted(self._bits + tuple(other))

    def __len__(self) -> int:
        return len(self._bits)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return BitString._trusted(self._bits[idx])
        return self._bits[idx]

    def __iter__(self):
        return iter(self._bits)

    def __eq__(self, other) -> bool:
        if isinstance(other, BitString):
            return self._bits == other._bits
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._bits)

    def __str__(self) -> str:
        return "".join(map(str, self._bits))

    def __repr__(self) -> str:
        return f"BitString('{self}')"

    def grouped(self, size: int = 4) -> str:
        s = str(self)
        return " ".join(s[i:i + size] for i in range(0, len(s), size))
