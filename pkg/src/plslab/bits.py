"""Fixed-width bit packing for certificates.

Certificates travel as strings over {'0','1'}; every field is written
most-significant bit first.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class DecodeError(ValueError):
    """Bits do not form a certificate of the expected shape."""


def id_width(max_id: int) -> int:
    """Bits per id field: ceil(log2(max_id + 1)), at least 1."""
    return max(1, int(max_id).bit_length())


class BitWriter:
    def __init__(self):
        self._parts: list[str] = []

    def uint(self, value: int, width: int) -> "BitWriter":
        if value < 0 or value >= (1 << width):
            raise ValueError(f"{value} does not fit in {width} bits")
        self._parts.append(format(value, f"0{width}b") if width else "")
        return self

    def flag(self, value: bool) -> "BitWriter":
        self._parts.append("1" if value else "0")
        return self

    def raw(self, bits: str) -> "BitWriter":
        self._parts.append(bits)
        return self

    def getvalue(self) -> str:
        return "".join(self._parts)


class BitReader:
    def __init__(self, bits: str):
        if any(c not in "01" for c in bits):
            raise DecodeError("certificate contains non-binary characters")
        self.bits = bits
        self.pos = 0

    def uint(self, width: int) -> int:
        end = self.pos + width
        if end > len(self.bits):
            raise DecodeError("certificate too short")
        chunk = self.bits[self.pos:end]
        self.pos = end
        return int(chunk, 2) if chunk else 0

    def flag(self) -> bool:
        return self.uint(1) == 1

    def take(self, count: int) -> str:
        end = self.pos + count
        if end > len(self.bits):
            raise DecodeError("certificate too short")
        chunk = self.bits[self.pos:end]
        self.pos = end
        return chunk

    def remaining(self) -> int:
        return len(self.bits) - self.pos

    def done(self) -> None:
        if self.pos != len(self.bits):
            raise DecodeError(f"{len(self.bits) - self.pos} trailing bits")


@dataclass(frozen=True)
class CodecContext:
    """Instance-wide encoding parameters (shared convention, not node knowledge)."""

    width: int
    weights: tuple[Fraction, ...] = ()
    label_kind: str = "pointer"

    @classmethod
    def for_instance(cls, instance) -> "CodecContext":
        g = instance.graph
        weights = tuple(sorted(g.weights.values())) if g.weighted else ()
        return cls(id_width(g.max_id), weights, instance.label_kind)

    @property
    def weight_width(self) -> int:
        return 2 * self.width

    def weight_rank(self, w: Fraction) -> int:
        lo, hi = 0, len(self.weights)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.weights[mid] < w:
                lo = mid + 1
            else:
                hi = mid
        if lo == len(self.weights) or self.weights[lo] != w:
            raise ValueError(f"weight {w} is not an edge weight of the instance")
        return lo

    def weight_at(self, rank: int) -> Fraction:
        if rank >= len(self.weights):
            raise DecodeError(f"weight rank {rank} out of range")
        return self.weights[rank]
