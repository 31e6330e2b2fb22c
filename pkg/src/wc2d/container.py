"""Array file format and byte-stream framing.

Header (little-endian): magic "WC2D", version u8, mode u8, n u32, m u32,
p numerator/denominator u32, epsilon numerator/denominator u32, array count
u64. Each array follows as row-major bits packed big-endian within bytes,
padded to a byte boundary.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .modes import MODES

MAGIC = b"WC2D"
VERSION = 1
HEADER = struct.Struct("<4sBBIIIIIIQ")


class CorruptContainer(ValueError):
    """The file is not a well-formed array container."""


@dataclass(frozen=True)
class Header:
    mode: str
    n: int
    m: int | None
    p: Fraction | None
    eps: Fraction | None
    count: int

    def pack(self) -> bytes:
        p = self.p or Fraction(0)
        e = self.eps or Fraction(0)
        return HEADER.pack(
            MAGIC,
            VERSION,
            MODES.index(self.mode),
            self.n,
            self.m or 0,
            p.numerator,
            p.denominator if self.p is not None else 0,
            e.numerator,
            e.denominator if self.eps is not None else 0,
            self.count,
        )

    @classmethod
    def unpack(cls, raw: bytes) -> Header:
        if len(raw) < HEADER.size:
            raise CorruptContainer("file shorter than the header")
        magic, version, mode, n, m, pn, pd, en, ed, count = HEADER.unpack_from(raw)
        if magic != MAGIC:
            raise CorruptContainer("bad magic")
        if version != VERSION:
            raise CorruptContainer(f"unsupported version {version}")
        if mode >= len(MODES):
            raise CorruptContainer(f"unknown mode code {mode}")
        p = Fraction(pn, pd) if pd else None
        eps = Fraction(en, ed) if ed else None
        return cls(MODES[mode], n, m or None, p, eps, count)


def array_bytes(n: int) -> int:
    return -(-n * n // 8)


def write_container(header: Header, arrays: list[np.ndarray]) -> bytes:
    if header.count != len(arrays):
        raise ValueError("array count differs from the header")
    return header.pack() + b"".join(np.packbits(a.reshape(-1)).tobytes() for a in arrays)


def read_container(raw: bytes) -> tuple[Header, list[np.ndarray]]:
    header = Header.unpack(raw)
    n, size = header.n, array_bytes(header.n)
    body = raw[HEADER.size :]
    if len(body) != header.count * size:
        raise CorruptContainer(f"expected {header.count * size} array bytes, found {len(body)}")
    arrays = []
    for i in range(header.count):
        chunk = np.frombuffer(body[i * size : (i + 1) * size], dtype=np.uint8)
        arrays.append(np.unpackbits(chunk)[: n * n].reshape(n, n))
    return header, arrays


def frame(data: bytes, block: int) -> list[np.ndarray]:
    """Split a byte stream into block-bit payloads; the last ends with 1 then zeros."""
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    total = -(-(bits.size + 1) // block) * block
    padded = np.zeros(total, dtype=np.uint8)
    padded[: bits.size] = bits
    padded[bits.size] = 1
    return list(padded.reshape(-1, block))


def unframe(blocks: list[np.ndarray]) -> bytes:
    if not blocks:
        raise CorruptContainer("no payload blocks")
    bits = np.concatenate(blocks)
    ones = np.flatnonzero(bits)
    if ones.size == 0:
        raise CorruptContainer("padding marker missing")
    end = int(ones[-1])
    if end % 8:
        raise CorruptContainer("payload is not a whole number of bytes")
    return np.packbits(bits[:end]).tobytes()
