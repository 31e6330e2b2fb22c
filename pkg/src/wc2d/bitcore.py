"""Bit-level primitives shared by every codec.

Bit vectors are 1D ``uint8`` arrays holding 0/1; bit arrays are 2D ones.
Index 0 is the leftmost bit, and the leftmost bit is the most significant
in any integer rendering. All functions return fresh arrays.
"""

from __future__ import annotations

from typing import Any

import numpy as np

BitVector = np.ndarray
BitArray = np.ndarray


def _is_binary(array: np.ndarray) -> bool:
    if array.dtype == np.uint8 or array.dtype == np.bool_:
        return not array.size or int(array.max()) <= 1
    return not array.size or bool(np.isin(array, (0, 1)).all())


def as_bits(x: Any) -> BitVector:
    """Coerce a 0/1 string, sequence or array into a 1D uint8 vector."""
    if isinstance(x, str):
        if x.strip("01"):
            raise ValueError(f"not a bit string: {x!r}")
        return np.frombuffer(x.encode(), dtype=np.uint8) - ord("0")
    array = np.asarray(x)
    if array.ndim != 1:
        raise ValueError("bit vector must be one-dimensional")
    if not _is_binary(array):
        raise ValueError("bit vector must contain only 0 and 1")
    return array.astype(np.uint8)


def as_array(x: Any) -> BitArray:
    """Coerce rows of bits (strings or sequences) into a 2D uint8 array."""
    if isinstance(x, (list, tuple)) and x and isinstance(x[0], str):
        rows = [as_bits(r) for r in x]
        if len({len(r) for r in rows}) != 1:
            raise ValueError("rows differ in length")
        return np.stack(rows)
    array = np.asarray(x)
    if array.ndim != 2:
        raise ValueError("bit array must be two-dimensional")
    if not _is_binary(array):
        raise ValueError("bit array must contain only 0 and 1")
    return array.astype(np.uint8)


def to_str(v: BitVector) -> str:
    return "".join("1" if b else "0" for b in np.asarray(v).ravel())


def to_int(v: BitVector) -> int:
    """Big-endian integer value of v."""
    v = np.asarray(v, dtype=np.uint8)
    if v.size == 0:
        return 0
    return int.from_bytes(np.packbits(v[::-1], bitorder="little").tobytes(), "little")


def from_int(value: int, width: int) -> BitVector:
    """Big-endian width-bit rendering of a non-negative integer."""
    if value < 0 or (width < value.bit_length()):
        raise ValueError(f"{value} does not fit in {width} bits")
    if width == 0:
        return np.zeros(0, dtype=np.uint8)
    raw = np.frombuffer(value.to_bytes((width + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:width][::-1].copy()


def weight(v: Any) -> int:
    """Number of one-bits."""
    return int(np.count_nonzero(v))


def complement(v: BitVector) -> BitVector:
    return (1 - np.asarray(v, dtype=np.uint8)).astype(np.uint8)


def flip_prefix(v: BitVector, t: int) -> BitVector:
    """Negate the first t bits."""
    v = as_bits(v)
    if not 0 <= t <= v.size:
        raise ValueError(f"flip index {t} outside [0, {v.size}]")
    out = v.copy()
    out[:t] ^= 1
    return out


def swap_prefix(y: BitVector, z: BitVector, t: int) -> tuple[BitVector, BitVector]:
    """Return (Swap_t(y, z), Swap_t(z, y)): the first t bits of y and z exchanged."""
    y, z = as_bits(y), as_bits(z)
    if y.size != z.size:
        raise ValueError(f"length mismatch: {y.size} != {z.size}")
    if not 0 <= t <= y.size:
        raise ValueError(f"swap index {t} outside [0, {y.size}]")
    return np.concatenate([z[:t], y[t:]]), np.concatenate([y[:t], z[t:]])


def flatten(a: BitArray) -> BitVector:
    """Read the array row by row."""
    return np.asarray(a, dtype=np.uint8).reshape(-1).copy()


def unflatten(v: BitVector, rows: int, cols: int) -> BitArray:
    v = np.asarray(v, dtype=np.uint8)
    if v.ndim != 1 or v.size != rows * cols:
        raise ValueError(f"cannot shape {v.size} bits into {rows}x{cols}")
    return v.reshape(rows, cols).copy()
