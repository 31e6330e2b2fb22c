"""Sequence-replacement machinery: band-violation scans, the forbidden-word
rank Psi, and the 1D windowed-weight codec."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numba
import numpy as np

from .balance1d import BalanceBand
from .bitcore import BitVector, as_bits, from_int, to_int
from .enumcode import WeightRanker


class InfeasibleParameters(ValueError):
    """Parameters for which a codec cannot be built."""


@dataclass(frozen=True)
class ForbiddenSpace:
    """Length-ell words whose weight falls outside the band, ranked into k bits."""

    ell: int
    band: BalanceBand
    target_bits: int
    ranker: WeightRanker = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.band.length != self.ell:
            raise ValueError("band length differs from the window length")
        outside = ((0, self.band.lo - 1), (self.band.hi + 1, self.ell))
        object.__setattr__(self, "ranker", WeightRanker(self.ell, outside))
        if self.target_bits < 0 or self.cardinality > 1 << self.target_bits:
            raise InfeasibleParameters(
                f"|F| = {self.cardinality} exceeds 2^{self.target_bits} for window {self.ell}"
            )

    @property
    def cardinality(self) -> int:
        return self.ranker.cardinality

    def forbidden(self, y: BitVector) -> bool:
        return int(np.count_nonzero(y)) not in self.band


def forbidden_count(ell: int, band: BalanceBand) -> int:
    outside = ((0, band.lo - 1), (band.hi + 1, ell))
    return WeightRanker(ell, outside).cardinality


def psi_rank(y: BitVector, space: ForbiddenSpace) -> BitVector:
    return from_int(space.ranker.rank(y), space.target_bits)


def psi_unrank(bits: BitVector, space: ForbiddenSpace) -> BitVector:
    return space.ranker.unrank(to_int(bits))


def scan_violation(x: BitVector, ell: int, band: BalanceBand, stride: int = 1) -> int | None:
    """Smallest start whose stride-spaced ell-bit subsequence is out of band."""
    x = np.asarray(x, dtype=np.int64)
    starts = x.size - (ell - 1) * stride
    if starts <= 0:
        return None
    lanes = -(-x.size // stride)
    grid = np.zeros((lanes + 1, stride), dtype=np.int64)
    grid[1:].reshape(-1)[: x.size] = x
    # grid[r, c] = x[c] + x[c + stride] + ... over the first r lane entries
    np.cumsum(grid, axis=0, out=grid)
    i = np.arange(starts)
    row, col = i // stride, i % stride
    sums = grid[row + ell, col] - grid[row, col]
    bad = np.flatnonzero((sums < band.lo) | (sums > band.hi))
    return int(bad[0]) if bad.size else None


@numba.njit(cache=True)
def first_forbidden(x, length, ell, lo, hi, stride, skip_lo=0, skip_hi=0):
    """First start of an out-of-band window in x[:length].

    Returns (start, kind): kind 1 for a consecutive window, 2 for a
    stride-spaced one, 0 if none. At equal starts the consecutive window
    wins. A zero stride disables the spaced check. Consecutive windows
    starting in [skip_lo, skip_hi) are taken as compliant.
    """
    row_last = length - ell
    col_last = length - 1 - (ell - 1) * stride if stride > 0 else -1
    last = max(row_last, col_last)
    if last < 0:
        return -1, 0
    chunk = stride if stride > 0 else 4096
    csum = np.zeros(chunk, dtype=np.int64)
    if col_last >= 0:
        m = min(chunk, col_last + 1)
        for t in range(ell):
            lane = x[t * stride : t * stride + m]
            for j in range(m):
                csum[j] += lane[j]
    s = 0
    r_at = -2
    for base in range(0, last + 1, chunk):
        end = min(base + chunk, last + 1)
        cfirst = end
        if base <= col_last:
            m = min(end, col_last + 1) - base
            if base > 0:
                top = base + (ell - 1) * stride
                enter = x[top : top + m]
                leave = x[base - stride : base - stride + m]
                for j in range(m):
                    csum[j] += np.int64(enter[j]) - np.int64(leave[j])
            for j in range(m):
                v = csum[j]
                if v < lo or v > hi:
                    cfirst = base + j
                    break
        i = base
        rstop = min(cfirst, row_last)
        while i <= rstop:
            if skip_lo <= i < skip_hi:
                i = skip_hi
                continue
            if r_at == i - 1:
                s += x[i + ell - 1] - x[i - 1]
            else:
                s = 0
                for t in range(ell):
                    s += x[i + t]
            r_at = i
            if s < lo or s > hi:
                return i, 1
            i += 1
        if cfirst < end:
            return cfirst, 2
    return -1, 0


@numba.njit(cache=True)
def _copy(dst, src):
    # plain loop over fresh views; offset-indexed copies do not vectorize
    for k in range(src.size):
        dst[k] = src[k]


@numba.njit(cache=True)
def remove_prepend(src, length, dst, record, start, ell, stride):
    """dst = record + src[:length] without the window at start; returns the new length.

    A zero stride removes ell consecutive bits, otherwise ell bits spaced
    by stride.
    """
    k = record.size
    _copy(dst[:k], record)
    o = k
    prev = 0
    step = stride if stride > 0 else 1
    for t in range(ell):
        p = start + t * step
        _copy(dst[o : o + p - prev], src[prev:p])
        o += p - prev
        prev = p + 1
    _copy(dst[o : o + length - prev], src[prev:length])
    return o + length - prev


@numba.njit(cache=True)
def strip_insert(src, length, dst, head, start, y, stride):
    """Inverse of remove_prepend: drop `head` leading bits, put y back at start."""
    o = 0
    prev = head
    step = stride if stride > 0 else 1
    for t in range(y.size):
        p = head + start + t * step - t
        _copy(dst[o : o + p - prev], src[prev:p])
        o += p - prev
        prev = p
        dst[o] = y[t]
        o += 1
    _copy(dst[o : o + length - prev], src[prev:length])
    return o + length - prev


@dataclass(frozen=True)
class WindowCodec:
    """1D codec: m-1 message bits to m bits whose every ell-window is in band.

    Record layout: 1 | position (ceil(log2 m) bits) | Psi payload, ell - 1 bits.
    """

    m: int
    ell: int
    band: BalanceBand
    space: ForbiddenSpace = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 2 <= self.ell <= self.m:
            raise InfeasibleParameters(f"window {self.ell} outside [2, {self.m}]")
        object.__setattr__(
            self, "space", ForbiddenSpace(self.ell, self.band, self.ell - 2 - self.position_bits)
        )

    @classmethod
    def from_fractions(cls, m: int, ell: int, p1: Fraction, p2: Fraction) -> WindowCodec:
        lo, hi = math.ceil(Fraction(p1) * ell), math.floor(Fraction(p2) * ell)
        return cls(m, ell, BalanceBand(ell, lo, hi))

    @property
    def position_bits(self) -> int:
        return (self.m - 1).bit_length()

    def encode(self, msg: BitVector) -> BitVector:
        msg = as_bits(msg)
        if msg.size != self.m - 1:
            raise ValueError(f"expected {self.m - 1} message bits, got {msg.size}")
        lo, hi, ell = self.band.lo, self.band.hi, self.ell
        buf = np.zeros(self.m, dtype=np.uint8)
        buf[1:] = msg
        spare = np.empty_like(buf)
        length, skip = self.m, 0
        marker = np.ones(1, dtype=np.uint8)
        while True:
            i, kind = first_forbidden(buf, length, ell, lo, hi, 0, ell - 1, skip)
            if kind == 0:
                break
            psi = psi_rank(buf[i : i + ell], self.space)
            record = np.concatenate([marker, from_int(i, self.position_bits), psi])
            length = remove_prepend(buf, length, spare, record, i, ell, 0)
            buf, spare, skip = spare, buf, i
            if length < ell:
                raise ArithmeticError("sequence shrank below the window length")
        return repeat_tail(buf[:length], ell, self.m)

    def decode(self, word: BitVector) -> BitVector:
        word = as_bits(word)
        if word.size != self.m:
            raise ValueError(f"expected {self.m} bits, got {word.size}")
        w, ell = self.position_bits, self.ell
        buf = np.zeros(2 * self.m, dtype=np.uint8)
        buf[: self.m] = word
        spare = np.empty_like(buf)
        length = self.m
        for _ in range(self.m):
            if buf[0] == 0:
                return buf[1 : self.m].copy()
            pos = to_int(buf[1 : 1 + w])
            y = psi_unrank(buf[1 + w : ell - 1], self.space)
            if pos > length - (ell - 1):
                raise ValueError("corrupt record position")
            length = strip_insert(buf, length, spare, ell - 1, pos, y, 0)
            length = min(length, self.m)
            buf, spare = spare, buf
        raise ValueError("corrupt codeword: replacement chain does not terminate")


def repeat_tail(seq: np.ndarray, ell: int, size: int) -> np.ndarray:
    """Extend seq to `size` bits by repeating its last ell bits."""
    if seq.size >= size:
        return seq[:size].copy()
    tail = seq[seq.size - ell :]
    reps = -(-(size - seq.size) // ell)
    return np.concatenate([seq, np.tile(tail, reps)])[:size]


def encode_1d_window(msg: BitVector, ell: int, p1: Fraction, p2: Fraction) -> BitVector:
    return WindowCodec.from_fractions(len(msg) + 1, ell, p1, p2).encode(msg)


def decode_1d_window(word: BitVector, ell: int, p1: Fraction, p2: Fraction) -> BitVector:
    return WindowCodec.from_fractions(len(word), ell, p1, p2).decode(word)


def log_window_bound(m: int, p1: Fraction, p2: Fraction) -> float:
    """(1/c^2) ln m with c = min(1/2 - p1, p2 - 1/2)."""
    c = min(Fraction(1, 2) - Fraction(p1), Fraction(p2) - Fraction(1, 2))
    return math.log(m) / float(c) ** 2
