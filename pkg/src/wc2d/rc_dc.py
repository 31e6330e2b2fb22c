"""Divide-and-conquer row/column codecs.

Phase I writes one constrained row per message chunk. Phase II halves the
array column-wise down to single columns; at every split the first t cells
of the two halves are exchanged until both halves comply. Cells are read
column by column inside each half, so position f of the left half and
position f of the right half share a row and row weights never change.
Phase III stores the swap indices in c extra rows that comply by layout.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .balance1d import (
    BalanceBand,
    EpsRowCodec,
    _swap_weights,
    bounded_limit,
    eps_balancing_set,
    row_redundancy,
)
from .bitcore import BitArray, BitVector, as_bits, from_int, to_int
from .enumcode import BoundedWeightSpace, payload_decode, payload_encode
from .srt import InfeasibleParameters

SwapEntry = tuple[int, int, int]  # (depth, block, swap index)


@dataclass(frozen=True)
class SwapTrace:
    """Swap indices in breadth-first, left-to-right order over the halving tree."""

    entries: tuple[SwapEntry, ...]

    @property
    def indices(self) -> list[int]:
        return [t for _, _, t in self.entries]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _halves(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Column-major flattenings of the left and right halves."""
    w = block.shape[1] // 2
    return block[:, :w].T.reshape(-1), block[:, w:].T.reshape(-1)


def _apply_swap(a: np.ndarray, col: int, width: int, t: int) -> None:
    """Exchange the first t column-major cells of the two halves in place."""
    if t == 0:
        return
    h, half = a.shape[0], width // 2
    left = a[:, col : col + half].T.reshape(-1)
    right = a[:, col + half : col + width].T.reshape(-1)
    left[:t], right[:t] = right[:t].copy(), left[:t].copy()
    a[:, col : col + half] = left.reshape(half, h).T
    a[:, col + half : col + width] = right.reshape(half, h).T


def _blocks(width: int):
    """(depth, block, column, block width) in breadth-first order."""
    depth, w = 0, width
    while w >= 2:
        for b in range(width // w):
            yield depth, b, b * w, w
        depth += 1
        w //= 2


def swap_phase_bounded(a: BitArray, p: Fraction) -> tuple[BitArray, SwapTrace]:
    """Phase II for the p-bounded constraint on an h x w block, w a power of two."""
    a = np.array(a, dtype=np.uint8)
    if not _is_power_of_two(a.shape[1]):
        raise ValueError("block width must be a power of two")
    entries = []
    for depth, b, col, w in _blocks(a.shape[1]):
        y, z = _halves(a[:, col : col + w])
        limit = bounded_limit(y.size, p)
        wy, wz = _swap_weights(y, z)
        hits = np.flatnonzero((wy <= limit) & (wz <= limit))
        if hits.size == 0:
            raise ArithmeticError(f"no p-bounded swap at depth {depth}, block {b}")
        t = int(hits[0])
        _apply_swap(a, col, w, t)
        entries.append((depth, b, t))
    return a, SwapTrace(tuple(entries))


def swap_phase_balanced(
    a: BitArray, eps: Fraction, budget: int = 20_000
) -> tuple[BitArray, SwapTrace]:
    """Phase II for the epsilon-balanced constraint, swap indices drawn from S_{eps,M}.

    Each split takes the smallest in-set index for which both halves are
    balanced and their own subtrees can still be completed. At most `budget`
    splits are tried before giving up.
    """
    a = np.array(a, dtype=np.uint8)
    if not _is_power_of_two(a.shape[1]):
        raise ValueError("block width must be a power of two")
    choice: dict[tuple[int, int], int] = {}
    visits = [0]

    def solve(depth: int, b: int, col: int, w: int) -> bool:
        if w < 2:
            return True
        visits[0] += 1
        if visits[0] > budget:
            raise ArithmeticError("swap search budget exhausted")
        y, z = _halves(a[:, col : col + w])
        band = BalanceBand.of(y.size, eps)
        wy, wz = _swap_weights(y, z)
        saved = a[:, col : col + w].copy()
        for t in eps_balancing_set(y.size, eps):
            if wy[t] not in band or wz[t] not in band:
                continue
            _apply_swap(a, col, w, t)
            half = w // 2
            if solve(depth + 1, 2 * b, col, half) and solve(depth + 1, 2 * b + 1, col + half, half):
                choice[depth, b] = t
                return True
            a[:, col : col + w] = saved
        return False

    if not solve(0, 0, 0, a.shape[1]):
        raise ArithmeticError("no epsilon-balanced swap assignment exists")
    entries = tuple((d, b, choice[d, b]) for d, b, _, _ in _blocks(a.shape[1]))
    return a, SwapTrace(entries)


def undo_swaps(a: BitArray, trace: SwapTrace) -> BitArray:
    """Replay a trace in reverse; each prefix swap is its own inverse."""
    a = np.array(a, dtype=np.uint8)
    width = a.shape[1]
    for depth, b, t in reversed(trace.entries):
        w = width >> depth
        _apply_swap(a, b * w, w, t)
    return a


@dataclass(frozen=True)
class BoundedDcParams:
    """Parameters of the divide-and-conquer p-bounded codec, p < 1/2."""

    n: int
    p: Fraction
    c: int = field(init=False)

    def __post_init__(self) -> None:
        p = Fraction(self.p)
        object.__setattr__(self, "p", p)
        n = self.n
        if not 0 < p < Fraction(1, 2):
            raise InfeasibleParameters("p < 1/2 fails")
        if not _is_power_of_two(n) or n < 2:
            raise InfeasibleParameters("n must be a power of two")
        start = math.ceil((1 + math.log2(n)) / p)
        for c in range(start, n):
            if self._fits(c):
                object.__setattr__(self, "c", c)
                return
        raise InfeasibleParameters(f"n > (1/p)(1 + log n) fails: no redundant row count works for n={n}, p={p}")

    def _fits(self, c: int) -> bool:
        rows = self.n - c
        if (self.p * rows).denominator != 1:
            return False
        if bounded_limit(rows, self.p) + -(-c // self.period) > bounded_limit(self.n, self.p):
            return False
        if self.space.payload_bits < 1:
            return False
        return self._trace_bits(c) <= c * (self.n // self.period)

    @property
    def period(self) -> int:
        return math.ceil(1 / self.p)

    @cached_property
    def space(self) -> BoundedWeightSpace:
        return BoundedWeightSpace(self.n, self.p)

    def _widths(self, c: int) -> list[int]:
        rows = self.n - c
        return [((rows * w // 2) + 1 - 1).bit_length() for _, _, _, w in _blocks(self.n)]

    @property
    def index_widths(self) -> list[int]:
        """Bit width of each swap index in breadth-first order."""
        return self._widths(self.c)

    def _trace_bits(self, c: int) -> int:
        return sum(self._widths(c))

    @property
    def trace_bits(self) -> int:
        return self._trace_bits(self.c)

    @property
    def payload_bits(self) -> int:
        return (self.n - self.c) * self.space.payload_bits


def serialize_trace(trace: SwapTrace, widths: list[int]) -> BitVector:
    parts = [from_int(t, w) for t, w in zip(trace.indices, widths)]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8)


def deserialize_trace(bits: BitVector, widths: list[int], n: int) -> SwapTrace:
    entries, at = [], 0
    for (depth, b, _, _), w in zip(_blocks(n), widths):
        entries.append((depth, b, to_int(bits[at : at + w])))
        at += w
    return SwapTrace(tuple(entries))


def pack_trace_bounded(bits: BitVector, params: BoundedDcParams) -> BitArray:
    """Row r holds trace bits r, r + c, r + 2c, ..., one per P-wide cell at slot r mod P."""
    bits = as_bits(bits)
    c, n, period = params.c, params.n, params.period
    cells = n // period
    if bits.size > c * cells:
        raise ValueError(f"trace of {bits.size} bits exceeds {c * cells} slots")
    padded = np.zeros(c * cells, dtype=np.uint8)
    padded[: bits.size] = bits
    block = np.zeros((c, n), dtype=np.uint8)
    for r in range(c):
        block[r, np.arange(cells) * period + r % period] = padded[r::c]
    return block


def unpack_trace_bounded(block: BitArray, params: BoundedDcParams, length: int | None = None) -> BitVector:
    c, n, period = params.c, params.n, params.period
    cells = n // period
    out = np.zeros(c * cells, dtype=np.uint8)
    for r in range(c):
        out[r::c] = block[r, np.arange(cells) * period + r % period]
    return out[: params.trace_bits if length is None else length]


def encode_bounded_dc(msg: BitVector, params: BoundedDcParams) -> BitArray:
    msg = as_bits(msg)
    if msg.size != params.payload_bits:
        raise ValueError(f"expected {params.payload_bits} message bits, got {msg.size}")
    space, k = params.space, params.space.payload_bits
    rows = [payload_encode(msg[i * k : (i + 1) * k], space) for i in range(params.n - params.c)]
    top, trace = swap_phase_bounded(np.stack(rows), params.p)
    block = pack_trace_bounded(serialize_trace(trace, params.index_widths), params)
    return np.vstack([top, block])


def decode_bounded_dc(a: BitArray, params: BoundedDcParams) -> BitVector:
    a = np.asarray(a, dtype=np.uint8)
    if a.shape != (params.n, params.n):
        raise ValueError(f"expected a {params.n}x{params.n} array")
    rows = params.n - params.c
    bits = unpack_trace_bounded(a[rows:], params)
    trace = deserialize_trace(bits, params.index_widths, params.n)
    top = undo_swaps(a[:rows], trace)
    return np.concatenate([payload_decode(r, params.space) for r in top])


@dataclass(frozen=True)
class BalancedDcParams:
    """Parameters of the divide-and-conquer epsilon-balanced codec."""

    n: int
    eps: Fraction
    c: int = field(init=False)

    def __post_init__(self) -> None:
        eps = Fraction(self.eps)
        object.__setattr__(self, "eps", eps)
        if not 0 < eps < Fraction(1, 2):
            raise InfeasibleParameters("0 < epsilon < 1/2 fails")
        if not _is_power_of_two(self.n) or self.n < 2:
            raise InfeasibleParameters("n must be a power of two")
        c = row_redundancy(eps)
        object.__setattr__(self, "c", c)
        if self.n <= 2 * c:
            raise InfeasibleParameters(f"n > 2c fails (c = {c})")
        rows = self.n - 2 * c
        if eps * rows < 1 or eps * (self.n - c) < 1:
            raise InfeasibleParameters("n epsilon >= 1 fails for the data rows")
        for _, _, _, w in _blocks(self.n):
            if len(eps_balancing_set(rows * w // 2, eps)) > 1 << (c // 2):
                raise InfeasibleParameters("balancing set exceeds the index field")
        EpsRowCodec(self.n, eps)

    @property
    def rows(self) -> int:
        return self.n - 2 * self.c

    @cached_property
    def row_codec(self) -> EpsRowCodec:
        return EpsRowCodec(self.n, self.eps)

    @property
    def trace_bits(self) -> int:
        return (self.n - 1) * (self.c // 2)

    @property
    def payload_bits(self) -> int:
        return self.rows * (self.n - self.c)


def pack_trace_balanced(bits: BitVector, params: BalancedDcParams) -> BitArray:
    """Odd rows carry bit/complement pairs; each even row complements the row above."""
    bits = as_bits(bits)
    c, n = params.c, params.n
    if bits.size > c * n // 2:
        raise ValueError(f"trace of {bits.size} bits exceeds {c * n // 2} slots")
    padded = np.zeros(c * n // 2, dtype=np.uint8)
    padded[: bits.size] = bits
    block = np.zeros((2 * c, n), dtype=np.uint8)
    block[0::2, 0::2] = padded.reshape(c, n // 2)
    block[0::2, 1::2] = 1 - block[0::2, 0::2]
    block[1::2] = 1 - block[0::2]
    return block


def unpack_trace_balanced(block: BitArray, params: BalancedDcParams) -> BitVector:
    return np.asarray(block)[0::2, 0::2].reshape(-1).copy()


def scramble_mask(params: BalancedDcParams, seed: int) -> BitVector:
    """Fixed pseudo-random mask; seed 0 is the all-zero mask."""
    if seed == 0:
        return np.zeros(params.payload_bits, dtype=np.uint8)
    tag = f"wc2d/{params.n}/{params.eps}/{seed}".encode()
    raw = hashlib.shake_256(tag).digest(-(-params.payload_bits // 8))
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[: params.payload_bits]


def _index_sets(params: BalancedDcParams) -> list[tuple[int, ...]]:
    return [eps_balancing_set(params.rows * w // 2, params.eps).indices for _, _, _, w in _blocks(params.n)]


def encode_balanced_dc(msg: BitVector, params: BalancedDcParams) -> BitArray:
    """Encode; if no swap assignment exists, retry under the next scrambling mask.

    The mask seed occupies the c/2 trace slots left over after n - 1 indices.
    """
    msg = as_bits(msg)
    if msg.size != params.payload_bits:
        raise ValueError(f"expected {params.payload_bits} message bits, got {msg.size}")
    codec, k, half = params.row_codec, params.n - params.c, params.c // 2
    for seed in range(1 << half):
        body = msg ^ scramble_mask(params, seed)
        rows = np.stack([codec.encode(body[i * k : (i + 1) * k]) for i in range(params.rows)])
        try:
            top, trace = swap_phase_balanced(rows, params.eps)
        except ArithmeticError:
            continue
        positions = [s.index(t) for s, t in zip(_index_sets(params), trace.indices)]
        bits = np.concatenate([from_int(j, half) for j in positions + [seed]])
        return np.vstack([top, pack_trace_balanced(bits, params)])
    raise ArithmeticError("no swap assignment under any scrambling mask")


def decode_balanced_dc(a: BitArray, params: BalancedDcParams) -> BitVector:
    a = np.asarray(a, dtype=np.uint8)
    if a.shape != (params.n, params.n):
        raise ValueError(f"expected a {params.n}x{params.n} array")
    half = params.c // 2
    bits = unpack_trace_balanced(a[params.rows :], params)
    fields = [to_int(bits[i * half : (i + 1) * half]) for i in range(params.n)]
    entries = []
    for (depth, b, _, _), s, j in zip(_blocks(params.n), _index_sets(params), fields):
        if j >= len(s):
            raise ValueError("corrupt swap index")
        entries.append((depth, b, s[j]))
    top = undo_swaps(a[: params.rows], SwapTrace(tuple(entries)))
    body = np.concatenate([params.row_codec.decode(r) for r in top])
    return body ^ scramble_mask(params, fields[-1])
