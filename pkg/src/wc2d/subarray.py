"""Subarray-constrained codecs.

Bounded: every m x m subarray of an n x n array has weight at most m^2/2,
enforced by antipodal replacements over the (k+1)^2 subarrays (k = n - m)
with one flag per subarray in the last row. Balanced: the 1D window codec
runs over the row-major n^2 frame, so every m consecutive bits of a row are
in band and hence so is every m x m subarray.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .antipodal import antipodal_map
from .balance1d import BalanceBand
from .bitcore import BitArray, BitVector, as_bits
from .srt import InfeasibleParameters, WindowCodec


@dataclass(frozen=True)
class SubBoundedParams:
    n: int
    m: int
    p: Fraction = Fraction(1, 2)

    def __post_init__(self) -> None:
        p = Fraction(self.p)
        object.__setattr__(self, "p", p)
        if not 2 <= self.m <= self.n:
            raise InfeasibleParameters("2 <= m <= n fails")
        if self.m % 2:
            raise InfeasibleParameters("m even fails")
        if 2 * (self.k + 1) ** 2 > self.n:
            raise InfeasibleParameters("2(k+1)^2 <= n fails")
        if not Fraction(1, 2) <= p <= 1:
            raise InfeasibleParameters("p >= 1/2 fails")

    @property
    def k(self) -> int:
        return self.n - self.m

    @property
    def corners(self) -> list[tuple[int, int]]:
        """Top-left corners of the m x m subarrays in row-major order."""
        return [(r, c) for r in range(self.k + 1) for c in range(self.k + 1)]

    @property
    def payload_bits(self) -> int:
        return self.n * self.n - self.n


def _region(params: SubBoundedParams, i: int) -> tuple[slice, slice]:
    """Cells replaced for subarray i: B_i, or B_i without the last row in the bottom band."""
    r, c = params.corners[i]
    m = params.m
    rows = m - 1 if i >= params.k * (params.k + 1) else m
    return slice(r, r + rows), slice(c, c + m)


def _flip(a: np.ndarray, region: tuple[slice, slice]) -> None:
    block = a[region]
    a[region] = antipodal_map(block.reshape(-1)).reshape(block.shape)


def encode_sub_bounded(msg: BitVector, params: SubBoundedParams) -> BitArray:
    msg = as_bits(msg)
    if msg.size != params.payload_bits:
        raise ValueError(f"expected {params.payload_bits} message bits, got {msg.size}")
    n, m = params.n, params.m
    a = np.zeros((n, n), dtype=np.uint8)
    a[: n - 1] = msg.reshape(n - 1, n)
    flags = np.zeros(len(params.corners), dtype=np.uint8)
    for i in range(flags.size):
        region = _region(params, i)
        cells = a[region].size
        if 2 * int(a[region].sum()) > cells:
            _flip(a, region)
            flags[i] = 1
    last = np.zeros(n, dtype=np.uint8)
    last[0 : 2 * flags.size : 2] = flags
    last[1 : 2 * flags.size : 2] = 1 - flags
    # a window starting mid-pair can hold both ends of two split pairs; the
    # complement bits are never read back, so clearing one restores the bound
    for c in range(1, params.k + 1, 2):
        if 2 * int(last[c : c + m].sum()) > m:
            last[c] = 0
    a[n - 1] = last
    for c in range(params.k + 1):
        if 2 * int(last[c : c + m].sum()) > m:
            raise ArithmeticError(f"last-row window at column {c} exceeds m/2")
    return a


def decode_sub_bounded(a: BitArray, params: SubBoundedParams) -> BitVector:
    n = params.n
    a = np.array(a, dtype=np.uint8)
    if a.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} array")
    flags = a[n - 1, 0 : 2 * len(params.corners) : 2]
    for i in reversed(range(flags.size)):
        if flags[i]:
            _flip(a, _region(params, i))
    return a[: n - 1].reshape(-1).copy()


@dataclass(frozen=True)
class SubBalancedParams:
    """n x n arrays whose m x m subarrays are all epsilon-balanced."""

    n: int
    m: int
    eps: Fraction
    window: WindowCodec = field(init=False, repr=False)

    def __post_init__(self) -> None:
        eps = Fraction(self.eps)
        object.__setattr__(self, "eps", eps)
        if not 0 < eps < Fraction(1, 2):
            raise InfeasibleParameters("0 < epsilon < 1/2 fails")
        if not 2 <= self.m <= self.n:
            raise InfeasibleParameters("2 <= m <= n fails")
        band = BalanceBand.of(self.m, eps)
        # raises InfeasibleParameters when |F| exceeds the record's rank field
        object.__setattr__(self, "window", WindowCodec(self.n * self.n, self.m, band))

    @property
    def band(self) -> BalanceBand:
        return self.window.band

    @property
    def payload_bits(self) -> int:
        return self.n * self.n - 1

    @property
    def meets_log_bound(self) -> bool:
        """Whether (2/eps^2) ln n <= m, the sufficient condition for feasibility."""
        return 2 * math.log(self.n) / float(self.eps) ** 2 <= self.m


def encode_sub_balanced(msg: BitVector, params: SubBalancedParams) -> BitArray:
    msg = as_bits(msg)
    if msg.size != params.payload_bits:
        raise ValueError(f"expected {params.payload_bits} message bits, got {msg.size}")
    return params.window.encode(msg).reshape(params.n, params.n)


def decode_sub_balanced(a: BitArray, params: SubBalancedParams) -> BitVector:
    n = params.n
    a = np.asarray(a, dtype=np.uint8)
    if a.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} array")
    return params.window.decode(a.reshape(-1))
