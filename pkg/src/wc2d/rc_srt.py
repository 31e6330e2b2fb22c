"""Sequence-replacement row/column codecs.

The p-bounded codec (p > 1/2) spends n + 3 bits: one for the 1D window
codec, two flags in row n - 1 and the column flag row. The balanced codec
spends a single bit: forbidden row or column windows of the working
sequence are replaced by shorter records until none remain, and the array
is then completed by an extension step that keeps every line balanced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .antipodal import antipodal_map
from .balance1d import BalanceBand, bounded_limit
from .bitcore import BitArray, BitVector, as_bits, from_int, to_int
from .srt import (
    ForbiddenSpace,
    InfeasibleParameters,
    WindowCodec,
    first_forbidden,
    remove_prepend,
    strip_insert,
    psi_rank,
    psi_unrank,
)


@dataclass(frozen=True)
class BoundedSrtParams:
    """n x n arrays with every row and column weight at most p n, p > 1/2."""

    n: int
    p: Fraction
    window: WindowCodec = field(init=False, repr=False)

    def __post_init__(self) -> None:
        p = Fraction(self.p)
        object.__setattr__(self, "p", p)
        n = self.n
        if not Fraction(1, 2) < p < 1:
            raise InfeasibleParameters("1/2 < p < 1 fails")
        if n < 3:
            raise InfeasibleParameters("n >= 3 fails")
        if n / math.log(n) < 1 / float(p - Fraction(1, 2)) ** 2:
            raise InfeasibleParameters("n/ln n >= 1/(p-1/2)^2 fails")
        if 2 * bounded_limit(n, p) < n + 1 or (1 - p) * (n - 2) + 2 > p * n:
            raise InfeasibleParameters("n > 2/(2p-1) fails")
        band = BalanceBand.bounded(n, p)
        object.__setattr__(self, "window", WindowCodec(n * n - n - 2, n, band))

    @property
    def limit(self) -> int:
        return bounded_limit(self.n, self.p)

    @property
    def payload_bits(self) -> int:
        return self.n * self.n - self.n - 3


def encode_bounded_srt(msg: BitVector, params: BoundedSrtParams) -> BitArray:
    msg = as_bits(msg)
    if msg.size != params.payload_bits:
        raise ValueError(f"expected {params.payload_bits} message bits, got {msg.size}")
    n, limit = params.n, params.limit
    y = params.window.encode(msg)
    a = np.zeros((n, n), dtype=np.uint8)
    a.reshape(-1)[: y.size] = y
    # row n-1 ends with the flags *1 *2; row n holds the column flags z
    if a[n - 2, : n - 2].sum() > params.p * (n - 2):
        a[n - 2, : n - 2] ^= 1
        a[n - 2, n - 2] = 1
    for i in range(n - 1):
        if a[: n - 1, i].sum() > limit:
            a[: n - 1, i] = antipodal_map(a[: n - 1, i])
            a[n - 1, i] = 1
    # >= keeps room for z_n in the last row
    if a[n - 1, : n - 1].sum() >= limit:
        a[n - 1, : n - 1] = antipodal_map(a[n - 1, : n - 1])
        a[n - 2, n - 1] = 1
    if a[: n - 1, n - 1].sum() > limit:
        a[: n - 1, n - 1] = antipodal_map(a[: n - 1, n - 1])
        a[n - 1, n - 1] = 1
    if a[n - 2].sum() > limit:
        raise ArithmeticError("row n-1 exceeds the weight bound")
    return a


def decode_bounded_srt(a: BitArray, params: BoundedSrtParams) -> BitVector:
    a = np.array(a, dtype=np.uint8)
    n = params.n
    if a.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} array")
    if a[n - 1, n - 1]:
        a[: n - 1, n - 1] = antipodal_map(a[: n - 1, n - 1])
    if a[n - 2, n - 1]:
        a[n - 1, : n - 1] = antipodal_map(a[n - 1, : n - 1])
    for i in range(n - 1):
        if a[n - 1, i]:
            a[: n - 1, i] = antipodal_map(a[: n - 1, i])
    if a[n - 2, n - 2]:
        a[n - 2, : n - 2] ^= 1
    y = a.reshape(-1)[: n * n - n - 2]
    return params.window.decode(y)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class BalancedSrtParams:
    """n x n arrays with every row and column epsilon-balanced, one redundant bit.

    The window ell is the smallest divisor of n with 2 ell <= n whose
    forbidden set fits the record payload; with alpha set, ell must also
    reach ceil(alpha ln n^2).
    """

    n: int
    eps: Fraction
    alpha: float | None = None
    ell: int = field(init=False)
    space: ForbiddenSpace = field(init=False, repr=False)

    def __post_init__(self) -> None:
        eps = Fraction(self.eps)
        object.__setattr__(self, "eps", eps)
        n = self.n
        if not 0 < eps < Fraction(1, 2):
            raise InfeasibleParameters("0 < epsilon < 1/2 fails")
        if n % 2 or n < 4:
            raise InfeasibleParameters("n even and n >= 4 fails")
        if n * eps < 2:
            raise InfeasibleParameters("n epsilon >= 2 fails")
        if n * n < 8 / float(eps) ** 2 * math.log(n):
            raise InfeasibleParameters("n^2 >= (8/epsilon^2) ln n fails")
        floor = 1 if self.alpha is None else math.ceil(self.alpha * math.log(n * n))
        for d in _divisors(n):
            if d < max(floor, 2) or 2 * d > n:
                continue
            band = BalanceBand.of(d, self.eps_window)
            try:
                space = ForbiddenSpace(d, band, d - 3 - self.position_bits)
            except InfeasibleParameters:
                continue
            object.__setattr__(self, "ell", d)
            object.__setattr__(self, "space", space)
            return
        raise InfeasibleParameters(
            f"no window ell dividing n with ceil(alpha ln n^2) <= ell <= n/2 and |F| <= 2^k (n={n}, epsilon={eps})"
        )

    @property
    def eps_window(self) -> Fraction:
        return self.eps / 2

    @property
    def band(self) -> BalanceBand:
        return self.space.band

    @property
    def position_bits(self) -> int:
        return (self.n * self.n - 1).bit_length()

    @property
    def payload_bits(self) -> int:
        return self.n * self.n - 1


def extension_fill(c: BitVector, n: int, ell: int) -> BitArray:
    """Complete a compliant working sequence of at least n/2 bits to an n x n array."""
    c = as_bits(c)
    n0 = c.size
    if n0 < n // 2:
        raise ValueError(f"sequence of {n0} bits is shorter than n/2 = {n // 2}")
    if n0 >= n * n:
        return c[: n * n].reshape(n, n).copy()
    q = n0 // n
    if n0 == n // 2:
        first = np.concatenate([c, 1 - c])
    else:
        w = c[n0 - ell :]
        reps = -(-((q + 1) * n - n0) // ell)
        first = np.concatenate([c, np.tile(w, reps)])[: (q + 1) * n]
    top = first.reshape(q + 1, n)
    if q + 1 == n:
        return top.copy()
    if q + 1 <= n // 2:
        alt = np.tile(np.array([[0, 1], [1, 0]], dtype=np.uint8), (n, n // 2))
        rest = alt[: n - 2 * (q + 1)]
        return np.vstack([top, 1 - top, rest])
    out = np.zeros((n, n), dtype=np.uint8)
    out[: q + 1] = top
    for j in range(n - q - 1):
        out[q + 1 + j] = top[q - ell + j % ell]
    return out


def _record(marker: int, pos: int, y: np.ndarray, params: BalancedSrtParams) -> np.ndarray:
    head = np.array([1, marker], dtype=np.uint8)
    return np.concatenate([head, from_int(pos, params.position_bits), psi_rank(y, params.space)])


def encode_balanced_srt(msg: BitVector, params: BalancedSrtParams) -> BitArray:
    msg = as_bits(msg)
    if msg.size != params.payload_bits:
        raise ValueError(f"expected {params.payload_bits} message bits, got {msg.size}")
    n, ell = params.n, params.ell
    lo, hi = params.band.lo, params.band.hi
    buf = np.zeros(n * n, dtype=np.uint8)
    buf[1:] = msg
    spare = np.empty_like(buf)
    length, skip = n * n, 0
    while length > n // 2:
        # row windows wholly inside the shifted, already scanned prefix stay compliant
        i, kind = first_forbidden(buf, length, ell, lo, hi, n, ell - 1, skip)
        if kind == 0:
            break
        stride = 0 if kind == 1 else n
        y = buf[i : i + ell] if kind == 1 else buf[i : i + (ell - 1) * n + 1 : n]
        rec = _record(int(kind == 1), i, y, params)
        length = remove_prepend(buf, length, spare, rec, i, ell, stride)
        buf, spare, skip = spare, buf, i
    return extension_fill(buf[:length].copy(), n, ell)


def decode_balanced_srt(a: BitArray, params: BalancedSrtParams) -> BitVector:
    n, ell, w = params.n, params.ell, params.position_bits
    a = np.asarray(a, dtype=np.uint8)
    if a.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} array")
    size = n * n
    buf = np.zeros(size + ell, dtype=np.uint8)
    buf[:size] = a.reshape(-1)
    spare = np.empty_like(buf)
    for _ in range(size):
        if buf[0] == 0:
            return buf[1:size].copy()
        pos = to_int(buf[2 : 2 + w])
        y = psi_unrank(buf[2 + w : ell - 1], params.space)
        stride = 0 if buf[1] else n
        reach = (ell - 1) * (stride - 1) if stride else 0
        if pos + reach > size - (ell - 1):
            raise ValueError("corrupt record position")
        strip_insert(buf, size, spare, ell - 1, pos, y, stride)
        buf, spare = spare, buf
    raise ValueError("corrupt codeword: replacement chain does not terminate")
