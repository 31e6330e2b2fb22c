"""One-dimensional balancing: Knuth and epsilon-balancing indices, the
epsilon-balanced row codec, and prefix-swap index searches."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bitcore import BitVector, as_bits, from_int, to_int


@dataclass(frozen=True)
class BalanceBand:
    """Integer weights allowed for a length-m word under an epsilon band."""

    length: int
    lo: int
    hi: int

    @classmethod
    def of(cls, length: int, eps: Fraction) -> BalanceBand:
        eps = Fraction(eps)
        if not 0 <= eps <= Fraction(1, 2):
            raise ValueError("epsilon must lie in [0, 1/2]")
        half = Fraction(1, 2)
        return cls(length, math.ceil((half - eps) * length), math.floor((half + eps) * length))

    @classmethod
    def bounded(cls, length: int, p: Fraction) -> BalanceBand:
        return cls(length, 0, math.floor(Fraction(p) * length))

    def __contains__(self, w: int) -> bool:
        return self.lo <= w <= self.hi


def bounded_limit(length: int, p: Fraction) -> int:
    """Largest weight a p-bounded word of this length may carry."""
    return math.floor(Fraction(p) * length)


@dataclass(frozen=True)
class EpsBalancingSet:
    n: int
    eps: Fraction
    indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


def eps_balancing_set(n: int, eps: Fraction) -> EpsBalancingSet:
    """{0, n} together with every multiple of 2*floor(eps n) up to n."""
    eps = Fraction(eps)
    step = math.floor(eps * n)
    if step < 1:
        raise ValueError(f"eps*n = {eps * n} < 1")
    indices = sorted({0, n, *range(2 * step, n + 1, 2 * step)})
    return EpsBalancingSet(n, eps, tuple(indices))


def _flip_weights(x: np.ndarray) -> np.ndarray:
    """Entry t is wt(Flip_t(x)) for t = 0..|x|."""
    prefix = np.concatenate([[0], np.cumsum(x, dtype=np.int64)])
    t = np.arange(x.size + 1)
    return prefix[-1] + t - 2 * prefix


def knuth_balancing_index(x: BitVector) -> int:
    """Smallest t such that flipping the first t bits balances x."""
    x = as_bits(x)
    if x.size % 2:
        raise ValueError("length must be even")
    return int(np.flatnonzero(_flip_weights(x) == x.size // 2)[0])


def eps_balancing_index(x: BitVector, eps: Fraction) -> int:
    """Smallest t in S_{eps,|x|} with Flip_t(x) epsilon-balanced."""
    x = as_bits(x)
    band = BalanceBand.of(x.size, eps)
    weights = _flip_weights(x)
    for t in eps_balancing_set(x.size, eps):
        if weights[t] in band:
            return t
    raise ArithmeticError("no epsilon-balancing index in the set")


def row_redundancy(eps: Fraction) -> int:
    """c = 2 ceil(log2(floor(1/(2 eps)) + 1))."""
    size = math.floor(1 / (2 * Fraction(eps))) + 1
    return 2 * (size - 1).bit_length()


@dataclass(frozen=True)
class EpsRowCodec:
    """Row codec: Flip_t(msg) followed by the interleaved index of t and its complement."""

    n: int
    eps: Fraction

    def __post_init__(self) -> None:
        eps = Fraction(self.eps)
        object.__setattr__(self, "eps", eps)
        if self.n % 2:
            raise ValueError("row length must be even")
        if not 0 < eps <= Fraction(1, 2):
            raise ValueError("epsilon must lie in (0, 1/2]")
        if self.n <= self.c or eps * (self.n - self.c) < 1:
            raise ValueError(f"row length {self.n} too short for epsilon {eps}")
        if len(self.flip_set) > 1 << (self.c // 2):
            raise ValueError("flip set does not fit the index field")

    @property
    def c(self) -> int:
        return row_redundancy(self.eps)

    @property
    def k(self) -> int:
        return self.n - self.c

    @property
    def flip_set(self) -> tuple[int, ...]:
        return eps_balancing_set(self.n - self.c, self.eps).indices

    def encode(self, msg: BitVector) -> BitVector:
        msg = as_bits(msg)
        if msg.size != self.k:
            raise ValueError(f"expected {self.k} message bits, got {msg.size}")
        weights = _flip_weights(msg)
        candidates = np.array(self.flip_set)
        gaps = np.abs(2 * weights[candidates] - self.k)
        j = int(np.argmin(gaps))
        t = int(candidates[j])
        u = from_int(j, self.c // 2)
        suffix = np.empty(self.c, dtype=np.uint8)
        suffix[0::2] = u
        suffix[1::2] = 1 - u
        body = msg.copy()
        body[:t] ^= 1
        return np.concatenate([body, suffix])

    def decode(self, row: BitVector) -> BitVector:
        row = as_bits(row)
        if row.size != self.n:
            raise ValueError(f"expected {self.n} row bits, got {row.size}")
        j = to_int(row[self.k::2])
        if j >= len(self.flip_set):
            raise ValueError("corrupt flip index")
        body = row[: self.k].copy()
        body[: self.flip_set[j]] ^= 1
        return body


def eps_encode_row(msg: BitVector, n: int, eps: Fraction) -> BitVector:
    return EpsRowCodec(n, Fraction(eps)).encode(msg)


def eps_decode_row(row: BitVector, eps: Fraction) -> BitVector:
    return EpsRowCodec(len(row), Fraction(eps)).decode(row)


def _swap_weights(y: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Weights of Swap_t(y, z) and Swap_t(z, y) for t = 0..m."""
    py = np.concatenate([[0], np.cumsum(y, dtype=np.int64)])
    pz = np.concatenate([[0], np.cumsum(z, dtype=np.int64)])
    return py[-1] - py + pz, pz[-1] - pz + py


def swap_index_bounded(y: BitVector, z: BitVector, p: Fraction) -> int:
    """Smallest t with both prefix-swap outputs p-bounded."""
    y, z = as_bits(y), as_bits(z)
    if y.size != z.size:
        raise ValueError("halves differ in length")
    limit = bounded_limit(y.size, p)
    if int(y.sum() + z.sum()) > bounded_limit(2 * y.size, p):
        raise ValueError("concatenation is not p-bounded")
    wy, wz = _swap_weights(y, z)
    hits = np.flatnonzero((wy <= limit) & (wz <= limit))
    if hits.size == 0:
        raise ArithmeticError("no p-bounded swapping index")
    return int(hits[0])


def valid_swap_indices_eps(y: BitVector, z: BitVector, eps: Fraction) -> list[int]:
    """Every t in S_{eps,m} for which both prefix-swap outputs are epsilon-balanced."""
    y, z = as_bits(y), as_bits(z)
    if y.size != z.size:
        raise ValueError("halves differ in length")
    band = BalanceBand.of(y.size, eps)
    if int(y.sum() + z.sum()) not in BalanceBand.of(2 * y.size, eps):
        raise ValueError("concatenation is not epsilon-balanced")
    wy, wz = _swap_weights(y, z)
    return [t for t in eps_balancing_set(y.size, eps) if wy[t] in band and wz[t] in band]


def swap_index_eps(y: BitVector, z: BitVector, eps: Fraction) -> int:
    """Smallest t in S_{eps,m} with both prefix-swap outputs epsilon-balanced."""
    hits = valid_swap_indices_eps(y, z, eps)
    if not hits:
        raise ArithmeticError("no epsilon-balanced swapping index in the set")
    return hits[0]
