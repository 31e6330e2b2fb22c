"""Lexicographic enumerative coding of words with restricted weight.

A word of length L is admissible when its weight lies in a union of closed
intervals. Ranks count admissible words that precede a word in plain
lexicographic order (0 < 1), using cumulative binomial rows with exact
integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import accumulate

import numpy as np

from .bitcore import BitVector, as_bits, from_int, to_int


@lru_cache(maxsize=None)
def cumulative_binomials(r: int) -> tuple[int, ...]:
    """Row r of prefix sums: entry v is sum_{i<=v} C(r, i)."""
    row, c = [], 1
    for i in range(r + 1):
        row.append(c)
        c = c * (r - i) // (i + 1)
    return tuple(accumulate(row))


def _cum(r: int, v: int) -> int:
    if v < 0:
        return 0
    row = cumulative_binomials(r)
    return row[min(v, r)]


@dataclass(frozen=True)
class WeightRanker:
    """Rank/unrank among length-L words with weight in the given intervals."""

    length: int
    intervals: tuple[tuple[int, int], ...]
    cardinality: int = field(init=False)

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be non-negative")
        clean = tuple((max(a, 0), min(b, self.length)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", tuple((a, b) for a, b in clean if a <= b))
        object.__setattr__(self, "cardinality", self.completions(self.length, 0))

    def admits(self, w: int) -> bool:
        return any(a <= w <= b for a, b in self.intervals)

    def completions(self, remaining: int, ones: int) -> int:
        """Admissible completions of a prefix holding `ones` ones."""
        total = 0
        for a, b in self.intervals:
            total += _cum(remaining, b - ones) - _cum(remaining, a - ones - 1)
        return total

    def rank(self, x: BitVector) -> int:
        bits = as_bits(x)
        if bits.size != self.length:
            raise ValueError(f"expected {self.length} bits, got {bits.size}")
        if not self.admits(int(bits.sum())):
            raise ValueError("word weight is outside the admissible set")
        table, top = self._table, self.length - 1
        r = 0
        for ones, i in enumerate(np.flatnonzero(bits).tolist()):
            r += table[top - i][ones]
        return r

    def unrank(self, j: int) -> BitVector:
        if not 0 <= j < self.cardinality:
            raise ValueError(f"index {j} outside [0, {self.cardinality})")
        table, top = self._table, self.length - 1
        out = np.zeros(self.length, dtype=np.uint8)
        ones = 0
        for i in range(self.length):
            below = table[top - i][ones]
            if j >= below:
                j -= below
                out[i] = 1
                ones += 1
        return out

    @cached_property
    def _table(self) -> list[list[int]]:
        """_table[r][ones] == completions(r, ones) for prefixes of length L - 1 - r."""
        return [
            [self.completions(r, ones) for ones in range(self.length - r)]
            for r in range(self.length)
        ]


@dataclass(frozen=True)
class BoundedWeightSpace:
    """S(n, p): length-n words of weight at most floor(p n)."""

    n: int
    p: Fraction
    wmax: int = field(init=False)
    ranker: WeightRanker = field(init=False, repr=False)

    def __post_init__(self) -> None:
        p = Fraction(self.p)
        if not 0 <= p <= 1:
            raise ValueError("p must lie in [0, 1]")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "wmax", math.floor(p * self.n))
        object.__setattr__(self, "ranker", WeightRanker(self.n, ((0, self.wmax),)))

    @property
    def cardinality(self) -> int:
        return self.ranker.cardinality

    @property
    def payload_bits(self) -> int:
        return self.cardinality.bit_length() - 1


def cardinality(n: int, p: Fraction) -> int:
    return BoundedWeightSpace(n, Fraction(p)).cardinality


def rank(x: BitVector, space: BoundedWeightSpace) -> int:
    return space.ranker.rank(x)


def unrank(j: int, space: BoundedWeightSpace) -> BitVector:
    return space.ranker.unrank(j)


def payload_encode(msg: BitVector, space: BoundedWeightSpace) -> BitVector:
    msg = as_bits(msg)
    if msg.size != space.payload_bits:
        raise ValueError(f"expected {space.payload_bits} payload bits, got {msg.size}")
    return unrank(to_int(msg), space)


def payload_decode(x: BitVector, space: BoundedWeightSpace) -> BitVector:
    j = rank(x, space)
    if j >= 1 << space.payload_bits:
        raise ValueError("word does not encode a payload")
    return from_int(j, space.payload_bits)


def lambda_redundancy(n: int, p: Fraction) -> float:
    """lambda(n, p) = n - log2 |S(n, p)|."""
    return n - _log2(cardinality(n, p))


def mu_redundancy(n: int, p: Fraction) -> float:
    """mu(n, p) = n H(p) - log2 C(n, floor(p n)), the constant-weight gap."""
    p = Fraction(p)
    h = 0.0 if p in (0, 1) else -(float(p) * math.log2(p) + float(1 - p) * math.log2(1 - p))
    return n * h - _log2(math.comb(n, math.floor(p * n)))


def _log2(value: int) -> float:
    shift = max(value.bit_length() - 64, 0)
    return math.log2(value >> shift) + shift
