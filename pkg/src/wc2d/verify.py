"""Exact membership checks for the four array families and small-n census."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .balance1d import BalanceBand
from .bitcore import BitArray

FAMILIES = ("rc-bounded", "rc-balanced", "s-bounded", "s-balanced")
CENSUS_MAX_N = 5


@dataclass(frozen=True)
class ConstraintSpec:
    """Which family an n x n array must belong to, with its parameter."""

    family: str
    n: int
    m: int | None = None
    p: Fraction | None = None
    eps: Fraction | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.family.startswith("s-"):
            if self.m is None or not 1 <= self.m <= self.n:
                raise ValueError("subarray families need 1 <= m <= n")
        if self.family.endswith("bounded"):
            if self.p is None or not 0 <= Fraction(self.p) <= 1:
                raise ValueError("bounded families need p in [0, 1]")
            object.__setattr__(self, "p", Fraction(self.p))
        else:
            if self.eps is None or not 0 <= Fraction(self.eps) <= Fraction(1, 2):
                raise ValueError("balanced families need epsilon in [0, 1/2]")
            object.__setattr__(self, "eps", Fraction(self.eps))

    @property
    def line(self) -> int:
        """Length of the constrained unit: n for rows/columns, m*m for subarrays."""
        return self.n if self.family.startswith("rc-") else self.m * self.m

    @property
    def band(self) -> BalanceBand:
        if self.family.endswith("bounded"):
            return BalanceBand.bounded(self.line, self.p)
        return BalanceBand.of(self.line, self.eps)


@dataclass
class ConstraintReport:
    passed: bool
    line_weights: dict[str, np.ndarray]
    first_violation: dict | None
    margins: dict[str, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "pass": self.passed,
            "line_weights": {k: v.tolist() for k, v in self.line_weights.items()},
            "first_violation": self.first_violation,
            "margins": self.margins,
        }


def subarray_weights(a: BitArray, m: int) -> np.ndarray:
    """(n-m+1) x (n-m+1) grid of m x m subarray weights, indexed by top-left corner."""
    a = np.asarray(a, dtype=np.int64)
    s = np.zeros((a.shape[0] + 1, a.shape[1] + 1), dtype=np.int64)
    s[1:, 1:] = a.cumsum(0).cumsum(1)
    return s[m:, m:] - s[:-m, m:] - s[m:, :-m] + s[:-m, :-m]


def check(a: BitArray, spec: ConstraintSpec) -> ConstraintReport:
    a = np.asarray(a)
    if a.shape != (spec.n, spec.n):
        raise ValueError(f"expected a {spec.n}x{spec.n} array, got shape {a.shape}")
    band = spec.band
    if spec.family.startswith("rc-"):
        weights = {"row": a.sum(axis=1, dtype=np.int64), "column": a.sum(axis=0, dtype=np.int64)}
    else:
        weights = {"subarray": subarray_weights(a, spec.m)}
    first = None
    for kind, w in weights.items():
        bad = np.argwhere((w < band.lo) | (w > band.hi))
        if bad.size and first is None:
            where = tuple(int(v) for v in bad[0])
            first = {
                "kind": kind,
                "index": where[0] if len(where) == 1 else list(where),
                "weight": int(w[where]),
                "allowed": [band.lo, band.hi],
            }
    everything = np.concatenate([w.ravel() for w in weights.values()])
    margins = {
        "below_max": int(band.hi - everything.max()),
        "above_min": int(everything.min() - band.lo),
    }
    return ConstraintReport(first is None, weights, first, margins)


def _cell_masks(n: int) -> np.ndarray:
    # bit of cell (r, c) in the integer reading of the row-major array, cell 0 most significant
    shifts = n * n - 1 - np.arange(n * n, dtype=np.uint64)
    return (np.uint64(1) << shifts).reshape(n, n)


def _unit_masks(spec: ConstraintSpec) -> list[np.uint64]:
    cells, n = _cell_masks(spec.n), spec.n
    groups: list[np.ndarray] = []
    if spec.family.startswith("rc-"):
        groups += [cells[i] for i in range(n)] + [cells[:, j] for j in range(n)]
    else:
        m = spec.m
        groups += [cells[r : r + m, c : c + m] for r in range(n - m + 1) for c in range(n - m + 1)]
    return [np.bitwise_or.reduce(g.ravel()) for g in groups]


def census(spec: ConstraintSpec, chunk: int = 1 << 20) -> int:
    """Exact number of n x n arrays in the family, by exhaustive enumeration."""
    if spec.n > CENSUS_MAX_N:
        raise ValueError(f"census enumerates 2^(n^2) arrays; n must be at most {CENSUS_MAX_N}")
    band, masks = spec.band, _unit_masks(spec)
    total, size = 0, 1 << (spec.n * spec.n)
    for start in range(0, size, chunk):
        x = np.arange(start, min(start + chunk, size), dtype=np.uint64)
        ok = np.ones(x.size, dtype=bool)
        for mask in masks:
            w = np.bitwise_count(x & mask)
            ok &= (w >= band.lo) & (w <= band.hi)
        total += int(ok.sum())
    return total
