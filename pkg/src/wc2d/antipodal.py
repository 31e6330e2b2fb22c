"""Antipodal matching via bracket matching.

Read 1 as an opening bracket and 0 as a closing one, and match every 0 with
the nearest unmatched 1 before it. The unmatched positions then read as
0^u0 1^u1. The map keeps every matched pair and rewrites the unmatched
positions as 0^u1 1^u0. This walks the symmetric chain through x to its
mirror point, so:

* wt(phi(x)) = L - wt(x);
* if wt(x) > L/2, the ones of phi(x) are a subset of the ones of x;
* phi(phi(x)) = x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitcore import BitVector, as_bits


@dataclass(frozen=True)
class BracketMatching:
    length: int
    matched_pairs: tuple[tuple[int, int], ...]
    unmatched_ones: tuple[int, ...]
    unmatched_zeros: tuple[int, ...]


def bracket_matching(x: BitVector) -> BracketMatching:
    """Stack-based matching; O(L)."""
    x = as_bits(x)
    stack: list[int] = []
    pairs: list[tuple[int, int]] = []
    zeros: list[int] = []
    for i, bit in enumerate(x.tolist()):
        if bit:
            stack.append(i)
        elif stack:
            pairs.append((stack.pop(), i))
        else:
            zeros.append(i)
    pairs.sort()
    return BracketMatching(int(x.size), tuple(pairs), tuple(stack), tuple(zeros))


def unmatched_mask(x: np.ndarray) -> np.ndarray:
    """Boolean mask of unmatched positions for each row of a 2D batch."""
    x = np.asarray(x, dtype=np.uint8)
    rows, length = x.shape
    height = np.zeros((rows, length + 1), dtype=np.int32)
    np.cumsum(2 * x.astype(np.int32) - 1, axis=1, out=height[:, 1:])
    # a 0 is unmatched iff it sets a new running minimum
    prefix_min = np.minimum.accumulate(height[:, :-1], axis=1)
    zero_free = height[:, 1:] < prefix_min
    # a 1 is unmatched iff the height never falls back below its start
    suffix_min = np.minimum.accumulate(height[:, ::-1], axis=1)[:, ::-1]
    one_free = suffix_min[:, 1:] > height[:, :-1]
    return np.where(x == 1, one_free, zero_free)


def antipodal_map(x: np.ndarray) -> np.ndarray:
    """Apply phi to a 1D word or independently to every row of a 2D batch."""
    x = np.asarray(x, dtype=np.uint8)
    single = x.ndim == 1
    batch = x[None, :] if single else x
    free = unmatched_mask(batch)
    free_ones = np.count_nonzero(free & (batch == 1), axis=1)
    order = np.cumsum(free, axis=1) - 1
    out = batch.copy()
    rewritten = (order >= free_ones[:, None]).astype(np.uint8)
    out[free] = rewritten[free]
    return out[0] if single else out


def antipodal_reference(x: BitVector) -> BitVector:
    """Same map built from an explicit stack matching."""
    match = bracket_matching(x)
    out = as_bits(x).copy()
    free = sorted(match.unmatched_zeros + match.unmatched_ones)
    u1 = len(match.unmatched_ones)
    for rank, pos in enumerate(free):
        out[pos] = 1 if rank >= u1 else 0
    return out
