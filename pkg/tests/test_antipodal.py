from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wc2d.antipodal import antipodal_map, antipodal_reference, bracket_matching, unmatched_mask
from wc2d.bitcore import as_bits as bits
from wc2d.bitcore import to_str
from wc2d.selftest import all_words, antipodal_violations


@pytest.mark.parametrize("x, y", [("111", "000"), ("110", "010"), ("010", "110"), ("", "")])
def test_examples(x, y):
    assert to_str(antipodal_map(bits(x))) == y


def test_properties_exhaustive():
    for length in range(1, 15):
        assert antipodal_violations(all_words(length)) == 0


def test_batch_matches_reference():
    for length in range(1, 11):
        words = all_words(length)
        image = antipodal_map(words)
        for x, y in zip(words, image):
            assert (antipodal_reference(x) == y).all()


@pytest.mark.parametrize("length, total", [(63, 100_000), (255, 100_000), (4096, 10_000)])
def test_properties_random(length, total):
    rng = np.random.default_rng(length)
    for start in range(0, total, 5000):
        words = (rng.random((5000, length)) < rng.random((5000, 1))).astype(np.uint8)
        assert antipodal_violations(words) == 0


def test_bracket_matching_partitions_positions():
    x = bits("0110001101")
    match = bracket_matching(x)
    seen = [p for pair in match.matched_pairs for p in pair]
    seen += list(match.unmatched_ones) + list(match.unmatched_zeros)
    assert sorted(seen) == list(range(x.size))
    assert all(x[a] == 1 and x[b] == 0 and a < b for a, b in match.matched_pairs)
    assert max(match.unmatched_zeros) < min(match.unmatched_ones)


@given(st.lists(st.integers(0, 1), max_size=40))
def test_unmatched_mask_agrees_with_stack(values):
    x = np.array(values, dtype=np.uint8)
    match = bracket_matching(x)
    expected = np.zeros(x.size, dtype=bool)
    expected[list(match.unmatched_ones) + list(match.unmatched_zeros)] = True
    assert (unmatched_mask(x[None, :])[0] == expected).all()
