from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wc2d.balance1d import (
    BalanceBand,
    EpsRowCodec,
    bounded_limit,
    eps_balancing_index,
    eps_balancing_set,
    eps_decode_row,
    eps_encode_row,
    knuth_balancing_index,
    row_redundancy,
    swap_index_bounded,
    swap_index_eps,
    valid_swap_indices_eps,
)
from wc2d.bitcore import as_bits as bits
from wc2d.bitcore import flip_prefix, swap_prefix
from wc2d.selftest import all_words


@pytest.mark.parametrize("word, t", [("0000", 2), ("0011", 0), ("0111", 3)])
def test_knuth_index_examples(word, t):
    assert knuth_balancing_index(bits(word)) == t


def test_knuth_index_exhaustive():
    for length in range(2, 13, 2):
        for x in all_words(length):
            t = knuth_balancing_index(x)
            assert 2 * int(flip_prefix(x, t).sum()) == length
            assert all(2 * int(flip_prefix(x, s).sum()) != length for s in range(t))


def test_knuth_index_rejects_odd_length():
    with pytest.raises(ValueError):
        knuth_balancing_index(bits("010"))


def test_band_bounds():
    assert BalanceBand.of(64, Fraction(1, 8)) == BalanceBand(64, 24, 40)
    assert BalanceBand.of(10, Fraction(1, 10)) == BalanceBand(10, 4, 6)
    assert BalanceBand.bounded(10, Fraction(1, 4)) == BalanceBand(10, 0, 2)
    assert bounded_limit(7, Fraction(1, 2)) == 3
    with pytest.raises(ValueError):
        BalanceBand.of(8, Fraction(3, 4))


def test_balancing_set_examples():
    s = eps_balancing_set(10, Fraction(1, 10))
    assert s.indices == (0, 2, 4, 6, 8, 10)
    assert len(s) <= 1 // (2 * Fraction(1, 10)) + 1
    assert eps_balancing_set(12, Fraction(1, 2)).indices == (0, 12)
    with pytest.raises(ValueError):
        eps_balancing_set(5, Fraction(1, 10))


@given(st.integers(4, 400), st.sampled_from([Fraction(1, 10), Fraction(1, 8), Fraction(1, 6), Fraction(1, 4)]))
def test_balancing_set_invariants(n, eps):
    if eps * n < 1:
        return
    s = eps_balancing_set(n, eps).indices
    step = 2 * int(eps * n)
    assert s[0] == 0 and s[-1] == n and list(s) == sorted(set(s))
    assert set(s) == {0, n, *range(step, n + 1, step)}
    interior = [t for t in s if t != n]
    assert all(b - a == step for a, b in zip(interior, interior[1:]))


def test_balancing_set_can_exceed_nominal_size():
    # the nominal bound floor(1/(2 eps)) + 1 assumes 2 floor(eps n) close to 2 eps n
    assert len(eps_balancing_set(12, Fraction(1, 10))) == 7 > 1 // (2 * Fraction(1, 10)) + 1


def test_eps_index_examples():
    eps = Fraction(1, 10)
    assert eps_balancing_index(bits("0000000000"), eps) == 4
    assert eps_balancing_index(bits("1111111111"), eps) == 4
    assert eps_balancing_index(bits("0101010101"), eps) == 0
    zeros = np.zeros(10, dtype=np.uint8)
    valid = [t for t in (0, 2, 4, 6, 8, 10) if int(flip_prefix(zeros, t).sum()) in BalanceBand.of(10, eps)]
    assert valid == [4, 6]


@pytest.mark.parametrize("eps", [Fraction(1, 6), Fraction(1, 4)])
def test_eps_index_exhaustive(eps):
    for length in range(1, 13):
        if eps * length < 1:
            continue
        band = BalanceBand.of(length, eps)
        for x in all_words(length):
            t = eps_balancing_index(x, eps)
            assert t in eps_balancing_set(length, eps).indices
            assert int(flip_prefix(x, t).sum()) in band


def test_row_redundancy():
    assert row_redundancy(Fraction(1, 10)) == 6
    assert row_redundancy(Fraction(1, 8)) == 6
    assert row_redundancy(Fraction(1, 4)) == 4


def test_row_codec_round_trip(rng):
    codec = EpsRowCodec(64, Fraction(1, 8))
    for _ in range(500):
        msg = rng.integers(0, 2, codec.k).astype(np.uint8)
        row = codec.encode(msg)
        assert row.size == 64 and 24 <= int(row.sum()) <= 40
        assert (codec.decode(row) == msg).all()


@pytest.mark.parametrize("n, eps", [(32, Fraction(1, 4)), (64, Fraction(1, 10)), (40, Fraction(1, 6))])
def test_row_codec_round_trip_many(rng, n, eps):
    codec = EpsRowCodec(n, eps)
    band = BalanceBand.of(n, eps)
    msgs = rng.integers(0, 2, (10_000, codec.k)).astype(np.uint8)
    for msg in msgs:
        row = eps_encode_row(msg, n, eps)
        assert int(row.sum()) in band
        assert (eps_decode_row(row, eps) == msg).all()


def test_row_codec_edge_messages():
    codec = EpsRowCodec(64, Fraction(1, 8))
    for msg in (np.zeros(codec.k, np.uint8), np.ones(codec.k, np.uint8)):
        assert (codec.decode(codec.encode(msg)) == msg).all()


def test_row_codec_rejects_bad_parameters():
    with pytest.raises(ValueError):
        EpsRowCodec(63, Fraction(1, 8))
    with pytest.raises(ValueError):
        EpsRowCodec(8, Fraction(1, 10))
    with pytest.raises(ValueError):
        EpsRowCodec(64, Fraction(1, 8)).encode(np.zeros(5, np.uint8))


def test_swap_bounded_examples():
    assert swap_index_bounded(bits("11"), bits("00"), Fraction(1, 2)) == 1
    assert swap_index_bounded(bits("1000"), bits("0001"), Fraction(1, 2)) == 0
    with pytest.raises(ValueError):
        swap_index_bounded(bits("11"), bits("10"), Fraction(1, 2))


def _swap_ok(y, z, t, band):
    a, b = swap_prefix(y, z, t)
    return int(a.sum()) in band and int(b.sum()) in band


@pytest.mark.parametrize("p", [Fraction(1, 4), Fraction(1, 2)])
def test_swap_bounded_exhaustive_integral(p):
    for m in range(1, 7):
        if (p * m).denominator != 1:
            continue
        band = BalanceBand.bounded(m, p)
        for y, z in itertools.product(all_words(m), repeat=2):
            if int(y.sum() + z.sum()) > bounded_limit(2 * m, p):
                continue
            t = swap_index_bounded(y, z, p)
            assert _swap_ok(y, z, t, band)
            assert not any(_swap_ok(y, z, s, band) for s in range(t))


def test_swap_bounded_fails_for_fractional_limits():
    # with p m fractional the pair may carry more ones than two halves can hold
    with pytest.raises(ArithmeticError):
        swap_index_bounded(bits("10"), bits("00"), Fraction(1, 4))
    with pytest.raises(ArithmeticError):
        swap_index_bounded(bits("1"), bits("0"), Fraction(1, 2))


def test_swap_eps_examples():
    eps = Fraction(1, 10)
    y, z = bits("1110000000"), bits("1101101111")
    assert valid_swap_indices_eps(y, z, eps) == [8]
    assert swap_index_eps(y, z, eps) == 8
    assert swap_index_eps(bits("1010101010"), bits("0101010101"), eps) == 0


@pytest.mark.parametrize("eps", [Fraction(1, 6), Fraction(1, 4)])
def test_swap_eps_returned_index_is_valid(eps):
    for m in range(1, 7):
        if eps * m < 1:
            continue
        band, whole = BalanceBand.of(m, eps), BalanceBand.of(2 * m, eps)
        for y, z in itertools.product(all_words(m), repeat=2):
            if int(y.sum() + z.sum()) not in whole:
                continue
            try:
                t = swap_index_eps(y, z, eps)
            except ArithmeticError:
                assert valid_swap_indices_eps(y, z, eps) == []
                continue
            assert t in eps_balancing_set(m, eps).indices
            assert _swap_ok(y, z, t, band)


def test_swap_eps_set_can_miss_every_index():
    # only t = 3 works here and 3 is not in S = {0, 2, 4}
    y, z, eps = bits("0000"), bits("0011"), Fraction(1, 4)
    assert valid_swap_indices_eps(y, z, eps) == []
    assert _swap_ok(y, z, 3, BalanceBand.of(4, eps))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_swap_bounded_randomized(data):
    m = data.draw(st.integers(1, 64))
    p = data.draw(st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]))
    y = np.array(data.draw(st.lists(st.integers(0, 1), min_size=m, max_size=m)), dtype=np.uint8)
    z = np.array(data.draw(st.lists(st.integers(0, 1), min_size=m, max_size=m)), dtype=np.uint8)
    if int(y.sum() + z.sum()) > 2 * bounded_limit(m, p):
        return
    t = swap_index_bounded(y, z, p)
    assert _swap_ok(y, z, t, BalanceBand.bounded(m, p))
