from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from wc2d.bitcore import as_array
from wc2d.rc_dc import (
    BalancedDcParams,
    BoundedDcParams,
    SwapTrace,
    decode_balanced_dc,
    decode_bounded_dc,
    deserialize_trace,
    encode_balanced_dc,
    encode_bounded_dc,
    pack_trace_balanced,
    pack_trace_bounded,
    scramble_mask,
    serialize_trace,
    swap_phase_balanced,
    swap_phase_bounded,
    _apply_swap,
    undo_swaps,
    unpack_trace_balanced,
    unpack_trace_bounded,
)
from wc2d.srt import InfeasibleParameters
from wc2d.verify import ConstraintSpec, check

QUARTER = Fraction(1, 4)


def _rows(text: str) -> np.ndarray:
    return as_array(text.split(";"))


def test_first_split_example():
    left, right = _rows("1001;0110;0100;0100"), _rows("0000;0000;0010;0001")
    _, trace = swap_phase_bounded(np.hstack([left, right]), QUARTER)
    assert trace.entries[0] == (0, 0, 6)
    single = np.hstack([left, right])
    _apply_swap(single, 0, 8, 6)
    assert (single[:, :4] == _rows("0001;0010;0100;0100")).all()
    assert (single[:, 4:] == _rows("1000;0100;0010;0001")).all()


def test_second_split_example():
    block = np.hstack([_rows("10;01;01;00"), _rows("00;00;00;01")])
    _, trace = swap_phase_bounded(block, QUARTER)
    assert trace.entries[0] == (0, 0, 1)
    out = block.copy()
    _apply_swap(out, 0, 4, 1)
    assert (out[:, :2] == _rows("00;01;01;00")).all()
    assert (out[:, 2:] == _rows("10;00;00;01")).all()


@pytest.mark.parametrize(
    "block, t, columns",
    [
        ("00;00;01;01", 3, ("0010", "0001")),
        ("01;10;00;00", 0, ("0100", "1000")),
        ("00;01;01;00", 2, ("0100", "0010")),
        ("10;00;00;01", 0, ("1000", "0001")),
    ],
)
def test_last_split_examples(block, t, columns):
    out, trace = swap_phase_bounded(_rows(block), QUARTER)
    assert trace.indices == [t]
    assert ["".join(map(str, c)) for c in out.T] == list(columns)


def test_swap_phase_columns_bounded_and_rows_kept(rng):
    for _ in range(50):
        a = (rng.random((12, 16)) < 0.2).astype(np.uint8)
        a[:, a.sum(0) > 3] = 0
        out, trace = swap_phase_bounded(a, QUARTER)
        assert (out.sum(1) == a.sum(1)).all()
        assert out.sum(0).max() <= 3
        assert (undo_swaps(out, trace) == a).all()


def test_swap_phase_balanced_round_trip(rng):
    eps = Fraction(1, 4)
    for _ in range(20):
        a = np.tile(np.array([0, 1], np.uint8), (16, 8))
        a = np.array([rng.permutation(r) for r in a])
        out, trace = swap_phase_balanced(a, eps)
        assert (out.sum(1) == a.sum(1)).all()
        assert ((out.sum(0) >= 4) & (out.sum(0) <= 12)).all()
        assert (undo_swaps(out, trace) == a).all()


def test_swap_phase_rejects_odd_width():
    with pytest.raises(ValueError):
        swap_phase_bounded(np.zeros((4, 6), np.uint8), QUARTER)


def test_trace_serialization_round_trip():
    params = BoundedDcParams(64, QUARTER)
    widths = params.index_widths
    rng = np.random.default_rng(3)
    trace = SwapTrace(tuple((0, i, int(rng.integers(0, 1 << w))) for i, w in enumerate(widths)))
    bits = serialize_trace(trace, widths)
    assert bits.size == params.trace_bits
    back = deserialize_trace(bits, widths, 64)
    assert back.indices == trace.indices


def test_bounded_trace_block_layout(rng):
    params = BoundedDcParams(64, QUARTER)
    bits = rng.integers(0, 2, params.trace_bits).astype(np.uint8)
    block = pack_trace_bounded(bits, params)
    assert block.shape == (params.c, 64)
    assert (unpack_trace_bounded(block, params) == bits).all()
    assert block.sum(1).max() <= 64 // params.period
    # one filled slot per period-wide cell keeps every row and column within p
    assert block.sum(1).max() <= 64 * QUARTER


def test_balanced_trace_block_layout(rng):
    params = BalancedDcParams(64, Fraction(1, 8))
    bits = rng.integers(0, 2, params.trace_bits).astype(np.uint8)
    block = pack_trace_balanced(bits, params)
    assert block.shape == (2 * params.c, 64)
    assert (unpack_trace_balanced(block, params)[: bits.size] == bits).all()
    assert (block.sum(1) == 32).all()
    assert (block.sum(0) == params.c).all()


def test_parameters():
    bounded = BoundedDcParams(64, QUARTER)
    assert bounded.period == 4
    assert bounded.payload_bits == (64 - bounded.c) * bounded.space.payload_bits
    balanced = BalancedDcParams(64, Fraction(1, 8))
    assert balanced.c == 6
    assert 64 * 64 - balanced.payload_bits == 3 * 6 * 64 - 2 * 6 * 6 == 1080
    for bad in ((63, QUARTER), (64, Fraction(1, 2)), (8, QUARTER)):
        with pytest.raises(InfeasibleParameters):
            BoundedDcParams(*bad)
    with pytest.raises(InfeasibleParameters):
        BalancedDcParams(16, Fraction(1, 8))


def _messages(size: int, rng: np.random.Generator) -> list[np.ndarray]:
    msgs = [rng.integers(0, 2, size).astype(np.uint8) for _ in range(6)]
    return msgs + [np.zeros(size, np.uint8), np.ones(size, np.uint8)]


def test_bounded_dc_round_trip(rng):
    params = BoundedDcParams(64, QUARTER)
    spec = ConstraintSpec("rc-bounded", 64, p=QUARTER)
    for msg in _messages(params.payload_bits, rng):
        a = encode_bounded_dc(msg, params)
        assert check(a, spec).passed
        assert (decode_bounded_dc(a, params) == msg).all()


def test_balanced_dc_round_trip(rng):
    eps = Fraction(1, 8)
    params = BalancedDcParams(64, eps)
    spec = ConstraintSpec("rc-balanced", 64, eps=eps)
    for msg in _messages(params.payload_bits, rng):
        a = encode_balanced_dc(msg, params)
        assert check(a, spec).passed
        assert (decode_balanced_dc(a, params) == msg).all()


def test_scramble_mask_is_deterministic():
    params = BalancedDcParams(64, Fraction(1, 8))
    assert not scramble_mask(params, 0).any()
    assert (scramble_mask(params, 3) == scramble_mask(params, 3)).all()
    assert (scramble_mask(params, 3) != scramble_mask(params, 4)).any()


def test_decode_rejects_wrong_shape():
    with pytest.raises(ValueError):
        decode_bounded_dc(np.zeros((8, 8), np.uint8), BoundedDcParams(64, QUARTER))
    with pytest.raises(ValueError):
        encode_balanced_dc(np.zeros(3, np.uint8), BalancedDcParams(64, Fraction(1, 8)))
