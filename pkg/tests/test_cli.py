from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest

from wc2d.cli import EXIT_CORRUPT, EXIT_INFEASIBLE, EXIT_IO, EXIT_OK, EXIT_VIOLATION, main
from wc2d.container import CorruptContainer, Header, frame, read_container, unframe, write_container
from wc2d.modes import MODES, PINNED


def _flags(mode: str) -> list[str]:
    point = PINNED[mode]
    out = ["--mode", mode, "--n", str(point["n"])]
    if "m" in point:
        out += ["--m", str(point["m"])]
    if "p" in point:
        out += ["--p", str(point["p"])]
    if "eps" in point:
        out += ["--epsilon", str(point["eps"])]
    return out


@pytest.mark.parametrize("mode", MODES)
def test_encode_decode_round_trip(tmp_path, mode):
    data = np.random.default_rng(5).integers(0, 256, 3000, dtype=np.uint8).tobytes()
    src, arrays, back = tmp_path / "in.bin", tmp_path / "a.wc2d", tmp_path / "out.bin"
    src.write_bytes(data)
    assert main(["encode", *_flags(mode), "--in", str(src), "--out", str(arrays)]) == EXIT_OK
    assert main(["verify", "--in", str(arrays)]) == EXIT_OK
    assert main(["decode", "--in", str(arrays), "--out", str(back)]) == EXIT_OK
    assert back.read_bytes() == data


def test_empty_input(tmp_path):
    src, arrays, back = tmp_path / "in.bin", tmp_path / "a.wc2d", tmp_path / "out.bin"
    src.write_bytes(b"")
    assert main(["encode", *_flags("sub-bounded"), "--in", str(src), "--out", str(arrays)]) == EXIT_OK
    assert main(["decode", "--in", str(arrays), "--out", str(back)]) == EXIT_OK
    assert back.read_bytes() == b""


def test_verify_names_first_violation(tmp_path, capsys):
    src, arrays = tmp_path / "in.bin", tmp_path / "a.wc2d"
    src.write_bytes(b"hello")
    main(["encode", *_flags("sub-bounded"), "--in", str(src), "--out", str(arrays)])
    raw = bytearray(arrays.read_bytes())
    raw[38:] = b"\xff" * (len(raw) - 38)
    arrays.write_bytes(bytes(raw))
    capsys.readouterr()
    assert main(["verify", "--in", str(arrays)]) == EXIT_VIOLATION
    assert "FAIL at subarray [0, 0]" in capsys.readouterr().out


def test_verify_text_array(tmp_path, capsys):
    path = tmp_path / "b.txt"
    path.write_text("1000\n0010\n1000\n0001\n")
    argv = ["verify", "--mode", "rc-bounded-dc", "--n", "4", "--p", "1/4", "--in", str(path)]
    assert main(argv) == EXIT_VIOLATION
    assert "FAIL at column 0 with weight 2 outside [0, 1]" in capsys.readouterr().out
    argv = ["verify", "--mode", "sub-bounded", "--n", "4", "--m", "2", "--p", "1/4", "--in", str(path), "--json"]
    assert main(argv) == EXIT_OK
    assert json.loads(capsys.readouterr().out)[0]["pass"] is True


def test_verify_text_array_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("10\n012\n")
    assert main(["verify", "--mode", "rc-bounded-dc", "--n", "2", "--p", "1/2", "--in", str(path)]) == EXIT_CORRUPT
    path.write_text("10\n01\n")
    assert main(["verify", "--in", str(path)]) == EXIT_INFEASIBLE


def test_stats(capsys):
    assert main(["stats", *_flags("rc-balanced-srt"), "--json"]) == EXIT_OK
    stats = json.loads(capsys.readouterr().out)
    assert stats["redundancy_bits"] == 1 and stats["formula_value"] == 1
    assert main(["stats", *_flags("rc-bounded-srt"), "--json"]) == EXIT_OK
    stats = json.loads(capsys.readouterr().out)
    assert stats["redundancy_bits"] == stats["formula_value"] == 259
    assert main(["stats", *_flags("rc-balanced-dc")]) == EXIT_OK
    assert "redundancy_bits: 1080" in capsys.readouterr().out


def test_exit_codes(tmp_path, capsys):
    assert main(["stats", "--mode", "rc-bounded-srt", "--n", "16", "--p", "3/4"]) == EXIT_INFEASIBLE
    assert "n/ln n >= 1/(p-1/2)^2 fails" in capsys.readouterr().err
    assert main(["stats", "--mode", "sub-bounded", "--n", "18"]) == EXIT_INFEASIBLE
    assert main(["decode", "--in", str(tmp_path / "missing")]) == EXIT_IO
    bad = tmp_path / "bad.wc2d"
    bad.write_bytes(b"XXXX" + bytes(40))
    assert main(["decode", "--in", str(bad)]) == EXIT_CORRUPT
    assert main(["verify", "--in", str(bad)]) == EXIT_CORRUPT
    bad.write_bytes(b"WC2D" + bytes(3))
    assert main(["decode", "--in", str(bad)]) == EXIT_CORRUPT


def test_truncated_container(tmp_path):
    src, arrays = tmp_path / "in.bin", tmp_path / "a.wc2d"
    src.write_bytes(b"payload")
    main(["encode", *_flags("sub-bounded"), "--in", str(src), "--out", str(arrays)])
    arrays.write_bytes(arrays.read_bytes()[:-1])
    assert main(["decode", "--in", str(arrays)]) == EXIT_CORRUPT


def test_selftest(capsys):
    assert main(["selftest"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)


def test_header_layout():
    header = Header("sub-bounded", 18, 16, Fraction(1, 2), None, 3)
    raw = header.pack()
    assert raw[:4] == b"WC2D" and raw[4] == 1 and raw[5] == MODES.index("sub-bounded")
    assert len(raw) == 4 + 1 + 1 + 4 * 6 + 8
    assert int.from_bytes(raw[6:10], "little") == 18
    assert raw[22:30] == bytes(8)
    assert Header.unpack(raw) == header


def test_container_round_trip(rng):
    header = Header("rc-bounded-dc", 5, None, Fraction(1, 4), None, 2)
    arrays = [rng.integers(0, 2, (5, 5)).astype(np.uint8) for _ in range(2)]
    raw = write_container(header, arrays)
    assert len(raw) == 38 + 2 * 4
    back_header, back = read_container(raw)
    assert back_header == header
    assert all((x == y).all() for x, y in zip(arrays, back))
    with pytest.raises(ValueError):
        write_container(header, arrays[:1])


def test_framing():
    for data in (b"", b"a", bytes(range(256))):
        for block in (7, 8, 64, 1000):
            blocks = frame(data, block)
            assert all(b.size == block for b in blocks)
            assert unframe(blocks) == data
    with pytest.raises(CorruptContainer):
        unframe([np.zeros(16, np.uint8)])
    with pytest.raises(CorruptContainer):
        unframe([np.array([0, 0, 0, 1], np.uint8)])
