"""Quick oracle battery behind `wc2d selftest`; each check returns (ok, detail)."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable

import numpy as np

from .antipodal import antipodal_map, antipodal_reference
from .balance1d import BalanceBand, bounded_limit, swap_index_bounded, valid_swap_indices_eps
from .enumcode import BoundedWeightSpace
from .modes import MODES, pinned_codec
from .srt import ForbiddenSpace, first_forbidden, scan_violation
from .verify import ConstraintSpec, census, check


def all_words(length: int) -> np.ndarray:
    """Every length-bit word as a row, in lexicographic order."""
    codes = np.arange(1 << length, dtype=np.uint32)
    shifts = np.arange(length - 1, -1, -1, dtype=np.uint32)
    return ((codes[:, None] >> shifts) & 1).astype(np.uint8)


def antipodal_violations(words: np.ndarray) -> int:
    """Rows of the batch breaking weight reversal, high-side containment or involution."""
    length = words.shape[1]
    image = antipodal_map(words)
    w, wi = words.sum(1), image.sum(1)
    heavy = 2 * w > length
    bad = wi != length - w
    bad |= heavy & ((image & (1 - words)).sum(1) > 0)
    bad |= (antipodal_map(image) != words).any(1)
    return int(bad.sum())


def check_antipodal() -> tuple[bool, str]:
    for length in range(1, 13):
        bad = antipodal_violations(all_words(length))
        if bad:
            return False, f"{bad} violations at L={length}"
    for length in range(1, 9):
        words = all_words(length)
        if any((antipodal_reference(x) != y).any() for x, y in zip(words, antipodal_map(words))):
            return False, f"batch map disagrees with the reference at L={length}"
    return True, ""


def check_swap_bounded() -> tuple[bool, str]:
    # the existence claim needs p m integral; other points are left to the test suite
    for p in (Fraction(1, 4), Fraction(1, 2)):
        for m in range(1, 7):
            if (p * m).denominator != 1:
                continue
            words = all_words(m)
            limit = bounded_limit(2 * m, p)
            for y, z in itertools.product(words, repeat=2):
                if int(y.sum() + z.sum()) > limit:
                    continue
                t = swap_index_bounded(y, z, p)
                yt = np.concatenate([z[:t], y[t:]])
                zt = np.concatenate([y[:t], z[t:]])
                if max(yt.sum(), zt.sum()) > bounded_limit(m, p):
                    return False, f"bad index {t} at p={p}, m={m}"
    return True, ""


def check_swap_eps_sound() -> tuple[bool, str]:
    for eps in (Fraction(1, 6), Fraction(1, 4)):
        for m in range(1, 7):
            if eps * m < 1:
                continue
            band, whole = BalanceBand.of(m, eps), BalanceBand.of(2 * m, eps)
            words = all_words(m)
            for y, z in itertools.product(words, repeat=2):
                if int(y.sum() + z.sum()) not in whole:
                    continue
                for t in valid_swap_indices_eps(y, z, eps):
                    if int(z[:t].sum() + y[t:].sum()) not in band or int(y[:t].sum() + z[t:].sum()) not in band:
                        return False, f"unsound index {t} at eps={eps}, m={m}"
    return True, ""


def check_psi() -> tuple[bool, str]:
    for ell in range(2, 13):
        band = BalanceBand.of(ell, Fraction(1, 4))
        words = all_words(ell)
        forbidden = words[[int(w.sum()) not in band for w in words]]
        space = ForbiddenSpace(ell, band, ell)
        ranks = [space.ranker.rank(w) for w in forbidden]
        if ranks != list(range(len(forbidden))):
            return False, f"ranks are not 0..|F|-1 at ell={ell}"
        if any((space.ranker.unrank(j) != w).any() for j, w in enumerate(forbidden)):
            return False, f"unrank mismatch at ell={ell}"
    return True, ""


def check_enumerative() -> tuple[bool, str]:
    for p in (Fraction(1, 4), Fraction(1, 2)):
        for n in range(1, 11):
            space = BoundedWeightSpace(n, p)
            words = all_words(n)
            members = words[words.sum(1) <= space.wmax]
            if space.cardinality != len(members):
                return False, f"cardinality mismatch at n={n}, p={p}"
            if [space.ranker.rank(w) for w in members] != list(range(len(members))):
                return False, f"rank mismatch at n={n}, p={p}"
    return True, ""


def check_scan() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    for _ in range(200):
        size, ell = int(rng.integers(8, 120)), int(rng.integers(2, 8))
        stride = int(rng.integers(ell, 16))
        x = (rng.random(size) < rng.random()).astype(np.uint8)
        band = BalanceBand.of(ell, Fraction(1, 4))
        r = scan_violation(x, ell, band, 1)
        c = scan_violation(x, ell, band, stride)
        want = min(v for v in (r, c, size) if v is not None)
        got, kind = first_forbidden(x, size, ell, band.lo, band.hi, stride)
        if want == size:
            if kind != 0:
                return False, "reported a violation where none exists"
        elif got != want or kind != (1 if r == want else 2):
            return False, f"first violation {got} (kind {kind}), expected {want}"
    return True, ""


def check_census() -> tuple[bool, str]:
    got = (
        census(ConstraintSpec("rc-bounded", 2, p=Fraction(1, 2))),
        census(ConstraintSpec("rc-balanced", 2, eps=0)),
        census(ConstraintSpec("s-bounded", 3, m=3, p=1)),
    )
    return got == (7, 2, 512), f"got {got}"


def check_round_trips() -> tuple[bool, str]:
    rng = np.random.default_rng(11)
    for mode in MODES:
        codec = pinned_codec(mode)
        for _ in range(2):
            msg = rng.integers(0, 2, codec.payload_bits).astype(np.uint8)
            a = codec.encode(msg)
            if not check(a, codec.spec).passed:
                return False, f"{mode} output violates its constraint"
            if not (codec.decode(a) == msg).all():
                return False, f"{mode} round trip failed"
    return True, ""


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "antipodal properties (L <= 12)": check_antipodal,
    "bounded swap index (integral p m, m <= 6)": check_swap_bounded,
    "epsilon swap index soundness (m <= 6)": check_swap_eps_sound,
    "forbidden-word rank bijection (ell <= 12)": check_psi,
    "enumerative rank bijection (n <= 10)": check_enumerative,
    "violation scan against the oracle": check_scan,
    "census fixtures": check_census,
    "round trips at pinned points": check_round_trips,
}


def run_all() -> list[tuple[str, bool, str]]:
    results = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing oracle is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, ok, "" if ok else detail))
    return results
