"""One entry point per codec family: parameters, encode/decode, target constraint."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .enumcode import lambda_redundancy
from .rc_dc import (
    BalancedDcParams,
    BoundedDcParams,
    decode_balanced_dc,
    decode_bounded_dc,
    encode_balanced_dc,
    encode_bounded_dc,
)
from .rc_srt import (
    BalancedSrtParams,
    BoundedSrtParams,
    decode_balanced_srt,
    decode_bounded_srt,
    encode_balanced_srt,
    encode_bounded_srt,
)
from .subarray import (
    SubBalancedParams,
    SubBoundedParams,
    decode_sub_balanced,
    decode_sub_bounded,
    encode_sub_balanced,
    encode_sub_bounded,
)
from .verify import ConstraintSpec

MODES = (
    "rc-bounded-dc",
    "rc-bounded-srt",
    "rc-balanced-dc",
    "rc-balanced-srt",
    "sub-bounded",
    "sub-balanced",
)

# one feasible point per mode, used by the round-trip suite and the CLI defaults
PINNED: dict[str, dict[str, Any]] = {
    "rc-bounded-dc": {"n": 64, "p": Fraction(1, 4)},
    "rc-balanced-dc": {"n": 64, "eps": Fraction(1, 8)},
    "rc-bounded-srt": {"n": 256, "p": Fraction(3, 4)},
    "rc-balanced-srt": {"n": 1024, "eps": Fraction(1, 4)},
    "sub-bounded": {"n": 18, "m": 16, "p": Fraction(1, 2)},
    "sub-balanced": {"n": 64, "m": 32, "eps": Fraction(3, 8)},
}


FAMILY = {
    "rc-bounded-dc": "rc-bounded",
    "rc-bounded-srt": "rc-bounded",
    "rc-balanced-dc": "rc-balanced",
    "rc-balanced-srt": "rc-balanced",
    "sub-bounded": "s-bounded",
    "sub-balanced": "s-balanced",
}


def constraint_for(
    mode: str, n: int, m: int | None = None, p: Fraction | None = None, eps: Fraction | None = None
) -> ConstraintSpec:
    """The array family a mode's outputs belong to; needs no codec feasibility."""
    if mode not in FAMILY:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    family = FAMILY[mode]
    return ConstraintSpec(
        family,
        n,
        m=m if family.startswith("s-") else None,
        p=p if family.endswith("bounded") else None,
        eps=eps if family.endswith("balanced") else None,
    )


@dataclass(frozen=True)
class Codec:
    mode: str
    n: int
    m: int | None
    p: Fraction | None
    eps: Fraction | None
    params: Any
    _encode: Callable
    _decode: Callable

    @property
    def payload_bits(self) -> int:
        return self.params.payload_bits

    @property
    def redundancy(self) -> int:
        return self.n * self.n - self.payload_bits

    def encode(self, msg: np.ndarray) -> np.ndarray:
        return self._encode(msg, self.params)

    def decode(self, a: np.ndarray) -> np.ndarray:
        return self._decode(a, self.params)

    @property
    def spec(self) -> ConstraintSpec:
        return constraint_for(self.mode, self.n, self.m, self.p, self.eps)

    def table_redundancy(self) -> tuple[str, float]:
        """Redundancy formula for this family and its value here."""
        n = self.n
        if self.mode == "rc-bounded-dc":
            return "n*lambda(n,p) + O(n log n)", n * lambda_redundancy(n, self.p)
        if self.mode == "rc-bounded-srt":
            return "n + 3", n + 3
        if self.mode == "rc-balanced-dc":
            c = self.params.c
            return "3cn - 2c^2", 3 * c * n - 2 * c * c
        if self.mode == "sub-bounded":
            return "n", n
        return "1", 1


def make_codec(
    mode: str,
    n: int,
    m: int | None = None,
    p: Fraction | None = None,
    eps: Fraction | None = None,
    alpha: float | None = None,
) -> Codec:
    """Validate parameters and build the codec; raises InfeasibleParameters."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    needs_m = mode.startswith("sub-")
    needs_p = "bounded" in mode
    if needs_m and m is None:
        raise ValueError(f"{mode} needs --m")
    if needs_p and p is None:
        raise ValueError(f"{mode} needs --p")
    if not needs_p and eps is None:
        raise ValueError(f"{mode} needs --epsilon")
    m = m if needs_m else None
    p = Fraction(p) if needs_p else None
    eps = None if needs_p else Fraction(eps)
    builders = {
        "rc-bounded-dc": (lambda: BoundedDcParams(n, p), encode_bounded_dc, decode_bounded_dc),
        "rc-bounded-srt": (lambda: BoundedSrtParams(n, p), encode_bounded_srt, decode_bounded_srt),
        "rc-balanced-dc": (lambda: BalancedDcParams(n, eps), encode_balanced_dc, decode_balanced_dc),
        "rc-balanced-srt": (
            lambda: BalancedSrtParams(n, eps, alpha),
            encode_balanced_srt,
            decode_balanced_srt,
        ),
        "sub-bounded": (lambda: SubBoundedParams(n, m, p), encode_sub_bounded, decode_sub_bounded),
        "sub-balanced": (lambda: SubBalancedParams(n, m, eps), encode_sub_balanced, decode_sub_balanced),
    }
    build, enc, dec = builders[mode]
    return Codec(mode, n, m, p, eps, build(), enc, dec)


def pinned_codec(mode: str) -> Codec:
    return make_codec(mode, **PINNED[mode])


def adversarial_messages(size: int) -> dict[str, np.ndarray]:
    i = np.arange(size)
    return {
        "all-zeros": np.zeros(size, dtype=np.uint8),
        "all-ones": np.ones(size, dtype=np.uint8),
        "single-1": (i == size // 3).astype(np.uint8),
        "checkerboard": (i % 2).astype(np.uint8),
        "long-run": (i < size // 2).astype(np.uint8),
    }

