"""Codecs for n x n binary arrays under row/column or subarray weight constraints."""

from __future__ import annotations

from .modes import MODES, PINNED, Codec, make_codec, pinned_codec
from .srt import InfeasibleParameters
from .verify import ConstraintReport, ConstraintSpec, census, check

__all__ = [
    "MODES",
    "PINNED",
    "Codec",
    "ConstraintReport",
    "ConstraintSpec",
    "InfeasibleParameters",
    "census",
    "check",
    "make_codec",
    "pinned_codec",
]
