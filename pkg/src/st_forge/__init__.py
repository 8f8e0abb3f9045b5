"""Exact generator and verifier for a sharp Szemeredi-Trotter construction over Z[sqrt k]."""

from .construction import GridParams, Line, SlopeParams, gen_A, gen_lines, gen_points, gen_slopes
from .qk import QkNum, RingContext, ZkInt, qk_from_ratio

__all__ = [
    "GridParams",
    "Line",
    "QkNum",
    "RingContext",
    "SlopeParams",
    "ZkInt",
    "gen_A",
    "gen_lines",
    "gen_points",
    "gen_slopes",
    "qk_from_ratio",
]
