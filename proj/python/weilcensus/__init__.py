"""Isogeny-class census of abelian varieties over finite fields."""

import json
from fractions import Fraction

from . import _core
from ._core import (
    CacheCorrupt,
    CapExceeded,
    UnsupportedDimension,
    count_noncyclic_residues,
    count_nontrivial_residues,
    count_points,
    enumerate,
    f_at_one,
    fprime_at_one,
    im_envelope,
    is_ordinary,
    is_weil,
    local_solution_count,
    local_solution_formula,
    prime_set_up_to,
    volume,
    zeta_reciprocal,
)

__all__ = [
    "CacheCorrupt", "CapExceeded", "UnsupportedDimension", "classify", "count_noncyclic_residues",
    "count_nontrivial_residues", "count_points", "enumerate", "f_at_one", "fprime_at_one", "im_envelope",
    "is_ordinary", "is_weil", "local_solution_count", "local_solution_formula", "prime_set_up_to", "sigma",
    "theorem_bounds", "verify", "volume", "zeta_reciprocal",
]


def classify(q, g, S, mode="ordinary-only", workers=1):
    """CountSummary as a dict of decimal strings."""
    return json.loads(_core.classify_json(q, g, list(S), mode, workers))


def sigma(S, i):
    return Fraction(_core.sigma(list(S), i))


def theorem_bounds(S):
    lo, hi = _core.theorem_bounds(list(S))
    return Fraction(lo), Fraction(hi)


def verify(qs=(5, 7, 11), gs=(1, 2), S=(2, 3, 5), fault=""):
    """[(check, context, passed, detail), ...]"""
    return _core.verify(list(qs), list(gs), list(S), fault)
