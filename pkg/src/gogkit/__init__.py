"""Graphs of groups, their isomorphisms, Dehn twists, twisted conjugacy and quotient / blow-up surgery."""
from .core import FreeGroup, GraphOfGroups, PathWord, Pi1Group, format_word, gog_validate, parse_word
from .dehn import TwistKind, classify_twist, efficiency_check, subdivide_to_classical, trivial_edge_dehn, twistors
from .foundations import FreeWord, SerreGraph, parse_free_word
from .hconj import h_length, h_reduce, is_h_zero
from .isomorphisms import GogIso, identity_iso, iso_apply, iso_compose, iso_invert, iso_validate, make_iso
from .surgery import (
    NotCompatible,
    NotLocallyZero,
    blowup,
    blowup_plan,
    partial_dehn_blowup,
    partial_dehn_detect,
    quotient_gog,
    quotient_iso,
    quotient_multi,
)

__all__ = [
    "FreeGroup", "FreeWord", "GogIso", "GraphOfGroups", "NotCompatible", "NotLocallyZero", "PathWord",
    "Pi1Group", "SerreGraph", "TwistKind", "blowup", "blowup_plan", "classify_twist", "efficiency_check",
    "format_word", "gog_validate", "h_length", "h_reduce", "identity_iso", "is_h_zero", "iso_apply",
    "iso_compose", "iso_invert", "iso_validate", "make_iso", "parse_free_word", "parse_word",
    "partial_dehn_blowup", "partial_dehn_detect", "quotient_gog", "quotient_iso", "quotient_multi",
    "subdivide_to_classical", "trivial_edge_dehn", "twistors",
]
