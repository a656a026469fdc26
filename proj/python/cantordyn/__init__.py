"""Exact computations with homeomorphisms of Cantor space."""

from fractions import Fraction

from ._cantordyn import (
    Clopen,
    Homeo,
    Measure,
    ParseError,
    PeriodicPointError,
    Signature,
    SynthesisError,
    aperiodize,
    compose,
    difference_set,
    document_to_json,
    fundamental_domain,
    in_p_neighborhood,
    min_circulation,
    normalize_document,
    odometer,
    odometer_truncation,
    parse_document,
    periodic_approx_weak,
    rank1,
    rokhlin_castle,
    run_cli,
    synth_odometer,
    synth_periodic,
    weak_distance,
)


def fraction(text):
    """Parse a "p/q" string returned by the extension."""
    return Fraction(text)


def distance(s, t, depth=24):
    """Weak distance as a pair of Fractions (lower, upper)."""
    lo, hi = weak_distance(s, t, depth)
    return Fraction(lo), Fraction(hi)
