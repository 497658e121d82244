"""Ambiguity-preserving translation of navigation commands into ranked STL
candidates, with quantitative robustness evaluation on 2-D trajectories."""

from .lexicon import (
    LexEntry,
    Lexicon,
    format_lexicon,
    load_default_lexicon,
    load_lexicon,
    lookup,
    validate_lexicon,
)
from .parser import Derivation, Token, parse_nbest, tokenize
from .pipeline import (
    Candidate,
    CandidateSet,
    EmptyCandidateSetError,
    IllFormedMeaningError,
    aggregate,
    analyze,
    to_stl,
    translate,
)
from .semantics import Term, alpha_equal, beta_reduce, compose, parse_term
from .stl import (
    And,
    Atom,
    EmptyWindowError,
    F,
    Formula,
    G,
    Interval,
    Not,
    Or,
    TrueF,
    UnknownAtomError,
    Until,
    atoms_of,
    canonicalize,
    extent,
    format_formula,
    parse_formula,
    robustness,
)
from .trajectory import (
    Box,
    RegionMap,
    RobustnessReport,
    Trajectory,
    evaluate_candidates,
    load_regions,
    load_trajectory,
    region_margin,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "Atom",
    "Box",
    "Candidate",
    "CandidateSet",
    "Derivation",
    "EmptyCandidateSetError",
    "EmptyWindowError",
    "F",
    "Formula",
    "G",
    "IllFormedMeaningError",
    "Interval",
    "LexEntry",
    "Lexicon",
    "Not",
    "Or",
    "RegionMap",
    "RobustnessReport",
    "Term",
    "Token",
    "Trajectory",
    "TrueF",
    "UnknownAtomError",
    "Until",
    "aggregate",
    "alpha_equal",
    "analyze",
    "atoms_of",
    "beta_reduce",
    "canonicalize",
    "compose",
    "evaluate_candidates",
    "extent",
    "format_formula",
    "format_lexicon",
    "load_default_lexicon",
    "load_lexicon",
    "load_regions",
    "load_trajectory",
    "lookup",
    "parse_formula",
    "parse_nbest",
    "parse_term",
    "region_margin",
    "robustness",
    "to_stl",
    "tokenize",
    "translate",
    "validate_lexicon",
]
