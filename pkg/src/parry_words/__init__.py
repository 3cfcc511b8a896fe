"""Fixed points of canonical substitutions of simple Parry numbers, and their palindromic structure."""
from parry_words.words import Morphism, apply, fixed_point_prefix, is_primitive, iter_fixed_point, palindrome_test
from parry_words.parry import (
    ConfluentParams,
    RenyiDigits,
    canonical_substitution,
    check_parry,
    classify,
    dominant_root,
    numeration_basis,
    renyi_digits,
    uv_lengths,
)
from parry_words.verify import run_sweep, run_theorem_suite

__all__ = [
    "Morphism",
    "apply",
    "fixed_point_prefix",
    "is_primitive",
    "iter_fixed_point",
    "palindrome_test",
    "ConfluentParams",
    "RenyiDigits",
    "canonical_substitution",
    "check_parry",
    "classify",
    "dominant_root",
    "numeration_basis",
    "renyi_digits",
    "uv_lengths",
    "run_sweep",
    "run_theorem_suite",
]
