"""Correctness checking for single-pass instruction sequences computing the n-ary non-zeroness test."""

__version__ = "0.1.0"

from .core import InstructionSequence, parse, render
from .dispatch import Verdict, decide, exhaustive_min_search
from .executor import brute_force_check, computes, execute, symbolic_check, tstnz
from .generators import gen_tstnz, gen_tstnz_prime, min_len
from .membership import check_shortest, is_member_pc, is_member_pce
from .poly import always_one, check_good, check_very_good, classify

__all__ = [
    "InstructionSequence", "parse", "render", "Verdict", "decide", "exhaustive_min_search",
    "brute_force_check", "computes", "execute", "symbolic_check", "tstnz", "gen_tstnz",
    "gen_tstnz_prime", "min_len", "check_shortest", "is_member_pc", "is_member_pce",
    "always_one", "check_good", "check_very_good", "classify",
]
