"""Regular Post embedding problems with partial (co)directness."""

from .words import Alphabet, Word, is_subword
from .automata import Dfa, Nfa, minimize
from .regex import parse_regex, dfa_to_regex
from .pep import (CODIR, COANDDIR, DIR, PLAIN, Morphism, PepInstance, check_solution,
                  color_indices, cut, find_cut_pair, find_pump_pair, minimize_solution, pump)
from .solver import count, infinite_check, short_bound, solve

__all__ = [
    "Alphabet", "Word", "is_subword", "Dfa", "Nfa", "minimize", "parse_regex", "dfa_to_regex",
    "PLAIN", "DIR", "CODIR", "COANDDIR", "Morphism", "PepInstance", "check_solution",
    "color_indices", "cut", "find_cut_pair", "find_pump_pair", "minimize_solution", "pump",
    "solve", "count", "infinite_check", "short_bound",
]
