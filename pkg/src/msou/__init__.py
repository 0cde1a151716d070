"""MSO+U on omega-words: formulas, word/tree codec, bounded evaluation,
counter machines, and the reduction from machines to formulas."""
from ._backend import BACKEND
from .codec import TreeSeq, decode_tree_sequence, encode_tree_sequence
from .evaluate import EvalBudget, evaluate
from .logic import parse_formula, render_formula
from .minsky import MinskyMachine, find_accepting_run, parse_machine, validate_description
from .reduction import check_conditions, machine_to_formula, witness_tree_sequence

__all__ = [
    "BACKEND", "TreeSeq", "decode_tree_sequence", "encode_tree_sequence", "EvalBudget",
    "evaluate", "parse_formula", "render_formula", "MinskyMachine", "find_accepting_run",
    "parse_machine", "validate_description", "check_conditions", "machine_to_formula",
    "witness_tree_sequence",
]
