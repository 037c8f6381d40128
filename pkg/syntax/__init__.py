# syntax/__init__.py
from .environment import EMPTY, Environment, is_var_name, sort_vars, var_key
from .ast import (Context, Discard, Gate, Hole, Meas, NewQbit, Program, QCase, Seq, Skip, Statement, Unitary,
                  While, hole_of, holes, node_count, seq, substitute, vars_of)
from .parser import parse, parse_context, parse_program
from .printer import pretty, pretty_block, pretty_gate

__all__ = [
    "EMPTY", "Environment", "is_var_name", "sort_vars", "var_key",
    "Context", "Discard", "Gate", "Hole", "Meas", "NewQbit", "Program", "QCase", "Seq", "Skip", "Statement",
    "Unitary", "While", "hole_of", "holes", "node_count", "seq", "substitute", "vars_of",
    "parse", "parse_context", "parse_program",
    "pretty", "pretty_block", "pretty_gate",
]
