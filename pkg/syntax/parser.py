# syntax/parser.py
import logging
import os
from typing import Optional

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from errors import QctlSyntaxError
from syntax.ast import (NAMED_GATES, Discard, Gate, Hole, Meas, NewQbit, Program, QCase, Seq, Skip, Statement,
                        Unitary, While, holes, located)
from syntax.environment import KEYWORDS, Environment

logger = logging.getLogger(__name__)

_GRAMMAR_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "grammar.lark")


def _check_name(tok: Token) -> str:
    name = str(tok)
    if name in KEYWORDS:
        raise QctlSyntaxError(f"keyword '{name}' used as a variable", tok.line, tok.column)
    return name


def _at(meta, node: Statement) -> Statement:
    return located(node, getattr(meta, "line", None), getattr(meta, "column", None))


@v_args(inline=True)
class StatementBuilder(Transformer):
    """Statement nodes carry the line and column where they start."""

    @v_args(meta=True, inline=True)
    def skip(self, meta):
        return _at(meta, Skip())

    @v_args(meta=True, inline=True)
    def new_qbit(self, meta, name):
        return _at(meta, NewQbit(_check_name(name)))

    @v_args(meta=True, inline=True)
    def discard(self, meta, name):
        return _at(meta, Discard(_check_name(name)))

    @v_args(meta=True, inline=True)
    def unitary(self, meta, name, gate):
        return _at(meta, Unitary(_check_name(name), gate))

    @v_args(meta=True, inline=True)
    def seq(self, meta, s0, s1):
        return _at(meta, Seq(s0, s1))

    @v_args(meta=True, inline=True)
    def meas(self, meta, name, s0, s1):
        return _at(meta, Meas(_check_name(name), s0, s1))

    @v_args(meta=True, inline=True)
    def qcase(self, meta, name, s0, s1):
        return _at(meta, QCase(_check_name(name), s0, s1))

    @v_args(meta=True, inline=True)
    def while_(self, meta, name, body):
        return _at(meta, While(_check_name(name), body))

    @v_args(meta=True, inline=True)
    def hole(self, meta, ins, outs):
        return _at(meta, Hole(Environment(ins), Environment(outs)))

    def names(self, *toks):
        return [_check_name(t) for t in toks]

    def named_gate(self, name):
        if str(name) not in NAMED_GATES:
            raise QctlSyntaxError(f"unknown gate '{name}'", name.line, name.column,
                                  expected=list(NAMED_GATES) + ["U(...)"])
        return Gate.named(str(name))

    def custom_gate(self, name, *numbers):
        if str(name) != "U":
            raise QctlSyntaxError(f"only U takes arguments, not '{name}'", name.line, name.column)
        if len(numbers) != 8:
            raise QctlSyntaxError(f"U(...) takes 8 real literals, got {len(numbers)}", name.line, name.column)
        return Gate.custom([float(n) for n in numbers])


class StatementParser:
    def __init__(self, grammar_path: str = _GRAMMAR_PATH):
        with open(grammar_path, encoding="utf-8") as f:
            self._lark = Lark(f.read(), parser="lalr", propagate_positions=True, maybe_placeholders=False)
        self._builder = StatementBuilder()

    def parse_any(self, text: str) -> Statement:
        try:
            tree = self._lark.parse(text)
            return self._builder.transform(tree)
        except VisitError as e:
            if isinstance(e.orig_exc, QctlSyntaxError):
                raise e.orig_exc from None
            raise QctlSyntaxError(str(e.orig_exc)) from e
        except UnexpectedEOF as e:
            raise QctlSyntaxError("unexpected end of input", *_end_position(text), expected=e.expected) from None
        except UnexpectedToken as e:
            raise QctlSyntaxError(f"unexpected token {e.token!r}", e.line, e.column,
                                  expected=_readable(e.expected)) from None
        except UnexpectedCharacters as e:
            raise QctlSyntaxError(f"unexpected character {text[e.pos_in_stream]!r}", e.line, e.column,
                                  expected=_readable(e.allowed or ())) from None
        except UnexpectedInput as e:
            raise QctlSyntaxError(str(e), getattr(e, "line", None), getattr(e, "column", None)) from None


def _readable(terminals) -> list:
    names = []
    for t in terminals:
        if t.startswith("$"):
            names.append("end of input")
        else:
            names.append(_TERMINAL_SPELLING.get(t, t))
    return names


_TERMINAL_SPELLING = {
    "SEMICOLON": "';'", "LPAR": "'('", "RPAR": "')'", "COMMA": "','", "LSQB": "'['", "RSQB": "']'",
    "NAME": "variable", "NUMBER": "number", "SKIP": "'skip'", "NEW": "'new'", "QBIT": "'qbit'",
    "DISCARD": "'discard'", "MEAS": "'meas'", "QCASE": "'qcase'", "WHILE": "'while'", "DO": "'do'",
}


def _end_position(text: str):
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


_parser: Optional[StatementParser] = None


def _default_parser() -> StatementParser:
    global _parser
    if _parser is None:
        _parser = StatementParser()
        logger.debug(f"Loaded grammar from {_GRAMMAR_PATH}")
    return _parser


def parse(text: str) -> Statement:
    """Parse a statement; holes are rejected."""
    stmt = _default_parser().parse_any(text)
    if holes(stmt):
        h = holes(stmt)[0]
        raise QctlSyntaxError(f"unexpected hole [{h.in_env} -> {h.out_env}] in a statement")
    return stmt


def parse_context(text: str) -> Statement:
    """Parse a context: a statement with exactly one hole ``[in -> out]``."""
    stmt = _default_parser().parse_any(text)
    found = holes(stmt)
    if len(found) != 1:
        raise QctlSyntaxError(f"a context needs exactly one hole, found {len(found)}")
    return stmt


def parse_program(text: str, input_env: Environment) -> Program:
    from semantics.wellformed import check

    stmt = parse(text)
    return Program(input_env, stmt, check(input_env, stmt))
