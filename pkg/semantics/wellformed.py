# semantics/wellformed.py
"""Well-formedness judgments ``env |- S > out``, input/output variables, context compatibility."""
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Tuple

from errors import (BranchMismatch, ControlCaptured, EnvMismatch, NotWellFormed, VarClash, VarMissing,
                    WellFormednessError, WhileShape)
from syntax.ast import (Context, Discard, Hole, Meas, NewQbit, Program, QCase, Seq, Skip, Statement, Unitary, While,
                        holes, span_of, vars_of)
from syntax.environment import EMPTY, Environment
from syntax.printer import pretty

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Derivation:
    """One rule application: ``env |- stmt > out`` with its premises."""

    rule: str
    env: Environment
    stmt: Statement
    out: Environment
    premises: Tuple["Derivation", ...] = ()

    def render(self, indent: str = "  ") -> str:
        lines: List[str] = []
        self._render_into(lines, 0, indent)
        return "\n".join(lines)

    def _render_into(self, lines: List[str], depth: int, indent: str):
        text = pretty(self.stmt)
        if len(text) > 60:
            text = text[:57] + "..."
        lines.append(f"{indent * depth}({self.rule}) {self.env} |- {text} > {self.out}")
        for p in self.premises:
            p._render_into(lines, depth + 1, indent)


def derive(env: Environment, s: Statement) -> Derivation:
    """Build the unique derivation for ``env |- s > ?``; raises on the first failing premise.

    The error carries the source span of the innermost located statement around the failure.
    """
    try:
        return _derive(env, s)
    except WellFormednessError as e:
        if e.span is None:
            e.span = span_of(s)
        raise


def _derive(env: Environment, s: Statement) -> Derivation:
    if isinstance(s, Skip):
        return Derivation("skip", env, s, env)
    if isinstance(s, NewQbit):
        if s.var in env:
            raise VarClash(s.var)
        return Derivation("new", env, s, env.add(s.var))
    if isinstance(s, Discard):
        if s.var not in env:
            raise VarMissing(s.var)
        return Derivation("discard", env, s, env.remove(s.var))
    if isinstance(s, Unitary):
        if s.var not in env:
            raise VarMissing(s.var)
        return Derivation("unitary", env, s, env)
    if isinstance(s, Seq):
        first = derive(env, s.s0)
        second = derive(first.out, s.s1)
        return Derivation("seq", env, s, second.out, (first, second))
    if isinstance(s, Meas):
        if s.var not in env:
            raise VarMissing(s.var)
        d0, d1 = derive(env, s.s0), derive(env, s.s1)
        if d0.out != d1.out:
            raise BranchMismatch(d0.out, d1.out)
        return Derivation("meas", env, s, d0.out, (d0, d1))
    if isinstance(s, While):
        if s.var not in env:
            raise VarMissing(s.var)
        body = derive(env, s.body)
        if body.out != env:
            raise WhileShape(env, body.out)
        return Derivation("while", env, s, env, (body,))
    if isinstance(s, QCase):
        if s.var not in env:
            raise VarMissing(s.var)
        if s.var in vars_of(s.s0) | vars_of(s.s1):
            raise ControlCaptured(s.var)
        rest = env.remove(s.var)
        d0, d1 = derive(rest, s.s0), derive(rest, s.s1)
        if d0.out != d1.out:
            raise BranchMismatch(d0.out, d1.out)
        return Derivation("qcase", env, s, d0.out.add(s.var), (d0, d1))
    if isinstance(s, Hole):
        missing = [v for v in s.in_env if v not in env]
        if missing:
            raise VarMissing(missing[0])
        frame = env - s.in_env
        clash = frame & s.out_env
        if clash:
            raise VarClash(clash.vars[0])
        return Derivation("hole", env, s, frame | s.out_env)
    raise TypeError(f"not a statement: {s!r}")


def check(env: Environment, s: Statement) -> Environment:
    """The unique output environment of ``s`` on ``env``."""
    out = derive(env, s).out
    logger.debug(f"{env} |- {type(s).__name__} > {out}")
    return out


def check_program(prog: Program) -> Environment:
    out = check(prog.input_env, prog.stmt)
    if out != prog.output_env:
        raise EnvMismatch(f"program ends in {out}, declared {prog.output_env}")
    return out


@dataclass(frozen=True)
class VarAnalysis:
    in_vars: FrozenSet[str]
    out_vars: FrozenSet[str]
    bound_vars: FrozenSet[str] = field(default=frozenset())


def _in_out(s: Statement) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    if isinstance(s, Skip):
        return frozenset(), frozenset()
    if isinstance(s, NewQbit):
        return frozenset(), frozenset({s.var})
    if isinstance(s, Discard):
        return frozenset({s.var}), frozenset()
    if isinstance(s, Unitary):
        return frozenset({s.var}), frozenset({s.var})
    if isinstance(s, Seq):
        in0, out0 = _in_out(s.s0)
        in1, out1 = _in_out(s.s1)
        return in0 | (in1 - out0), out1 | (out0 - in1)
    if isinstance(s, Meas):
        in0, out0 = _in_out(s.s0)
        in1, out1 = _in_out(s.s1)
        outs = out0 | out1
        if s.var not in in0 | in1:
            outs = outs | {s.var}
        return frozenset({s.var}) | in0 | in1, outs
    if isinstance(s, QCase):
        in0, out0 = _in_out(s.s0)
        in1, out1 = _in_out(s.s1)
        return frozenset({s.var}) | in0 | in1, frozenset({s.var}) | out0 | out1
    if isinstance(s, While):
        inb, outb = _in_out(s.body)
        return frozenset({s.var}) | inb, frozenset({s.var}) | outb
    if isinstance(s, Hole):
        return frozenset(s.in_env), frozenset(s.out_env)
    raise TypeError(f"not a statement: {s!r}")


def analyze(s: Statement) -> VarAnalysis:
    ins, outs = _in_out(s)
    try:
        check(Environment(ins), s)
    except WellFormednessError as e:
        raise NotWellFormed(f"statement is not well-formed on any environment: {e}", e.span) from e
    return VarAnalysis(ins, outs, vars_of(s) - ins - outs)


def bound_vars(s: Statement) -> FrozenSet[str]:
    return analyze(s).bound_vars


@dataclass(frozen=True)
class ContextVerdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_context(ctx: Context) -> ContextVerdict:
    found = holes(ctx)
    if len(found) != 1:
        return ContextVerdict(False, f"a context has exactly one hole, found {len(found)}")
    try:
        out = check(EMPTY, ctx)
    except WellFormednessError as e:
        return ContextVerdict(False, str(e))
    if out:
        return ContextVerdict(False, f"context leaves {out} allocated")
    return ContextVerdict(True)


def compatible(ctx: Context, prog: Program) -> ContextVerdict:
    verdict = check_context(ctx)
    if not verdict:
        return verdict
    hole = holes(ctx)[0]
    if hole.in_env != prog.input_env or hole.out_env != prog.output_env:
        return ContextVerdict(False, f"hole [{hole.in_env} -> {hole.out_env}] does not fit "
                                     f"program {prog.input_env} -> {prog.output_env}")
    try:
        shared = bound_vars(prog.stmt) & vars_of(ctx)
    except NotWellFormed as e:
        return ContextVerdict(False, str(e))
    if shared:
        return ContextVerdict(False, f"context uses bound variables {sorted(shared)} of the program")
    return ContextVerdict(True)
