# tests/test_wellformed.py
import numpy as np
import pytest
from conftest import ProgramGenerator
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import (BranchMismatch, ControlCaptured, EnvMismatch, NotWellFormed, VarClash, VarMissing,
                    WellFormednessError, WhileShape)
from semantics.wellformed import analyze, bound_vars, check, check_context, check_program, compatible, derive
from syntax.ast import Gate, Meas, Program, QCase, Unitary, While, iter_nodes, vars_of
from syntax.environment import EMPTY, Environment
from syntax.parser import parse, parse_context

QR = Environment(["q", "r"])


def env(text: str) -> Environment:
    return Environment.parse(text)


@pytest.mark.parametrize("text, start, expected", [
    ("skip", "q", "q"),
    ("new qbit r", "q", "q,r"),
    ("discard q", "q,r", "r"),
    ("q *= H", "q", "q"),
    ("meas q (0 -> skip, 1 -> r *= X)", "q,r", "q,r"),
    ("meas q (0 -> discard q, 1 -> discard q)", "q", ""),
    ("qcase c (0 -> skip, 1 -> t *= X)", "c,t", "c,t"),
    ("qcase p (0 -> new qbit q, 1 -> new qbit q)", "p", "p,q"),
    ("while q do (discard q; new qbit q)", "q", "q"),
    ("new qbit r; r *= X; while r do skip; discard r", "", ""),
])
def test_check(text, start, expected):
    assert check(env(start), parse(text)) == env(expected)


@pytest.mark.parametrize("text, start, error", [
    ("q *= X", "", VarMissing),
    ("discard q", "r", VarMissing),
    ("new qbit q", "q", VarClash),
    ("meas q (0 -> skip, 1 -> discard q)", "q", BranchMismatch),
    ("qcase q (0 -> q *= X, 1 -> skip)", "q", ControlCaptured),
    ("qcase q (0 -> new qbit r, 1 -> new qbit s)", "q", BranchMismatch),
    ("while q do discard q", "q", WhileShape),
    ("while q do new qbit r", "q", WhileShape),
])
def test_check_rejects(text, start, error):
    with pytest.raises(error):
        check(env(start), parse(text))


def test_derivation_tree():
    d = derive(env("c,t"), parse("qcase c (0 -> skip, 1 -> t *= X); discard c"))
    assert d.rule == "seq"
    assert [p.rule for p in d.premises] == ["qcase", "discard"]
    assert d.premises[0].premises[1].env == env("t")
    text = d.render()
    assert text.splitlines()[0].startswith("(seq) c,t |- ")
    assert "(unitary) t |- t *= X > t" in text


def test_check_program_compares_output():
    prog = Program(env("q"), parse("discard q"), env("q"))
    with pytest.raises(EnvMismatch):
        check_program(prog)


def test_in_out_sets():
    a = analyze(parse("q *= H"))
    assert (a.in_vars, a.out_vars) == ({"q"}, {"q"})
    a = analyze(parse("new qbit q'; qcase q (0 -> skip, 1 -> q' *= X); discard q'"))
    assert (a.in_vars, a.out_vars, a.bound_vars) == ({"q"}, {"q"}, {"q'"})
    a = analyze(parse("discard p; new qbit q"))
    assert (a.in_vars, a.out_vars) == ({"p"}, {"q"})
    a = analyze(parse("meas q (0 -> skip, 1 -> skip)"))
    assert (a.in_vars, a.out_vars) == ({"q"}, {"q"})
    assert bound_vars(parse("new qbit r; r *= X; while r do skip; discard r")) == {"r"}


def test_in_out_judgment_is_minimal(make_generator):
    for seed in range(40):
        prog = make_generator(seed).program()
        a = analyze(prog.stmt)
        assert a.in_vars <= set(prog.input_env)
        frame = prog.input_env - a.in_vars
        assert check(Environment(a.in_vars), prog.stmt) | frame == prog.output_env


def test_analyze_rejects_unsatisfiable():
    with pytest.raises(NotWellFormed):
        analyze(parse("qcase q (0 -> q *= X, 1 -> skip)"))


def test_contexts():
    ctx = parse_context("new qbit p; new qbit q; new qbit r; qcase p (0 -> [q, r -> q, r], 1 -> skip); "
                        "discard p; discard q; discard r")
    assert check_context(ctx)
    prog = Program(QR, parse("q *= H"), QR)
    assert compatible(ctx, prog)

    assert not check_context(parse_context("new qbit q; [q -> q]"))
    wrong_shape = Program(QR, parse("discard r"), env("q"))
    verdict = compatible(ctx, wrong_shape)
    assert not verdict
    assert "does not fit" in verdict.reason


def test_context_may_not_touch_bound_variables():
    ctx = parse_context("new qbit q; [q -> q]; new qbit t; discard t; discard q")
    prog = Program(env("q"), parse("new qbit t; discard t"), env("q"))
    verdict = compatible(ctx, prog)
    assert not verdict
    assert "bound" in verdict.reason


def test_allocate_and_release_on_empty():
    assert check(EMPTY, parse("new qbit q; q *= H; discard q")) == EMPTY


def generated(seed: int) -> Program:
    return ProgramGenerator(np.random.default_rng(seed), loop_prob=0.5).program()


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_weakening(seed):
    prog = generated(seed)
    fresh = next(v for v in ("x", "y", "z") if v not in vars_of(prog.stmt) and v not in prog.input_env)
    assert check(prog.input_env.add(fresh), prog.stmt) == prog.output_env.add(fresh)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_uniqueness(seed):
    prog = generated(seed)
    a = analyze(prog.stmt)
    outs = {check(prog.input_env, prog.stmt), derive(prog.input_env, prog.stmt).out,
            Environment(a.out_vars) | (prog.input_env - a.in_vars)}
    assert outs == {prog.output_env}


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_decomposition_needs_every_input_and_no_bound_name(seed):
    prog = generated(seed)
    a = analyze(prog.stmt)
    for v in a.in_vars:
        with pytest.raises(WellFormednessError):
            check(prog.input_env.remove(v), prog.stmt)
    for v in vars_of(prog.stmt) - set(prog.input_env):
        with pytest.raises(WellFormednessError):
            check(prog.input_env.add(v), prog.stmt)


def test_generated_loops_nest_and_sit_in_branches():
    seen = set()
    for seed in range(2000):
        if len(seen) == 3:
            break
        gen = ProgramGenerator(np.random.default_rng(seed), loop_prob=0.5)
        prog = gen.program()
        assert check_program(prog) == prog.output_env
        loops = [node for node in iter_nodes(prog.stmt) if isinstance(node, While)]
        assert len(loops) <= gen.max_loops
        for node in iter_nodes(prog.stmt):
            if isinstance(node, (While, Meas, QCase)):
                inner = [n for child in node.children() for n in iter_nodes(child) if isinstance(n, While)]
                if inner:
                    seen.add(type(node).__name__)
    assert seen == {"While", "Meas", "QCase"}


@pytest.mark.parametrize("text, start, span", [
    ("skip;\nq *= X", "", (2, 1)),
    ("new qbit r;\n  meas r (0 -> skip, 1 -> discard r)", "", (2, 3)),
    ("while q do\n  (q *= H;\n   discard q)", "q", (1, 1)),
])
def test_errors_point_at_the_statement(text, start, span):
    with pytest.raises(WellFormednessError) as info:
        derive(env(start), parse(text))
    assert info.value.span == span
    assert info.value.message_args()["where"] == f" at {span[0]}:{span[1]}"


def test_built_statements_have_no_span():
    with pytest.raises(VarMissing) as info:
        check(EMPTY, Unitary("q", Gate.named("X")))
    assert info.value.span is None
    assert info.value.message_args()["where"] == ""
