# tests/conftest.py
"""Shared fixtures: seeded generators of states, unitaries, Kraus sets and well-formed programs."""
import io
import os
from typing import Callable, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
import pytest

from linalg.channels import KrausSet
from semantics.vacext import VacExt, kraus_to_vacext
from syntax.ast import Discard, Gate, Meas, NewQbit, Program, QCase, Seq, Skip, Statement, Unitary, While, seq
from syntax.environment import Environment

GATE_NAMES = ("I", "X", "Y", "Z", "H", "T", "S")
NAME_POOL = ("p", "q", "r", "s")

PROGRAMS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "programs")


def random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_kraus(rng: np.random.Generator, count: int, d_in: int, d_out: int,
                 strength: Optional[float] = None) -> KrausSet:
    """``count`` operators whose stacked spectral norm is ``strength`` (random in [0.6, 1] by default)."""
    a = rng.normal(size=(count * d_out, d_in)) + 1j * rng.normal(size=(count * d_out, d_in))
    s = rng.uniform(0.6, 1.0) if strength is None else strength
    a = a * (s / np.linalg.norm(a, 2))
    ops = [a[k * d_out:(k + 1) * d_out] for k in range(count)]
    return KrausSet(ops, list(random_state(rng, count)))


def random_vacext(rng: np.random.Generator, in_env: Environment, out_env: Environment, count: int = 2) -> VacExt:
    return kraus_to_vacext(random_kraus(rng, count, in_env.dim, out_env.dim), in_env, out_env)


class ProgramGenerator:
    """Random well-formed statements over a small name pool.

    Loops may sit at the top level of a program, inside ``meas`` and ``qcase``
    branches, and inside other loop bodies, at most ``max_loops`` of them per
    program. An outer loop body is unitary steps followed by ``q *= H`` on the
    loop variable, so it exits with probability 1/2 per iteration. A nested
    loop runs on a fresh qubit set to 1 and flips it back in its body, so it
    exits after exactly one iteration.
    """

    def __init__(self, rng: np.random.Generator, max_qubits: int = 3, max_depth: int = 4, max_loops: int = 2,
                 loop_prob: float = 0.35, pool: Sequence[str] = NAME_POOL):
        self.rng = rng
        self.max_qubits = max_qubits
        self.max_depth = max_depth
        self.max_loops = max_loops
        self.loop_prob = loop_prob
        self.pool = tuple(pool)
        self._loops = 0

    def _pick(self, items: Sequence):
        return items[int(self.rng.integers(len(items)))]

    def _loop_allowed(self) -> bool:
        return self._loops < self.max_loops and self.loop_prob > 0 and self.rng.random() < self.loop_prob

    def gate(self) -> Gate:
        return Gate.named(str(self._pick(GATE_NAMES)))

    def environment(self, size: int) -> Environment:
        return Environment(str(v) for v in self.rng.choice(self.pool, size, replace=False))

    @staticmethod
    def reconcile(current: Environment, target: Environment) -> List[Statement]:
        return [Discard(v) for v in current - target] + [NewQbit(v) for v in target - current]

    def statement(self, env: Environment, depth: int, avoid: FrozenSet[str] = frozenset(),
                  cap: Optional[int] = None) -> Tuple[Statement, Environment]:
        cap = self.max_qubits if cap is None else cap
        free = [v for v in self.pool if v not in env and v not in avoid]
        kinds = ["skip"]
        if env:
            kinds += ["unitary", "unitary", "discard"]
        if free and len(env) < cap:
            kinds.append("new")
        if depth > 0:
            kinds += ["seq", "seq"]
            if env:
                kinds += ["meas", "qcase"]
                if self._loop_allowed():
                    kinds.append("while")
        kind = self._pick(kinds)
        if kind == "skip":
            return Skip(), env
        if kind == "unitary":
            return Unitary(self._pick(env.vars), self.gate()), env
        if kind == "discard":
            v = self._pick(env.vars)
            return Discard(v), env.remove(v)
        if kind == "new":
            v = self._pick(free)
            return NewQbit(v), env.add(v)
        if kind == "while":
            return self.loop(env, avoid, depth - 1, cap), env
        if kind == "seq":
            s0, mid = self.statement(env, depth - 1, avoid, cap)
            s1, out = self.statement(mid, depth - 1, avoid, cap)
            return Seq(s0, s1), out
        q = self._pick(env.vars)
        if kind == "meas":
            s0, s1, out = self.branches(env, depth - 1, avoid, cap)
            return Meas(q, s0, s1), out
        s0, s1, out = self.branches(env.remove(q), depth - 1, avoid | {q}, cap - 1)
        return QCase(q, s0, s1), out.add(q)

    def branches(self, env: Environment, depth: int, avoid: FrozenSet[str] = frozenset(),
                 cap: Optional[int] = None) -> Tuple[Statement, Statement, Environment]:
        """Two statements on ``env`` ending in the same environment."""
        s0, out0 = self.statement(env, depth, avoid, cap)
        s1, out1 = self.statement(env, depth, avoid, cap)
        return s0, seq(s1, *self.reconcile(out1, out0)), out0

    def unitary_steps(self, env: Environment, depth: int, avoid: FrozenSet[str]) -> Statement:
        targets = [v for v in env if v not in avoid]
        kinds = ["skip"]
        if targets:
            kinds += ["unitary", "unitary"]
            if depth > 0:
                kinds.append("qcase")
        if depth > 0:
            kinds.append("seq")
        kind = self._pick(kinds)
        if kind == "skip":
            return Skip()
        if kind == "unitary":
            return Unitary(self._pick(targets), self.gate())
        if kind == "seq":
            return Seq(self.unitary_steps(env, depth - 1, avoid), self.unitary_steps(env, depth - 1, avoid))
        c = self._pick(targets)
        rest = env.remove(c)
        return QCase(c, self.unitary_steps(rest, depth - 1, avoid | {c}),
                     self.unitary_steps(rest, depth - 1, avoid | {c}))

    def loop(self, env: Environment, avoid: FrozenSet[str] = frozenset(), depth: int = 1,
             cap: Optional[int] = None) -> Statement:
        """``while q do (steps; q *= H)``, with an inner loop in the body while ``depth`` allows one."""
        cap = self.max_qubits if cap is None else cap
        self._loops += 1
        q = self._pick(env.vars)
        body = [self.unitary_steps(env, 2, frozenset({q}))]
        free = [v for v in self.pool if v not in env and v not in avoid]
        if depth > 0 and free and len(env) < cap and self._loop_allowed():
            self._loops += 1
            p = self._pick(free)
            inner = seq(self.unitary_steps(env.add(p), 1, frozenset({p, q})), Unitary(p, Gate.named("X")))
            body += [NewQbit(p), Unitary(p, Gate.named("X")), While(p, inner), Discard(p)]
        body.append(Unitary(q, Gate.named("H")))
        return While(q, seq(*body))

    def program(self, input_size: Optional[int] = None, min_output: int = 0) -> Program:
        while True:
            size = int(self.rng.integers(0, self.max_qubits + 1)) if input_size is None else input_size
            gamma = self.environment(size)
            env, parts = gamma, []
            self._loops = 0
            for _ in range(int(self.rng.integers(1, 4))):
                if env and self._loop_allowed():
                    parts.append(self.loop(env, depth=self.max_depth - 1))
                else:
                    s, env = self.statement(env, self.max_depth - 1)
                    parts.append(s)
            if len(env) >= min_output:
                return Program(gamma, seq(*parts), env)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240617)


@pytest.fixture
def make_generator() -> Callable[..., ProgramGenerator]:
    def build(seed: int, **kwargs) -> ProgramGenerator:
        return ProgramGenerator(np.random.default_rng(seed), **kwargs)
    return build


@pytest.fixture
def program_file(tmp_path) -> Callable[[str, str], str]:
    def write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


@pytest.fixture
def corpus() -> Callable[[str], str]:
    def path(name: str) -> str:
        return os.path.join(PROGRAMS_DIR, name)
    return path


@pytest.fixture
def run_cli() -> Callable[..., Tuple[int, str, str]]:
    from main import main

    def run(*argv: str) -> Tuple[int, str, str]:
        out, err = io.StringIO(), io.StringIO()
        code = main(list(argv), out=out, err=err)
        return code, out.getvalue(), err.getvalue()
    return run
