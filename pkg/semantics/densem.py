# semantics/densem.py
import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from config import LFP_MAX_ITER, LFP_TOL
from errors import (ControlInEnv, EnvMismatch, IllFormed, NonConvergence, NotWellFormed, VarMissing,
                    WellFormednessError)
from linalg.channels import Superoperator
from linalg.operators import BRA0, BRA1, KET0, PROJ0, PROJ1, embed_on, reorder_matrix
from semantics.vacext import VacExt, lift
from semantics.wellformed import check_program, derive
from syntax.ast import (Discard, Gate, Hole, Meas, NewQbit, Program, QCase, Seq, Skip, Statement, Unitary, While,
                        iter_nodes, steps_of, vars_of)
from syntax.environment import Environment

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LfpConfig:
    tol: float = LFP_TOL
    max_iter: int = LFP_MAX_ITER

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")


@dataclass(frozen=True)
class FixpointReport:
    var: str
    env: Environment
    iterations: int
    residual: float
    converged: bool


# --- primitives -------------------------------------------------------------

def identity(env: Environment) -> VacExt:
    return VacExt(Superoperator.identity(env.dim), np.eye(env.dim, dtype=complex), env, env)


def zero(in_env: Environment, out_env: Environment) -> VacExt:
    return VacExt(Superoperator.zero(in_env.dim, out_env.dim),
                  np.zeros((out_env.dim, in_env.dim), dtype=complex), in_env, out_env)


def new_qbit(q: str, env: Environment) -> VacExt:
    out = env.add(q)
    ket = embed_on(q, out, KET0)
    return VacExt(Superoperator.sandwich(ket), ket, env, out)


def discard(q: str, env: Environment) -> VacExt:
    """(Tr_q, <0|_q): the 0 outcome is the default transition."""
    out = env.remove(q)
    bras = [embed_on(q, env, BRA0), embed_on(q, env, BRA1)]
    return VacExt(Superoperator.from_kraus(bras), bras[0], env, out)


def unitary(q: str, gate: Gate, env: Environment) -> VacExt:
    u = embed_on(q, env, gate.matrix)
    return VacExt(Superoperator.sandwich(u), u, env, env)


def measure_zero(vs: Sequence[str], env: Environment) -> Tuple[VacExt, VacExt]:
    """Projective test of ``vs`` against |0...0>: the all-zero branch and the complement."""
    for v in vs:
        if v not in env:
            raise VarMissing(v)
    positions = [env.index(v) for v in vs]
    n = len(env)
    patterns = {}
    for x in range(env.dim):
        key = tuple((x >> (n - 1 - pos)) & 1 for pos in positions)
        patterns.setdefault(key, []).append(x)
    projectors = {}
    for key, indices in patterns.items():
        p = np.zeros((env.dim, env.dim), dtype=complex)
        p[indices, indices] = 1
        projectors[key] = p
    p_zero = projectors.pop(tuple(0 for _ in vs))
    # one Kraus operator per nonzero outcome pattern
    rest = Superoperator.from_kraus(list(projectors.values())) if projectors else Superoperator.zero(env.dim, env.dim)
    hit = VacExt(Superoperator.sandwich(p_zero), p_zero, env, env)
    miss = VacExt(rest, np.zeros((env.dim, env.dim), dtype=complex), env, env)
    return hit, miss


# --- combinators ------------------------------------------------------------

def compose(d2: VacExt, d1: VacExt) -> VacExt:
    """(D, G) . (C, F) = (D . C, G F)."""
    if d1.out_env != d2.in_env:
        raise EnvMismatch(f"cannot compose {d1.in_env}->{d1.out_env} with {d2.in_env}->{d2.out_env}")
    return VacExt(d2.channel @ d1.channel, d2.transform @ d1.transform, d1.in_env, d2.out_env)


def meas_bar(q: str, d0: VacExt, d1: VacExt) -> VacExt:
    if (d0.in_env, d0.out_env) != (d1.in_env, d1.out_env):
        raise EnvMismatch(f"measurement branches map {d0.in_env}->{d0.out_env} and {d1.in_env}->{d1.out_env}")
    env = d0.in_env
    if q not in env:
        raise VarMissing(q)
    p0, p1 = embed_on(q, env, PROJ0), embed_on(q, env, PROJ1)
    channel = d0.channel @ Superoperator.sandwich(p0) + d1.channel @ Superoperator.sandwich(p1)
    return VacExt(channel, d0.transform @ p0, env, d0.out_env)


def qcase_bar(q: str, d0: VacExt, d1: VacExt) -> VacExt:
    """Quantum case: [[A, B], [C, D]] -> [[C0(A), F0 B F1^dagger], [F1 C F0^dagger, C1(D)]]."""
    if (d0.in_env, d0.out_env) != (d1.in_env, d1.out_env):
        raise EnvMismatch(f"qcase branches map {d0.in_env}->{d0.out_env} and {d1.in_env}->{d1.out_env}")
    if q in d0.in_env or q in d0.out_env:
        raise ControlInEnv(f"control {q} occurs in {d0.in_env} -> {d0.out_env}")
    di, do = d0.d_in, d0.d_out
    f0, f1 = d0.transform, d1.transform
    n = np.zeros((2, do, 2, do, 2, di, 2, di), dtype=complex)
    n[0, :, 0, :, 0, :, 0, :] = d0.channel.natural()
    n[1, :, 1, :, 1, :, 1, :] = d1.channel.natural()
    n[0, :, 1, :, 0, :, 1, :] = np.einsum("ki,lj->klij", f0, f1.conj())
    n[1, :, 0, :, 1, :, 0, :] = np.einsum("ki,lj->klij", f1, f0.conj())
    channel = Superoperator.from_natural(n.reshape(2 * do, 2 * do, 2 * di, 2 * di))
    transform = scipy.linalg.block_diag(f0, f1)
    return VacExt.from_layout(channel, transform, [q] + list(d0.in_env.vars), [q] + list(d0.out_env.vars))


def while_step(q: str, body: VacExt, current: VacExt) -> VacExt:
    """One application of X -> meas_q[(I, I), X . body]."""
    return meas_bar(q, identity(body.in_env), compose(current, body))


def kleene_iterates(q: str, body: VacExt) -> Iterator[VacExt]:
    """(0, 0), step(0, 0), step(step(0, 0)), ... without end."""
    current = zero(body.in_env, body.out_env)
    while True:
        yield current
        current = while_step(q, body, current)


def lfp(q: str, body: VacExt, cfg: Optional[LfpConfig] = None) -> Tuple[VacExt, FixpointReport]:
    """Least fixed point of the loop functional, iterated until the max-entry change drops below ``tol``.

    Raises NonConvergence (carrying the last iterate, a lower bound) after ``max_iter`` steps.
    """
    cfg = cfg or LfpConfig()
    iterates = kleene_iterates(q, body)
    current = next(iterates)
    residual = float("inf")
    for iteration, nxt in enumerate(iterates, start=1):
        residual = nxt.max_abs_diff(current)
        logger.debug(f"lfp on {q}: iteration {iteration}, residual {residual:.3e}")
        current = nxt
        if residual == 0.0 or residual < cfg.tol:
            logger.info(f"Fixpoint for loop on {q} reached after {iteration} iterations")
            return current, FixpointReport(q, body.in_env, iteration, residual, True)
        if iteration >= cfg.max_iter:
            logger.warning(f"Loop on {q} did not converge in {iteration} iterations (residual {residual:.3e})")
            raise NonConvergence(residual, iteration, result=current)
    raise AssertionError("kleene_iterates is infinite")


# --- statements -------------------------------------------------------------

class Denoter:
    """Structural denotation of statements; records one report per loop it solves.

    Compound statements are denoted on the variables they touch and lifted to
    the rest of the environment. Runs of pure steps (skip, new qbit, unitaries
    and quantum cases over them) are multiplied as matrices and turned into a
    superoperator once.
    """

    def __init__(self, cfg: Optional[LfpConfig] = None, hole: Optional[VacExt] = None):
        self.cfg = cfg or LfpConfig()
        self.hole = hole
        self.reports: List[FixpointReport] = []

    def denote(self, env: Environment, s: Statement) -> VacExt:
        if isinstance(s, (Seq, QCase)) and is_pure(s):
            k, out = self._pure(env, s)
            return VacExt(Superoperator.sandwich(k), k, env, out)
        if isinstance(s, (Seq, Meas, QCase, While)):
            frame = env - touched(s)
            if frame:
                return lift(self.denote(env - frame, s), frame)
        if isinstance(s, Skip):
            return identity(env)
        if isinstance(s, NewQbit):
            return new_qbit(s.var, env)
        if isinstance(s, Discard):
            return discard(s.var, env)
        if isinstance(s, Unitary):
            return unitary(s.var, s.gate, env)
        if isinstance(s, Seq):
            return self._denote_steps(env, steps_of(s))
        if isinstance(s, Meas):
            return meas_bar(s.var, self.denote(env, s.s0), self.denote(env, s.s1))
        if isinstance(s, QCase):
            rest = env.remove(s.var)
            return qcase_bar(s.var, self.denote(rest, s.s0), self.denote(rest, s.s1))
        if isinstance(s, While):
            result, report = lfp(s.var, self.denote(env, s.body), self.cfg)
            self.reports.append(report)
            return result
        if isinstance(s, Hole):
            return self._denote_hole(env, s)
        raise TypeError(f"not a statement: {s!r}")

    def _denote_steps(self, env: Environment, steps: Sequence[Statement]) -> VacExt:
        result: Optional[VacExt] = None
        run: Optional[np.ndarray] = None
        run_in = current = env
        for step in steps:
            if is_pure(step):
                k, current_out = self._pure(current, step)
                run = k if run is None else k @ run
                current = current_out
                continue
            if run is not None:
                done = VacExt(Superoperator.sandwich(run), run, run_in, current)
                result = done if result is None else compose(done, result)
                run = None
            d = self.denote(current, step)
            result = d if result is None else compose(d, result)
            run_in = current = d.out_env
        if run is not None:
            done = VacExt(Superoperator.sandwich(run), run, run_in, current)
            result = done if result is None else compose(done, result)
        return result

    def _pure(self, env: Environment, s: Statement) -> Tuple[np.ndarray, Environment]:
        """(K, out) with (K . K^dagger, K) the denotation of the pure statement ``s``."""
        if isinstance(s, Skip):
            return np.eye(env.dim, dtype=complex), env
        if isinstance(s, Unitary):
            return embed_on(s.var, env, s.gate.matrix), env
        if isinstance(s, NewQbit):
            out = env.add(s.var)
            return embed_on(s.var, out, KET0), out
        if isinstance(s, Seq):
            k0, mid = self._pure(env, s.s0)
            k1, out = self._pure(mid, s.s1)
            return k1 @ k0, out
        if isinstance(s, QCase):
            rest = env.remove(s.var)
            (k0, out0), (k1, out1) = self._pure(rest, s.s0), self._pure(rest, s.s1)
            if out0 != out1:
                raise EnvMismatch(f"qcase branches map {rest}->{out0} and {rest}->{out1}")
            if s.var in out0:
                raise ControlInEnv(f"control {s.var} occurs in {rest} -> {out0}")
            p_in = reorder_matrix([s.var] + list(rest.vars))
            p_out = reorder_matrix([s.var] + list(out0.vars))
            return p_out @ scipy.linalg.block_diag(k0, k1) @ p_in.conj().T, out0.add(s.var)
        raise TypeError(f"not a pure statement: {s!r}")

    def _denote_hole(self, env: Environment, h: Hole) -> VacExt:
        if self.hole is None:
            raise IllFormed("the context hole has no denotation to plug in")
        if (self.hole.in_env, self.hole.out_env) != (h.in_env, h.out_env):
            raise EnvMismatch(f"hole [{h.in_env} -> {h.out_env}] filled with "
                              f"{self.hole.in_env} -> {self.hole.out_env}")
        return lift(self.hole, env - h.in_env)


def denote_statement(env: Environment, s: Statement, cfg: Optional[LfpConfig] = None,
                     hole: Optional[VacExt] = None) -> VacExt:
    derive(env, s)
    return Denoter(cfg, hole).denote(env, s)


def denote(prog: Program, cfg: Optional[LfpConfig] = None) -> VacExt:
    try:
        check_program(prog)
    except WellFormednessError as e:
        raise NotWellFormed(str(e), e.span) from e
    return Denoter(cfg).denote(prog.input_env, prog.stmt)


def is_pure(s: Statement) -> bool:
    """True when ``s`` is built from skip, new qbit, unitaries, sequences and quantum cases only."""
    return all(isinstance(node, (Skip, NewQbit, Unitary, Seq, QCase)) for node in iter_nodes(s))


def touched(s: Statement) -> Environment:
    """Var(S) together with the environments of the holes in ``s``."""
    found = set(vars_of(s))
    for node in iter_nodes(s):
        if isinstance(node, Hole):
            found.update(node.in_env.vars + node.out_env.vars)
    return Environment(found)
