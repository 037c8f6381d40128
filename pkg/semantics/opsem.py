# semantics/opsem.py
"""Big-step evaluation: every derivable transition with its default bit.

``while`` nodes are unrolled a bounded number of times: ``fuel`` counts the
iterations of a node, the exiting one included, so at most ``fuel - 1`` body
executions happen per entry into the node. The squared norm of the states left
inside unexpanded iterations is reported as ``truncated_mass``. A
loop whose pending states stop changing while emitting nothing is recognised as
divergent and its mass is reported separately, since it can never terminate.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from config import DEFAULT_FUEL
from errors import IllFormed, WellFormednessError, ZeroInput
from linalg.operators import BRA0, BRA1, KET0, KET1, PROJ0, PROJ1, embed_on
from semantics.wellformed import check, check_program
from syntax.ast import Discard, Hole, Meas, NewQbit, Program, QCase, Seq, Skip, Statement, Unitary, While
from syntax.environment import Environment

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12

_MATRICES = {"ket0": KET0, "ket1": KET1, "bra0": BRA0, "bra1": BRA1, "proj0": PROJ0, "proj1": PROJ1}


@lru_cache(maxsize=1024)
def _embedded(q: str, env: Environment, which: str) -> np.ndarray:
    return embed_on(q, env, _MATRICES[which])


@dataclass(frozen=True, eq=False)
class Value:
    state: np.ndarray
    default: int

    @property
    def mass(self) -> float:
        return float(np.vdot(self.state, self.state).real)

    def __repr__(self) -> str:
        return f"Value({np.round(self.state, 6).tolist()}, {self.default})"


@dataclass(frozen=True, eq=False)
class Configuration:
    stmt: Statement
    state: np.ndarray
    env: Environment

    def __post_init__(self):
        psi = np.asarray(self.state, dtype=complex).reshape(-1)
        if psi.shape[0] != self.env.dim:
            raise IllFormed(f"state of size {psi.shape[0]} does not live on {self.env}")
        if np.linalg.norm(psi) > 1 + NORM_TOL:
            raise IllFormed(f"state norm {np.linalg.norm(psi):.6f} exceeds 1")
        try:
            check(self.env, self.stmt)
        except WellFormednessError as e:
            raise IllFormed(f"statement is not well-formed on {self.env}: {e}") from e
        object.__setattr__(self, "state", psi)


@dataclass
class OutputEnsemble:
    items: List[Value]
    out_env: Environment
    truncated_mass: float = 0.0
    divergent_mass: float = 0.0

    @property
    def mass(self) -> float:
        return sum(v.mass for v in self.items)

    def defaults(self) -> List[Value]:
        return [v for v in self.items if v.default == 1]

    def density(self) -> np.ndarray:
        d = self.out_env.dim
        rho = np.zeros((d, d), dtype=complex)
        for v in self.items:
            rho += np.outer(v.state, v.state.conj())
        return rho

    def weighted_sum(self) -> np.ndarray:
        """sum_i nu_i psi_i."""
        total = np.zeros(self.out_env.dim, dtype=complex)
        for v in self.items:
            if v.default:
                total += v.state
        return total


@dataclass
class _Partial:
    items: List[Tuple[np.ndarray, int]] = field(default_factory=list)
    truncated: float = 0.0
    divergent: float = 0.0


class Evaluator:
    def __init__(self, fuel: int = DEFAULT_FUEL, prune_eps: Optional[float] = None):
        if fuel < 1:
            raise ValueError(f"fuel must be at least 1, got {fuel}")
        if prune_eps is not None and prune_eps < 0:
            raise ValueError(f"prune_eps must be non-negative, got {prune_eps}")
        self.fuel = fuel
        self.prune_eps = prune_eps

    def run(self, cfg: Configuration) -> OutputEnsemble:
        out_env = check(cfg.env, cfg.stmt)
        part = self._eval(cfg.env, cfg.stmt, cfg.state)
        items = [Value(state, nu) for state, nu in part.items]
        logger.debug(f"{len(items)} values, truncated {part.truncated:.3e}, divergent {part.divergent:.3e}")
        return OutputEnsemble(items, out_env, part.truncated, part.divergent)

    def _keep(self, part: _Partial, state: np.ndarray, nu: int):
        if nu == 0:
            if not np.any(state):
                return
            if self.prune_eps is not None:
                mass = float(np.vdot(state, state).real)
                if mass < self.prune_eps:
                    part.truncated += mass
                    return
        part.items.append((state, nu))

    def _eval(self, env: Environment, s: Statement, psi: np.ndarray) -> _Partial:
        part = _Partial()
        if isinstance(s, Skip):
            self._keep(part, psi, 1)
        elif isinstance(s, NewQbit):
            self._keep(part, _embedded(s.var, env.add(s.var), "ket0") @ psi, 1)
        elif isinstance(s, Discard):
            self._keep(part, _embedded(s.var, env, "bra0") @ psi, 1)
            self._keep(part, _embedded(s.var, env, "bra1") @ psi, 0)
        elif isinstance(s, Unitary):
            self._keep(part, embed_on(s.var, env, s.gate.matrix) @ psi, 1)
        elif isinstance(s, Seq):
            mid_env = check(env, s.s0)
            first = self._eval(env, s.s0, psi)
            part.truncated, part.divergent = first.truncated, first.divergent
            for state, nu in first.items:
                second = self._eval(mid_env, s.s1, state)
                part.truncated += second.truncated
                part.divergent += second.divergent
                for state2, mu in second.items:
                    self._keep(part, state2, nu * mu)
        elif isinstance(s, Meas):
            for branch, proj, forced in ((s.s0, "proj0", None), (s.s1, "proj1", 0)):
                sub = self._eval(env, branch, _embedded(s.var, env, proj) @ psi)
                part.truncated += sub.truncated
                part.divergent += sub.divergent
                for state, nu in sub.items:
                    self._keep(part, state, nu if forced is None else forced)
        elif isinstance(s, While):
            self._eval_while(env, s, psi, part)
        elif isinstance(s, QCase):
            self._eval_qcase(env, s, psi, part)
        elif isinstance(s, Hole):
            raise IllFormed("cannot evaluate a context hole")
        else:
            raise TypeError(f"not a statement: {s!r}")
        return part

    def _eval_while(self, env: Environment, s: While, psi: np.ndarray, part: _Partial):
        p0, p1 = _embedded(s.var, env, "proj0"), _embedded(s.var, env, "proj1")
        self._keep(part, p0 @ psi, 1)
        frontier = self._live([p1 @ psi], part)
        for _ in range(self.fuel - 1):
            if not frontier:
                return
            produced, pending = False, []
            for phi in frontier:
                body = self._eval(env, s.body, phi)
                part.truncated += body.truncated
                part.divergent += body.divergent
                for state, _nu in body.items:
                    exit_state = p0 @ state
                    produced = produced or bool(np.any(exit_state))
                    self._keep(part, exit_state, 0)
                    pending.append(p1 @ state)
            pending = self._live(pending, part)
            if not produced and _same_states(pending, frontier):
                mass = sum(float(np.vdot(phi, phi).real) for phi in pending)
                logger.debug(f"loop on {s.var} cycles without exiting; {mass:.3e} diverges")
                part.divergent += mass
                return
            frontier = pending
        part.truncated += sum(float(np.vdot(phi, phi).real) for phi in frontier)

    def _live(self, states: List[np.ndarray], part: _Partial) -> List[np.ndarray]:
        live = []
        for phi in states:
            if not np.any(phi):
                continue
            if self.prune_eps is not None:
                mass = float(np.vdot(phi, phi).real)
                if mass < self.prune_eps:
                    part.truncated += mass
                    continue
            live.append(phi)
        return live

    def _eval_qcase(self, env: Environment, s: QCase, psi: np.ndarray, part: _Partial):
        rest = env.remove(s.var)
        out_env = check(rest, s.s0).add(s.var)
        left = self._eval(rest, s.s0, _embedded(s.var, env, "bra0") @ psi)
        right = self._eval(rest, s.s1, _embedded(s.var, env, "bra1") @ psi)
        part.truncated += left.truncated + right.truncated
        part.divergent += left.divergent + right.divergent
        k0, k1 = _embedded(s.var, out_env, "ket0"), _embedded(s.var, out_env, "ket1")
        for a, nu0 in left.items:
            for b, nu1 in right.items:
                self._keep(part, nu1 * (k0 @ a) + nu0 * (k1 @ b), nu0 * nu1)


def _same_states(xs: List[np.ndarray], ys: List[np.ndarray]) -> bool:
    return len(xs) == len(ys) and all(np.array_equal(x, y) for x, y in zip(xs, ys))


def evaluate(cfg: Configuration, fuel: int = DEFAULT_FUEL, prune_eps: Optional[float] = None) -> OutputEnsemble:
    return Evaluator(fuel, prune_eps).run(cfg)


def probability(prog: Program, psi: np.ndarray, fuel: int = DEFAULT_FUEL,
                prune_eps: Optional[float] = None) -> Tuple[float, float]:
    """Bracket [p_lower, p_upper] around the probability of termination."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    norm2 = float(np.vdot(psi, psi).real)
    if norm2 <= 0:
        raise ZeroInput()
    check_program(prog)
    ens = evaluate(Configuration(prog.stmt, psi / np.sqrt(norm2), prog.input_env), fuel, prune_eps)
    return ens.mass, ens.mass + ens.truncated_mass


def default_value(cfg: Configuration) -> Value:
    """The unique value with default bit 1, following only default rules (no fuel needed)."""
    return Value(_default_state(cfg.env, cfg.stmt, cfg.state), 1)


def _default_state(env: Environment, s: Statement, psi: np.ndarray) -> np.ndarray:
    if isinstance(s, Skip):
        return psi
    if isinstance(s, NewQbit):
        return _embedded(s.var, env.add(s.var), "ket0") @ psi
    if isinstance(s, Discard):
        return _embedded(s.var, env, "bra0") @ psi
    if isinstance(s, Unitary):
        return embed_on(s.var, env, s.gate.matrix) @ psi
    if isinstance(s, Seq):
        return _default_state(check(env, s.s0), s.s1, _default_state(env, s.s0, psi))
    if isinstance(s, Meas):
        return _default_state(env, s.s0, _embedded(s.var, env, "proj0") @ psi)
    if isinstance(s, While):
        return _embedded(s.var, env, "proj0") @ psi
    if isinstance(s, QCase):
        rest = env.remove(s.var)
        out_env = check(rest, s.s0).add(s.var)
        a = _default_state(rest, s.s0, _embedded(s.var, env, "bra0") @ psi)
        b = _default_state(rest, s.s1, _embedded(s.var, env, "bra1") @ psi)
        return _embedded(s.var, out_env, "ket0") @ a + _embedded(s.var, out_env, "ket1") @ b
    raise IllFormed(f"no default transition for {type(s).__name__}")


def prune(ens: OutputEnsemble, tol: float) -> OutputEnsemble:
    """Drop non-default values of norm at most ``tol``."""
    kept = [v for v in ens.items if v.default == 1 or np.linalg.norm(v.state) > tol]
    return OutputEnsemble(kept, ens.out_env, ens.truncated_mass, ens.divergent_mass)


def ensemble_matches(a: OutputEnsemble, b: OutputEnsemble, tol: float = 1e-9) -> bool:
    """Multiset equality of the values up to ``tol`` per amplitude, after pruning."""
    if a.out_env != b.out_env:
        return False
    left, right = prune(a, tol).items, list(prune(b, tol).items)
    if len(left) != len(right):
        return False
    for v in left:
        for k, w in enumerate(right):
            if v.default == w.default and np.max(np.abs(v.state - w.state), initial=0.0) <= tol:
                del right[k]
                break
        else:
            return False
    return True
