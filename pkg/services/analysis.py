# services/analysis.py
"""Checks that tie the two semantics together, and observational equivalence."""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from config import DEFAULT_FUEL
from errors import EnvMismatch, IllFormed, NotDistinct, ZeroInput
from semantics.densem import LfpConfig, denote, denote_statement, qcase_bar
from semantics.opsem import Configuration, evaluate
from semantics.vacext import VacExt
from semantics.wellformed import compatible
from services.gadgets import FreshNames, discard_qbits, loop, meas_zero, new_qbits
from services.synth import state_preparation, unitary_to_program
from syntax.ast import Context, Hole, Program, QCase, Statement, seq, substitute, vars_of
from syntax.environment import EMPTY, Environment

logger = logging.getLogger(__name__)

EQUIV_TOL = 1e-9


def _as_state(psi: np.ndarray) -> np.ndarray:
    return np.asarray(psi, dtype=complex).reshape(-1)


# --- adequacy ---------------------------------------------------------------

@dataclass(frozen=True)
class AdequacyReport:
    density_residual: float
    transform_residual: float
    truncated_mass: float
    verdict: bool


def check_adequacy(prog: Program, psi: np.ndarray, fuel: int = DEFAULT_FUEL, tol: float = 1e-6,
                   prune_eps: Optional[float] = None, cfg: Optional[LfpConfig] = None) -> AdequacyReport:
    """Compare C(psi psi^dagger) and F psi with the output ensemble of ``prog`` on ``psi``."""
    psi = _as_state(psi)
    v = denote(prog, cfg)
    ens = evaluate(Configuration(prog.stmt, psi, prog.input_env), fuel, prune_eps)
    expected_rho = v.apply(np.outer(psi, psi.conj()))
    density_residual = float(np.max(np.abs(expected_rho - ens.density()), initial=0.0))
    transform_residual = float(np.max(np.abs(v.transform @ psi - ens.weighted_sum()), initial=0.0))
    verdict = density_residual <= tol + ens.truncated_mass and transform_residual <= tol
    if not verdict:
        logger.warning(f"Adequacy fails: density residual {density_residual:.3e}, "
                       f"transform residual {transform_residual:.3e}, truncated {ens.truncated_mass:.3e}")
    return AdequacyReport(density_residual, transform_residual, ens.truncated_mass, verdict)


def probability_denotational(prog: Program, psi: np.ndarray, cfg: Optional[LfpConfig] = None) -> float:
    """Tr C(psi psi^dagger) / Tr(psi psi^dagger)."""
    psi = _as_state(psi)
    norm2 = float(np.vdot(psi, psi).real)
    if norm2 <= 0:
        raise ZeroInput()
    rho = np.outer(psi, psi.conj())
    return float(np.trace(denote(prog, cfg).apply(rho)).real) / norm2


# --- equivalence ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Witness:
    """A closing context, the input it prepares, and the termination-probability gap it exposes."""

    context: Context
    psi: np.ndarray
    p_gap: float
    predicted: float
    wrapped: bool = False


@dataclass(frozen=True, eq=False)
class EquivVerdict:
    equivalent: bool
    distance: float
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.equivalent


def _same_shape(p1: Program, p2: Program):
    if (p1.input_env, p1.output_env) != (p2.input_env, p2.output_env):
        raise EnvMismatch(f"cannot compare {p1.input_env} -> {p1.output_env} with "
                          f"{p2.input_env} -> {p2.output_env}")


def equivalent(p1: Program, p2: Program, tol: float = EQUIV_TOL, cfg: Optional[LfpConfig] = None) -> EquivVerdict:
    """Observational equivalence, decided on denotations."""
    _same_shape(p1, p2)
    d1, d2 = denote(p1, cfg), denote(p2, cfg)
    distance = d1.max_abs_diff(d2)
    if distance <= tol:
        logger.info(f"Programs are equivalent (distance {distance:.3e})")
        return EquivVerdict(True, distance)
    witness = _distinguish(p1, p2, d1, d2, tol, cfg)
    logger.info(f"Programs differ (distance {distance:.3e}), witness gap {witness.p_gap:.3e}")
    return EquivVerdict(False, distance, witness)


def make_distinguisher(p1: Program, p2: Program, tol: float = EQUIV_TOL,
                       cfg: Optional[LfpConfig] = None) -> Tuple[Context, float]:
    """A compatible context whose termination probability differs on the two programs, and the gap."""
    _same_shape(p1, p2)
    d1, d2 = denote(p1, cfg), denote(p2, cfg)
    witness = _distinguish(p1, p2, d1, d2, tol, cfg)
    return witness.context, witness.p_gap


def _distinguish(p1: Program, p2: Program, d1: VacExt, d2: VacExt, tol: float,
                 cfg: Optional[LfpConfig]) -> Witness:
    fresh = FreshNames(vars_of(p1.stmt) | vars_of(p2.stmt) | set(p1.input_env) | set(p1.output_env))
    if d1.channel.max_abs_diff(d2.channel) > tol:
        ctx, psi, lam = _channel_context(d1, d2, fresh)
        return Witness(ctx, psi, abs(lam), lam)
    if float(np.max(np.abs(d1.transform - d2.transform), initial=0.0)) <= tol:
        raise NotDistinct(f"denotations agree within {tol}")
    # equal channels: put both programs under a quantum case against the same padding statement
    gamma, delta = p1.input_env, p1.output_env
    r = fresh()
    pad = padding(gamma, delta)
    d_pad = denote_statement(gamma, pad, cfg)
    w1, w2 = qcase_bar(r, d1, d_pad), qcase_bar(r, d2, d_pad)
    outer, psi, lam = _channel_context(w1, w2, fresh)
    ctx = substitute(outer, QCase(r, Hole(gamma, delta), pad))
    return Witness(ctx, psi, abs(lam), lam, wrapped=True)


def padding(gamma: Environment, delta: Environment) -> Statement:
    """Gamma -> Delta by preparing the new outputs and discarding the dropped inputs."""
    return seq(new_qbits((delta - gamma).vars), discard_qbits((gamma - delta).vars))


def candidate_inputs(d: int) -> List[np.ndarray]:
    """Basis states and the two equal superpositions of every pair: they span all d x d operators."""
    eye = np.eye(d, dtype=complex)
    out = [eye[i] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            out.append((eye[i] + eye[j]) / np.sqrt(2))
            out.append((eye[i] + 1j * eye[j]) / np.sqrt(2))
    return out


def _leading(m: np.ndarray) -> Tuple[float, np.ndarray]:
    values, vectors = scipy.linalg.eigh((m + m.conj().T) / 2)
    k = int(np.argmax(np.abs(values)))
    return float(values[k]), vectors[:, k]


def _channel_context(d1: VacExt, d2: VacExt, fresh: FreshNames) -> Tuple[Context, np.ndarray, float]:
    """Prepare psi, run the hole, rotate the leading eigenvector of the output gap onto |0...0>, test it."""
    gamma, delta = d1.in_env, d1.out_env
    best = None
    for psi in candidate_inputs(gamma.dim):
        rho = np.outer(psi, psi.conj())
        lam, vec = _leading(d1.apply(rho) - d2.apply(rho))
        if best is None or abs(lam) > abs(best[1]):
            best = (psi, lam, vec)
    psi, lam, vec = best
    logger.debug(f"distinguishing input found on {gamma} with eigenvalue gap {lam:.3e}")
    prepare = unitary_to_program(state_preparation(psi), gamma, fresh)
    rotate = unitary_to_program(state_preparation(vec).conj().T, delta, fresh)
    ctx = seq(new_qbits(gamma.vars), prepare, Hole(gamma, delta), rotate,
              meas_zero(delta.vars, seq(), loop(fresh())), discard_qbits(delta.vars))
    return ctx, psi, lam


def context_probability(ctx: Context, prog: Program, cfg: Optional[LfpConfig] = None) -> float:
    """p(C[S], |>) through the denotation of the context with the program's denotation in its hole."""
    verdict = compatible(ctx, prog)
    if not verdict:
        raise IllFormed(f"context is not compatible with the program: {verdict.reason}")
    closed = denote_statement(EMPTY, ctx, cfg, hole=denote(prog, cfg))
    return float(closed.apply(np.ones((1, 1), dtype=complex))[0, 0].real)
