# services/synth.py
"""Compile a vacuum-extended operation into a program with that denotation.

The route: Kraus operators of the extended map -> one stacked sub-unitary U on
input -> ancillas (x) output -> completed to a unitary and decomposed into
multi-controlled single-qubit gates written as nested ``qcase`` -> ancillas
rotated so that the vacuum state becomes |0...0> and discarded.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from errors import InvalidVacExt, NotSubUnitary, NotUnitary, ShapeMismatch
from linalg.channels import KrausSet, Superoperator, loewner_leq, psd_sqrt
from linalg.operators import reorder_matrix
from semantics.vacext import VacExt, validate, vacext_to_kraus
from services.gadgets import (FreshNames, discard_qbits, loop, meas_zero, multi_rename, new_qbits, phase)
from syntax.ast import Gate, Program, QCase, Skip, Statement, Unitary, seq
from syntax.environment import Environment, sort_vars

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-9
IDENTITY_TOL = 1e-14


def _is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return u.shape[0] == u.shape[1] and float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[1])))) <= tol


def _nearest_unitary(m: np.ndarray) -> np.ndarray:
    w, _, vh = scipy.linalg.svd(m)
    return w @ vh


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _next_power_of_two(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def _qubits(dim: int) -> int:
    return dim.bit_length() - 1


# --- two-level decomposition ------------------------------------------------

@dataclass(frozen=True, eq=False)
class TwoLevelFactor:
    """Unitary acting as ``core`` on span{|i>, |j>} and as identity elsewhere.

    ``i`` and ``j`` differ in exactly one bit, which is 0 in ``i``.
    """

    i: int
    j: int
    core: np.ndarray

    @classmethod
    def between(cls, a: int, b: int, core: np.ndarray) -> "TwoLevelFactor":
        diff = a ^ b
        if diff == 0 or diff & (diff - 1):
            raise ValueError(f"basis indices {a} and {b} must differ in exactly one bit")
        core = np.asarray(core, dtype=complex)
        if a & diff:
            return cls(b, a, core[::-1, ::-1])
        return cls(a, b, core)

    @property
    def bit(self) -> int:
        return (self.i ^ self.j).bit_length() - 1

    def matrix(self, d: int) -> np.ndarray:
        m = np.eye(d, dtype=complex)
        idx = [self.i, self.j]
        m[np.ix_(idx, idx)] = self.core
        return m

    def is_identity(self) -> bool:
        return float(np.max(np.abs(self.core - np.eye(2)))) <= IDENTITY_TOL


def gray_code(n: int) -> List[int]:
    return [k ^ (k >> 1) for k in range(2 ** n)]


def two_level_decompose(u: np.ndarray) -> List[TwoLevelFactor]:
    """Factors in application order: ``reconstruct(factors, d)`` gives back ``u``.

    Rows are eliminated in Gray-code order, so each factor mixes two basis
    states one bit apart.
    """
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    if u.shape != (d, d) or not _is_power_of_two(d) or d < 2:
        raise ShapeMismatch(f"two-level decomposition needs a 2^n x 2^n matrix with n >= 1, got {u.shape}")
    if not _is_unitary(u):
        raise NotUnitary("two-level decomposition of a non-unitary matrix")
    order = gray_code(_qubits(d))
    w = u[np.ix_(order, order)]
    eliminations: List[TwoLevelFactor] = []
    for col in range(d - 1):
        for row in range(d - 1, col, -1):
            x, y = w[row - 1, col], w[row, col]
            if abs(y) <= IDENTITY_TOL:
                continue
            norm = np.sqrt(abs(x) ** 2 + abs(y) ** 2)
            g = np.array([[np.conj(x), np.conj(y)], [-y, x]], dtype=complex) / norm
            w[[row - 1, row], :] = g @ w[[row - 1, row], :]
            eliminations.append(TwoLevelFactor.between(order[row - 1], order[row], g))
    diagonal = np.ones(d, dtype=complex)
    diagonal[order] = np.diag(w)
    diagonal /= np.abs(diagonal)
    factors = []
    for k in range(0, d, 2):
        core = np.diag(diagonal[k:k + 2])
        factors.append(TwoLevelFactor(k, k + 1, core))
    factors += [TwoLevelFactor(g.i, g.j, g.core.conj().T) for g in reversed(eliminations)]
    return [f for f in factors if not f.is_identity()]


def reconstruct(factors: Sequence[TwoLevelFactor], d: int) -> np.ndarray:
    m = np.eye(d, dtype=complex)
    for f in factors:
        m = f.matrix(d) @ m
    return m


def _merged(factors: Sequence[TwoLevelFactor]) -> List[TwoLevelFactor]:
    out: List[TwoLevelFactor] = []
    for f in factors:
        if out and (out[-1].i, out[-1].j) == (f.i, f.j):
            prev = out.pop()
            f = TwoLevelFactor(f.i, f.j, f.core @ prev.core)
        if not f.is_identity():
            out.append(f)
    return out


# --- unitaries --------------------------------------------------------------

def controlled_gate(target: str, controls: Dict[str, int], core: np.ndarray) -> Statement:
    """``core`` on ``target`` when every control reads its bit; 0-controls are X-conjugated."""
    gate = Gate.from_matrix(_nearest_unitary(np.asarray(core, dtype=complex)))
    body: Statement = Unitary(target, gate)
    names = sort_vars(controls)
    for c in reversed(names):
        body = QCase(c, Skip(), body)
    flips = [Unitary(c, Gate.named("X")) for c in names if controls[c] == 0]
    return seq(*flips, body, *flips)


def unitary_to_program(u: np.ndarray, env: Environment, fresh: Optional[FreshNames] = None) -> Statement:
    """S_U with denotation (U . U^dagger, U) on ``env``."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (env.dim, env.dim):
        raise ShapeMismatch(f"{u.shape} matrix is not an operator on {env}")
    if not _is_unitary(u):
        raise NotUnitary(f"matrix on {env} is not unitary")
    if not env:
        z = complex(u[0, 0])
        if abs(z - 1) <= IDENTITY_TOL:
            return Skip()
        fresh = fresh or FreshNames()
        return phase(float(np.angle(z)), fresh())
    if len(env) == 1:
        if float(np.max(np.abs(u - np.eye(2)))) <= IDENTITY_TOL:
            return Skip()
        return Unitary(env.vars[0], Gate.from_matrix(_nearest_unitary(u)))
    n = len(env)
    steps = []
    for f in _merged(two_level_decompose(u)):
        target_pos = n - 1 - f.bit
        controls = {v: (f.i >> (n - 1 - pos)) & 1 for pos, v in enumerate(env.vars) if pos != target_pos}
        steps.append(controlled_gate(env.vars[target_pos], controls, f.core))
    logger.debug(f"unitary on {env} compiled to {len(steps)} controlled gates")
    return seq(*steps)


def state_preparation(psi: np.ndarray) -> np.ndarray:
    """A unitary whose first column is ``psi`` (normalized)."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("cannot prepare the zero vector")
    psi = psi / norm
    rest = scipy.linalg.null_space(psi.conj()[None, :])
    return np.hstack([psi[:, None], rest])


# --- sub-unitaries ----------------------------------------------------------

def _pad(u: np.ndarray) -> np.ndarray:
    d = u.shape[0]
    size = _next_power_of_two(d)
    if size == d:
        return u
    return scipy.linalg.block_diag(u, np.eye(size - d, dtype=complex))


def complete_subunitary(u: np.ndarray) -> np.ndarray:
    """Square unitary (power-of-two size) with ``u`` as its top-left block."""
    u = np.asarray(u, dtype=complex)
    r, c = u.shape
    if not loewner_leq(u.conj().T @ u, np.eye(c)):
        raise NotSubUnitary(f"{r}x{c} matrix has U^dagger U > I")
    if r == c and _is_unitary(u):
        return _pad(u)
    if r > c and float(np.max(np.abs(u.conj().T @ u - np.eye(c)))) <= UNITARY_TOL:
        return _pad(np.hstack([u, scipy.linalg.null_space(u.conj().T)]))
    if r < c and float(np.max(np.abs(u @ u.conj().T - np.eye(r)))) <= UNITARY_TOL:
        return _pad(np.vstack([u, scipy.linalg.null_space(u).conj().T]))
    size = 2 * _next_power_of_two(max(r, c))
    if r >= c:
        w = np.zeros((size, c), dtype=complex)
        w[:r] = u
        w[r:r + c] = psd_sqrt(np.eye(c) - u.conj().T @ u)
        return np.hstack([w, scipy.linalg.null_space(w.conj().T)])
    w = np.zeros((r, size), dtype=complex)
    w[:, :c] = u
    w[:, c:c + r] = psd_sqrt(np.eye(r) - u @ u.conj().T)
    return np.vstack([w, scipy.linalg.null_space(w).conj().T])


def subunitary_to_program(u: np.ndarray, in_env: Environment, out_env: Environment,
                          fresh: Optional[FreshNames] = None) -> Statement:
    """S_U with denotation (U . U^dagger, U) from ``in_env`` to ``out_env``.

    Fresh qubits are prepared above the inputs, the completed unitary runs on
    the whole register, every qubit outside the top-left block is tested
    against 0 (a non-terminating loop otherwise) and discarded, and the rest
    is renamed onto ``out_env``.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (out_env.dim, in_env.dim):
        raise ShapeMismatch(f"{u.shape} matrix does not map {in_env} -> {out_env}")
    fresh = fresh or FreshNames()
    fresh.avoid(in_env.vars + out_env.vars)
    full = complete_subunitary(u)
    n = _qubits(full.shape[0])
    k, l = len(in_env), len(out_env)
    ancillas = fresh.take(n - k)
    register = list(ancillas) + list(in_env.vars)
    work = Environment(register)
    p = reorder_matrix(register)
    body = unitary_to_program(p @ full @ p.conj().T, work, fresh)
    tested = register[:n - l]
    kept = register[n - l:]
    check = meas_zero(tested, Skip(), loop(fresh())) if tested else Skip()
    return seq(new_qbits(ancillas), body, check, discard_qbits(tested),
               multi_rename(kept, list(out_env.vars), fresh))


# --- Kraus stacking ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KrausStack:
    """U = sum_i |e_i> (x) K_i over the ancilla register, with vacuum state psi = sum_i nu_i |e_i>."""

    unitary: np.ndarray
    ancillas: Tuple[str, ...]
    vacuum_state: np.ndarray

    @property
    def anc_env(self) -> Environment:
        return Environment(self.ancillas)

    def factorize(self, in_env: Environment, out_env: Environment) -> Tuple[VacExt, VacExt]:
        """((U . U^dagger, U), (Tr_anc, <psi| (x) I)); composing them gives back the Kraus pair."""
        stacked = self.ancillas + out_env.vars
        first = VacExt.from_layout(Superoperator.sandwich(self.unitary), self.unitary, in_env.vars, stacked)
        m, d = len(self.vacuum_state), out_env.dim
        eye = np.eye(d, dtype=complex)
        bras = [np.kron(np.eye(m, dtype=complex)[i:i + 1], eye) for i in range(m)]
        bra_psi = np.kron(self.vacuum_state.conj()[None, :], eye)
        second = VacExt.from_layout(Superoperator.from_kraus(bras), bra_psi, stacked, out_env.vars)
        return first, second


def stack_kraus(ks: KrausSet, fresh: Optional[FreshNames] = None) -> KrausStack:
    """Stack the Kraus operators, padded with zero blocks to a power-of-two count."""
    ks.validate()
    fresh = fresh or FreshNames()
    count = _next_power_of_two(len(ks.ops))
    rows, cols = ks.shape
    zero = np.zeros((rows, cols), dtype=complex)
    ops = list(ks.ops) + [zero] * (count - len(ks.ops))
    amps = np.array(list(ks.vacuum_amps) + [0] * (count - len(ks.ops)), dtype=complex)
    ancillas = tuple(fresh.take(_qubits(count)))
    return KrausStack(np.vstack(ops), ancillas, amps)


def synthesize(v: VacExt, fresh: Optional[FreshNames] = None) -> Program:
    """A program (in; S; out) whose denotation is ``v``."""
    if not validate(v):
        raise InvalidVacExt(f"{v!r} is not completely positive and trace non-increasing")
    fresh = fresh or FreshNames()
    fresh.avoid(v.in_env.vars + v.out_env.vars)
    ks = vacext_to_kraus(v)
    stack = stack_kraus(ks, fresh)
    ancillas = list(stack.ancillas)
    u = stack.unitary
    if not ancillas:
        # a single Kraus operator: its vacuum amplitude is a phase folded into U
        u = np.conj(stack.vacuum_state[0]) / abs(stack.vacuum_state[0]) * u
    stacked_env = Environment(ancillas) | v.out_env
    u_sorted = reorder_matrix(ancillas + list(v.out_env.vars)) @ u
    prepare = subunitary_to_program(u_sorted, v.in_env, stacked_env, fresh)
    steps = [prepare]
    if ancillas:
        anc_env = Environment(ancillas)
        p = reorder_matrix(ancillas)
        rotate = state_preparation(stack.vacuum_state).conj().T
        steps.append(unitary_to_program(p @ rotate @ p.conj().T, anc_env, fresh))
        steps.append(discard_qbits(anc_env.vars))
    stmt = seq(*steps)
    logger.info(f"synthesized {v!r} with {len(ks.ops)} Kraus operators and {len(ancillas)} ancillas")
    return Program(v.in_env, stmt, v.out_env)
