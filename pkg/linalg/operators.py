# linalg/operators.py
"""Qubit-register plumbing: PERM matrices, ordered tensor products, single-qubit embeddings.

Basis states are big-endian: in an environment (v1, ..., vn) the index of
|b1 ... bn> is sum(b_k << (n - k)), so the first variable is the most
significant bit.
"""
from typing import Sequence

import numpy as np

from config import MAX_QUBITS
from errors import EnvOverlap, QubitCapExceeded, ShapeMismatch, VarMissing
from syntax.environment import Environment, sort_vars

KET0 = np.array([[1], [0]], dtype=complex)
KET1 = np.array([[0], [1]], dtype=complex)
BRA0 = KET0.conj().T
BRA1 = KET1.conj().T
PROJ0 = KET0 @ BRA0
PROJ1 = KET1 @ BRA1


def check_qubit_cap(n: int) -> None:
    if n > MAX_QUBITS:
        raise QubitCapExceeded(f"{n} qubits requested, the dense representation stops at {MAX_QUBITS}")


def perm_indices(pi: Sequence[int]) -> np.ndarray:
    """``out[x]`` is the image of basis index ``x`` under PERM_pi."""
    n = len(pi)
    if sorted(pi) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {list(pi)}")
    check_qubit_cap(n)
    idx = np.arange(2 ** n)
    bits = [(idx >> (n - 1 - k)) & 1 for k in range(n)]
    out = np.zeros_like(idx)
    for i, src in enumerate(pi):
        out |= bits[src] << (n - 1 - i)
    return out


def perm_matrix(pi: Sequence[int]) -> np.ndarray:
    """PERM_pi: |b_0 ... b_{n-1}> -> |b_pi(0) ... b_pi(n-1)> (0-based positions)."""
    image = perm_indices(pi)
    dim = len(image)
    m = np.zeros((dim, dim), dtype=complex)
    m[image, np.arange(dim)] = 1
    return m


def reorder_matrix(order: Sequence[str]) -> np.ndarray:
    """PERM taking a register laid out in ``order`` to the canonical sorted layout."""
    order = list(order)
    if len(set(order)) != len(order):
        raise EnvOverlap(f"repeated variable in register order {order}")
    canonical = sort_vars(order)
    return perm_matrix([order.index(v) for v in canonical])


def ordered_tensor(psi: np.ndarray, env_a: Environment, phi: np.ndarray, env_b: Environment) -> np.ndarray:
    """|psi>_A (x) |phi>_B with the factors placed at their sorted positions in A u B."""
    if not env_a.isdisjoint(env_b):
        raise EnvOverlap(f"cannot tensor overlapping environments {env_a} and {env_b}")
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    if psi.shape[0] != env_a.dim or phi.shape[0] != env_b.dim:
        raise ShapeMismatch(f"state sizes {psi.shape[0]}, {phi.shape[0]} do not match {env_a}, {env_b}")
    joint = np.kron(psi, phi)
    order = env_a.vars + env_b.vars
    if list(order) == list(sort_vars(order)):
        return joint
    return reorder_matrix(order) @ joint


def embed_on(q: str, env: Environment, m: np.ndarray) -> np.ndarray:
    """I (x) ... (x) m (x) ... (x) I with ``m`` acting on ``q``'s position in ``env``.

    ``m`` may be 2x2, a bra (1x2) or a ket (2x1); ``env`` is the environment that
    contains ``q``, so a bra maps H_env to H_{env minus q} and a ket the reverse.
    """
    if q not in env:
        raise VarMissing(q)
    m = np.asarray(m, dtype=complex)
    if m.shape not in ((2, 2), (1, 2), (2, 1)):
        raise ShapeMismatch(f"embed_on takes 2x2, 1x2 or 2x1 matrices, got {m.shape}")
    check_qubit_cap(len(env))
    pos = env.index(q)
    before = np.eye(2 ** pos, dtype=complex)
    after = np.eye(2 ** (len(env) - pos - 1), dtype=complex)
    return np.kron(np.kron(before, m), after)


def tensor_identity(m: np.ndarray, in_order: Sequence[str], out_order: Sequence[str],
                    extra: Environment) -> np.ndarray:
    """(m (x) I_extra) re-laid in canonical order on both sides.

    ``m`` maps a register laid out in ``in_order`` to one laid out in ``out_order``.
    """
    in_order, out_order = list(in_order), list(out_order)
    if not extra.isdisjoint(in_order) or not extra.isdisjoint(out_order):
        raise EnvOverlap(f"{extra} overlaps the operator's registers")
    m = np.asarray(m, dtype=complex)
    if m.shape != (2 ** len(out_order), 2 ** len(in_order)):
        raise ShapeMismatch(f"matrix {m.shape} does not map {in_order} to {out_order}")
    big = np.kron(m, np.eye(extra.dim, dtype=complex))
    p_out = reorder_matrix(out_order + list(extra.vars))
    p_in = reorder_matrix(in_order + list(extra.vars))
    return p_out @ big @ p_in.conj().T


def basis_state(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1
    return v
