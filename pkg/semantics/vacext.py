# semantics/vacext.py
"""Vacuum-extended operations as pairs (C, F) with unit vacuum weight.

A pair stands for the extended map on H (+) |vac>:

    [[A, b], [c, d]]  ->  [[C(A), F b], [c F^dagger, d]]

with the vacuum as the last basis index.
"""
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from errors import ControlInEnv, EnvOverlap, InvalidKraus, InvalidVacExt, ShapeMismatch
from linalg.channels import (KrausSet, Superoperator, choi, is_completely_positive, is_trace_nonincreasing,
                             kraus_from_choi)
from linalg.operators import check_qubit_cap, reorder_matrix, tensor_identity
from syntax.environment import Environment, sort_vars

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class VacExt:
    channel: Superoperator
    transform: np.ndarray
    in_env: Environment
    out_env: Environment

    def __post_init__(self):
        check_qubit_cap(max(len(self.in_env), len(self.out_env)))
        f = np.asarray(self.transform, dtype=complex)
        if (self.channel.d_in, self.channel.d_out) != (self.in_env.dim, self.out_env.dim):
            raise ShapeMismatch(f"channel {self.channel.d_in}->{self.channel.d_out} does not map "
                                f"{self.in_env} -> {self.out_env}")
        if f.shape != (self.out_env.dim, self.in_env.dim):
            raise ShapeMismatch(f"transformation matrix {f.shape} does not map {self.in_env} -> {self.out_env}")
        object.__setattr__(self, "transform", f)

    @property
    def d_in(self) -> int:
        return self.in_env.dim

    @property
    def d_out(self) -> int:
        return self.out_env.dim

    @classmethod
    def from_layout(cls, channel: Superoperator, transform: np.ndarray, in_order: Sequence[str],
                    out_order: Sequence[str]) -> "VacExt":
        """Pair given on registers laid out in ``in_order``/``out_order``, re-laid canonically."""
        in_order, out_order = list(in_order), list(out_order)
        if list(sort_vars(in_order)) == in_order and list(sort_vars(out_order)) == out_order:
            return cls(channel, transform, Environment(in_order), Environment(out_order))
        p_in, p_out = reorder_matrix(in_order), reorder_matrix(out_order)
        return cls(channel.conjugated(p_out, p_in), p_out @ np.asarray(transform) @ p_in.conj().T,
                   Environment(in_order), Environment(out_order))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return self.channel.apply(rho)

    def max_abs_diff(self, other: "VacExt") -> float:
        if (self.in_env, self.out_env) != (other.in_env, other.out_env):
            raise ShapeMismatch(f"cannot compare {self.in_env}->{self.out_env} with {other.in_env}->{other.out_env}")
        f_gap = float(np.max(np.abs(self.transform - other.transform), initial=0.0))
        return max(self.channel.max_abs_diff(other.channel), f_gap)

    def isclose(self, other: "VacExt", tol: float = 1e-9) -> bool:
        return self.max_abs_diff(other) <= tol

    def __repr__(self) -> str:
        return f"VacExt({self.in_env} -> {self.out_env})"


@dataclass(frozen=True, eq=False)
class ExtendedSuperop:
    """The extended map on dimension d+1; index d is the vacuum on both sides."""

    superop: Superoperator

    @property
    def vac_in(self) -> int:
        return self.superop.d_in - 1

    @property
    def vac_out(self) -> int:
        return self.superop.d_out - 1

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return self.superop.apply(rho)

    def choi(self) -> np.ndarray:
        return choi(self.superop)

    def __matmul__(self, other: "ExtendedSuperop") -> "ExtendedSuperop":
        return ExtendedSuperop(self.superop @ other.superop)

    def max_abs_diff(self, other: "ExtendedSuperop") -> float:
        return self.superop.max_abs_diff(other.superop)


def extend(v: VacExt) -> ExtendedSuperop:
    di, do = v.d_in, v.d_out
    n = np.zeros((do + 1, do + 1, di + 1, di + 1), dtype=complex)
    n[:do, :do, :di, :di] = v.channel.natural()
    n[:do, do, :di, di] = v.transform
    n[do, :do, di, :di] = v.transform.conj()
    n[do, do, di, di] = 1
    return ExtendedSuperop(Superoperator.from_natural(n))


def validate(v: VacExt) -> bool:
    ext = extend(v).superop
    ok = is_completely_positive(ext) and is_trace_nonincreasing(ext)
    if not ok:
        logger.info(f"{v!r} is not a valid vacuum extension")
    return ok


def kraus_to_vacext(ks: KrausSet, in_env: Environment, out_env: Environment) -> VacExt:
    ks.validate()
    if ks.shape != (out_env.dim, in_env.dim):
        raise InvalidKraus(f"Kraus operators of shape {ks.shape} do not map {in_env} -> {out_env}")
    return VacExt(ks.superoperator(), ks.transformation(), in_env, out_env)


def vacext_to_kraus(v: VacExt, cutoff: float = 1e-12) -> KrausSet:
    """Kraus operators K_i (+) nu_i of the extended map, read off its Choi matrix."""
    if not validate(v):
        raise InvalidVacExt(f"{v!r} is not completely positive and trace non-increasing")
    di, do = v.d_in, v.d_out
    extended = kraus_from_choi(extend(v).choi(), di + 1, do + 1, cutoff)
    ops = [k[:do, :di] for k in extended]
    amps = [complex(k[do, di]) for k in extended]
    return KrausSet(ops, amps)


def qcase_kraus(q: str, ks0: KrausSet, ks1: KrausSet, in_env: Environment, out_env: Environment) -> KrausSet:
    """Kraus form of the quantum case: (|0><0| (x) mu_j K_i + |1><1| (x) nu_i L_j) (+) nu_i mu_j."""
    if q in in_env or q in out_env:
        raise ControlInEnv(f"control {q} must not occur in {in_env} or {out_env}")
    ops, amps = [], []
    for k, nu in zip(ks0.ops, ks0.vacuum_amps):
        for l_op, mu in zip(ks1.ops, ks1.vacuum_amps):
            block = np.zeros((2 * out_env.dim, 2 * in_env.dim), dtype=complex)
            block[:out_env.dim, :in_env.dim] = mu * k
            block[out_env.dim:, in_env.dim:] = nu * l_op
            ops.append(block)
            amps.append(nu * mu)
    p_in = reorder_matrix([q] + list(in_env.vars))
    p_out = reorder_matrix([q] + list(out_env.vars))
    return KrausSet([p_out @ op @ p_in.conj().T for op in ops], amps)


def lift(v: VacExt, extra: Environment) -> VacExt:
    """(C (x) I, F (x) I) on the extra variables, placed at their sorted positions."""
    if not extra:
        return v
    if not extra.isdisjoint(v.in_env) or not extra.isdisjoint(v.out_env):
        raise EnvOverlap(f"{extra} overlaps {v.in_env} -> {v.out_env}")
    in_order = list(v.in_env.vars) + list(extra.vars)
    out_order = list(v.out_env.vars) + list(extra.vars)
    channel = v.channel.tensor_identity(extra.dim)
    p_in, p_out = reorder_matrix(in_order), reorder_matrix(out_order)
    return VacExt(channel.conjugated(p_out, p_in),
                  tensor_identity(v.transform, v.in_env.vars, v.out_env.vars, extra),
                  v.in_env | extra, v.out_env | extra)
