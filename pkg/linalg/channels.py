# linalg/channels.py
"""Superoperators on column-stacked density matrices, Kraus sets and positivity checks.

Vectorization is column-major: vec(rho)[i + j*d] = rho[i, j], so the map
rho -> A rho B^dagger has matrix conj(B) (x) A.
"""
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import scipy.linalg

from errors import InvalidKraus, NotHermitian, ShapeMismatch

PSD_TOL = 1e-9
HERMITIAN_TOL = 1e-10
KRAUS_AMP_TOL = 1e-9


def _isqrt(n: int, what: str) -> int:
    r = int(round(np.sqrt(n)))
    if r * r != n:
        raise ShapeMismatch(f"{what} {n} is not a perfect square")
    return r


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Linear map from d_in x d_in to d_out x d_out matrices."""

    matrix: np.ndarray
    d_in: int
    d_out: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.d_out ** 2, self.d_in ** 2):
            raise ShapeMismatch(f"superoperator matrix {m.shape} does not map {self.d_in} -> {self.d_out}")
        object.__setattr__(self, "matrix", m)

    # constructors ---------------------------------------------------------

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "Superoperator":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(matrix, _isqrt(matrix.shape[1], "column count"), _isqrt(matrix.shape[0], "row count"))

    @classmethod
    def identity(cls, d: int) -> "Superoperator":
        return cls(np.eye(d * d, dtype=complex), d, d)

    @classmethod
    def zero(cls, d_in: int, d_out: int) -> "Superoperator":
        return cls(np.zeros((d_out * d_out, d_in * d_in), dtype=complex), d_in, d_out)

    @classmethod
    def sandwich(cls, a: np.ndarray, b: np.ndarray = None) -> "Superoperator":
        """rho -> a rho b^dagger (b defaults to a)."""
        a = np.asarray(a, dtype=complex)
        b = a if b is None else np.asarray(b, dtype=complex)
        if a.shape != b.shape:
            raise ShapeMismatch(f"sandwich factors differ in shape: {a.shape} vs {b.shape}")
        return cls(np.kron(b.conj(), a), a.shape[1], a.shape[0])

    @classmethod
    def from_kraus(cls, ops: Sequence[np.ndarray]) -> "Superoperator":
        ops = [np.asarray(k, dtype=complex) for k in ops]
        if not ops:
            raise InvalidKraus("empty Kraus list")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise InvalidKraus("Kraus operators differ in shape")
        total = sum(np.kron(k.conj(), k) for k in ops)
        return cls(total, shape[1], shape[0])

    @classmethod
    def from_natural(cls, n: np.ndarray) -> "Superoperator":
        """Inverse of :meth:`natural`."""
        d_out, _, d_in, _ = n.shape
        return cls(n.transpose(1, 0, 3, 2).reshape(d_out * d_out, d_in * d_in), d_in, d_out)

    # views ----------------------------------------------------------------

    def natural(self) -> np.ndarray:
        """Tensor N with out[k, l] = sum_ij N[k, l, i, j] rho[i, j]."""
        return self.matrix.reshape(self.d_out, self.d_out, self.d_in, self.d_in).transpose(1, 0, 3, 2)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.d_in, self.d_in):
            raise ShapeMismatch(f"operator {rho.shape} does not fit a {self.d_in}-dimensional input")
        return (self.matrix @ rho.reshape(-1, order="F")).reshape(self.d_out, self.d_out, order="F")

    def trace_functional(self) -> np.ndarray:
        """M with Tr S(rho) = Tr(M rho); equals sum K^dagger K for a Kraus map."""
        return np.einsum("kkij->ji", self.natural())

    # algebra --------------------------------------------------------------

    def __matmul__(self, other: "Superoperator") -> "Superoperator":
        """Composition: (self @ other)(rho) = self(other(rho))."""
        if other.d_out != self.d_in:
            raise ShapeMismatch(f"cannot compose {other.d_in}->{other.d_out} with {self.d_in}->{self.d_out}")
        return Superoperator(self.matrix @ other.matrix, other.d_in, self.d_out)

    def __add__(self, other: "Superoperator") -> "Superoperator":
        if (self.d_in, self.d_out) != (other.d_in, other.d_out):
            raise ShapeMismatch("cannot add superoperators of different shapes")
        return Superoperator(self.matrix + other.matrix, self.d_in, self.d_out)

    def __sub__(self, other: "Superoperator") -> "Superoperator":
        return self + other.scaled(-1)

    def scaled(self, factor: complex) -> "Superoperator":
        return Superoperator(self.matrix * factor, self.d_in, self.d_out)

    def conjugated(self, p_out: np.ndarray, p_in: np.ndarray) -> "Superoperator":
        """rho -> p_out S(p_in^dagger rho p_in) p_out^dagger, for re-laying registers."""
        left = np.kron(p_out.conj(), p_out)
        right = np.kron(p_in.T, p_in.conj().T)
        return Superoperator(left @ self.matrix @ right, p_in.shape[0], p_out.shape[0])

    def tensor_identity(self, extra_dim: int) -> "Superoperator":
        """S (x) identity on an appended factor of dimension ``extra_dim``."""
        eye = np.eye(extra_dim, dtype=complex)
        n = np.einsum("klij,ea,fb->kelfiajb", self.natural(), eye, eye)
        d_out, d_in = self.d_out * extra_dim, self.d_in * extra_dim
        return Superoperator.from_natural(n.reshape(d_out, d_out, d_in, d_in))

    def max_abs_diff(self, other: "Superoperator") -> float:
        if (self.d_in, self.d_out) != (other.d_in, other.d_out):
            raise ShapeMismatch("cannot compare superoperators of different shapes")
        return float(np.max(np.abs(self.matrix - other.matrix), initial=0.0))


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Kraus operators together with their vacuum amplitudes."""

    ops: List[np.ndarray]
    vacuum_amps: List[complex]

    def __post_init__(self):
        ops = [np.asarray(k, dtype=complex) for k in self.ops]
        if not ops:
            raise InvalidKraus("a Kraus set needs at least one operator")
        if len(ops) != len(self.vacuum_amps):
            raise InvalidKraus(f"{len(ops)} operators but {len(self.vacuum_amps)} vacuum amplitudes")
        if any(k.ndim != 2 or k.shape != ops[0].shape for k in ops):
            raise InvalidKraus("Kraus operators must be matrices of one common shape")
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "vacuum_amps", [complex(v) for v in self.vacuum_amps])

    @property
    def shape(self):
        return self.ops[0].shape

    def gram(self) -> np.ndarray:
        return sum(k.conj().T @ k for k in self.ops)

    def validate(self) -> None:
        if not loewner_leq(self.gram(), np.eye(self.shape[1])):
            raise InvalidKraus("sum of K^dagger K exceeds the identity")
        weight = float(np.sum(np.abs(np.asarray(self.vacuum_amps)) ** 2))
        if abs(weight - 1) > KRAUS_AMP_TOL:
            raise InvalidKraus(f"vacuum amplitudes have squared norm {weight}, expected 1")

    def transformation(self) -> np.ndarray:
        """F = sum_i conj(nu_i) K_i."""
        return sum(np.conj(nu) * k for nu, k in zip(self.vacuum_amps, self.ops))

    def superoperator(self) -> Superoperator:
        return Superoperator.from_kraus(self.ops)

    def remixed(self, w: np.ndarray) -> "KrausSet":
        """New set K'_a = sum_i w[a, i] K_i, nu'_a = sum_i w[a, i] nu_i for an isometry ``w``."""
        w = np.asarray(w, dtype=complex)
        ops = [sum(w[a, i] * k for i, k in enumerate(self.ops)) for a in range(w.shape[0])]
        amps = [complex(np.dot(w[a], self.vacuum_amps)) for a in range(w.shape[0])]
        return KrausSet(ops, amps)


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and float(np.max(np.abs(a - a.conj().T), initial=0.0)) <= tol


def min_eigenvalue(a: np.ndarray) -> float:
    a = np.asarray(a, dtype=complex)
    return float(scipy.linalg.eigvalsh((a + a.conj().T) / 2)[0])


def loewner_leq(a: np.ndarray, b: np.ndarray, tol: float = PSD_TOL) -> bool:
    """A <= B in the Loewner order, i.e. B - A is positive semi-definite."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ShapeMismatch(f"cannot compare {a.shape} with {b.shape}")
    if not (is_hermitian(a) and is_hermitian(b)):
        raise NotHermitian("Loewner comparison needs Hermitian operands")
    return min_eigenvalue(b - a) >= -tol


def choi(s: Superoperator) -> np.ndarray:
    """Unnormalized Choi matrix sum_ij |i><j| (x) S(|i><j|), input factor first."""
    n = s.natural()
    size = s.d_in * s.d_out
    return n.transpose(2, 0, 3, 1).reshape(size, size)


def from_choi(j: np.ndarray, d_in: int, d_out: int) -> Superoperator:
    j = np.asarray(j, dtype=complex)
    if j.shape != (d_in * d_out, d_in * d_out):
        raise ShapeMismatch(f"Choi matrix {j.shape} does not fit {d_in} -> {d_out}")
    return Superoperator.from_natural(j.reshape(d_in, d_out, d_in, d_out).transpose(1, 3, 0, 2))


def is_completely_positive(s: Superoperator, tol: float = PSD_TOL) -> bool:
    j = choi(s)
    return is_hermitian(j) and min_eigenvalue(j) >= -tol


def is_trace_nonincreasing(s: Superoperator, tol: float = PSD_TOL) -> bool:
    m = s.trace_functional()
    if not is_hermitian(m):
        return False
    return loewner_leq(m, np.eye(s.d_in), tol)


def kraus_from_choi(j: np.ndarray, d_in: int, d_out: int, cutoff: float = 1e-12) -> List[np.ndarray]:
    """Kraus operators sqrt(lambda) * unvec(eigenvector) of a PSD Choi matrix."""
    values, vectors = scipy.linalg.eigh((j + j.conj().T) / 2)
    ops = []
    for lam, vec in zip(values[::-1], vectors.T[::-1]):
        if lam <= cutoff:
            break
        ops.append(np.sqrt(lam) * vec.reshape(d_in, d_out).T)
    return ops


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    values, vectors = scipy.linalg.eigh((a + a.conj().T) / 2)
    values = np.clip(values, 0, None)
    return (vectors * np.sqrt(values)) @ vectors.conj().T
