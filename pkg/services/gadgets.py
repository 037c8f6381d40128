# services/gadgets.py
"""Program builders for the standard constructions: controlled gates, coin flips, loops, renaming."""
import cmath
from typing import Iterable, List, Sequence, Set

import numpy as np

from syntax.ast import Discard, Gate, Meas, NewQbit, QCase, Skip, Statement, Unitary, While, seq
from syntax.environment import var_key

X = Gate.named("X")
H = Gate.named("H")


class FreshNames:
    """Supplies ``_a0, _a1, ...`` skipping every name it was told to avoid or has handed out."""

    def __init__(self, avoid: Iterable[str] = (), prefix: str = "_a"):
        self._used: Set[str] = set(avoid)
        self._prefix = prefix
        self._counter = 0

    def avoid(self, names: Iterable[str]) -> None:
        self._used.update(names)

    def __call__(self) -> str:
        while True:
            name = f"{self._prefix}{self._counter}"
            self._counter += 1
            if name not in self._used:
                self._used.add(name)
                return name

    def take(self, n: int) -> List[str]:
        names = [self() for _ in range(n)]
        return sorted(names, key=var_key)


def cnot(c: str, t: str) -> Statement:
    return QCase(c, Skip(), Unitary(t, X))


def swap(p: str, q: str) -> Statement:
    return seq(cnot(p, q), cnot(q, p), cnot(p, q))


def loop(r: str) -> Statement:
    """Never terminates: denotes (0, 0) on every environment without ``r``."""
    return seq(NewQbit(r), Unitary(r, X), While(r, Skip()), Discard(r))


def coin(q: str) -> Statement:
    return While(q, Unitary(q, H))


def coin1(q: str) -> Statement:
    return seq(NewQbit(q), Unitary(q, H), Meas(q, Skip(), Skip()))


def qcoin1(p: str, q: str) -> Statement:
    return QCase(p, coin1(q), coin1(q))


def dp(q: str) -> Statement:
    return seq(Discard(q), NewQbit(q))


def meas_encoding(q: str, aux: str, s0: Statement, s1: Statement) -> Statement:
    """Measurement of ``q`` written with a copy qubit ``aux`` and a quantum case."""
    return seq(NewQbit(aux), cnot(q, aux), QCase(aux, s0, s1), Discard(aux))


def discard_in_basis(q: str, gate: Gate) -> Statement:
    return seq(Unitary(q, gate), Discard(q))


def rename(p: str, q: str) -> Statement:
    return seq(NewQbit(q), swap(p, q), Discard(p))


def multi_rename(sources: Sequence[str], targets: Sequence[str], fresh: FreshNames) -> Statement:
    """Rename ``sources[i]`` to ``targets[i]``; fixed points are skipped, overlaps go through fresh names."""
    if len(sources) != len(targets):
        raise ValueError(f"{len(sources)} sources but {len(targets)} targets")
    pairs = [(p, q) for p, q in zip(sources, targets) if p != q]
    if not pairs:
        return Skip()
    moving = {p for p, _ in pairs}
    if not moving & {q for _, q in pairs}:
        return seq(*(rename(p, q) for p, q in pairs))
    middle = [fresh() for _ in pairs]
    steps = [rename(p, m) for (p, _), m in zip(pairs, middle)]
    steps += [rename(m, q) for (_, q), m in zip(pairs, middle)]
    return seq(*steps)


def new_qbits(vs: Iterable[str]) -> Statement:
    return seq(*(NewQbit(v) for v in vs))


def discard_qbits(vs: Iterable[str]) -> Statement:
    return seq(*(Discard(v) for v in vs))


def meas_zero(vs: Sequence[str], then: Statement, otherwise: Statement) -> Statement:
    """Nested measurements: ``then`` if every variable reads 0, ``otherwise`` as soon as one reads 1."""
    result = then
    for v in reversed(list(vs)):
        result = Meas(v, result, otherwise)
    return result


def phase(theta: float, fresh: str) -> Statement:
    """Global phase e^{i theta}, realised on a temporary qubit."""
    z = cmath.exp(1j * theta)
    return seq(NewQbit(fresh), Unitary(fresh, Gate.from_matrix(z * np.eye(2))), Discard(fresh))
