# syntax/ast.py
import cmath
import math
from dataclasses import dataclass
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from errors import NotUnitary
from syntax.environment import Environment

_R = 1 / math.sqrt(2)

NAMED_GATES = {
    "I": ((1, 0), (0, 1)),
    "X": ((0, 1), (1, 0)),
    "Y": ((0, -1j), (1j, 0)),
    "Z": ((1, 0), (0, -1)),
    "H": ((_R, _R), (_R, -_R)),
    "T": ((1, 0), (0, cmath.exp(1j * math.pi / 4))),
    "S": ((1, 0), (0, 1j)),
}

UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class Gate:
    """Single-qubit unitary: a built-in name or ``U`` with explicit entries (row-major)."""

    name: str
    entries: Tuple[complex, complex, complex, complex]

    def __post_init__(self):
        m = self.matrix
        if np.max(np.abs(m.conj().T @ m - np.eye(2))) > UNITARY_TOL:
            raise NotUnitary(f"gate {self.name} is not unitary: {m.tolist()}")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex).reshape(2, 2)

    @property
    def is_named(self) -> bool:
        return self.name in NAMED_GATES

    @classmethod
    def named(cls, name: str) -> "Gate":
        rows = NAMED_GATES[name]
        return cls(name, tuple(complex(x) for row in rows for x in row))

    @classmethod
    def custom(cls, reals: Sequence[float]) -> "Gate":
        if len(reals) != 8:
            raise ValueError(f"U(...) takes 8 real literals, got {len(reals)}")
        entries = tuple(complex(reals[2 * k], reals[2 * k + 1]) for k in range(4))
        return cls("U", entries)

    @classmethod
    def from_matrix(cls, m: np.ndarray, tol: float = 1e-12) -> "Gate":
        m = np.asarray(m, dtype=complex)
        for name, rows in NAMED_GATES.items():
            if np.max(np.abs(m - np.array(rows, dtype=complex))) <= tol:
                return cls.named(name)
        return cls("U", tuple(complex(x) for x in m.reshape(-1)))

    def reals(self) -> Tuple[float, ...]:
        out = []
        for z in self.entries:
            out.extend((z.real, z.imag))
        return tuple(out)


class Statement:
    """Common base of the statement forms."""

    def children(self) -> Tuple["Statement", ...]:
        return ()


def located(node: Statement, line: Optional[int], column: Optional[int]) -> Statement:
    """Attach the source position of ``node``; equality and hashing ignore it."""
    if line is not None:
        object.__setattr__(node, "_span", (line, column))
    return node


def span_of(node: Statement) -> Optional[Tuple[int, int]]:
    return getattr(node, "_span", None)


@dataclass(frozen=True)
class Skip(Statement):
    pass


@dataclass(frozen=True)
class NewQbit(Statement):
    var: str


@dataclass(frozen=True)
class Discard(Statement):
    var: str


@dataclass(frozen=True)
class Unitary(Statement):
    var: str
    gate: Gate


@dataclass(frozen=True)
class Seq(Statement):
    s0: Statement
    s1: Statement

    def children(self):
        return (self.s0, self.s1)


@dataclass(frozen=True)
class Meas(Statement):
    var: str
    s0: Statement
    s1: Statement

    def children(self):
        return (self.s0, self.s1)


@dataclass(frozen=True)
class While(Statement):
    var: str
    body: Statement

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class QCase(Statement):
    var: str
    s0: Statement
    s1: Statement

    def children(self):
        return (self.s0, self.s1)


@dataclass(frozen=True)
class Hole(Statement):
    """The single hole of a context, typed by the environments it maps between."""

    in_env: Environment
    out_env: Environment


# A context is a statement with exactly one Hole leaf.
Context = Statement


@dataclass(frozen=True)
class Program:
    input_env: Environment
    stmt: Statement
    output_env: Environment


def vars_of(s: Statement) -> FrozenSet[str]:
    """Var(S): every variable occurring in ``s``; holes contribute nothing."""
    found = set()
    stack = [s]
    while stack:
        node = stack.pop()
        var = getattr(node, "var", None)
        if var is not None:
            found.add(var)
        stack.extend(node.children())
    return frozenset(found)


def iter_nodes(s: Statement) -> Iterator[Statement]:
    stack = [s]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def node_count(s: Statement) -> int:
    return sum(1 for _ in iter_nodes(s))


def holes(s: Statement) -> Tuple[Hole, ...]:
    return tuple(node for node in iter_nodes(s) if isinstance(node, Hole))


def hole_of(ctx: Context) -> Hole:
    found = holes(ctx)
    if len(found) != 1:
        raise ValueError(f"a context has exactly one hole, found {len(found)}")
    return found[0]


def substitute(ctx: Context, s: Statement) -> Statement:
    """Replace the hole of ``ctx`` by ``s``."""
    hole_of(ctx)
    return _replace_hole(ctx, s)


def _replace_hole(node: Statement, s: Statement) -> Statement:
    if isinstance(node, Hole):
        return s
    if isinstance(node, Seq):
        return Seq(_replace_hole(node.s0, s), _replace_hole(node.s1, s))
    if isinstance(node, Meas):
        return Meas(node.var, _replace_hole(node.s0, s), _replace_hole(node.s1, s))
    if isinstance(node, QCase):
        return QCase(node.var, _replace_hole(node.s0, s), _replace_hole(node.s1, s))
    if isinstance(node, While):
        return While(node.var, _replace_hole(node.body, s))
    return node


def seq(*stmts: Statement) -> Statement:
    """Right-nested sequence, the shape ``a; b; c`` parses to; ``seq()`` is skip.

    Nested ``Seq`` arguments are flattened into the chain.
    """
    parts = [step for st in stmts if st is not None for step in steps_of(st)]
    if not parts:
        return Skip()
    result: Optional[Statement] = None
    for st in reversed(parts):
        result = st if result is None else Seq(st, result)
    return result


def steps_of(s: Statement) -> List[Statement]:
    """The non-sequence statements of ``s`` in execution order."""
    if isinstance(s, Seq):
        return steps_of(s.s0) + steps_of(s.s1)
    return [s]
