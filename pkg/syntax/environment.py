# syntax/environment.py
"""Qubit variable names and environments.

Variables are ordered byte-lexicographically; an environment always iterates in
that order, which is also the order of tensor factors in its Hilbert space.
"""
import re
from typing import Iterable, Iterator, Tuple

VAR_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
KEYWORDS = frozenset({"skip", "new", "qbit", "discard", "meas", "qcase", "while", "do"})


def var_key(name: str) -> bytes:
    return name.encode("utf-8")


def is_var_name(name: str) -> bool:
    return bool(VAR_PATTERN.match(name)) and name not in KEYWORDS


def sort_vars(names: Iterable[str]) -> Tuple[str, ...]:
    return tuple(sorted(set(names), key=var_key))


class Environment:
    """Immutable finite set of variable names, iterated in canonical order."""

    __slots__ = ("_vars", "_set")

    def __init__(self, names: Iterable[str] = ()):
        names = list(names)
        for name in names:
            if not is_var_name(name):
                raise ValueError(f"not a variable name: {name!r}")
        self._vars = sort_vars(names)
        self._set = frozenset(self._vars)

    @classmethod
    def parse(cls, text: str) -> "Environment":
        """Build from a comma list such as ``"q, r"``; the empty string is the empty environment."""
        parts = [part.strip() for part in text.split(",")] if text and text.strip() else []
        return cls(p for p in parts if p)

    @property
    def vars(self) -> Tuple[str, ...]:
        return self._vars

    @property
    def dim(self) -> int:
        return 2 ** len(self._vars)

    def index(self, name: str) -> int:
        return self._vars.index(name)

    def add(self, name: str) -> "Environment":
        return Environment(self._vars + (name,))

    def remove(self, name: str) -> "Environment":
        return Environment(v for v in self._vars if v != name)

    def union(self, other: Iterable[str]) -> "Environment":
        return Environment(self._set | frozenset(other))

    def difference(self, other: Iterable[str]) -> "Environment":
        return Environment(self._set - frozenset(other))

    def intersection(self, other: Iterable[str]) -> "Environment":
        return Environment(self._set & frozenset(other))

    def isdisjoint(self, other: Iterable[str]) -> bool:
        return self._set.isdisjoint(other)

    def issubset(self, other: Iterable[str]) -> bool:
        return self._set <= frozenset(other)

    def __contains__(self, name: object) -> bool:
        return name in self._set

    def __iter__(self) -> Iterator[str]:
        return iter(self._vars)

    def __len__(self) -> int:
        return len(self._vars)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Environment):
            return self._vars == other._vars
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._vars)

    def __or__(self, other: Iterable[str]) -> "Environment":
        return self.union(other)

    def __sub__(self, other: Iterable[str]) -> "Environment":
        return self.difference(other)

    def __and__(self, other: Iterable[str]) -> "Environment":
        return self.intersection(other)

    def __repr__(self) -> str:
        return f"Environment({list(self._vars)!r})"

    def __str__(self) -> str:
        return ",".join(self._vars) if self._vars else "∅"


EMPTY = Environment()
