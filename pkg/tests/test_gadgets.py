# tests/test_gadgets.py
import cmath

import numpy as np
import pytest

from semantics.densem import denote, denote_statement
from services.analysis import equivalent
from services.gadgets import (FreshNames, cnot, coin, discard_in_basis, dp, loop, meas_encoding, meas_zero,
                              multi_rename, phase, qcoin1, rename, swap)
from syntax.ast import Discard, Gate, Meas, Program, Skip, Unitary
from syntax.environment import EMPTY, Environment
from syntax.parser import parse

Q = Environment(["q"])
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


@pytest.mark.parametrize("name, built", [
    ("cnot.qctl", cnot("c", "t")),
    ("swap.qctl", swap("p", "q")),
    ("rename.qctl", rename("p", "q")),
    ("coin.qctl", coin("q")),
    ("dp.qctl", dp("q")),
    ("loop.qctl", loop("r")),
    ("qcoin1.qctl", qcoin1("p", "q")),
    ("meas_encoding.qctl", meas_encoding("q", "q'", Unitary("r", Gate.named("H")), Unitary("r", Gate.named("Z")))),
])
def test_builders_match_corpus(corpus, name, built):
    with open(corpus(name), encoding="utf-8") as f:
        assert parse(f.read()) == built


def test_fresh_names():
    fresh = FreshNames(["_a0", "_a2"])
    assert fresh() == "_a1"
    assert fresh() == "_a3"
    fresh.avoid(["_a4"])
    assert fresh.take(2) == ["_a5", "_a6"]
    assert FreshNames(prefix="_t")() == "_t0"


def test_multi_rename_through_fresh_names():
    pq = Environment(["p", "q"])
    s = multi_rename(["p", "q"], ["q", "p"], FreshNames(["p", "q"]))
    v = denote_statement(pq, s)
    assert v.out_env == pq
    assert np.abs(v.transform - SWAP).max() < 1e-12
    assert multi_rename(["p"], ["p"], FreshNames()) == Skip()
    with pytest.raises(ValueError):
        multi_rename(["p"], [], FreshNames())


def test_multi_rename_disjoint():
    s = multi_rename(["p", "q"], ["r", "s"], FreshNames())
    v = denote_statement(Environment(["p", "q"]), s)
    assert v.out_env == Environment(["r", "s"])
    assert np.abs(v.transform - np.eye(4)).max() < 1e-12


def test_phase():
    v = denote_statement(EMPTY, phase(0.3, "_t"))
    assert abs(v.transform[0, 0] - cmath.exp(0.3j)) < 1e-12
    assert abs(v.channel.matrix[0, 0] - 1) < 1e-12


def test_meas_zero_nests_measurements():
    stop = Discard("r")
    assert meas_zero(["p", "q"], Skip(), stop) == Meas("p", Meas("q", Skip(), stop), stop)
    assert meas_zero([], Skip(), stop) == Skip()


def test_loop_denotes_zero():
    v = denote_statement(Q, loop("r"))
    assert np.abs(v.channel.matrix).max() == 0
    assert np.abs(v.transform).max() == 0


@pytest.mark.parametrize("s1, s2", [
    (dp("q"), coin("q")),
    (Skip(), parse("new qbit r; discard r")),
    (Skip(), Unitary("q", Gate.named("I"))),
    (discard_in_basis("q", Gate.named("Z")), discard_in_basis("q", Gate.named("I"))),
])
def test_known_equivalences(s1, s2):
    out = denote_statement(Q, s1).out_env
    assert equivalent(Program(Q, s1, out), Program(Q, s2, out))


def test_discarding_in_another_basis_is_observable():
    d_x = Program(Q, discard_in_basis("q", Gate.named("X")), EMPTY)
    d_i = Program(Q, discard_in_basis("q", Gate.named("I")), EMPTY)
    assert denote(d_x).channel.max_abs_diff(denote(d_i).channel) < 1e-12
    assert not equivalent(d_x, d_i)
