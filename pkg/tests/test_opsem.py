# tests/test_opsem.py
import numpy as np
import pytest
from conftest import random_state

from errors import IllFormed, ZeroInput
from semantics.opsem import (Configuration, Evaluator, OutputEnsemble, Value, default_value, ensemble_matches,
                             evaluate, probability, prune)
from syntax.ast import Program
from syntax.environment import EMPTY, Environment
from syntax.parser import parse, parse_context, parse_program

Q, QR = Environment(["q"]), Environment(["q", "r"])
S2 = 1 / np.sqrt(2)


def run(text: str, env: Environment, psi, **kw) -> OutputEnsemble:
    return evaluate(Configuration(parse(text), np.asarray(psi, dtype=complex), env), **kw)


def test_straight_line_has_one_value():
    ens = run("q *= H; q *= X", Q, [1, 0])
    assert len(ens.items) == 1
    (v,) = ens.items
    assert v.default == 1
    assert np.abs(v.state - np.array([S2, S2])).max() < 1e-15


def test_discard_branches():
    ens = run("discard q", QR, [0, 0.6, 0.8, 0])
    assert [v.default for v in ens.items] == [1, 0]
    assert np.abs(ens.items[0].state - np.array([0, 0.6])).max() == 0
    assert np.abs(ens.items[1].state - np.array([0.8, 0])).max() == 0
    assert ens.out_env == Environment(["r"])


def test_measurement_marks_the_one_branch_as_non_default():
    ens = run("meas q (0 -> skip, 1 -> skip)", Q, [0.6, 0.8])
    assert [(v.default, round(v.mass, 12)) for v in ens.items] == [(1, 0.36), (0, 0.64)]


def test_coin_bracket():
    psi = np.array([0.8, 0.6j])
    ens = run("while q do q *= H", Q, psi, fuel=60)
    lower, upper = ens.mass, ens.mass + ens.truncated_mass
    # 59 body executions, each halving what is left on |1>
    assert ens.truncated_mass == pytest.approx(0.36 * 2.0 ** -59, rel=1e-9)
    assert upper - lower <= 2.0 ** -60
    assert abs(upper - 1) < 1e-12
    assert lower <= 1 + 1e-12
    assert len(ens.defaults()) == 1
    assert np.abs(ens.defaults()[0].state - np.array([0.8, 0])).max() == 0
    assert ens.divergent_mass == 0
    # every value sits on |0>
    assert np.abs(ens.density()[1]).max() < 1e-15


@pytest.mark.parametrize("fuel", [1, 2, 5])
def test_coin_ensemble_has_one_value_per_iteration(fuel):
    alpha, beta = 0.6, 0.8
    ens = run("while q do q *= H", Q, [alpha, beta], fuel=fuel)
    expected = [(np.array([alpha, 0]), 1)]
    expected += [(np.array([-beta * (-S2) ** k, 0]), 0) for k in range(1, fuel)]
    assert len(ens.items) == fuel
    for v, (state, nu) in zip(ens.items, expected):
        assert v.default == nu
        assert np.abs(v.state - state).max() < 1e-15
    assert ens.truncated_mass == pytest.approx(beta ** 2 * 2.0 ** -(fuel - 1))


def test_loop_diverges(corpus):
    with open(corpus("loop.qctl"), encoding="utf-8") as f:
        prog = parse_program(f.read(), EMPTY)
    ens = evaluate(Configuration(prog.stmt, np.ones(1), EMPTY))
    assert len(ens.items) == 1
    assert ens.items[0].default == 1
    assert np.abs(ens.items[0].state).max() == 0
    assert ens.divergent_mass == pytest.approx(1)
    assert ens.truncated_mass == 0
    assert probability(prog, np.ones(1)) == (0.0, 0.0)


def test_quantum_case_interferes_defaults():
    text = "qcase p (0 -> new qbit q; q *= H; meas q (0 -> skip, 1 -> skip), " \
           "1 -> new qbit q; q *= H; meas q (0 -> skip, 1 -> skip))"
    ens = run(text, Environment(["p"]), [S2, S2])
    assert ens.out_env == Environment(["p", "q"])
    states = {v.default: [] for v in ens.items}
    for v in ens.items:
        states[v.default].append(v.state)
    assert len(states[1]) == 1
    assert np.abs(states[1][0] - np.array([0.5, 0, 0.5, 0])).max() < 1e-15
    others = sorted(np.argmax(np.abs(s)) for s in states[0])
    assert others == [1, 3]
    assert ens.mass == pytest.approx(1)


def test_exactly_one_default_and_subnormalized(make_generator, rng):
    for seed in range(60):
        prog = make_generator(seed).program()
        cfg = Configuration(prog.stmt, random_state(rng, prog.input_env.dim), prog.input_env)
        ens = evaluate(cfg, fuel=20)
        assert len(ens.defaults()) == 1
        assert ens.mass <= 1 + 1e-9
        assert ens.out_env == prog.output_env
        assert np.abs(ens.defaults()[0].state - default_value(cfg).state).max() < 1e-12
        assert np.abs(ens.weighted_sum() - default_value(cfg).state).max() < 1e-12


def test_more_fuel_never_lowers_the_bound(make_generator, rng):
    for seed in range(20):
        prog = make_generator(1000 + seed, loop_prob=0.8).program()
        psi = random_state(rng, prog.input_env.dim)
        low = [probability(prog, psi, fuel=f)[0] for f in (2, 8, 32)]
        assert low[0] <= low[1] + 1e-12
        assert low[1] <= low[2] + 1e-12


def test_probability_normalizes_input():
    prog = Program(Q, parse("meas q (0 -> skip, 1 -> discard q; new qbit q)"), Q)
    assert probability(prog, np.array([3, 4])) == pytest.approx((1, 1))
    with pytest.raises(ZeroInput):
        probability(prog, np.zeros(2))


def test_prune_keeps_defaults():
    ens = OutputEnsemble([Value(np.array([1e-8, 0]), 1), Value(np.array([0, 1e-8]), 0),
                          Value(np.array([0, 0.5]), 0)], Q)
    kept = prune(ens, 1e-6)
    assert [v.default for v in kept.items] == [1, 0]
    assert kept.out_env == Q


def test_prune_eps_moves_small_values_to_truncated():
    psi = np.array([0.6, 0.8])
    full = run("while q do q *= H", Q, psi, fuel=40)
    pruned = run("while q do q *= H", Q, psi, fuel=40, prune_eps=1e-6)
    assert len(pruned.items) < len(full.items)
    assert pruned.mass + pruned.truncated_mass == pytest.approx(full.mass + full.truncated_mass, abs=1e-12)


def test_ensemble_matches_is_order_free():
    a = OutputEnsemble([Value(np.array([1, 0]), 1), Value(np.array([0, 0.5]), 0)], Q)
    b = OutputEnsemble([Value(np.array([0, 0.5]), 0), Value(np.array([1, 0]), 1)], Q)
    c = OutputEnsemble([Value(np.array([0, 0.5]), 1), Value(np.array([1, 0]), 0)], Q)
    assert ensemble_matches(a, b)
    assert not ensemble_matches(a, c)
    assert not ensemble_matches(a, OutputEnsemble(a.items, Environment(["r"])))


def test_default_value_of_loops():
    cfg = Configuration(parse("while q do q *= H"), np.array([0.6, 0.8]), Q)
    assert np.abs(default_value(cfg).state - np.array([0.6, 0])).max() == 0


@pytest.mark.parametrize("stmt, env, psi", [
    ("skip", Q, [1, 0, 0, 0]),
    ("skip", Q, [1, 1]),
    ("discard r", Q, [1, 0]),
    ("new qbit q", Q, [1, 0]),
])
def test_ill_formed_configurations(stmt, env, psi):
    with pytest.raises(IllFormed):
        Configuration(parse(stmt), np.asarray(psi, dtype=complex), env)


def test_holes_do_not_evaluate():
    cfg = Configuration(parse_context("[q -> q]"), np.array([1, 0]), Q)
    with pytest.raises(IllFormed):
        evaluate(cfg)


def test_evaluator_arguments():
    with pytest.raises(ValueError):
        Evaluator(fuel=0)
    with pytest.raises(ValueError):
        Evaluator(prune_eps=-1)
