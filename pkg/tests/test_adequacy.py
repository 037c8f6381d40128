# tests/test_adequacy.py
"""The operational ensembles agree with the denotations on random programs."""
import numpy as np
import pytest
from conftest import random_state

from errors import ZeroInput
from semantics.densem import denote
from semantics.opsem import Configuration, ensemble_matches, evaluate, probability
from services.analysis import check_adequacy, probability_denotational
from services.gadgets import meas_encoding
from syntax.ast import Meas, Program
from syntax.environment import Environment
from syntax.parser import parse_program


def test_adequacy_on_random_programs(make_generator, rng):
    failures = []
    for seed in range(200):
        prog = make_generator(5000 + seed).program()
        psi = random_state(rng, prog.input_env.dim)
        report = check_adequacy(prog, psi, fuel=64, tol=1e-6, prune_eps=1e-14)
        if not report.verdict:
            failures.append((seed, report))
    assert not failures


def test_probability_brackets_denotation(make_generator, rng):
    for seed in range(40):
        prog = make_generator(7000 + seed, loop_prob=0.6).program()
        psi = random_state(rng, prog.input_env.dim)
        lower, upper = probability(prog, psi, fuel=64)
        exact = probability_denotational(prog, psi)
        assert lower - 1e-9 <= exact <= upper + 1e-9


def test_probability_is_scale_free(corpus):
    with open(corpus("coin.qctl"), encoding="utf-8") as f:
        prog = parse_program(f.read(), Environment(["q"]))
    assert probability_denotational(prog, np.array([3, 4j])) == pytest.approx(1, abs=1e-9)
    with pytest.raises(ZeroInput):
        probability_denotational(prog, np.zeros(2))


def test_adequacy_allows_for_truncated_mass(corpus):
    with open(corpus("coin.qctl"), encoding="utf-8") as f:
        prog = parse_program(f.read(), Environment(["q"]))
    report = check_adequacy(prog, np.array([0, 1]), fuel=5)
    # four body executions leave 1/16 of the mass behind, and the bound allows for it
    assert report.truncated_mass == pytest.approx(1 / 16)
    assert report.verdict
    assert report.density_residual <= 1 / 16 + 1e-9


def test_measurement_encoding(make_generator, rng):
    for seed in range(25):
        gen = make_generator(9000 + seed)
        gamma = gen.environment(int(rng.integers(1, 4)))
        q = gamma.vars[int(rng.integers(len(gamma)))]
        s0, s1, out = gen.branches(gamma, 2)
        direct = Program(gamma, Meas(q, s0, s1), out)
        encoded = Program(gamma, meas_encoding(q, "_a0", s0, s1), out)
        assert denote(direct).max_abs_diff(denote(encoded)) < 1e-9
        psi = random_state(rng, gamma.dim)
        a = evaluate(Configuration(direct.stmt, psi, gamma))
        b = evaluate(Configuration(encoded.stmt, psi, gamma))
        assert ensemble_matches(a, b)


def test_measurement_encoding_corpus(corpus):
    qr = Environment(["q", "r"])
    progs = []
    for name in ("meas.qctl", "meas_encoding.qctl"):
        with open(corpus(name), encoding="utf-8") as f:
            progs.append(parse_program(f.read(), qr))
    assert denote(progs[0]).isclose(denote(progs[1]))
