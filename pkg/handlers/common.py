# handlers/common.py
import argparse
import logging
from typing import Optional

import numpy as np

from errors import ZeroInput
from formatters.reply import adequacy_lines, adequacy_to_json, ensemble_lines, ensemble_to_json
from handlers.router import EXIT_NEGATIVE, EXIT_OK, CommandContext, CommandRouter, arg
from linalg.matrix_io import state_from_literal
from semantics.densem import LfpConfig
from semantics.opsem import Configuration, evaluate
from semantics.wellformed import derive
from services.analysis import check_adequacy, probability_denotational
from syntax.ast import Program, node_count, vars_of
from syntax.environment import Environment
from syntax.parser import parse, parse_context, parse_program
from syntax.printer import pretty, pretty_block

logger = logging.getLogger(__name__)

common_router = CommandRouter("common")

FILE = arg("file", help="program source (.qctl)")
ENV = arg("--env", default="", help="input environment, e.g. q,r")
STATE = arg("--state", default=None,
            help="input amplitudes 're,im;re,im;...', or 'random' (drawn with --seed); default |0...0>")


def read_source(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def load_program(path: str, env_text: str) -> Program:
    prog = parse_program(read_source(path), Environment.parse(env_text))
    logger.debug(f"Loaded {path}: {prog.input_env} -> {prog.output_env}")
    return prog


def input_state(literal: Optional[str], env: Environment, seed: Optional[int] = None) -> np.ndarray:
    """The ``--state`` literal normalized, |0...0> without one, or a seeded random state."""
    if literal is None:
        psi = np.zeros(env.dim, dtype=complex)
        psi[0] = 1
        return psi
    if literal.strip() == "random":
        rng = np.random.default_rng(seed)
        psi = rng.normal(size=env.dim) + 1j * rng.normal(size=env.dim)
        return psi / np.linalg.norm(psi)
    psi = state_from_literal(literal, env.dim)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ZeroInput()
    return psi / norm


def lfp_config(ctx: CommandContext) -> LfpConfig:
    return LfpConfig(ctx.config.tol, ctx.config.max_iter)


@common_router.command("parse", "help_parse", FILE,
                       arg("--context", action="store_true", help="accept exactly one hole [in -> out]"))
def cmd_parse(args: argparse.Namespace, ctx: CommandContext) -> int:
    text = read_source(args.file)
    stmt = parse_context(text) if args.context else parse(text)
    if ctx.config.json:
        ctx.emit_json({"stmt": pretty(stmt), "vars": sorted(vars_of(stmt)), "nodes": node_count(stmt)})
    else:
        ctx.write(pretty_block(stmt))
    return EXIT_OK


@common_router.command("check", "help_check", FILE, ENV,
                       arg("--derivation", action="store_true", help="print the derivation tree"))
def cmd_check(args: argparse.Namespace, ctx: CommandContext) -> int:
    env = Environment.parse(args.env)
    stmt = parse(read_source(args.file))
    derivation = derive(env, stmt)
    if ctx.config.json:
        ctx.emit_json({"ok": True, "input_env": list(env.vars), "output_env": list(derivation.out.vars)})
        return EXIT_OK
    if args.derivation:
        ctx.write(derivation.render())
    ctx.say("check_ok", env=derivation.out)
    return EXIT_OK


@common_router.command("run", "help_run", FILE, ENV, STATE)
def cmd_run(args: argparse.Namespace, ctx: CommandContext) -> int:
    prog = load_program(args.file, args.env)
    psi = input_state(args.state, prog.input_env, ctx.config.seed)
    ens = evaluate(Configuration(prog.stmt, psi, prog.input_env), ctx.config.fuel, ctx.config.prune_eps)
    lower, upper = ens.mass, ens.mass + ens.truncated_mass
    if ctx.config.json:
        ctx.emit_json(ensemble_to_json(ens, lower, upper))
    else:
        for line in ensemble_lines(ens, ctx.catalog, lower, upper):
            ctx.write(line)
    return EXIT_OK


@common_router.command("prob", "help_prob", FILE, ENV, STATE)
def cmd_prob(args: argparse.Namespace, ctx: CommandContext) -> int:
    prog = load_program(args.file, args.env)
    psi = input_state(args.state, prog.input_env, ctx.config.seed)
    ens = evaluate(Configuration(prog.stmt, psi, prog.input_env), ctx.config.fuel, ctx.config.prune_eps)
    lower, upper = ens.mass, ens.mass + ens.truncated_mass
    exact = probability_denotational(prog, psi, lfp_config(ctx))
    if ctx.config.json:
        ctx.emit_json({"p_lower": lower, "p_upper": upper, "p_denotational": exact})
    else:
        ctx.say("probability_bracket", lower=f"{lower:.12g}", upper=f"{upper:.12g}")
        ctx.say("probability_denotational", p=f"{exact:.12g}")
    return EXIT_OK


@common_router.command("adequacy", "help_adequacy", FILE, ENV, STATE,
                       arg("--adequacy-tol", type=float, default=1e-6, help="residual tolerance"))
def cmd_adequacy(args: argparse.Namespace, ctx: CommandContext) -> int:
    prog = load_program(args.file, args.env)
    psi = input_state(args.state, prog.input_env, ctx.config.seed)
    report = check_adequacy(prog, psi, ctx.config.fuel, args.adequacy_tol, ctx.config.prune_eps, lfp_config(ctx))
    if ctx.config.json:
        ctx.emit_json(adequacy_to_json(report))
    else:
        for line in adequacy_lines(report, ctx.catalog):
            ctx.write(line)
    return EXIT_OK if report.verdict else EXIT_NEGATIVE
