# handlers/denotations.py
import argparse
import logging

import numpy as np

from errors import InvalidKraus
from formatters.reply import vacext_lines, vacext_to_json, verdict_to_json
from handlers.common import ENV, FILE, lfp_config, load_program, read_source
from handlers.router import EXIT_NEGATIVE, EXIT_OK, CommandContext, CommandRouter, arg
from linalg.channels import KrausSet
from linalg.matrix_io import complex_list_from_literal, kraus_from_json
from semantics.densem import Denoter, denote
from semantics.vacext import kraus_to_vacext, validate
from semantics.wellformed import check_program
from services.analysis import equivalent
from services.synth import synthesize
from syntax.environment import Environment
from syntax.printer import pretty, pretty_block

logger = logging.getLogger(__name__)

denotation_router = CommandRouter("denotations")


@denotation_router.command("denote", "help_denote", FILE, ENV)
def cmd_denote(args: argparse.Namespace, ctx: CommandContext) -> int:
    prog = load_program(args.file, args.env)
    check_program(prog)
    denoter = Denoter(lfp_config(ctx))
    v = denoter.denote(prog.input_env, prog.stmt)
    valid = validate(v)
    if ctx.config.json:
        ctx.emit_json(vacext_to_json(v, denoter.reports, valid))
    else:
        for line in vacext_lines(v, denoter.reports, valid, ctx.catalog):
            ctx.write(line)
    return EXIT_OK if valid else EXIT_NEGATIVE


@denotation_router.command("equiv", "help_equiv", arg("file1", help="first program"),
                          arg("file2", help="second program"), ENV)
def cmd_equiv(args: argparse.Namespace, ctx: CommandContext) -> int:
    p1 = load_program(args.file1, args.env)
    p2 = load_program(args.file2, args.env)
    verdict = equivalent(p1, p2, cfg=lfp_config(ctx))
    if ctx.config.json:
        ctx.emit_json(verdict_to_json(verdict))
        return EXIT_OK if verdict.equivalent else EXIT_NEGATIVE
    if verdict.equivalent:
        ctx.say("equiv_yes")
        return EXIT_OK
    ctx.say("equiv_no", distance=f"{verdict.distance:.3e}")
    w = verdict.witness
    ctx.say("equiv_witness", gap=f"{w.p_gap:.9g}")
    ctx.write(pretty_block(w.context))
    return EXIT_NEGATIVE


@denotation_router.command("synth", "help_synth",
                          arg("--kraus", required=True, help="JSON list of Kraus matrices"),
                          arg("--nu", default=None, help="vacuum amplitudes 're,im;...' (default 1,0,...)"),
                          arg("--env-in", default="", help="input environment"),
                          arg("--env-out", default="", help="output environment"),
                          arg("--verify", action="store_true", help="denote the result and report the distance"))
def cmd_synth(args: argparse.Namespace, ctx: CommandContext) -> int:
    ops = kraus_from_json(read_source(args.kraus))
    if args.nu is None:
        amps = [1] + [0] * (len(ops) - 1)
    else:
        amps = complex_list_from_literal(args.nu)
    if len(amps) != len(ops):
        raise InvalidKraus(f"{len(ops)} Kraus operators but {len(amps)} vacuum amplitudes")
    v = kraus_to_vacext(KrausSet(ops, amps), Environment.parse(args.env_in), Environment.parse(args.env_out))
    prog = synthesize(v)
    distance = None
    if args.verify:
        distance = denote(prog, lfp_config(ctx)).max_abs_diff(v)
    if ctx.config.json:
        ctx.emit_json({"program": pretty(prog.stmt), "input_env": list(prog.input_env.vars),
                       "output_env": list(prog.output_env.vars), "distance": distance})
        return EXIT_OK
    ctx.write(pretty_block(prog.stmt))
    if distance is not None:
        ctx.say("synth_distance", distance=f"{distance:.3e}")
    return EXIT_OK
