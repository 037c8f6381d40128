# formatters/reply.py
from typing import Any, Dict, List, Sequence

import numpy as np

from linalg.matrix_io import matrix_to_json, state_to_literal
from semantics.densem import FixpointReport
from semantics.opsem import OutputEnsemble
from semantics.vacext import VacExt
from services.analysis import AdequacyReport, EquivVerdict, Witness
from services.messages import MessageCatalog
from syntax.printer import pretty


def format_complex(z: complex, digits: int = 6) -> str:
    re, im = round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return f"{im:g}j"
    return f"{re:g}{im:+g}j"


def format_matrix(m: np.ndarray, digits: int = 6) -> str:
    rows = np.atleast_2d(np.asarray(m, dtype=complex))
    cells = [[format_complex(z, digits) for z in row] for row in rows]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells)


def format_state(psi: np.ndarray, digits: int = 6) -> str:
    return "[" + ", ".join(format_complex(z, digits) for z in np.asarray(psi).reshape(-1)) + "]"


def ensemble_lines(ens: OutputEnsemble, catalog: MessageCatalog, lower: float, upper: float) -> List[str]:
    lines = [catalog.get("run_header", count=len(ens.items), env=ens.out_env)]
    for k, v in enumerate(ens.items):
        lines.append(catalog.get("run_value", index=k, state=format_state(v.state), nu=v.default))
    lines.append(catalog.get("run_truncated", mass=f"{ens.truncated_mass:.3e}"))
    if ens.divergent_mass:
        lines.append(catalog.get("run_divergent", mass=f"{ens.divergent_mass:.6g}"))
    lines.append(catalog.get("probability_bracket", lower=f"{lower:.12g}", upper=f"{upper:.12g}"))
    return lines


def ensemble_to_json(ens: OutputEnsemble, lower: float, upper: float) -> Dict[str, Any]:
    return {
        "out_env": list(ens.out_env.vars),
        "items": [{"state": state_to_literal(v.state), "nu": v.default} for v in ens.items],
        "truncated_mass": ens.truncated_mass,
        "divergent_mass": ens.divergent_mass,
        "p_lower": lower,
        "p_upper": upper,
    }


def vacext_lines(v: VacExt, reports: Sequence[FixpointReport], valid: bool, catalog: MessageCatalog) -> List[str]:
    lines = [catalog.get("denote_header", in_env=v.in_env, out_env=v.out_env),
             catalog.get("denote_channel"), format_matrix(v.channel.matrix),
             catalog.get("denote_transform"), format_matrix(v.transform)]
    for r in reports:
        lines.append(catalog.get("denote_loop", var=r.var, env=r.env, iterations=r.iterations,
                                 residual=f"{r.residual:.3e}"))
    lines.append(catalog.get("denote_valid" if valid else "denote_invalid"))
    return lines


def vacext_to_json(v: VacExt, reports: Sequence[FixpointReport], valid: bool) -> Dict[str, Any]:
    return {
        "in_env": list(v.in_env.vars),
        "out_env": list(v.out_env.vars),
        "channel": matrix_to_json(v.channel.matrix),
        "transform": matrix_to_json(v.transform),
        "loops": [{"var": r.var, "iterations": r.iterations, "residual": r.residual} for r in reports],
        "residual": max((r.residual for r in reports), default=0.0),
        "valid": valid,
    }


def adequacy_lines(report: AdequacyReport, catalog: MessageCatalog) -> List[str]:
    return [
        catalog.get("adequacy_density", residual=f"{report.density_residual:.3e}"),
        catalog.get("adequacy_transform", residual=f"{report.transform_residual:.3e}"),
        catalog.get("run_truncated", mass=f"{report.truncated_mass:.3e}"),
        catalog.get("adequacy_ok" if report.verdict else "adequacy_failed"),
    ]


def adequacy_to_json(report: AdequacyReport) -> Dict[str, Any]:
    return {
        "density_residual": report.density_residual,
        "transform_residual": report.transform_residual,
        "truncated_mass": report.truncated_mass,
        "verdict": report.verdict,
    }


def witness_to_json(w: Witness) -> Dict[str, Any]:
    return {
        "context": pretty(w.context),
        "psi": state_to_literal(w.psi),
        "p_gap": w.p_gap,
        "predicted": w.predicted,
        "wrapped": w.wrapped,
    }


def verdict_to_json(verdict: EquivVerdict) -> Dict[str, Any]:
    payload = {"equivalent": verdict.equivalent, "distance": verdict.distance}
    if verdict.witness is not None:
        payload["witness"] = witness_to_json(verdict.witness)
    return payload
