# semantics/__init__.py
from .wellformed import (ContextVerdict, Derivation, VarAnalysis, analyze, bound_vars, check, check_context,
                         check_program, compatible, derive)
from .vacext import (ExtendedSuperop, VacExt, extend, kraus_to_vacext, lift, qcase_kraus, vacext_to_kraus,
                     validate)
from .densem import (Denoter, FixpointReport, LfpConfig, compose, denote, denote_statement, kleene_iterates, lfp,
                     meas_bar, qcase_bar)
from .opsem import (Configuration, OutputEnsemble, Value, default_value, ensemble_matches, evaluate, probability,
                    prune)

__all__ = [
    "ContextVerdict", "Derivation", "VarAnalysis", "analyze", "bound_vars", "check", "check_context",
    "check_program", "compatible", "derive",
    "ExtendedSuperop", "VacExt", "extend", "kraus_to_vacext", "lift", "qcase_kraus", "vacext_to_kraus", "validate",
    "Denoter", "FixpointReport", "LfpConfig", "compose", "denote", "denote_statement", "kleene_iterates", "lfp",
    "meas_bar", "qcase_bar",
    "Configuration", "OutputEnsemble", "Value", "default_value", "ensemble_matches", "evaluate", "probability",
    "prune",
]
