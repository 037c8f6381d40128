# services/__init__.py
from .messages import MessageCatalog
from .gadgets import FreshNames
from .synth import KrausStack, TwoLevelFactor, stack_kraus, synthesize, unitary_to_program
from .analysis import AdequacyReport, EquivVerdict, Witness, check_adequacy, equivalent, make_distinguisher

__all__ = [
    "MessageCatalog", "FreshNames",
    "KrausStack", "TwoLevelFactor", "stack_kraus", "synthesize", "unitary_to_program",
    "AdequacyReport", "EquivVerdict", "Witness", "check_adequacy", "equivalent", "make_distinguisher",
]
