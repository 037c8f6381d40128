# formatters/__init__.py
from .reply import (adequacy_lines, adequacy_to_json, ensemble_lines, ensemble_to_json, format_complex,
                    format_matrix, format_state, vacext_lines, vacext_to_json, verdict_to_json, witness_to_json)

__all__ = [
    "adequacy_lines", "adequacy_to_json", "ensemble_lines", "ensemble_to_json", "format_complex",
    "format_matrix", "format_state", "vacext_lines", "vacext_to_json", "verdict_to_json", "witness_to_json",
]
