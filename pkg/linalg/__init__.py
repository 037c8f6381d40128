# linalg/__init__.py
from .operators import (BRA0, BRA1, KET0, KET1, PROJ0, PROJ1, basis_state, check_qubit_cap, embed_on,
                        ordered_tensor, perm_indices, perm_matrix, reorder_matrix, tensor_identity)
from .channels import (HERMITIAN_TOL, PSD_TOL, KrausSet, Superoperator, choi, from_choi, is_completely_positive,
                       is_hermitian, is_trace_nonincreasing, kraus_from_choi, loewner_leq, min_eigenvalue,
                       psd_sqrt)
from .matrix_io import (complex_list_from_literal, kraus_from_json, matrix_from_json, matrix_to_json,
                        state_from_literal, state_to_literal)

__all__ = [
    "BRA0", "BRA1", "KET0", "KET1", "PROJ0", "PROJ1", "basis_state", "check_qubit_cap", "embed_on",
    "ordered_tensor", "perm_indices", "perm_matrix", "reorder_matrix", "tensor_identity",
    "HERMITIAN_TOL", "PSD_TOL", "KrausSet", "Superoperator", "choi", "from_choi", "is_completely_positive",
    "is_hermitian", "is_trace_nonincreasing", "kraus_from_choi", "loewner_leq", "min_eigenvalue",
    "psd_sqrt",
    "complex_list_from_literal", "kraus_from_json", "matrix_from_json", "matrix_to_json",
    "state_from_literal", "state_to_literal",
]
