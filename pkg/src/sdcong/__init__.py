"""Simultaneous diagonalization by congruence of symmetric matrices, with QCQP reformulation."""
from .family_sd import PencilClass, PencilCertificate, SearchOptions, commuting_family_diag, find_pencil, sd_family
from .numeric_core import DEFAULT_TOL, Congruence, Inertia, TolerancePolicy, apply_congruence, as_symmat, inertia
from .outcome import Obstruction, SdOutcome, Verdict
from .pair_sd import canonical_pair_form, real_diag_test, sd_pair
from .qcqp_reform import (
    Interval,
    Kind,
    QcqpProblem,
    Sense,
    classify_exactness,
    diagonalize_qcqp,
    emit_lp,
    emit_socp,
    verify_reformulation,
)

__all__ = [
    "DEFAULT_TOL", "Congruence", "Inertia", "Interval", "Kind", "Obstruction", "PencilCertificate", "PencilClass",
    "QcqpProblem", "SdOutcome", "SearchOptions", "Sense", "TolerancePolicy", "Verdict", "apply_congruence",
    "as_symmat", "canonical_pair_form", "classify_exactness", "commuting_family_diag", "diagonalize_qcqp",
    "emit_lp", "emit_socp", "find_pencil", "inertia", "real_diag_test", "sd_family", "sd_pair",
    "verify_reformulation",
]
