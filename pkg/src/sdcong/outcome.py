"""Verdict types shared by the pair and family SD tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from .numeric_core import (
    DEFAULT_TOL,
    Congruence,
    TolerancePolicy,
    apply_congruence,
    is_diagonal,
    make_congruence,
    max_offdiag,
)


class Verdict(str, Enum):
    SD = "SD"
    NOT_SD = "NotSD"
    INDETERMINATE = "Indeterminate"


class Obstruction(str, Enum):
    # NotSD witnesses
    NON_REAL_EIGENVALUE = "NonRealEigenvalue"
    NON_DIAGONALIZABLE_JORDAN = "NonDiagonalizableJordan"
    B2_NOT_ZERO = "B2NotZero"
    COMMUTATION_FAILURE = "CommutationFailure"
    KERNEL_BLOCK_NOT_SD = "KernelBlockNotSD"
    # Indeterminate reasons
    NO_PENCIL_FOUND = "NoPencilFound"
    BORDERLINE = "Borderline"
    ILL_CONDITIONED = "IllConditioned"
    VERIFICATION_FAILED = "VerificationFailed"


@dataclass(frozen=True)
class SdOutcome:
    verdict: Verdict
    congruence: Congruence | None = None
    diagonals: tuple[np.ndarray, ...] = ()
    obstruction: Obstruction | None = None
    detail: str = ""
    trace: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def is_sd(self) -> bool:
        return self.verdict is Verdict.SD

    @property
    def P(self) -> np.ndarray | None:
        return None if self.congruence is None else self.congruence.P

    @property
    def diagA(self) -> np.ndarray:
        return self.diagonals[0]

    @property
    def diagB(self) -> np.ndarray:
        return self.diagonals[1]

    def __repr__(self):
        extra = f", obstruction={self.obstruction.value}" if self.obstruction else ""
        return f"SdOutcome({self.verdict.value}{extra}, detail={self.detail!r})"


def not_sd(obstruction: Obstruction, detail: str, trace=None) -> SdOutcome:
    return SdOutcome(Verdict.NOT_SD, obstruction=obstruction, detail=detail, trace=dict(trace or {}))


def indeterminate(reason: Obstruction, detail: str, trace=None) -> SdOutcome:
    return SdOutcome(Verdict.INDETERMINATE, obstruction=reason, detail=detail, trace=dict(trace or {}))


def certify(P, mats: Sequence[np.ndarray], tol: TolerancePolicy = DEFAULT_TOL, trace=None) -> SdOutcome:
    """Return SD only if ``P`` is nonsingular and diagonalizes every matrix."""
    trace = dict(trace or {})
    try:
        cong = make_congruence(P, tol)
    except ArithmeticError as exc:
        return indeterminate(Obstruction.ILL_CONDITIONED, str(exc), trace)
    images = [apply_congruence(cong.P, M) for M in mats]
    bad = [i for i, X in enumerate(images) if not is_diagonal(X, tol)]
    trace["residual_offdiag"] = [max_offdiag(X) for X in images]
    if bad:
        worst = max(trace["residual_offdiag"][i] for i in bad)
        return indeterminate(
            Obstruction.VERIFICATION_FAILED,
            f"congruence leaves off-diagonal mass {worst:.3e} on matrices {bad}",
            trace,
        )
    return SdOutcome(Verdict.SD, congruence=cong, diagonals=tuple(np.diag(X).copy() for X in images), trace=trace)


class ObstructionFound(Exception):
    """Raised inside a test when a structural NotSD witness is found."""

    def __init__(self, obstruction: Obstruction, detail: str):
        self.obstruction = obstruction
        self.detail = detail
        super().__init__(f"{obstruction.value}: {detail}")


class IllConditioned(ArithmeticError):
    pass
