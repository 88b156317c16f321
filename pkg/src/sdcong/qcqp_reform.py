"""QCQP instances, their SD-diagonalized form and LP/SOCP model emission.

Conventions::

    f0(x) = 1/2 x^T A0 x + a0^T x
    fi(x) = 1/2 x^T Ai x + ai^T x + 1/2 di      (le: fi <= 0, eq: fi = 0,
                                                 interval: l <= fi <= u)

A congruence ``P`` that diagonalizes every quadratic form turns the problem
into ``x = P z`` with separable quadratics ``1/2 sum(delta_k z_k^2) + eps^T z``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from .family_sd import SearchOptions, sd_family
from .numeric_core import DEFAULT_TOL, Congruence, DimensionError, TolerancePolicy, as_symmat
from .outcome import SdOutcome
from .pair_sd import sd_pair

__all__ = [
    "Interval",
    "Sense",
    "Constraint",
    "QcqpProblem",
    "Kind",
    "DiagConstraint",
    "DiagQcqp",
    "Row",
    "ConicModel",
    "Exactness",
    "ExactnessReport",
    "VerificationReport",
    "SdFailure",
    "HomogenizationInfo",
    "homogenize",
    "diagonalize_qcqp",
    "emit_lp",
    "emit_socp",
    "classify_exactness",
    "verify_reformulation",
]


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper) and self.lower < self.upper):
            raise ValueError(f"interval needs finite l < u, got [{self.lower}, {self.upper}]")


class Sense(str, Enum):
    LE = "le"
    EQ = "eq"


SenseLike = Union[Sense, Interval]


@dataclass(frozen=True)
class Constraint:
    A: np.ndarray
    a: np.ndarray
    d: float = 0.0
    sense: SenseLike = Sense.LE

    def value(self, x) -> np.ndarray:
        return _quad(self.A, self.a, x) + 0.5 * self.d


def _quad(A, a, x):
    x = np.asarray(x, dtype=float)
    return 0.5 * np.einsum("...i,ij,...j->...", x, A, x) + x @ a


@dataclass(frozen=True)
class QcqpProblem:
    A0: np.ndarray
    a0: np.ndarray
    constraints: tuple[Constraint, ...] = ()

    @classmethod
    def build(cls, A0, a0=None, constraints=()):
        A0 = as_symmat(A0)
        n = A0.shape[0]
        cons = []
        for c in constraints:
            if isinstance(c, Constraint):
                A, a, d, sense = c.A, c.a, c.d, c.sense
            else:
                A, a, d, sense = (tuple(c) + (None, 0.0, Sense.LE)[len(c) - 1 :])[:4]
            if isinstance(sense, str):
                sense = Sense(sense)
            cons.append(Constraint(as_symmat(A, n), _vec(a, n), float(d), sense))
        return cls(A0, _vec(a0, n), tuple(cons))

    @property
    def n(self) -> int:
        return self.A0.shape[0]

    @property
    def m(self) -> int:
        return len(self.constraints)

    def objective(self, x):
        return _quad(self.A0, self.a0, x)


def _vec(a, n) -> np.ndarray:
    if a is None:
        return np.zeros(n)
    v = np.asarray(a, dtype=float).ravel()
    if v.shape != (n,):
        raise DimensionError(f"expected a vector of length {n}, got shape {np.shape(a)}")
    return v


class Kind(str, Enum):
    TRS = "TRS"
    GTRS = "GTRS"
    IGTRS = "IGTRS"
    TWO_CONSTRAINT = "TwoConstraint"
    HOMOGENEOUS_MULTI = "HomogeneousMulti"
    GENERAL_MULTI = "GeneralMulti"


@dataclass(frozen=True)
class DiagConstraint:
    alpha: np.ndarray
    beta: np.ndarray
    d: float
    sense: SenseLike

    def value(self, z):
        z = np.asarray(z, dtype=float)
        return 0.5 * (z * z) @ self.alpha + z @ self.beta + 0.5 * self.d


@dataclass(frozen=True)
class HomogenizationInfo:
    n_original: int
    matrices: tuple[np.ndarray, ...]  # B_0, ..., B_{m+1}


@dataclass(frozen=True)
class DiagQcqp:
    P: Congruence
    delta: np.ndarray
    epsilon: np.ndarray
    constraints: tuple[DiagConstraint, ...]
    kind: Kind
    homogenization: HomogenizationInfo | None = None
    outcome: SdOutcome | None = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.delta.shape[0]

    # names used for the one- and two-constraint models
    @property
    def alpha(self):
        return self.constraints[0].alpha

    @property
    def beta(self):
        return self.constraints[0].beta

    @property
    def eta(self):
        return self.constraints[1].alpha

    @property
    def theta(self):
        return self.constraints[1].beta

    def objective(self, z):
        z = np.asarray(z, dtype=float)
        return 0.5 * (z * z) @ self.delta + z @ self.epsilon


class SdFailure(Exception):
    """The quadratic forms of a QCQP are not (certifiably) SD."""

    def __init__(self, outcome: SdOutcome):
        self.outcome = outcome
        super().__init__(f"{outcome.verdict.value}: {outcome.detail}")


# ---------------------------------------------------------------------------


def homogenize(p: QcqpProblem) -> tuple[QcqpProblem, HomogenizationInfo]:
    """Lift to dimension n+1 with ``x_{n+1} = +-1``.

    ``B_i = [[A_i, a_i], [a_i^T, d_i]]`` (``d_0 = 0``) and the extra
    constraint ``x^T B_{m+1} x = 1`` with ``B_{m+1} = diag(0_n, 1)``, stored
    as ``1/2 x^T B_{m+1} x - 1/2 = 0``.
    """
    n = p.n

    def border(A, a, d):
        B = np.zeros((n + 1, n + 1))
        B[:n, :n] = A
        B[:n, n] = B[n, :n] = a
        B[n, n] = d
        return B

    B0 = border(p.A0, p.a0, 0.0)
    Bs = [border(c.A, c.a, c.d) for c in p.constraints]
    Bnorm = np.zeros((n + 1, n + 1))
    Bnorm[n, n] = 1.0
    cons = [Constraint(as_symmat(B), np.zeros(n + 1), 0.0, c.sense) for B, c in zip(Bs, p.constraints)]
    cons.append(Constraint(as_symmat(Bnorm), np.zeros(n + 1), -1.0, Sense.EQ))
    lifted = QcqpProblem(as_symmat(B0), np.zeros(n + 1), tuple(cons))
    return lifted, HomogenizationInfo(n, tuple([B0, *Bs, Bnorm]))


def _is_zero(v, scale=1.0, eps=1e-12):
    return float(np.max(np.abs(v), initial=0.0)) <= eps * max(1.0, scale)


def _classify(p: QcqpProblem) -> Kind:
    if p.m == 1:
        c = p.constraints[0]
        if isinstance(c.sense, Interval):
            return Kind.IGTRS
        if np.allclose(c.A, np.eye(p.n), rtol=0, atol=1e-12) and _is_zero(c.a):
            return Kind.TRS
        return Kind.GTRS
    if p.m == 2:
        return Kind.TWO_CONSTRAINT
    if _is_zero(p.a0) and all(_is_zero(c.a) for c in p.constraints):
        return Kind.HOMOGENEOUS_MULTI
    return Kind.GENERAL_MULTI


def diagonalize_qcqp(
    p: QcqpProblem, tol: TolerancePolicy = DEFAULT_TOL, *, opts: SearchOptions = SearchOptions()
) -> DiagQcqp:
    """SD-diagonalize the quadratic forms of ``p``.

    One or two constraints keep their linear terms (the pair/triple is
    diagonalized as is); larger problems with linear terms are homogenized
    first.  Raises :class:`SdFailure` when the forms are not certified SD.
    """
    kind = _classify(p)
    hom = None
    work = p
    if kind is Kind.GENERAL_MULTI:
        work, hom = homogenize(p)
    mats = [work.A0] + [c.A for c in work.constraints]
    if len(mats) == 2:
        out = sd_pair(mats[0], mats[1], tol)
    else:
        out = sd_family(mats, tol, opts=opts)
    if not out.is_sd:
        raise SdFailure(out)
    P = out.congruence.P
    cons = tuple(
        DiagConstraint(dg, P.T @ c.a, c.d, c.sense) for dg, c in zip(out.diagonals[1:], work.constraints)
    )
    return DiagQcqp(out.congruence, out.diagonals[0], P.T @ work.a0, cons, kind, hom, out)


# ---------------------------------------------------------------------------
# conic models


@dataclass(frozen=True)
class Row:
    coeffs: np.ndarray
    rhs: float
    sense: str  # "le" or "eq"


@dataclass(frozen=True)
class ConicModel:
    kind: str  # "lp" or "socp"
    vars: list[str]
    lower: np.ndarray
    upper: np.ndarray
    obj: np.ndarray
    rows: list[Row]
    cones: list[tuple[int, int]]
    provenance: dict

    def to_dict(self) -> dict:
        def bound(v):
            return [None if not np.isfinite(b) else float(b) for b in v]

        return {
            "kind": self.kind,
            "vars": list(self.vars),
            "lower": bound(self.lower),
            "upper": bound(self.upper),
            "obj": [float(c) for c in self.obj],
            "rows": [{"coeffs": [float(c) for c in r.coeffs], "rhs": float(r.rhs), "sense": r.sense} for r in self.rows],
            "cones": [[int(i), int(j)] for i, j in self.cones],
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConicModel":
        def bound(v, default):
            return np.array([default if b is None else b for b in v], dtype=float)

        return cls(
            d["kind"],
            list(d["vars"]),
            bound(d["lower"], -np.inf),
            bound(d["upper"], np.inf),
            np.array(d["obj"], dtype=float),
            [Row(np.array(r["coeffs"], dtype=float), float(r["rhs"]), r["sense"]) for r in d["rows"]],
            [tuple(c) for c in d["cones"]],
            d.get("provenance", {}),
        )

    def to_lp_text(self) -> str:
        """CPLEX LP format; LP models only."""
        if self.kind != "lp":
            raise ValueError("LP text export is only defined for LP models")

        def expr(coeffs):
            terms = [f"{'-' if c < 0 else '+'} {abs(c):.17g} {v}" for c, v in zip(coeffs, self.vars) if c != 0]
            if not terms:
                return f"0 {self.vars[0]}" if self.vars else "0"
            s = " ".join(terms)
            return s[2:] if s.startswith("+ ") else s

        lines = ["\\ diagonalized QCQP", "Minimize", f" obj: {expr(self.obj)}", "Subject To"]
        for i, r in enumerate(self.rows):
            op = "=" if r.sense == "eq" else "<="
            lines.append(f" c{i}: {expr(r.coeffs)} {op} {r.rhs:.17g}")
        lines.append("Bounds")
        for v, lo, hi in zip(self.vars, self.lower, self.upper):
            lo_s = "-inf" if not np.isfinite(lo) else f"{lo:.17g}"
            hi_s = "+inf" if not np.isfinite(hi) else f"{hi:.17g}"
            lines.append(f" {lo_s} <= {v} <= {hi_s}")
        lines.append("End")
        return "\n".join(lines) + "\n"


def _provenance(d: DiagQcqp, mapping: str) -> dict:
    prov = {
        "P": d.P.P.tolist(),
        "kind": d.kind.value,
        "n": d.n,
        "mapping": mapping,
        "d": [c.d for c in d.constraints],
    }
    if d.homogenization is not None:
        prov["homogenized_from"] = d.homogenization.n_original
    return prov


def emit_lp(d: DiagQcqp) -> ConicModel:
    """LP in ``y_k`` (standing for ``z_k^2``): all linear terms must be zero."""
    n = d.n
    if not _is_zero(d.epsilon) or any(not _is_zero(c.beta) for c in d.constraints):
        raise ValueError("LP emission requires a homogeneous problem (all linear terms zero)")
    rows = []
    for c in d.constraints:
        if isinstance(c.sense, Interval):
            rows.append(Row(0.5 * c.alpha, c.sense.upper - 0.5 * c.d, "le"))
            rows.append(Row(-0.5 * c.alpha, -(c.sense.lower - 0.5 * c.d), "le"))
        else:
            rows.append(Row(0.5 * c.alpha, -0.5 * c.d, c.sense.value))
    return ConicModel(
        "lp",
        [f"y{k + 1}" for k in range(n)],
        np.zeros(n),
        np.full(n, np.inf),
        0.5 * d.delta,
        rows,
        [],
        _provenance(d, "y_k = z_k^2, z_k = +-sqrt(y_k), x = P z"),
    )


def emit_socp(d: DiagQcqp) -> ConicModel:
    """SOCP in ``(z, y)``: objective ``delta^T y + eps^T z``, one linear row per
    constraint (two for an interval) and rotated-cone links ``z_i^2 / 2 <= y_i``.

    Valid as a relaxation for every kind; exactness is a separate question
    (see :func:`classify_exactness`)."""
    n = d.n
    rows = []
    for c in d.constraints:
        coeffs = np.concatenate([c.beta, c.alpha])
        if isinstance(c.sense, Interval):
            rows.append(Row(coeffs, c.sense.upper - 0.5 * c.d, "le"))
            rows.append(Row(-coeffs, -(c.sense.lower - 0.5 * c.d), "le"))
        else:
            rows.append(Row(coeffs, -0.5 * c.d, c.sense.value))
    return ConicModel(
        "socp",
        [f"x{k + 1}" for k in range(n)] + [f"y{k + 1}" for k in range(n)],
        np.concatenate([np.full(n, -np.inf), np.zeros(n)]),
        np.full(2 * n, np.inf),
        np.concatenate([d.epsilon, d.delta]),
        rows,
        [(k, n + k) for k in range(n)],
        _provenance(d, "z_k^2 / 2 <= y_k, x = P z"),
    )


# ---------------------------------------------------------------------------


class Exactness(str, Enum):
    EXACT_ALWAYS = "ExactAlways"
    CONDITIONALLY_EXACT = "ConditionallyExact"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ExactnessReport:
    status: Exactness
    tag: str
    condition: str


def classify_exactness(d: DiagQcqp) -> ExactnessReport:
    if d.kind is Kind.TRS:
        return ExactnessReport(Exactness.EXACT_ALWAYS, "trs-sd", "the trust-region pair is always SD; SOCP relaxation is exact")
    if d.kind is Kind.GTRS:
        return ExactnessReport(
            Exactness.EXACT_ALWAYS, "gtrs-sd", "SD single-constraint problem (inequality or equality): SOCP relaxation is exact"
        )
    if d.kind is Kind.IGTRS:
        return ExactnessReport(
            Exactness.EXACT_ALWAYS,
            "igtrs-sd",
            "both interval bounds cannot bind at once, so one KKT multiplier is zero: SOCP relaxation is exact",
        )
    if d.kind is Kind.TWO_CONSTRAINT:
        return ExactnessReport(
            Exactness.CONDITIONALLY_EXACT,
            "kkt-multiplier-zero",
            "exact if one KKT multiplier of the two linear rows is zero at the SOCP optimum (not checked)",
        )
    return ExactnessReport(Exactness.UNKNOWN, "unknown", "no exactness result for this problem class")


@dataclass(frozen=True)
class VerificationReport:
    samples: int
    max_discrepancy: float
    per_function: list[float]
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_discrepancy <= self.tolerance


def _rel(orig, diag, scale):
    return np.abs(orig - diag) / np.maximum(1.0, scale)


def verify_reformulation(
    p: QcqpProblem, d: DiagQcqp, samples: int = 1000, seed: int = 0, tol: float = 1e-8
) -> VerificationReport:
    """Compare original functions at ``P z`` with the diagonalized ones at ``z``.

    Discrepancies are relative to the sum of absolute term magnitudes of the
    diagonalized function at each sample.
    """
    ref = homogenize(p)[0] if d.homogenization is not None else p
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((samples, d.n))
    X = Z @ d.P.P.T
    errs = []
    scale = 0.5 * (Z * Z) @ np.abs(d.delta) + np.abs(Z) @ np.abs(d.epsilon)
    errs.append(float(np.max(_rel(ref.objective(X), d.objective(Z), scale), initial=0.0)))
    for c, dc in zip(ref.constraints, d.constraints):
        scale = 0.5 * (Z * Z) @ np.abs(dc.alpha) + np.abs(Z) @ np.abs(dc.beta) + 0.5 * abs(dc.d)
        errs.append(float(np.max(_rel(c.value(X), dc.value(Z), scale), initial=0.0)))
    return VerificationReport(samples, max(errs), errs, tol)
