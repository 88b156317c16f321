"""Command-line front end.

Exit codes: 0 = SD (or valid certificate), 1 = NotSD, 2 = Indeterminate,
3 = usage / IO / dimension error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import io
from .family_sd import SearchOptions, sd_family
from .numeric_core import (
    DEFAULT_TOL,
    DimensionError,
    TolerancePolicy,
    apply_congruence,
    inertia,
    is_diagonal,
    max_offdiag,
    scale_of,
)
from .outcome import SdOutcome, Verdict
from .pair_sd import sd_pair
from .qcqp_reform import (
    Kind,
    SdFailure,
    classify_exactness,
    diagonalize_qcqp,
    emit_lp,
    emit_socp,
    verify_reformulation,
)

EXIT_SD, EXIT_NOT_SD, EXIT_INDETERMINATE, EXIT_USAGE = 0, 1, 2, 3
_EXIT = {Verdict.SD: EXIT_SD, Verdict.NOT_SD: EXIT_NOT_SD, Verdict.INDETERMINATE: EXIT_INDETERMINATE}


class UsageError(Exception):
    pass


def _num(x) -> str:
    return f"{float(x):.10g}"


def _vec(v) -> str:
    return "[" + ", ".join(_num(x) for x in np.asarray(v, dtype=float).ravel()) + "]"


def _mat(M, indent="    ") -> list[str]:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return [f"{indent}(empty {M.shape[0]}x{M.shape[1]})"]
    return [indent + "  ".join(f"{x:12.6g}" for x in row) for row in M]


@dataclass
class RunReport:
    """Plain-text report; residuals are recomputed from the emitted certificate."""

    title: str
    lines: list[str] = field(default_factory=list)

    def add(self, key: str, value="") -> None:
        self.lines.append(f"{key}: {value}" if value != "" else key)

    def block(self, name: str, M) -> None:
        M = np.asarray(M, dtype=float)
        self.lines.append(f"{name} ({M.shape[0]}x{M.shape[1] if M.ndim > 1 else 1}):")
        self.lines.extend(_mat(M))

    def render(self) -> str:
        return "\n".join([f"== {self.title} =="] + self.lines) + "\n"


def certificate_residuals(P, mats) -> list[float]:
    """Relative off-diagonal mass of each ``P^T M P``."""
    out = []
    for M in mats:
        X = apply_congruence(P, M)
        out.append(max_offdiag(X) / max(1.0, scale_of(M)))
    return out


def _outcome_lines(rep: RunReport, out: SdOutcome, mats) -> None:
    rep.add("verdict", out.verdict.value)
    if out.obstruction is not None:
        rep.add("obstruction", out.obstruction.value)
    if out.detail:
        rep.add("detail", out.detail)
    if out.is_sd:
        P = out.P
        rep.add("cond(P)", _num(np.linalg.cond(P)))
        for i, (M, r) in enumerate(zip(mats, certificate_residuals(P, mats))):
            X = apply_congruence(P, M)
            rep.add(f"diag(P^T M{i} P)", _vec(np.diag(X)))
            rep.add(f"inertia(P^T M{i} P)", tuple(inertia(X)))
            rep.add(f"relative offdiag residual M{i}", f"{r:.3e}")


def _write_certificate(path, out: SdOutcome, extra=None) -> None:
    d = io.certificate_to_json(out)
    if extra:
        d.update(extra)
    io.dump_json(path, d)


def _tol_from_args(args) -> TolerancePolicy:
    try:
        return TolerancePolicy(
            eps_rank=args.tol_rank if args.tol_rank is not None else DEFAULT_TOL.eps_rank,
            eps_offdiag=args.tol_offdiag if args.tol_offdiag is not None else DEFAULT_TOL.eps_offdiag,
            eps_cluster=args.tol_cluster if args.tol_cluster is not None else DEFAULT_TOL.eps_cluster,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------


def cmd_pair(args) -> int:
    tol = _tol_from_args(args)
    A = io.load_matrix(args.A)
    B = io.load_matrix(args.B)
    if A.shape != B.shape:
        raise DimensionError(f"A is {A.shape[0]}x{A.shape[0]} but B is {B.shape[0]}x{B.shape[0]}")
    out = sd_pair(A, B, tol)
    rep = RunReport("pair")
    rep.add("n", A.shape[0])
    tr = out.trace
    if "p" in tr:
        rep.add("canonical blocks", f"p={tr['p']} q={tr['q']} r={tr['r']}")
    _outcome_lines(rep, out, [A, B])
    if out.is_sd:
        dA, dB = out.diagonals
        nz = np.abs(dA) > DEFAULT_TOL.eps_rank * max(1.0, scale_of(A))
        rep.add("ratios diagB/diagA", _vec(np.sort(dB[nz] / dA[nz])))
    if args.verbose:
        cf = tr.get("canonical")
        if cf is not None and "eigB3" in cf.steps:
            rep.add("eigenvalues of B3", _vec(cf.steps["eigB3"]))
            rep.block("Q2", cf.steps["Q2"])
            rep.block("Q3", cf.steps["Q3"])
        if "V2" in tr:
            rep.block("V2", tr["V2"])
            rep.add("J (eigenvalues of A1^-1 B1c, by cluster)", _vec(np.concatenate(
                [np.full(k, lam) for lam, k in tr["clusters"]]) if tr["clusters"] else []))
            rep.block("Q4", tr["Q4"])
        if out.is_sd:
            rep.block("P", out.P)
    sys.stdout.write(rep.render())
    if args.out and out.is_sd:
        _write_certificate(args.out, out)
    return _EXIT[out.verdict]


def _parse_pencil(s: str, m: int) -> np.ndarray:
    try:
        lam = np.array([float(t) for t in s.split(",")], dtype=float)
    except ValueError as exc:
        raise UsageError(f"malformed pencil {s!r}") from exc
    if lam.size != m or not np.all(np.isfinite(lam)):
        raise UsageError(f"pencil {s!r} must have {m} finite comma-separated entries")
    return lam


def cmd_family(args) -> int:
    tol = _tol_from_args(args)
    mats = [io.load_matrix(f) for f in args.files]
    if len({M.shape for M in mats}) != 1:
        raise DimensionError("family matrices have different sizes")
    lam = _parse_pencil(args.pencil, len(mats)) if args.pencil is not None else None
    out = sd_family(mats, tol, lam, opts=SearchOptions(seed=args.seed))
    rep = RunReport("family")
    rep.add("n", mats[0].shape[0])
    rep.add("m", len(mats))
    tr = out.trace
    if "pencil" in tr:
        rep.add("pencil", _vec(tr["pencil"]))
        rep.add("pencil class", tr["pencil_class"])
        rep.add("pencil min eigenvalue", _num(tr["pencil_min_eig"]))
    if "path" in tr:
        rep.add("path", tr["path"])
    if "mu" in tr:
        rep.add("mu", _vec(tr["mu"]))
    if "failed_condition" in tr:
        rep.add("failed condition", tr["failed_condition"])
    if "failed_pair" in tr:
        rep.add("failed pair", tuple(int(i) for i in tr["failed_pair"]))
    _outcome_lines(rep, out, mats)
    if args.verbose and out.is_sd:
        rep.block("P", out.P)
    sys.stdout.write(rep.render())
    if args.out and out.is_sd:
        _write_certificate(args.out, out)
    return _EXIT[out.verdict]


def cmd_reformulate(args) -> int:
    tol = _tol_from_args(args)
    prob = io.load_problem(args.problem)
    rep = RunReport("reformulate")
    rep.add("n", prob.n)
    rep.add("m", prob.m)
    try:
        d = diagonalize_qcqp(prob, tol, opts=SearchOptions(seed=args.seed))
    except SdFailure as exc:
        _outcome_lines(rep, exc.outcome, [])
        rep.add("reformulation", "none (forms not certified SD)")
        sys.stdout.write(rep.render())
        return _EXIT[exc.outcome.verdict]

    homogeneous = d.kind in (Kind.HOMOGENEOUS_MULTI, Kind.GENERAL_MULTI)
    form = args.form or ("lp" if homogeneous else "socp")
    try:
        model = emit_lp(d) if form == "lp" else emit_socp(d)
    except ValueError as exc:
        raise UsageError(f"--form {form} does not fit a {d.kind.value} problem: {exc}") from exc
    ex = classify_exactness(d)
    rep.add("kind", d.kind.value)
    rep.add("verdict", d.outcome.verdict.value)
    rep.add("cond(P)", _num(np.linalg.cond(d.P.P)))
    rep.add("form", form)
    rep.add("variables", len(model.vars))
    rep.add("rows", len(model.rows))
    rep.add("cones", len(model.cones))
    rep.add("exactness", f"{ex.status.value} ({ex.tag})")
    rep.add("exactness condition", ex.condition)
    result = {"model": model.to_dict(), "exactness": {"status": ex.status.value, "tag": ex.tag, "condition": ex.condition}}
    if args.verify:
        vr = verify_reformulation(prob, d, samples=args.verify, seed=args.seed)
        rep.add("verification samples", vr.samples)
        rep.add("verification max discrepancy", f"{vr.max_discrepancy:.3e}")
        rep.add("verification", "passed" if vr.passed else "FAILED")
        result["verification"] = {"samples": vr.samples, "max_discrepancy": vr.max_discrepancy,
                                  "per_function": vr.per_function, "passed": vr.passed}
    if args.verbose:
        rep.add("delta", _vec(d.delta))
        rep.add("epsilon", _vec(d.epsilon))
        for i, c in enumerate(d.constraints):
            rep.add(f"alpha{i + 1}", _vec(c.alpha))
            rep.add(f"beta{i + 1}", _vec(c.beta))
        if form == "lp":
            rep.lines.extend(model.to_lp_text().rstrip("\n").split("\n"))
    sys.stdout.write(rep.render())
    if args.out:
        if str(args.out).endswith(".lp"):
            if form != "lp":
                raise UsageError("LP text export needs --form lp")
            with open(args.out, "w") as fh:
                fh.write(model.to_lp_text())
        else:
            io.dump_json(args.out, result)
    return EXIT_SD


def cmd_verify(args) -> int:
    """Re-check a certificate against the original matrices using numeric_core only."""
    tol = _tol_from_args(args)
    with open(args.certificate) as fh:
        cert = json.load(fh)
    if "P" not in cert:
        raise UsageError("certificate has no P")
    P = np.array(cert["P"], dtype=float)
    mats = [io.load_matrix(f) for f in args.files]
    for M in mats:
        if M.shape[0] != P.shape[0]:
            raise DimensionError(f"matrix is {M.shape[0]}x{M.shape[0]}, P is {P.shape[0]}x{P.shape[1]}")
    rep = RunReport("verify")
    s = np.linalg.svd(P, compute_uv=False)
    nonsingular = s.size == 0 or s[-1] > tol.eps_rank * s[0]
    rep.add("cond(P)", _num(s[0] / s[-1]) if s.size and s[-1] > 0 else "inf")
    ok = nonsingular
    for i, (M, r) in enumerate(zip(mats, certificate_residuals(P, mats))):
        diag_ok = is_diagonal(apply_congruence(P, M), tol)
        ok &= diag_ok
        rep.add(f"relative offdiag residual M{i}", f"{r:.3e}" + ("" if diag_ok else " (not diagonal)"))
    rep.add("certificate", "valid" if ok else "INVALID")
    sys.stdout.write(rep.render())
    return EXIT_SD if ok else EXIT_NOT_SD


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-rank", type=float, default=None, help="relative rank threshold (default 1e-10)")
    common.add_argument("--tol-offdiag", type=float, default=None, help="relative off-diagonal threshold (default 1e-8)")
    common.add_argument("--tol-cluster", type=float, default=None, help="eigenvalue clustering threshold (default 1e-6)")
    common.add_argument("--seed", type=int, default=0, help="seed for pencil search and verification sampling")
    common.add_argument("--out", default=None, help="write certificate / model here")
    common.add_argument("--verbose", action="store_true", help="print intermediate matrices")

    ap = argparse.ArgumentParser(prog="sdcong", description="Simultaneous diagonalization by congruence.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pair", parents=[common], help="test a pair A, B")
    p.add_argument("A")
    p.add_argument("B")
    p.set_defaults(func=cmd_pair)

    f = sub.add_parser("family", parents=[common], help="test a family A1 ... Am")
    f.add_argument("files", nargs="+")
    f.add_argument("--pencil", default=None, help='comma-separated weights, e.g. "1,0,0"')
    f.set_defaults(func=cmd_family)

    r = sub.add_parser("reformulate", parents=[common], help="diagonalize a QCQP and emit LP/SOCP")
    r.add_argument("problem")
    r.add_argument("--form", choices=["lp", "socp"], default=None)
    r.add_argument("--verify", type=int, default=0, metavar="N", help="check the reformulation on N random points")
    r.set_defaults(func=cmd_reformulate)

    v = sub.add_parser("verify", parents=[common], help="re-check a certificate against matrices")
    v.add_argument("certificate")
    v.add_argument("files", nargs="+")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SD if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, DimensionError, OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
