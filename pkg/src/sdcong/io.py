"""Readers/writers for matrix, problem, certificate and model files."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import scipy.io

from .numeric_core import DimensionError, as_symmat
from .outcome import SdOutcome
from .qcqp_reform import Interval, QcqpProblem, Sense


def load_matrix(path) -> np.ndarray:
    """Read ``{"n": .., "data": [[..], ..]}`` JSON or a MatrixMarket file."""
    path = Path(path)
    if path.suffix.lower() in (".mtx", ".mm"):
        M = scipy.io.mmread(str(path))
        M = M.toarray() if hasattr(M, "toarray") else np.asarray(M)
        return as_symmat(M)
    with open(path) as fh:
        obj = json.load(fh)
    return matrix_from_json(obj)


def matrix_from_json(obj) -> np.ndarray:
    if isinstance(obj, dict):
        data = obj["data"]
        n = obj.get("n")
    else:
        data, n = obj, None
    return as_symmat(data, n)


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=float)
    return {"n": int(M.shape[0]), "data": M.tolist()}


def save_matrix(path, M) -> None:
    dump_json(path, matrix_to_json(M))


def _sense_from_json(s):
    if isinstance(s, dict):
        lo, hi = s["interval"]
        return Interval(float(lo), float(hi))
    return Sense(s)


def _sense_to_json(s):
    if isinstance(s, Interval):
        return {"interval": [s.lower, s.upper]}
    return s.value


def problem_from_json(obj) -> QcqpProblem:
    n = int(obj["n"])
    obj_part = obj["objective"]
    A0 = matrix_from_json(obj_part["A"])
    if A0.shape[0] != n:
        raise DimensionError(f"objective matrix is {A0.shape[0]}x{A0.shape[0]}, expected n = {n}")
    cons = []
    for c in obj.get("constraints", []):
        cons.append((matrix_from_json(c["A"]), c.get("a"), float(c.get("d", 0.0)), _sense_from_json(c.get("sense", "le"))))
    return QcqpProblem.build(A0, obj_part.get("a"), cons)


def problem_to_json(p: QcqpProblem) -> dict:
    return {
        "n": p.n,
        "objective": {"A": p.A0.tolist(), "a": p.a0.tolist()},
        "constraints": [
            {"A": c.A.tolist(), "a": c.a.tolist(), "d": c.d, "sense": _sense_to_json(c.sense)} for c in p.constraints
        ],
    }


def load_problem(path) -> QcqpProblem:
    with open(path) as fh:
        return problem_from_json(json.load(fh))


def certificate_to_json(out: SdOutcome) -> dict:
    d = {
        "verdict": out.verdict.value,
        "obstruction": out.obstruction.value if out.obstruction else None,
        "detail": out.detail,
    }
    if out.congruence is not None:
        d["P"] = out.congruence.P.tolist()
        d["cond_P"] = out.congruence.cond_estimate
        d["diagonals"] = [np.asarray(x).tolist() for x in out.diagonals]
    return d


def dump_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
