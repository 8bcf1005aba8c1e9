"""Deterministic JSON encoding for state sets, channels and reports.

Floats are rendered with 17 significant digits so every double round-trips
exactly; dictionaries keep a fixed key order; complex scalars are [re, im]
pairs.  Emission is hand-rolled to keep the byte stream fully
deterministic (golden-file friendly): the same object always serializes
to the same bytes.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .coherence import CoherenceReport, CoherenceRoundTrip
from .errors import SchemaError
from .feasibility import FeasibilityReport, PairOverlap
from .states import StateSet
from .synthesis import KrausSet


def format_float(x) -> str:
    v = float(x)
    if not np.isfinite(v):
        raise SchemaError(f"cannot serialize non-finite value {v!r}")
    if v == 0.0:
        return "0"
    return format(v, ".17g")


def _depth(obj) -> int:
    if isinstance(obj, (list, tuple)):
        return 1 + max((_depth(x) for x in obj), default=0)
    if isinstance(obj, dict):
        return 99
    return 0


def _emit(obj, out: list[str], level: int, indent: int) -> None:
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(f"{inner}{json.dumps(str(key))}: ")
            _emit(value, out, level + 1, indent)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        if _depth(obj) <= 2:
            out.append("[")
            for i, value in enumerate(obj):
                _emit(value, out, level, indent)
                if i < len(obj) - 1:
                    out.append(", ")
            out.append("]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(inner)
            _emit(value, out, level + 1, indent)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(repr(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif obj is None:
        out.append("null")
    else:
        raise SchemaError(f"cannot serialize value of type {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Serialize to deterministic, diff-friendly JSON (trailing newline)."""
    out: list[str] = []
    _emit(obj, out, 0, indent)
    out.append("\n")
    return "".join(out)


# ----------------------------------------------------------------------
# complex <-> [re, im] codecs

def complex_pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def vector_to_pairs(v) -> list:
    return [complex_pair(z) for z in np.asarray(v).reshape(-1)]


def matrix_to_pairs(m) -> list:
    return [vector_to_pairs(row) for row in np.asarray(m)]


def _pair_to_complex(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise SchemaError(f"expected an [re, im] pair, got {pair!r}")
    re, im = pair
    if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
        raise SchemaError(f"non-numeric [re, im] pair {pair!r}")
    return complex(re, im)


def pairs_to_vector(pairs) -> np.ndarray:
    return np.array([_pair_to_complex(p) for p in pairs], dtype=np.complex128)


def pairs_to_matrix(pairs) -> np.ndarray:
    if not isinstance(pairs, list) or not pairs:
        raise SchemaError("expected a non-empty list of rows")
    rows = [pairs_to_vector(row) for row in pairs]
    lengths = {row.shape[0] for row in rows}
    if len(lengths) != 1:
        raise SchemaError("matrix rows have inconsistent lengths")
    return np.vstack(rows)


# ----------------------------------------------------------------------
# domain objects

def state_set_to_obj(s: StateSet) -> dict:
    return {
        "dimension": s.dimension,
        "states": [vector_to_pairs(row) for row in s.states],
        "labels": list(s.labels) if s.labels is not None else None,
    }


def state_set_from_obj(obj) -> StateSet:
    if not isinstance(obj, dict) or "states" not in obj:
        raise SchemaError("state-set document needs a 'states' key")
    states = obj["states"]
    if not isinstance(states, list) or not states:
        raise SchemaError("'states' must be a non-empty list")
    arr = np.vstack([pairs_to_vector(vec) for vec in states])
    dimension = obj.get("dimension", arr.shape[1])
    if not isinstance(dimension, int):
        raise SchemaError(f"'dimension' must be an integer, got {dimension!r}")
    labels = obj.get("labels")
    if labels is not None and (
        not isinstance(labels, list) or not all(isinstance(x, str) for x in labels)
    ):
        raise SchemaError("'labels' must be a list of strings or null")
    return StateSet(dimension=dimension, states=arr, labels=tuple(labels) if labels else None)


def kraus_set_to_obj(ks: KrausSet) -> dict:
    return {
        "dimension": ks.dimension,
        "operators": [matrix_to_pairs(op) for op in ks.operators],
        "c_factor": matrix_to_pairs(ks.c_factor) if ks.c_factor is not None else None,
        "initial_fingerprint": ks.initial_fingerprint,
        "final_fingerprint": ks.final_fingerprint,
    }


def kraus_set_from_obj(obj) -> KrausSet:
    if not isinstance(obj, dict) or "operators" not in obj:
        raise SchemaError("Kraus document needs an 'operators' key")
    ops = obj["operators"]
    if not isinstance(ops, list) or not ops:
        raise SchemaError("'operators' must be a non-empty list")
    operators = tuple(pairs_to_matrix(op) for op in ops)
    dimension = obj.get("dimension", operators[0].shape[0])
    c_factor = obj.get("c_factor")
    return KrausSet(
        dimension=dimension,
        operators=operators,
        c_factor=pairs_to_matrix(c_factor) if c_factor is not None else None,
        initial_fingerprint=obj.get("initial_fingerprint", ""),
        final_fingerprint=obj.get("final_fingerprint", ""),
    )


def density_to_obj(rho) -> dict:
    r = np.asarray(rho, dtype=np.complex128)
    return {"dimension": r.shape[0], "matrix": matrix_to_pairs(r)}


def density_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise SchemaError("density document needs a 'matrix' key")
    r = pairs_to_matrix(obj["matrix"])
    if r.shape[0] != r.shape[1]:
        raise SchemaError(f"density matrix must be square, got {r.shape}")
    return r


# ----------------------------------------------------------------------
# reports

def _pair_overlap_to_obj(p: PairOverlap) -> dict:
    return {
        "j": p.j,
        "k": p.k,
        "initial_overlap": p.initial_overlap,
        "final_overlap": p.final_overlap,
    }


def feasibility_report_to_obj(report: FeasibilityReport) -> dict:
    return {
        "verdict": report.verdict,
        "min_eigenvalue": report.min_eigenvalue,
        "violating_pairs": [_pair_overlap_to_obj(p) for p in report.violating_pairs],
        "initial_independent": report.initial_independent,
        "final_independent": report.final_independent,
        "notes": list(report.notes),
    }


def coherence_report_to_obj(report: CoherenceReport) -> dict:
    return {
        "verdict": report.verdict,
        "purity": report.output_purity,
        "is_pure": report.is_pure,
        "support": list(report.support),
        "phases": [float(p) for p in report.phases] if report.phases is not None else None,
        "unitary": (
            matrix_to_pairs(report.extracted_unitary)
            if report.extracted_unitary is not None
            else None
        ),
        "output_state": (
            vector_to_pairs(report.output_state) if report.output_state is not None else None
        ),
        "output_coefficients": (
            vector_to_pairs(report.output_coefficients)
            if report.output_coefficients is not None
            else None
        ),
    }


def roundtrip_to_obj(rec: CoherenceRoundTrip) -> dict:
    return {
        "purity": rec.probe.output_purity,
        "is_pure": rec.probe.is_pure,
        "probe_verdict": rec.probe.verdict,
        "test_verdict": rec.test.verdict,
        "agree": rec.agree,
        "support": list(rec.probe.support),
        "phases": (
            [float(p) for p in rec.test.phases] if rec.test.phases is not None else None
        ),
        "unitary": (
            matrix_to_pairs(rec.test.extracted_unitary)
            if rec.test.extracted_unitary is not None
            else None
        ),
        "output_coefficients": (
            vector_to_pairs(rec.probe.output_coefficients)
            if rec.probe.output_coefficients is not None
            else None
        ),
        "coefficient_law_residual": rec.coefficient_law_residual,
        "device_residual": rec.device_residual,
    }


def load_document(path) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
