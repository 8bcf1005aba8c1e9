"""Command-line front end.

Subcommands: ``check`` (feasibility verdict), ``synth`` (Kraus synthesis),
``apply`` (channel application), ``coherence`` (purity probe + unitary
test), ``sweep`` (one-parameter family to CSV) and ``gen`` (seeded random
state sets).  All structured output is deterministic JSON (17-significant-
digit floats); sweeps emit CSV.  Exit codes: 0 positive outcome, 1
negative outcome (infeasible / decohering), 2 input or usage error,
3 qualified verdicts (NecessaryOnly, Undetermined).  Configuration is
explicit: flags only, no environment variables.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import serialize
from .coherence import UNITARY_RELATED, coherence_roundtrip
from .errors import DetchanError, NotFeasibleError, SchemaError
from .feasibility import FEASIBLE, INFEASIBLE, build_ratio_matrix, feasibility_check
from .numerics import DEFAULT_RANK_TOL, DEFAULT_TOL
from .states import StateSet, random_state_set, superpose
from .synthesis import (
    apply_channel,
    state_to_density,
    synthesize,
    transform_report,
    validate_density,
    verify_completeness,
)
from .coherence import purity

_EXIT_BY_VERDICT = {FEASIBLE: 0, INFEASIBLE: 1}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DetchanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detchan",
        description="Deterministic transformations between pure-state sets: "
        "feasibility, Kraus synthesis, coherence analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="feasibility verdict for a state-set pair")
    p.add_argument("initial", help="initial state-set JSON file")
    p.add_argument("final", help="final state-set JSON file")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("synth", help="synthesize Kraus operators for a feasible pair")
    p.add_argument("initial")
    p.add_argument("final")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("apply", help="apply a Kraus channel to a state or density matrix")
    p.add_argument("kraus", help="Kraus-set JSON file")
    p.add_argument("state", help="single-state StateSet JSON or density-matrix JSON")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_apply)

    p = sub.add_parser("coherence", help="purity probe plus unitary-relation test")
    p.add_argument("initial")
    p.add_argument("final")
    p.add_argument(
        "--coeffs",
        required=True,
        help="comma-separated superposition coefficients (python complex "
        "literals, e.g. '1,1' or '0.5+0.5j,1'); at least two nonzero",
    )
    _add_common_flags(p)
    p.set_defaults(func=_cmd_coherence)

    p = sub.add_parser("sweep", help="one-parameter family of instances to CSV")
    p.add_argument("template", help="template JSON with expressions in the parameter")
    p.add_argument("--param", default="theta", help="parameter name (default theta)")
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True, help="grid size (>= 2)")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("gen", help="seeded random state set")
    p.add_argument("dimension", type=int)
    p.add_argument("n_states", type=int)
    p.add_argument("--mode", default="generic", choices=["generic", "independent", "unitary_image"])
    p.add_argument("--base", help="base state-set JSON (unitary_image mode)")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_gen)
    return parser


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)
    p.add_argument("--purity-tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write output to this file instead of stdout")


def _load_state_set(path) -> StateSet:
    return serialize.state_set_from_obj(serialize.load_document(path))


def _write(text: str, out_path) -> None:
    # The document is fully rendered before any write, so failures never
    # leave a partial file behind.
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_check(args) -> int:
    initial = _load_state_set(args.initial)
    final = _load_state_set(args.final)
    report = feasibility_check(initial, final, args.tol)
    _write(serialize.dumps(serialize.feasibility_report_to_obj(report)), args.out)
    return _EXIT_BY_VERDICT.get(report.verdict, 3)


def _cmd_synth(args) -> int:
    initial = _load_state_set(args.initial)
    final = _load_state_set(args.final)
    try:
        ks = synthesize(initial, final, args.tol, args.rank_tol)
    except NotFeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    obj = serialize.kraus_set_to_obj(ks)
    obj["verification"] = {
        "kraus_count": ks.kraus_count,
        "completeness_residual": verify_completeness(ks),
        "states": [
            {
                "index": rec.index,
                "fidelity": rec.fidelity,
                "total_probability": rec.total_probability,
            }
            for rec in transform_report(ks, initial, final)
        ],
    }
    _write(serialize.dumps(obj), args.out)
    return 0


def _cmd_apply(args) -> int:
    ks = serialize.kraus_set_from_obj(serialize.load_document(args.kraus))
    doc = serialize.load_document(args.state)
    if isinstance(doc, dict) and "states" in doc:
        state_set = serialize.state_set_from_obj(doc)
        if state_set.n != 1:
            raise SchemaError(f"apply expects a single state, got {state_set.n}")
        rho = state_to_density(state_set.states[0])
    elif isinstance(doc, dict) and "matrix" in doc:
        rho = validate_density(serialize.density_from_obj(doc))
    else:
        raise SchemaError("input must be a StateSet or density-matrix document")
    out = apply_channel(ks, rho)
    obj = serialize.density_to_obj(out)
    obj["purity"] = purity(out)
    _write(serialize.dumps(obj), args.out)
    return 0


def _cmd_coherence(args) -> int:
    initial = _load_state_set(args.initial)
    final = _load_state_set(args.final)
    try:
        coeffs = [complex(tok.strip()) for tok in args.coeffs.split(",")]
    except ValueError as exc:
        raise SchemaError(f"unparseable coefficient list {args.coeffs!r}: {exc}") from exc
    if len(coeffs) != initial.n:
        raise SchemaError(f"{len(coeffs)} coefficients for {initial.n} states")
    if sum(1 for c in coeffs if c != 0) < 2:
        raise SchemaError("need at least two nonzero coefficients")
    rec = coherence_roundtrip(initial, final, coeffs, args.tol, args.rank_tol, args.purity_tol)
    _write(serialize.dumps(serialize.roundtrip_to_obj(rec)), args.out)
    return 0 if (rec.agree and rec.test.verdict == UNITARY_RELATED) else 1


_TEMPLATE_NAMES = {
    "cos": math.cos,
    "sin": math.sin,
    "tan": math.tan,
    "sqrt": math.sqrt,
    "exp": math.exp,
    "pi": math.pi,
}


def _eval_component(value, param: str, theta: float) -> float:
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            # Templates are local configuration; the eval environment is
            # restricted to the math names above plus the parameter.
            result = eval(  # noqa: S307
                value, {"__builtins__": {}}, dict(_TEMPLATE_NAMES, **{param: theta})
            )
            return float(result)
        except Exception as exc:
            raise SchemaError(f"bad template expression {value!r}: {exc}") from exc
    raise SchemaError(f"template amplitude component must be a number or string, got {value!r}")


def _template_state_set(entries, param: str, theta: float) -> StateSet:
    if not isinstance(entries, list) or not entries:
        raise SchemaError("template state list must be a non-empty list")
    vectors = []
    for state in entries:
        vec = [
            complex(
                _eval_component(pair[0], param, theta),
                _eval_component(pair[1], param, theta),
            )
            for pair in state
        ]
        vectors.append(vec)
    return StateSet.from_vectors(vectors, normalize=True)


def _cmd_sweep(args) -> int:
    if args.steps < 2:
        raise SchemaError(f"sweep needs at least 2 steps, got {args.steps}")
    doc = serialize.load_document(args.template)
    if not isinstance(doc, dict) or "initial" not in doc or "final" not in doc:
        raise SchemaError("template needs 'initial' and 'final' state lists")
    rows = ["theta,min_eigenvalue,verdict,max_abs_mu,uniform_purity"]
    for theta in np.linspace(args.start, args.stop, args.steps):
        theta = float(theta)
        initial = _template_state_set(doc["initial"], args.param, theta)
        final = _template_state_set(doc["final"], args.param, theta)
        report = feasibility_check(initial, final, args.tol)
        m = build_ratio_matrix(initial, final, args.tol)
        offdiag = np.array(m.defined)
        np.fill_diagonal(offdiag, False)
        max_mu = float(np.max(np.abs(m.entries[offdiag]))) if np.any(offdiag) else None
        uniform_purity = None
        if report.verdict == FEASIBLE:
            ks = synthesize(initial, final, args.tol, args.rank_tol)
            vec, _ = superpose(initial, np.ones(initial.n))
            uniform_purity = purity(apply_channel(ks, state_to_density(vec)))
        rows.append(
            ",".join(
                [
                    serialize.format_float(theta),
                    serialize.format_float(report.min_eigenvalue)
                    if report.min_eigenvalue is not None
                    else "",
                    report.verdict,
                    serialize.format_float(max_mu) if max_mu is not None else "",
                    serialize.format_float(uniform_purity)
                    if uniform_purity is not None
                    else "",
                ]
            )
        )
    _write("\n".join(rows) + "\n", args.out)
    return 0


def _cmd_gen(args) -> int:
    base = _load_state_set(args.base) if args.base else None
    s = random_state_set(
        args.dimension, args.n_states, args.seed, mode=args.mode, base=base
    )
    _write(serialize.dumps(serialize.state_set_to_obj(s)), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
