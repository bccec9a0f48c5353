"""Command line front end.

Every command prints a JSON report (or CSV where noted) to stdout or to
``--out``.  Exit codes: 0 success, 1 unreadable input or bad arguments,
2 failed precondition, 3 numerical failure; errors are reported on stderr
as ``{"error": code, "message": text, "context": {...}}``.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import models, perturbation, positivity, rank_one
from .errors import EvposError, NumericalError, ParseError, PreconditionError
from .io import jsonable, load_json, load_matrix
from .linalg import DEFAULT_TOL, expm

DEMOS = {
    "counterexample-3d": "3x3 generator losing eventual positivity along A + sB beyond s = 4",
    "positive-family": "strongly positive C_{a,s} whose sum with the 3x3 generator is not "
                       "eventually positive",
    "reflection-interval": "reflection model on [-1, 1]: a small rank-one perturbation "
                           "destroys eventual positivity",
    "cyclic-d": "bordered cyclic generator: strong positivity is fragile, eventual strong "
                "positivity is not",
    "nonlocal-laplacian": "Laplacian with non-local boundary conditions: eventually strongly "
                          "positive, not positive",
    "hilbert-quantitative": "positive symmetric perturbations of norm < 1 of the non-local "
                            "Laplacian keep eventual strong positivity",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _lambda(text):
    parts = [p.strip() for p in str(text).split(",")]
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise ParseError(f"cannot parse lambda {text!r}") from exc
    if len(vals) == 1:
        return vals[0]
    if len(vals) == 2:
        return complex(vals[0], vals[1]) if vals[1] else vals[0]
    raise ParseError(f"cannot parse lambda {text!r}")


def _s_range(text):
    try:
        a, b, step = (float(p) for p in text.split(":"))
    except ValueError as exc:
        raise ParseError(f"--s-range must be a:b:step, got {text!r}") from exc
    if step <= 0 or b < a:
        raise ParseError(f"--s-range needs a <= b and step > 0, got {text!r}")
    k = int(np.floor((b - a) / step + 1e-9))
    return a + step * np.arange(k + 1)


def _float_list(text):
    try:
        return [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"cannot parse number list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="evpos", description="Eventual positivity of matrix semigroups.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--tol-pos", type=float, help="positivity margin")
        sp.add_argument("--tol-spec", type=float, help="spectral equality tolerance")
        return sp

    sp = add("classify", "classify the semigroup generated by a matrix")
    sp.add_argument("--input", required=True)

    sp = add("resolvent-scan", "eventual strong positivity of the resolvent at an eigenvalue")
    sp.add_argument("--input", required=True)
    sp.add_argument("--lambda", dest="lam", type=_lambda, required=True)

    sp = add("rank1-resolvent", "resolvent of a rank-one perturbation")
    sp.add_argument("--input", required=True)
    sp.add_argument("--rank1", required=True, help='JSON {"phi": [...], "v": [...], "alpha": a}')
    sp.add_argument("--lambda", dest="lam", type=_lambda, required=True)

    sp = add("rank1-semigroup", "semigroup of a rank-one perturbation along an eigenvector")
    sp.add_argument("--input", required=True)
    sp.add_argument("--rank1", required=True)
    sp.add_argument("--lambda", dest="lam", type=_lambda, required=True,
                    help="eigenvalue lambda0 with A v = lambda0 v")
    sp.add_argument("--t", type=float, required=True)

    sp = add("radius", "admissible perturbation norm around an isolated eigenvalue")
    sp.add_argument("--input", required=True)
    sp.add_argument("--lambda", dest="lam", type=_lambda, required=True)
    sp.add_argument("--radius", type=float, required=True)

    sp = add("certify", "certify a positive or diagonal perturbation")
    sp.add_argument("--input", required=True)
    sp.add_argument("--perturbation", required=True)
    sp.add_argument("--lambda", dest="lam", type=_lambda, required=True)
    sp.add_argument("--radius", type=float, required=True)

    sp = add("scan-eigencurve", "follow an eigenpair of A + sB (symmetric A, B)")
    sp.add_argument("--input", required=True)
    sp.add_argument("--perturbation", required=True)
    sp.add_argument("--s-range", type=_s_range, required=True)
    sp.add_argument("--gauge", type=int)
    sp.add_argument("--gauge-value", type=float)

    sp = add("destroyer", "search for a positive rank-one perturbation destroying "
                          "eventual positivity")
    sp.add_argument("--input", required=True)
    sp.add_argument("--mu-offsets", type=_float_list,
                    help="comma separated offsets of mu above s(A)")

    sp = add("demo", "run a built-in example")
    sp.add_argument("demo_id")
    sp.add_argument("--s", type=float)
    sp.add_argument("--grid-n", type=int)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--csv", help="also write plot data as CSV here")

    sp = add("probe-openness", "random perturbations preserving eventual strong positivity")
    sp.add_argument("--input", required=True)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--scale", type=float, default=0.5)
    sp.add_argument("--seed", type=int, default=0)

    add("list-demos", "list the built-in examples")
    return p


# --- commands ------------------------------------------------------------------

def _tol(args):
    return DEFAULT_TOL.with_(pos=args.tol_pos, spec=args.tol_spec)


def _rank1(path):
    d = load_json(path)
    if not isinstance(d, dict) or "phi" not in d or "v" not in d:
        raise ParseError("rank-one JSON needs 'phi' and 'v'")
    try:
        return rank_one.Rank1.from_dict(d)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _cmd_classify(args, tol):
    return positivity.classify_semigroup(load_matrix(args.input), tol).to_dict()


def _cmd_resolvent_scan(args, tol):
    return positivity.classify_resolvent_at(load_matrix(args.input), args.lam, tol).to_dict()


def _cmd_rank1_resolvent(args, tol):
    A = load_matrix(args.input)
    p = _rank1(args.rank1)
    return {"lambda": args.lam, "resolvent": rank_one.resolvent_rank1(A, args.lam, p, tol)}


def _cmd_rank1_semigroup(args, tol):
    A = load_matrix(args.input)
    p = _rank1(args.rank1)
    F = rank_one.semigroup_rank1(A, args.t, p.alpha * p.phi, p.v, args.lam, tol)
    return {"t": args.t, "semigroup": F}


def _cmd_radius(args, tol):
    A = load_matrix(args.input)
    eps = perturbation.eigenvalue_radius(A, args.lam, args.radius, tol=tol)
    return {"lambda0": args.lam, "radius": args.radius, "epsilon": eps}


def _cmd_certify(args, tol):
    A = load_matrix(args.input)
    B = load_matrix(args.perturbation)
    diagonal = not np.any(B - np.diag(np.diag(B)))
    if diagonal and np.any(np.real(B) < 0):
        cert = perturbation.certify_multiplication_perturbation(A, args.lam, args.radius, B,
                                                               tol=tol)
        kind = "multiplication"
    else:
        cert = perturbation.certify_resolvent_perturbation(A, args.lam, args.radius, B, tol=tol)
        kind = "positive"
    return {"kind": kind, "certificate": cert.to_dict()}


def _cmd_scan_eigencurve(args, tol):
    A = load_matrix(args.input)
    B = load_matrix(args.perturbation)
    pts = perturbation.eigencurve(A, B, args.s_range, gauge=args.gauge,
                                  gauge_value=args.gauge_value, tol=tol)
    if args.format == "csv":
        return perturbation.eigencurve_to_csv(pts)
    return {"points": [p.to_dict() for p in pts]}


def _cmd_destroyer(args, tol):
    A = load_matrix(args.input)
    return rank_one.destroyer_scan(A, args.mu_offsets, tol=tol).to_dict()


def _cmd_probe_openness(args, tol):
    A = load_matrix(args.input)
    return perturbation.openness_probe(A, args.trials, args.scale, args.seed, tol=tol).to_dict()


def _cmd_list_demos(args, tol):
    if args.format == "csv":
        return "".join(f"{k},{v}\n" for k, v in DEMOS.items())
    return {"demos": [{"id": k, "description": v} for k, v in DEMOS.items()]}


# --- demos -----------------------------------------------------------------------

def _demo_counterexample(args, tol):
    A, B = models.example_counterexample_3d()
    s = 4.05 if args.s is None else args.s
    rep = positivity.classify_semigroup(A + s * B, tol)
    pts = perturbation.eigencurve(A, B, 3.5 + 0.05 * np.arange(21), gauge=2, gauge_value=1.0,
                                  tol=tol)
    at4 = pts[10]
    csv_text = perturbation.eigencurve_to_csv(pts)
    report = {"demo": "counterexample-3d", "s": s, "report": rep.to_dict(),
              "spectrum": np.linalg.eigvalsh(A + s * B)[::-1],
              "eigencurve_at_4": {"lambda": at4.lambda_s, "u": at4.u_s,
                                  "dlambda": at4.dlambda_ds, "du": at4.du_ds}}
    return report, csv_text


def _demo_positive_family(args, tol):
    A, _ = models.example_counterexample_3d()
    s = 4.05 if args.s is None else args.s
    thr = models.positive_family_threshold(s, tol=tol)
    a = 0.5 * thr if args.alpha is None else args.alpha
    C = models.example_positive_family(a, s)
    return {"demo": "positive-family", "s": s, "a": a, "threshold_a": thr,
            "C_verdict": positivity.classify_semigroup(C, tol).verdict.value,
            "sum_report": positivity.classify_semigroup(A + C, tol).to_dict()}, None


def _demo_reflection(args, tol):
    n = 65 if args.grid_n is None else args.grid_n
    alpha = 0.1 if args.alpha is None else args.alpha
    eps = 0.02 if args.epsilon is None else args.epsilon
    model = models.example_reflection_interval(n)
    rep = models.demo_small_perturbation(model, alpha, eps, tol=tol)
    return {"demo": "reflection-interval", "n": n,
            "continuum_boundary_value": models.boundary_value_formula(alpha, eps)
            if alpha > 0 else None,
            "report": rep.to_dict()}, rep.to_csv()


def _demo_cyclic(args, tol):
    d = 3 if args.grid_n is None else args.grid_n
    eps = 0.01 if args.epsilon is None else args.epsilon
    A, B = models.example_cyclic(d)
    ts = [0.1, 1.0, 10.0]
    rep = positivity.classify_semigroup(A + eps * B, tol)
    return {"demo": "cyclic-d", "d": d, "epsilon": eps,
            "spectrum": np.sort(np.linalg.eigvalsh(A))[::-1],
            "expm_min_entries": {str(t): float(expm(A, t, tol=tol).min()) for t in ts},
            "A_verdict": positivity.classify_semigroup(A, tol).verdict.value,
            "perturbed_report": rep.to_dict()}, None


def _demo_laplacian(args, tol):
    n = 64 if args.grid_n is None else args.grid_n
    model = models.example_nonlocal_laplacian(n)
    G = model.operator_A
    R0 = np.linalg.inv(-G)
    f = lambda x: np.cos(3 * x) + x ** 2  # noqa: E731
    err = np.abs(R0 @ f(model.grid) - model.oracle(f, model.grid))
    rep = positivity.classify_semigroup(G, tol)
    return {"demo": "nonlocal-laplacian", "n": n,
            "spectral_bound": float(np.max(np.linalg.eigvals(G).real)),
            "resolvent_norm_at_0": model.weighted_norm(R0),
            "kernel_oracle_error": float(err.max()),
            "report": rep.to_dict()}, None


def _demo_hilbert(args, tol):
    n = 64 if args.grid_n is None else args.grid_n
    trials = 20 if args.trials is None else args.trials
    norm = 0.5 if args.alpha is None else args.alpha
    model = models.example_nonlocal_laplacian(n)
    rng = np.random.default_rng(args.seed)
    base = models.demo_hilbert_quantitative(model, tol=tol)
    verdicts = []
    for _ in range(trials):
        B = perturbation.random_perturbation(n, norm, rng, nonneg=True, symmetric=True)
        verdicts.append(models.demo_hilbert_quantitative(model, B, tol=tol).verdict)
    kept = sum(v == positivity.Verdict.EVENTUALLY_STRONGLY_POSITIVE.value for v in verdicts)
    return {"demo": "hilbert-quantitative", "n": n, "norm_B": norm, "seed": args.seed,
            "unperturbed": base.to_dict(), "trials": trials,
            "fraction_preserved": kept / trials if trials else 1.0}, None


_DEMO_RUNNERS = {
    "counterexample-3d": _demo_counterexample,
    "positive-family": _demo_positive_family,
    "reflection-interval": _demo_reflection,
    "cyclic-d": _demo_cyclic,
    "nonlocal-laplacian": _demo_laplacian,
    "hilbert-quantitative": _demo_hilbert,
}


def _cmd_demo(args, tol):
    runner = _DEMO_RUNNERS.get(args.demo_id)
    if runner is None:
        raise ParseError(f"unknown demo {args.demo_id!r}", known=sorted(DEMOS))
    report, csv_text = runner(args, tol)
    if args.csv and csv_text is not None:
        with open(args.csv, "w") as fh:
            fh.write(csv_text)
    if args.format == "csv":
        if csv_text is None:
            raise ParseError(f"demo {args.demo_id!r} has no CSV output")
        return csv_text
    return report


_COMMANDS = {
    "classify": _cmd_classify,
    "resolvent-scan": _cmd_resolvent_scan,
    "rank1-resolvent": _cmd_rank1_resolvent,
    "rank1-semigroup": _cmd_rank1_semigroup,
    "radius": _cmd_radius,
    "certify": _cmd_certify,
    "scan-eigencurve": _cmd_scan_eigencurve,
    "destroyer": _cmd_destroyer,
    "demo": _cmd_demo,
    "probe-openness": _cmd_probe_openness,
    "list-demos": _cmd_list_demos,
}

_CSV_COMMANDS = {"scan-eigencurve", "demo", "list-demos"}


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(exc, code):
    payload = {"error": getattr(exc, "code", "error"), "message": str(exc),
               "context": jsonable(getattr(exc, "context", {}))}
    sys.stderr.write(json.dumps(payload) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise ParseError("a command is required", commands=sorted(_COMMANDS))
        if args.format == "csv" and args.command not in _CSV_COMMANDS:
            raise ParseError(f"command {args.command!r} has no CSV output")
        tol = _tol(args)
        result = _COMMANDS[args.command](args, tol)
        if isinstance(result, str):
            text = result
        else:
            text = json.dumps(jsonable(result), indent=2) + "\n"
        _emit(text, args.out)
    except ParseError as exc:
        return _error(exc, 1)
    except PreconditionError as exc:
        return _error(exc, 2)
    except NumericalError as exc:
        return _error(exc, 3)
    except EvposError as exc:
        return _error(exc, 3)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
