"""Command line front end.

Subcommands: ``mu`` (rearrangement of an input), ``kcurve`` (CSV of the K-
and M-curves), ``decompose`` (optimal two-space splitting at a given u),
``check-interp`` (interpolation certificates for a homomorphism),
``korbit`` (K-orbit norm and pointwise constant), ``counterexample`` (the
unit-ball separation pair with certificate), ``transfer`` (plan, build and
verify pipeline), ``verify-suite`` (the deterministic property battery).

Data outputs are JSON and CSV with fixed 17-significant-digit rendering, so
identical inputs, seeds and versions produce byte-identical files.  Report
paths also render figures next to the delimited output unless
``--no-figures`` is given.  Exit codes: 0 success, 1 a mathematical check
failed, 2 bad input or I/O.

Check tolerances can be relaxed or tightened for exploration by setting the
environment variable ``L0LINF_TOL_SCALE`` to a positive factor (default 1,
i.e. off).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .figures import (
    save_counterexample_figure,
    save_curve_figure,
    save_step_figure,
    save_transfer_figure,
)
from .homs import hom_from_dict, hom_to_dict
from .kcalc import format_sig, k_at, k_curve_csv, log_grid, m_curve_csv, optimal_decomposition
from .matmodel import TraceMatrix, as_singular, matrix_from_dict, matrix_to_dict, mu_of
from .orbits import CounterexampleSpec, counterexample, korbit_norm, pointwise_constant
from .stepfn import StepFunction, step_from_dict, step_to_dict
from .homs import enorm_bound_check, interpolation_check
from .suite import run_suite
from .symnorm import builtin_norms, get_norm
from .transfer import build, plan, plan_to_dict, verify

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_IO = 2


def _tol_scale() -> float:
    raw = os.environ.get("L0LINF_TOL_SCALE")
    if raw is None:
        return 1.0
    scale = float(raw)
    if not scale > 0.0:
        raise ValueError("L0LINF_TOL_SCALE must be positive")
    return scale


def _write_text(path, text: str):
    """Write atomically: the file appears complete or not at all."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path, obj):
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_operand(path):
    """Matrix or step function, decided by the JSON fields."""
    d = _load_json(path)
    if isinstance(d, dict) and "re" in d:
        return matrix_from_dict(d)
    if isinstance(d, dict) and "breakpoints" in d:
        return step_from_dict(d)
    raise ValueError(f"{path}: neither a matrix object ('re') nor a step function ('breakpoints')")


def _load_matrix(path) -> TraceMatrix:
    obj = _load_operand(path)
    if not isinstance(obj, TraceMatrix):
        raise ValueError(f"{path}: expected a matrix object")
    return obj


# -- subcommands ----------------------------------------------------------


def _cmd_mu(args) -> int:
    obj = _load_operand(args.input)
    mu = as_singular(obj)
    _write_json(args.out, step_to_dict(mu))
    if args.figures:
        fig = Path(args.out).with_suffix(".png")
        if isinstance(obj, StepFunction):
            save_step_figure(fig, [(obj, "input"), (mu, "rearrangement")])
        else:
            save_step_figure(fig, [(mu, "singular value function")])
    print(f"mu: {len(mu.values)} pieces, support={format_sig(mu.support_measure())}")
    return EXIT_OK


def _cmd_kcurve(args) -> int:
    mu = as_singular(_load_operand(args.input))
    us = log_grid(args.u_min, args.u_max, args.points)
    _write_text(args.out, k_curve_csv(mu, us))
    paths = [args.out]
    ks = [k_at(mu, u) for u in us]
    if args.m_out:
        _write_text(args.m_out, m_curve_csv(mu, us))
        paths.append(args.m_out)
    if args.figures:
        from .kcalc import m_at

        fig = Path(args.out).with_suffix(".png")
        series = [(us, ks, "K_u")]
        if args.m_out:
            series.append((us, [m_at(mu, u) for u in us], "M_t"))
        save_curve_figure(fig, series, "u", "value", title="functional curves")
    print("kcurve: wrote " + ", ".join(str(p) for p in paths))
    return EXIT_OK


def _cmd_decompose(args) -> int:
    obj = _load_operand(args.input)
    g, h, value = optimal_decomposition(obj, args.u)
    prefix = args.out_prefix
    if isinstance(obj, TraceMatrix):
        _write_json(f"{prefix}_g.json", matrix_to_dict(g))
        _write_json(f"{prefix}_h.json", matrix_to_dict(h))
    else:
        _write_json(f"{prefix}_g.json", step_to_dict(g))
        _write_json(f"{prefix}_h.json", step_to_dict(h))
    if args.figures:
        if isinstance(obj, TraceMatrix):
            parts = [(mu_of(obj), "input profile"), (mu_of(g), "finite-support part"),
                     (mu_of(h), "bounded part")]
        else:
            # raw parts, not rearranged: the bounded part may carry a tail
            # above interior zeros, which has no finite rearrangement
            parts = [(obj, "input"), (g, "finite-support part"), (h, "bounded part")]
        save_step_figure(f"{prefix}.png", parts, title=f"optimal splitting at u={args.u:g}")
    print(f"decompose: value={format_sig(value)} at u={format_sig(args.u)}")
    return EXIT_OK


def _cmd_check_interp(args) -> int:
    tol = 1e-9 * _tol_scale()
    hom = hom_from_dict(_load_json(args.hom))
    x = _load_matrix(args.x)
    reports = [interpolation_check(hom, x, tol=tol)]
    norms = [get_norm(k) for k in args.norms.split(",")] if args.norms else builtin_norms()
    for norm in norms:
        reports.append(enorm_bound_check(hom, x, norm))
    text = "\n".join(str(r) for r in reports) + "\n"
    if args.out:
        _write_text(args.out, text)
    print(text, end="")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_CHECK


def _cmd_korbit(args) -> int:
    x = _load_operand(args.x)
    a = _load_operand(args.a)
    ko = korbit_norm(x, a)
    pc = pointwise_constant(x, a)
    lines = [
        f"korbit_norm={format_sig(ko)}",
        f"pointwise_constant={'none' if pc is None else format_sig(pc)}",
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        _write_text(args.out, text)
    if args.figures and args.out:
        from .kcalc import k_curve

        mx, ma = as_singular(x), as_singular(a)
        cx, ca = k_curve(mx), k_curve(ma)
        us = log_grid(1e-3, 1e3, 200)
        save_curve_figure(
            Path(args.out).with_suffix(".png"),
            [(us, [cx.at(u) for u in us], "K-curve of X"),
             (us, [ca.at(u) for u in us], "K-curve of A")],
            "u",
            "K_u",
            title="K-curves",
        )
    print(text, end="")
    return EXIT_OK


def _cmd_counterexample(args) -> int:
    spec = CounterexampleSpec(
        Fraction(args.tau1),
        Fraction(args.tau2),
        args.k1,
        args.k2,
        Fraction(args.weight) if args.weight else None,
    )
    a, x, rep = counterexample(spec)
    outdir = Path(args.out_dir)
    _write_json(outdir / "A.json", matrix_to_dict(a))
    _write_json(outdir / "X.json", matrix_to_dict(x))
    _write_text(outdir / "certificate.txt", str(rep) + "\n")
    mua, mux = mu_of(a), mu_of(x)
    us = log_grid(1e-3, 1e3, 100)
    _write_text(outdir / "kcurve_A.csv", k_curve_csv(mua, us))
    _write_text(outdir / "kcurve_X.csv", k_curve_csv(mux, us))
    if args.figures:
        save_counterexample_figure(
            outdir / "certificate.png",
            mua,
            mux,
            us,
            [k_at(mua, u) for u in us],
            [k_at(mux, u) for u in us],
        )
    print(str(rep))
    return EXIT_OK if rep.ok else EXIT_CHECK


def _cmd_transfer(args) -> int:
    tol = 1e-9 * _tol_scale()
    a = _load_matrix(args.a)
    x = _load_matrix(args.x)
    p = plan(a, x)
    hom = build(p, a, x)
    rep = verify(hom, a, x, p, seed=args.seed, tol=tol)
    out = Path(args.out)
    _write_json(out, plan_to_dict(p))
    _write_json(out.with_name(out.stem + "_hom.json"), hom_to_dict(hom))
    _write_text(out.with_name(out.stem + "_report.txt"), str(rep) + "\n")
    if args.figures:
        save_transfer_figure(out.with_suffix(".png"), mu_of(a), mu_of(x), p.c)
    print(f"transfer: C={p.c}, eps={format_sig(p.eps)}, delta={format_sig(p.delta)}")
    print(str(rep))
    return EXIT_OK if rep.ok else EXIT_CHECK


def _cmd_verify_suite(args) -> int:
    result = run_suite(args.seed, only=args.only)
    if args.out:
        _write_text(args.out, result.text)
    print(result.text, end="")
    return EXIT_OK if result.ok else EXIT_CHECK


# -- parser ----------------------------------------------------------------


def _add_figures_flag(p):
    p.add_argument(
        "--figures",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="render figures next to the data outputs (default on)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="l0linf",
        description="rearrangement and interpolation calculus on step functions and matrix models",
    )
    parser.add_argument("--version", action="version", version=f"l0linf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mu", help="decreasing rearrangement / singular value function")
    p.add_argument("--in", dest="input", required=True, help="step function or matrix JSON")
    p.add_argument("--out", required=True, help="output JSON path")
    _add_figures_flag(p)
    p.set_defaults(fn=_cmd_mu)

    p = sub.add_parser("kcurve", help="emit the K-curve (and optionally the M-curve) as CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True, help="CSV path for rows (u, K_u)")
    p.add_argument("--m-out", help="CSV path for rows (t, M_t)")
    p.add_argument("--u-min", type=float, default=1e-3)
    p.add_argument("--u-max", type=float, default=1e3)
    p.add_argument("--points", type=int, default=200)
    _add_figures_flag(p)
    p.set_defaults(fn=_cmd_kcurve)

    p = sub.add_parser("decompose", help="optimal finite-support + bounded splitting at u")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--out-prefix", required=True)
    _add_figures_flag(p)
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("check-interp", help="interpolation certificates for a homomorphism")
    p.add_argument("--hom", required=True, help="homomorphism JSON")
    p.add_argument("--x", required=True, help="matrix JSON")
    p.add_argument("--norms", help="comma-separated norm keys (default: all built-ins)")
    p.add_argument("--out", help="write the report here as well")
    p.set_defaults(fn=_cmd_check_interp)

    p = sub.add_parser("korbit", help="K-orbit norm and pointwise constant")
    p.add_argument("--x", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--out")
    _add_figures_flag(p)
    p.set_defaults(fn=_cmd_korbit)

    p = sub.add_parser("counterexample", help="unit-ball separation pair with certificate")
    p.add_argument("--tau1", required=True, help="trace of the first projection (exact rational)")
    p.add_argument("--tau2", required=True, help="trace of the second projection (exact rational)")
    p.add_argument("--k1", type=float, required=True)
    p.add_argument("--k2", type=float, required=True)
    p.add_argument("--weight", help="explicit trace weight (must divide both traces)")
    p.add_argument("--out-dir", required=True)
    _add_figures_flag(p)
    p.set_defaults(fn=_cmd_counterexample)

    p = sub.add_parser("transfer", help="plan, build and verify a transfer homomorphism")
    p.add_argument("--A", dest="a", required=True, help="source matrix JSON")
    p.add_argument("--X", dest="x", required=True, help="target matrix JSON")
    p.add_argument("--out", required=True, help="plan JSON path (hom and report are written next to it)")
    p.add_argument("--seed", type=int, default=0, help="seed for the sampled bound audit")
    _add_figures_flag(p)
    p.set_defaults(fn=_cmd_transfer)

    p = sub.add_parser("verify-suite", help="run the deterministic property battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the report here as well")
    p.add_argument("--only", help="run only checks whose name starts with this prefix")
    p.set_defaults(fn=_cmd_verify_suite)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
