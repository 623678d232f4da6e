"""Batch command-line front end.

Subcommands::

    series       winding distributions of the closed-form generating functions
    cone         corridor-confined counts, classification, asymptotic triple
    verify       exact and numeric self-check suites
    asymptotics  coefficient law vs exact coefficients at s = e^{i pi p/q}
    oracle       raw dynamic-programming count tables

Output is deterministic (sorted keys, stable row order): byte-identical runs
for identical configurations.  Exact integers are emitted as JSON integers or
exponent/numerator/denominator triples, never as floats.  Exit codes: 0 ok,
1 invalid configuration, 2 exact verification failure, 3 numeric tolerance
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .cone import (
    ConeSpec,
    DegenerateCase,
    ToleranceExceeded,
    classify,
    cone_asymptotic,
    reflect_series,
    reflect_series_rou,
)
from .coverwalk import enumerate_walks, excursion_series, verify_functional_equation
from .series import TSeries, WindingPoly
from .thetaq import GFRequest, excursion_gf, vertex_excursion_gf
from .thetanum import (
    DegenerateAlpha,
    kernel_suite,
    qhat_expansion_check,
    winding_asymptotic_report,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2
EXIT_TOLERANCE = 3

PRECISION_ENV = "KREWERAS_PRECISION"


@dataclass(frozen=True)
class RunConfig:
    command: str
    variant: str = "cell"
    order: int = 6
    k: int = 0
    k1: int = -1
    k2: int = 1
    alpha_p: int = 1
    alpha_q: int = 2
    fmt: str = "json"
    suite: str = "functional-eq"
    t: float = 0.2
    samples: int = 100
    precision: float = 1e-10
    source: str = "closed"

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValueError("order must be >= 0")
        if self.fmt not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        frac = Fraction(self.alpha_p, self.alpha_q)
        if not 0 <= frac <= 1:
            raise ValueError("alpha must be a rational multiple p/q of pi in [0, 1]")


def _poly_triples(p: WindingPoly) -> list[list[int]]:
    return [[e, c.numerator, c.denominator] for e, c in sorted(p.as_dict().items())]


def _emit(config: RunConfig, meta: dict, rows: list[dict], out) -> None:
    if config.fmt == "json":
        doc = {"meta": meta, "rows": rows}
        json.dump(doc, out, sort_keys=True, separators=(",", ": "), indent=1)
        out.write("\n")
    else:
        cols = sorted({key for row in rows for key in row})
        out.write(",".join(cols) + "\n")
        for row in rows:
            out.write(",".join(str(row.get(c, "")) for c in cols) + "\n")


def _meta(config: RunConfig, **params) -> dict:
    return {
        "command": config.command,
        "parameters": dict(sorted(params.items())),
        "truncation": config.order,
        "version": __version__,
    }


def _series_rows(gf: TSeries, fmt: str) -> list[dict]:
    rows = []
    for n in range(gf.trunc + 1):
        poly = gf.coefficient(n)
        if fmt == "json":
            rows.append({"n": n, "coeffs": _poly_triples(poly)})
        else:
            for e, c in sorted(poly.as_dict().items()):
                rows.append({"n": n, "k": e, "count": c.numerator if c.denominator == 1 else str(c)})
    return rows


def cmd_series(config: RunConfig, out) -> int:
    if config.source == "dp":
        gf = excursion_series(config.variant, config.order)
    elif config.variant == "cell":
        gf = excursion_gf(GFRequest("cell", config.order))
    else:
        gf = vertex_excursion_gf(GFRequest("vertex", config.order))
    meta = _meta(config, variant=config.variant, order=config.order, source=config.source)
    _emit(config, meta, _series_rows(gf, config.fmt), out)
    return EXIT_OK


def cmd_cone(config: RunConfig, out) -> int:
    spec = ConeSpec(config.k, config.k1, config.k2)
    series = reflect_series(spec, config.order)
    rows = [
        {"n": n, "count": int(series.coefficient(n).coefficient(0))}
        for n in range(config.order + 1)
    ]
    meta = _meta(config, k=spec.k, k1=spec.k1, k2=spec.k2, order=config.order)
    meta["classification"] = classify(spec).value
    try:
        const, expo, base = cone_asymptotic(spec)
        meta["asymptotic"] = {
            "constant": "%.12e" % const,
            "polynomial_exponent": "%.12e" % expo,
            "growth_base": "%.12e" % base,
        }
    except DegenerateCase:
        meta["asymptotic"] = None
    _emit(config, meta, rows, out)
    return EXIT_OK


def cmd_oracle(config: RunConfig, out) -> int:
    table = enumerate_walks(config.variant, config.order)
    rows = []
    for n, layer in enumerate(table.layers):
        for (k, a, b), c in sorted(layer.items()):
            rows.append({"n": n, "k": k, "a": a, "b": b, "count": c})
    meta = _meta(config, variant=config.variant, order=config.order)
    _emit(config, meta, rows, out)
    return EXIT_OK


def cmd_verify(config: RunConfig, out, err) -> int:
    suite = config.suite
    meta = _meta(config, suite=suite)
    rows: list[dict] = []
    code = EXIT_OK
    if suite == "functional-eq":
        for variant in ("cell", "vertex"):
            rep = verify_functional_equation(variant, config.order)
            rows.append({"check": f"functional-eq-{variant}", "pass": rep.ok,
                         "detail": str(rep)})
            if not rep.ok:
                code = EXIT_VERIFY
    elif suite == "oracle-equivalence":
        for variant, builder in (("cell", excursion_gf), ("vertex", vertex_excursion_gf)):
            closed = builder(GFRequest(variant, config.order))
            dp = excursion_series(variant, config.order)
            bad = None
            for n in range(config.order + 1):
                if closed.coefficient(n) != dp.coefficient(n):
                    bad = n
                    break
            rows.append({"check": f"oracle-equivalence-{variant}", "pass": bad is None,
                         "detail": "exact match" if bad is None else f"first mismatch at t^{bad}"})
            if bad is not None:
                code = EXIT_VERIFY
    elif suite == "kernel":
        res = kernel_suite(config.t, config.samples)
        ok = res["max_kernel_residual"] < config.precision
        rows.append({"check": "kernel", "pass": ok,
                     "detail": "max residual %.3e" % res["max_kernel_residual"]})
        rows.append({"check": "kernel-symmetry", "pass": res["max_symmetry_residual"] < config.precision,
                     "detail": "max |X(z)-X(pi tau - z)| = %.3e" % res["max_symmetry_residual"]})
        if not ok:
            code = EXIT_TOLERANCE
    elif suite == "jacobi":
        rep = qhat_expansion_check()
        rows.append({"check": "jacobi-identity", "pass": rep.jacobi_residual < config.precision,
                     "detail": "max residual %.3e" % rep.jacobi_residual})
        rows.append({"check": "qhat-expansion", "pass": max(rep.errors) < 1e-6,
                     "detail": "fitted (%.9f, %.6f, %.6f)" % rep.fitted})
        if not rep.ok:
            code = EXIT_TOLERANCE
    elif suite == "reflection-cross-check":
        spec = ConeSpec(config.k, config.k1, config.k2)
        try:
            reflect_series_rou(spec, config.order)
            rows.append({"check": "reflection-cross-check", "pass": True,
                         "detail": f"root-of-unity sum matches through t^{config.order}"})
        except ToleranceExceeded as exc:
            rows.append({"check": "reflection-cross-check", "pass": False, "detail": str(exc)})
            code = EXIT_TOLERANCE
    else:
        raise ValueError(f"unknown suite {suite!r}")
    _emit(config, meta, rows, out)
    if code != EXIT_OK:
        failing = [r["check"] for r in rows if not r["pass"]]
        print(f"verification failed: {', '.join(failing)}", file=err)
    return code


def cmd_asymptotics(config: RunConfig, out, err) -> int:
    alpha = math.pi * config.alpha_p / config.alpha_q
    try:
        rep = winding_asymptotic_report(alpha, n_max=config.order)
    except DegenerateAlpha as exc:
        print(f"invalid alpha: {exc}", file=err)
        return EXIT_CONFIG
    rows = []
    for n, val, pred, rel in rep.rows:
        rows.append({
            "n": n,
            "coefficient": "%.12e%+.12ej" % (val.real, val.imag),
            "prediction": "%.12e%+.12ej" % (pred.real, pred.imag),
            "relative_error": "%.6e" % rel,
        })
    meta = _meta(config, alpha=f"{config.alpha_p}/{config.alpha_q}", order=config.order)
    meta["zero_off_lattice"] = rep.zero_off_lattice
    _emit(config, meta, rows, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kreweras",
        description="Exact winding-angle walk counts on the Kreweras lattice, with checks.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, order_default):
        p.add_argument("--order", type=int, default=order_default)
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    p = sub.add_parser("series", help="winding distributions by length")
    p.add_argument("--variant", choices=("cell", "vertex"), default="cell")
    p.add_argument("--source", choices=("closed", "dp"), default="closed")
    common(p, 6)

    p = sub.add_parser("cone", help="corridor-confined counts")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    common(p, 12)

    p = sub.add_parser("verify", help="self-check suites")
    p.add_argument(
        "--suite",
        choices=("functional-eq", "oracle-equivalence", "kernel", "jacobi", "reflection-cross-check"),
        default="functional-eq",
    )
    p.add_argument("--t", type=float, default=0.2)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--k1", type=int, default=-1)
    p.add_argument("--k2", type=int, default=1)
    p.add_argument("--precision", type=float, default=None)
    common(p, 10)

    p = sub.add_parser("asymptotics", help="coefficient law vs exact coefficients")
    p.add_argument("--alpha", default="1/2", help="rational multiple p/q of pi")
    common(p, 36)

    p = sub.add_parser("oracle", help="raw DP count tables")
    p.add_argument("--variant", choices=("cell", "vertex"), default="cell")
    common(p, 6)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    kwargs = {"command": args.command, "order": args.order, "fmt": args.fmt}
    if hasattr(args, "variant"):
        kwargs["variant"] = args.variant
    if hasattr(args, "source"):
        kwargs["source"] = args.source
    for name in ("k", "k1", "k2", "suite", "t", "samples"):
        if hasattr(args, name):
            kwargs[name] = getattr(args, name)
    if hasattr(args, "alpha"):
        p, _, q = str(args.alpha).partition("/")
        frac = Fraction(int(p), int(q or 1))
        kwargs["alpha_p"], kwargs["alpha_q"] = frac.numerator, frac.denominator
    precision = getattr(args, "precision", None)
    if precision is None:
        precision = float(os.environ.get(PRECISION_ENV, 1e-10))
    kwargs["precision"] = precision
    return RunConfig(**kwargs)


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        config = _config_from_args(args)
        if config.command == "series":
            return cmd_series(config, out)
        if config.command == "cone":
            return cmd_cone(config, out)
        if config.command == "verify":
            return cmd_verify(config, out, err)
        if config.command == "asymptotics":
            return cmd_asymptotics(config, out, err)
        if config.command == "oracle":
            return cmd_oracle(config, out)
        raise ValueError(f"unknown command {config.command!r}")
    except (ValueError, DegenerateCase) as exc:
        print(f"invalid configuration: {exc}", file=err)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
