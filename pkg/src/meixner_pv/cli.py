"""Command-line front end.

    meixner-pv coeffs --gamma 1.5 --beta 0.7 --c 0.4 --nmax 10
    meixner-pv verify all --seed 42
    meixner-pv table --c-grid 0.1:0.9:9 --nmax 5 --format json

Exit status is 0 on success, 1 on invalid input and 2 when a verification
check fails.  Tables go to stdout (or ``--out``), logs to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .dynamics import GAMMA_ONE_TOL, ab_to_uv
from .errors import DomainError, MeixnerPVError, PrecisionExhausted, ValidationError
from .measure import Lattice, ModelParams, validate
from .numeric import PrecisionConfig
from .orthopoly import stieltjes_coeffs
from .verify import SUITES, VerifyConfig, format_report, run_suite

SCHEMA = "meixner-pv/1"
EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2
COLUMNS = ["n", "a2", "b", "u", "v"]

log = logging.getLogger("meixner_pv")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is reserved for failed checks
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _number(text):
    """Parse a decimal or rational literal exactly."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _common(sub, formats=("csv", "json")):
    sub.add_argument("--gamma", type=_number, default=Fraction("1.5"))
    sub.add_argument("--beta", type=_number, default=Fraction("0.7"))
    sub.add_argument("--c", type=_number, default=Fraction("0.4"))
    sub.add_argument("--tau", type=_number, default=None, help="bi-lattice mixing weight")
    sub.add_argument("--lattice", choices=["n", "shifted", "bilattice"], default="n")
    sub.add_argument("--nmax", type=int, default=10)
    sub.add_argument("--precision-bits", type=int, default=256)
    sub.add_argument("--rel-tol", type=float, default=None)
    sub.add_argument("--abs-tol", type=float, default=None)
    sub.add_argument("--format", choices=list(formats), default=formats[0])
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None, help="output file (default stdout)")
    sub.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="meixner-pv", description=__doc__.split("\n")[0])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = subs.add_parser("coeffs", help="recurrence coefficients and (u, v) for n = 0..nmax")
    _common(p)

    p = subs.add_parser("verify", help="run verification suites")
    p.add_argument("suite", choices=list(SUITES) + ["all"])
    p.add_argument("--samples", type=int, default=100, help="random samples per check")
    _common(p, formats=("text", "csv", "json"))
    p.set_defaults(nmax=15)

    p = subs.add_parser("table", help="coefficients over a grid of c values")
    p.add_argument("--c-grid", required=True, help="'start:stop:num' or a comma-separated list")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _common(p)
    return parser


def precision_from(args) -> PrecisionConfig:
    try:
        return PrecisionConfig(args.precision_bits, args.rel_tol, args.abs_tol)
    except (ValueError, DomainError) as exc:
        raise UsageError(str(exc)) from None


def params_from(args, c=None) -> ModelParams:
    params = ModelParams(args.gamma, args.beta, args.c if c is None else c, Lattice.parse(args.lattice), args.tau)
    bad = validate(params)
    if bad:
        raise ValidationError(bad)
    return params


def parse_grid(spec: str) -> list[Fraction]:
    """``"a:b:n"`` gives ``n`` equispaced points from ``a`` to ``b``; otherwise a comma list."""
    try:
        if ":" in spec:
            a, b, num = spec.split(":")
            a, b, num = Fraction(a), Fraction(b), int(num)
            if num < 1:
                raise ValueError
            if num == 1:
                return [a]
            return [a + (b - a) * i / (num - 1) for i in range(num)]
        return [Fraction(x) for x in spec.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad c grid {spec!r}") from None


def _fmt(x, cfg: PrecisionConfig) -> str:
    if x is None:
        return ""
    digits = math.ceil(cfg.mantissa_bits * math.log10(2)) + 1
    return cfg.ctx.nstr(cfg.mpf(x), digits) if x != 0 else "0"


def coeff_rows(params: ModelParams, n_max: int, cfg: PrecisionConfig):
    """Rows of strings ``[n, a2, b, u, v]`` and the table metadata."""
    table = stieltjes_coeffs(params, n_max, cfg)
    gamma_one = abs(float(params.gamma) - 1) < GAMMA_ONE_TOL
    rows = []
    for n, a2, b in table.entries:
        u = v = None
        if not gamma_one:
            u, v = ab_to_uv(n, a2, b, params, cfg)
        rows.append([str(n), _fmt(a2, cfg), _fmt(b, cfg), _fmt(u, cfg), _fmt(v, cfg)])
    meta = {
        "truncation_K": table.truncation_K,
        "tail_bound": _fmt(table.tail_bound, cfg),
        "est_correct_digits": f"{table.est_correct_digits:.2f}",
    }
    return rows, meta


def _table_job(job):
    gamma, beta, c, lattice, tau, n_max, bits, rel_tol, abs_tol = job
    cfg = PrecisionConfig(bits, rel_tol, abs_tol)
    params = ModelParams(gamma, beta, c, lattice, tau)
    rows, meta = coeff_rows(params, n_max, cfg)
    return _fmt(c, cfg), rows, meta


def _param_meta(args, cfg):
    return {
        "gamma": str(args.gamma),
        "beta": str(args.beta),
        "c": str(args.c),
        "tau": None if args.tau is None else str(args.tau),
        "lattice": args.lattice,
        "nmax": args.nmax,
        "precision_bits": cfg.mantissa_bits,
        "rel_tol": _fmt(cfg.rel_tol, double_cfg()),
        "abs_tol": _fmt(cfg.abs_tol, double_cfg()),
    }


def double_cfg():
    return PrecisionConfig(53)


def _write_csv(header, rows, comments=()):
    buf = io.StringIO()
    for key, val in comments:
        buf.write(f"# {key}={val}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_coeffs(args) -> tuple[str, int]:
    cfg = precision_from(args)
    params = params_from(args)
    rows, meta = coeff_rows(params, args.nmax, cfg)
    info = {**_param_meta(args, cfg), **meta}
    if args.format == "json":
        doc = {"schema": SCHEMA, "kind": "coeffs", "meta": info, "columns": COLUMNS, "rows": rows}
        return json.dumps(doc, indent=1) + "\n", EXIT_OK
    return _write_csv(COLUMNS, rows, info.items()), EXIT_OK


def cmd_table(args) -> tuple[str, int]:
    cfg = precision_from(args)
    grid = parse_grid(args.c_grid)
    if not grid:
        raise UsageError("empty c grid")
    for c in grid:
        params_from(args, c)
    jobs = [
        (args.gamma, args.beta, c, args.lattice, args.tau, args.nmax, cfg.mantissa_bits, args.rel_tol, args.abs_tol)
        for c in grid
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_table_job, jobs))
    else:
        results = [_table_job(j) for j in jobs]
    header = ["c"] + COLUMNS
    rows = [[c] + r for c, rs, _ in results for r in rs]
    info = _param_meta(args, cfg)
    info["c"] = args.c_grid
    info["est_correct_digits_min"] = f"{min(float(m['est_correct_digits']) for _, _, m in results):.2f}"
    info["truncation_K_max"] = max(m["truncation_K"] for _, _, m in results)
    if args.format == "json":
        doc = {"schema": SCHEMA, "kind": "table", "meta": info, "columns": header, "rows": rows}
        return json.dumps(doc, indent=1) + "\n", EXIT_OK
    return _write_csv(header, rows, info.items()), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    cfg = precision_from(args)
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    vc = VerifyConfig(
        gamma=args.gamma, beta=args.beta, c=args.c, tau=args.tau,
        precision=cfg, seed=args.seed, samples=args.samples, n_max=args.nmax,
    )
    checks = run_suite(args.suite, vc)
    code = EXIT_VERIFY if any(ch.failed for ch in checks) else EXIT_OK
    fields = ["suite", "check", "status", "max_residual", "tol", "detail"]

    def cell(x):
        return "" if x is None else f"{x:.6e}"

    rows = [[ch.suite, ch.name, ch.status, cell(ch.max_residual), cell(ch.tol), ch.detail] for ch in checks]
    if args.format == "json":
        doc = {
            "schema": SCHEMA,
            "kind": "verify",
            "meta": {**_param_meta(args, cfg), "suite": args.suite, "seed": args.seed, "samples": args.samples},
            "passed": code == EXIT_OK,
            "checks": [dict(zip(fields, r)) for r in rows],
        }
        return json.dumps(doc, indent=1) + "\n", code
    if args.format == "csv":
        return _write_csv(fields, rows), code
    return format_report(checks) + "\n", code


COMMANDS = {"coeffs": cmd_coeffs, "verify": cmd_verify, "table": cmd_table}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        text, code = COMMANDS[args.command](args)
    except ValidationError as exc:
        log.error("invalid parameters: %s", ", ".join(exc.violations))
        return EXIT_INVALID
    except (UsageError, PrecisionExhausted, DomainError, MeixnerPVError) as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
