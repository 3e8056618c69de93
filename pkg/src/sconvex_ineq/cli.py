"""Command-line interface: ``sconvex-ineq <verify|sweep|optimize|means|check-sconvex>``.

Reports go to stdout (or ``--out``) as JSON or CSV; a one-line verdict goes
to stderr. Exit status is 0 on pass, 1 when an inequality or golden value
fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import __version__
from .bounds import (
    CATALOG,
    evaluate_bound,
    hermite_hadamard_check,
    reproduce_corollary,
    simpson_classical_check,
)
from .core import (
    BoundReport,
    FunctionSpec,
    InequalityParams,
    Interval,
    SConvexError,
    builtin,
    validate_params,
)
from .explorer import SweepSpec, derivative_power, minimize_bound, sweep
from .identities import identity_residual, lemma2_closed, lemma2_oracle, relative_gap
from .means import PROPOSITIONS, mean_values
from .sconvexity import check_s_convex, estimate_max_s

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
TOL_RANGE = (1e-14, 1e-2)
DEFAULT_TOL = 1e-10

CSV_HEADER = ["s", "lambda", "mu", "p", "r", "u", "v", "lhs", "rhs", "margin", "ratio", "satisfied", "quad_error"]
LEMMA2_Y = [i / 10 for i in range(11)]
LEMMA2_X = [0.3, 0.5, 1.0, 2.0, 5.0]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    values: dict = field(default_factory=dict)
    fmt: str = "json"
    out: str | None = None
    tol: float = DEFAULT_TOL

    def get(self, key, default=None):
        value = self.values.get(key)
        return default if value is None else value

    def require(self, key):
        value = self.values.get(key)
        if value is None:
            raise UsageError(f"--{key.replace('_', '-')} is required for {self.command}")
        return value

    def interval(self) -> Interval:
        try:
            return Interval(float(self.require("u")), float(self.require("v")))
        except SConvexError as exc:
            raise UsageError(str(exc)) from None

    def function(self, iv: Interval | None = None) -> FunctionSpec:
        try:
            return builtin(self.require("f"), iv)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def params(self, mode: str = "bound") -> InequalityParams:
        p = self.get("p")
        r = self.get("r")
        if p is not None and r is None:
            r = p / (p - 1) if p > 1 else math.nan
        prm = InequalityParams(
            s=float(self.get("s", 1.0)),
            lam=float(self.require("lambda")),
            mu=float(self.require("mu")),
            p=None if p is None else float(p),
            r=1.0 if r is None else float(r),
        )
        try:
            return validate_params(prm, mode)
        except SConvexError as exc:
            raise UsageError(str(exc)) from None


# --- serialisation ---------------------------------------------------------------


def _fmt_number(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def render(command: str, reports: list, fmt: str) -> str:
    rows = [r.to_dict() if hasattr(r, "to_dict") else r for r in reports]
    if fmt == "json":
        doc = {"tool_version": __version__, "command": command, "reports": _json_safe(rows)}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    bound_rows = not rows or all(isinstance(r, BoundReport) for r in reports)
    if bound_rows:
        header = CSV_HEADER + ["status"]
    else:
        header = []
        for row in rows:
            header += [k for k in row if k not in header]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_number(row.get(k)) if not isinstance(row.get(k), dict) else json.dumps(row[k]) for k in header])
    return buf.getvalue()


def parse_json_reports(text: str) -> list[BoundReport]:
    """Inverse of the JSON rendering for bound reports."""
    doc = json.loads(text)

    def restore(v):
        if isinstance(v, str) and v in ("inf", "-inf", "nan"):
            return float(v)
        return v

    return [BoundReport.from_dict({k: restore(v) for k, v in row.items()}) for row in doc["reports"]]


# --- commands --------------------------------------------------------------------


def _verify_identity(cfg: RunConfig):
    iv = cfg.interval()
    fn = cfg.function()
    prm = cfg.params("identity")
    res = identity_residual(fn, iv, prm.lam, prm.mu, cfg.tol)
    ok = res["difference"] <= 100 * cfg.tol
    return [{**res, "lambda": prm.lam, "mu": prm.mu, "u": iv.u, "v": iv.v, "passed": ok}], ok


def _verify_lemma2(cfg: RunConfig):
    ys = [float(cfg.values["y"])] if cfg.values.get("y") is not None else LEMMA2_Y
    xs = [float(cfg.values["x"])] if cfg.values.get("x") is not None else LEMMA2_X
    rows, ok = [], True
    for y in ys:
        for x in xs:
            try:
                closed = lemma2_closed(y, x)
            except SConvexError as exc:
                raise UsageError(str(exc)) from None
            quad, err = lemma2_oracle(y, x)
            g0, g1 = relative_gap(closed.m0, quad.m0), relative_gap(closed.m1, quad.m1)
            passed = g0 <= 1e-9 and g1 <= 1e-9
            ok &= passed
            rows.append({"y": y, "x": x, "m0_closed": closed.m0, "m0_quad": quad.m0, "m1_closed": closed.m1,
                         "m1_quad": quad.m1, "rel_gap": max(g0, g1), "quad_error": err, "passed": passed})
    return rows, ok


def _hypothesis(fn: FunctionSpec, iv: Interval, prm: InequalityParams):
    try:
        return check_s_convex(derivative_power(fn, prm.r), prm.s, iv)
    except SConvexError:
        return None


def _verify_bound(cfg: RunConfig):
    which = cfg.get("which", "t1")
    iv = cfg.interval()
    fn = cfg.function()
    prm = cfg.params("bound")
    if which in ("t0", "holder") and prm.p is None:
        raise UsageError("--which t0 needs --p (or --r > 1)")
    report = evaluate_bound(fn, iv, prm, which, cfg.tol)
    if cfg.values.get("check_hypothesis"):
        hyp = _hypothesis(fn, iv, prm)
        if hyp is None or not hyp.passes:
            report = BoundReport.build(report.lhs, report.rhs, report.quad_error, prm, iv, status="hypothesis_failed",
                                       hypothesis_max_violation=math.nan if hyp is None else hyp.max_violation)
    return [report], not report.violated


def _verify_hh(cfg: RunConfig):
    iv = cfg.interval()
    left, right, (mid, mean, trap) = hermite_hadamard_check(cfg.function(), iv, cfg.tol)
    row = {"u": iv.u, "v": iv.v, "midpoint_value": mid, "mean_value": mean, "endpoint_average": trap,
           "left_ok": left, "right_ok": right}
    return [row], left and right


def _verify_simpson(cfg: RunConfig):
    iv = cfg.interval()
    fn = cfg.function(iv)
    bound = cfg.get("fourth_bound")
    if bound is not None:
        fn = replace(fn, fourth_deriv_bound=float(bound))
    if fn.fourth_deriv_bound is None:
        raise UsageError(f"no fourth-derivative bound known for {fn.label} on [{iv.u}, {iv.v}]; pass --fourth-bound")
    report = simpson_classical_check(fn, iv, cfg.tol)
    return [report], report.satisfied


def _verify_corollary(cfg: RunConfig):
    cid = cfg.require("id")
    if cid not in CATALOG:
        raise UsageError(f"unknown corollary id {cid!r}; choose from {sorted(CATALOG)}")
    rows = reproduce_corollary(cid)
    notes = CATALOG[cid].notes
    for row in rows:
        row["notes"] = "; ".join(notes)
    return rows, all(r["match"] for r in rows)


VERIFY = {
    "identity": _verify_identity,
    "lemma2": _verify_lemma2,
    "bound": _verify_bound,
    "hh": _verify_hh,
    "simpson": _verify_simpson,
    "corollary": _verify_corollary,
}


def load_sweep_spec(path: str, cfg: RunConfig) -> SweepSpec:
    """Read a sweep file: JSON with function, u, v, which and grids.

    Grid keys are ``s``, ``lambda``, ``mu``, ``r`` and ``p``. Leaving out
    ``mu`` sweeps the diagonal mu = lambda.
    """
    try:
        doc = json.loads(Path(path).read_text())
        iv = Interval(float(doc["u"]), float(doc["v"]))
        fn = builtin(doc["function"], iv)
        grids = {k: [float(x) for x in doc.get(k, [])] for k in ("s", "lambda", "mu", "r", "p")}
        which = doc.get("which", "power_mean")
        if which not in ("holder", "power_mean", "both", "t0", "t1"):
            raise ValueError(f"unknown bound {which!r}")
    except (OSError, KeyError, TypeError, ValueError, SConvexError) as exc:
        raise UsageError(f"cannot read sweep spec {path}: {exc}") from None
    return SweepSpec(
        function=fn,
        interval=iv,
        s_values=grids["s"],
        lambda_values=grids["lambda"],
        mu_values=grids["mu"],
        r_values=grids["r"],
        p_values=grids["p"],
        which=which,
        tol=cfg.tol,
        check_hypothesis=bool(cfg.values.get("check_hypothesis") or doc.get("check_hypothesis", False)),
        tie_lambda_mu="mu" not in doc,
    )


def cmd_sweep(cfg: RunConfig):
    spec = load_sweep_spec(cfg.require("spec"), cfg)
    reports = sweep(spec)
    return reports, not any(r.violated for r in reports)


def cmd_optimize(cfg: RunConfig):
    iv = cfg.interval()
    which = cfg.get("which", "power_mean")
    r = float(cfg.get("r", 2.0 if which in ("t0", "holder") else 1.0))
    if which in ("t0", "holder") and not r > 1:
        raise UsageError("the Hoelder bound needs r > 1")
    opt = minimize_bound(cfg.function(), iv, float(cfg.get("s", 1.0)), r, which, tol=cfg.tol)
    return [opt], opt.lhs <= opt.best_rhs + 1e-12


def cmd_means(cfg: RunConfig):
    u, v = float(cfg.require("u")), float(cfg.require("v"))
    p_exp = float(cfg.get("p_exponent", 1.0))
    try:
        rows = [mean_values(u, v, p_exp).to_dict()]
    except SConvexError as exc:
        raise UsageError(str(exc)) from None
    ok = True
    prop = cfg.get("prop")
    if prop is not None:
        if prop not in PROPOSITIONS:
            raise UsageError(f"unknown proposition {prop!r}; choose from {sorted(PROPOSITIONS)}")
        if prop == "p1" and cfg.get("p") is None and cfg.get("r") is None:
            raise UsageError("p1 needs --p or --r")
        try:
            report = PROPOSITIONS[prop](u, v, cfg.params("bound"))
        except SConvexError as exc:
            raise UsageError(str(exc)) from None
        rows.append(report)
        ok = report.satisfied
    return rows, ok


def cmd_check_sconvex(cfg: RunConfig):
    iv = cfg.interval()
    fn = cfg.function()
    s = float(cfg.require("s"))
    n = int(cfg.get("grid", 50))
    try:
        report = check_s_convex(fn.f, s, iv, n)
    except SConvexError as exc:
        raise UsageError(str(exc)) from None
    row = report.to_dict()
    if cfg.values.get("estimate"):
        row["estimated_max_s"] = estimate_max_s(fn.f, iv, n)
        row["estimate_kind"] = "empirical"
    return [row], report.passes


# --- argument parsing ------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file of option values; command-line flags win")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"))
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--tol", type=float)


def _function_args(p: argparse.ArgumentParser, params: bool = True) -> None:
    p.add_argument("--f", help="builtin: power:q=<q>, invpower:s=<s>, exp, xlnx, abs_shift:c=<c>, const:c=<c>")
    p.add_argument("--u", type=float)
    p.add_argument("--v", type=float)
    if params:
        p.add_argument("--s", type=float)
        p.add_argument("--lambda", dest="lambda", type=float)
        p.add_argument("--mu", type=float)
        p.add_argument("--p", type=float)
        p.add_argument("--r", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sconvex-ineq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="check an identity, a bound or printed constants")
    vsub = verify.add_subparsers(dest="target", required=True)
    for name in VERIFY:
        vp = vsub.add_parser(name)
        _common(vp)
        if name in ("identity", "bound"):
            _function_args(vp)
        elif name in ("hh", "simpson"):
            _function_args(vp, params=False)
        if name == "bound":
            vp.add_argument("--which", choices=("t0", "t1", "holder", "power_mean"))
            vp.add_argument("--check-hypothesis", action="store_true", default=None)
        if name == "simpson":
            vp.add_argument("--fourth-bound", type=float, help="sup of |f''''| on [u, v]")
        if name == "lemma2":
            vp.add_argument("--y", type=float)
            vp.add_argument("--x", type=float)
        if name == "corollary":
            vp.add_argument("--id", choices=sorted(CATALOG))

    sp = sub.add_parser("sweep", help="evaluate a bound over parameter grids")
    _common(sp)
    sp.add_argument("--spec", help="JSON sweep file")
    sp.add_argument("--check-hypothesis", action="store_true", default=None)

    op = sub.add_parser("optimize", help="minimise a bound over (lambda, mu)")
    _common(op)
    _function_args(op, params=False)
    op.add_argument("--s", type=float)
    op.add_argument("--r", type=float)
    op.add_argument("--which", choices=("t0", "t1", "holder", "power_mean"))

    mp = sub.add_parser("means", help="special means and the mean inequalities")
    _common(mp)
    mp.add_argument("--u", type=float)
    mp.add_argument("--v", type=float)
    mp.add_argument("--p-exponent", type=float, help="exponent of the generalised logarithmic mean")
    mp.add_argument("--prop", choices=sorted(PROPOSITIONS))
    for flag in ("--s", "--mu", "--p", "--r"):
        mp.add_argument(flag, type=float)
    mp.add_argument("--lambda", dest="lambda", type=float)

    cp = sub.add_parser("check-sconvex", help="grid test of s-convexity")
    _common(cp)
    _function_args(cp, params=False)
    cp.add_argument("--s", type=float)
    cp.add_argument("--grid", type=int)
    cp.add_argument("--estimate", action="store_true", default=None, help="also estimate the largest s")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if k not in ("command", "target", "config", "fmt", "out", "tol")}
    file_values: dict = {}
    if args.config:
        try:
            file_values = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(file_values, dict):
            raise UsageError("config file must hold a JSON object")
        file_values = {k.replace("-", "_"): v for k, v in file_values.items()}
        if "format" in file_values:
            file_values["fmt"] = file_values.pop("format")
    for key, value in file_values.items():
        if values.get(key) is None:
            values[key] = value

    def pick(key, default):
        flag = getattr(args, key, None)
        return flag if flag is not None else file_values.get(key, default)

    tol = float(pick("tol", DEFAULT_TOL))
    if not TOL_RANGE[0] <= tol <= TOL_RANGE[1]:
        raise UsageError(f"--tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}], got {tol:g}")
    command = args.command if args.command != "verify" else f"verify {args.target}"
    return RunConfig(command=command, values=values, fmt=pick("fmt", "json"), out=pick("out", None), tol=tol)


COMMANDS = {
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
    "means": cmd_means,
    "check-sconvex": cmd_check_sconvex,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        handler = VERIFY[args.target] if args.command == "verify" else COMMANDS[args.command]
        reports, ok = handler(cfg)
    except UsageError as exc:
        print(f"sconvex-ineq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(cfg.command, reports, cfg.fmt)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    print(f"{cfg.command}: {'PASS' if ok else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
