"""Command-line front end: ``python3 -m prodcodes <subcommand> ...``.

Exit codes: 0 ok, 1 verification mismatch, 2 invalid input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import channel, coloring, deca, enumeration
from .product import PRESETS, ProductCode, preset, product_from_params, rate_analysis

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3

# Reference values the verify command recomputes.
TABLE_I = [1, 1, 2, 2, 4, 4, 7, 8, 12, 14, 21, 24, 34, 41, 55, 66, 88, 105, 137, 165, 210, 253, 320, 383, 478, 574,
           708, 847, 1039, 1238, 1507]
TABLE_II_X = {2: 1, 3: 6, 4: 90, 5: 2040, 6: 67950, 7: 3110940, 8: 187530840}
TABLE_II_Y = {2: 0, 3: 45, 4: 816, 5: 22650, 6: 888840, 7: 46882710, 8: 3199593600}
UNION_COEFFS = {
    "cp1": {9: 48400, 10: 0, 11: 0, 12: 6098400, 13: 23522400, 14: 17641800, 15: 1754335440},
    "cp2": {9: 203840, 12: 44946720, 13: 174894720, 14: 131171040},
}
# Printed boundary coefficients that disagree with the full count; reported, not asserted.
PRINTED_BOUNDARY = {"cp1": {16: 9126691200}, "cp2": {15: 17839261440, 16: 126887941180}}
FIXTURE_METRICS = {
    "eq25": {"code": (9, 6, 9, 6), "rho_hist": {1: 9}},
    "eq27": {"code": "cp1", "eta": 24, "rho_max": 3},
    "eq29": {"code": "cp2", "eta": 30, "rho_max": 5},
    "fig8a": {"code": "cp1", "eta": 32, "rho_max": 2, "eta_min": 8},
    "fig9a": {"code": "cp2", "eta": 40, "rho_max": 3, "eta_min": 10},
    "fig10": {"code": "cp3", "rho_hist": {1: 40, 2: 10}},
}
RHO_U = {"cp1": 5, "cp2": 7}


class InvalidInput(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    code: str | None = None
    params: dict = field(default_factory=dict)
    seed: int = 0
    format: str = "json"
    out: str | None = None
    threads: int = 0


def parse_code(spec: str, m: int = 8) -> ProductCode:
    """Preset name (cp1, cp2, cp3) or ``n1,k1,n2,k2[,m]``."""
    if spec in PRESETS:
        return preset(spec, m)
    try:
        nums = [int(x) for x in spec.split(",")]
    except ValueError:
        raise InvalidInput(f"code must be a preset {sorted(PRESETS)} or n1,k1,n2,k2[,m]; got {spec!r}") from None
    if len(nums) not in (4, 5):
        raise InvalidInput(f"code must have 4 or 5 comma-separated integers; got {spec!r}")
    if len(nums) == 5:
        m = nums.pop()
    try:
        return product_from_params(*nums, m=m)
    except ValueError as e:
        raise InvalidInput(str(e)) from None


def parse_grid(text: str) -> list[float]:
    """``a..b`` (10 points), ``a..b:n`` (n points) or a comma list."""
    try:
        if ".." in text:
            rng, _, count = text.partition(":")
            a, b = (float(x) for x in rng.split(".."))
            n = int(count) if count else 10
            return [float(x) for x in np.linspace(a, b, n)]
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise InvalidInput(f"bad grid {text!r}; use a..b[:n] or a,b,c") from None


def parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = (int(x) for x in text.split(".."))
            return list(range(a, b + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InvalidInput(f"bad range {text!r}; use a..b or a,b,c") from None


def parse_count(text: str) -> int:
    try:
        v = float(text)
    except ValueError:
        raise InvalidInput(f"bad count {text!r}") from None
    if v < 1 or v != int(v):
        raise InvalidInput(f"count must be a positive integer, got {text!r}")
    return int(v)


def load_coloring(name: str, code: ProductCode | None = None) -> coloring.Coloring:
    if name in coloring.FIXTURES:
        return coloring.fixture(name)[1]
    try:
        return coloring.load_json(name, code)
    except FileNotFoundError:
        raise InvalidInput(f"no fixture or file named {name!r}") from None


def emit(cfg: RunConfig, data, rows: list[dict] | None = None) -> str:
    """Render output with the resolved config in the header."""
    header = asdict(cfg)
    if cfg.format == "csv" and rows is not None:
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(header, sort_keys=True) + "\n")
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps({"config": header, "data": data}, indent=1, sort_keys=True, default=_jsonable) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    raise TypeError(f"not serializable: {type(x)}")


def _num(x: float):
    return "inf" if isinstance(x, float) and math.isinf(x) else x


# Subcommands.


def cmd_verify(cfg: RunConfig) -> int:
    lines: list[tuple[str, str, str]] = []

    def check(name: str, got, want) -> None:
        lines.append(("PASS" if got == want else "FAIL", name, f"got {got}, expected {want}"))

    got = [len(enumeration.special_partitions(ell)) for ell in range(2, 33)]
    for ell, (g, w) in enumerate(zip(got, TABLE_I), start=2):
        if g != w:
            check(f"partitions l={ell}", g, w)
    if got == TABLE_I:
        lines.append(("PASS", "partitions l=2..32", "special partition counts"))
    for ell in range(2, 9):
        check(f"x_l l={ell}", enumeration.x_ell(ell), TABLE_II_X[ell])
        check(f"y_l l={ell}", enumeration.y_ell(ell), TABLE_II_Y[ell])
    for tag, coeffs in UNION_COEFFS.items():
        code = preset(tag)
        enum = enumeration.weight_enumerator(code, 16)
        for w, want in coeffs.items():
            check(f"{tag} tau_{w}", enum[w].tau, want)
        for w, printed in PRINTED_BOUNDARY[tag].items():
            oracle = enumeration.brute_force_count(code.n1, code.n2, code.d1, code.d2, w).tau
            status = "INFO" if oracle == enum[w].tau else "FAIL"
            lines.append((status, f"{tag} tau_{w}", f"closed form {enum[w].tau}, oracle {oracle}, printed {printed}"))
    for name, want in FIXTURE_METRICS.items():
        tag = want["code"]
        code = preset(tag) if isinstance(tag, str) else product_from_params(*tag, m=4)
        rm = coloring.rootcheck_orders(code, coloring.fixture(name)[1])
        if "rho_hist" in want:
            check(f"fixture {name} rho histogram", rm.histogram(), want["rho_hist"])
        if "eta" in want:
            check(f"fixture {name} eta", rm.eta, want["eta"])
            check(f"fixture {name} rho_max", rm.rho_max, want["rho_max"])
        if "eta_min" in want:
            check(f"fixture {name} eta_min", rm.eta_min, want["eta_min"])
    for tag, want in RHO_U.items():
        check(f"{tag} rho_u", rate_analysis(preset(tag), 4).rho_u, want)
    failed = [ln for ln in lines if ln[0] == "FAIL"]
    data = {"checks": [{"status": s, "name": n, "detail": d} for s, n, d in lines], "failed": len(failed)}
    if cfg.format == "json":
        emit(cfg, data)
    else:
        text = "".join(f"{s:4s}  {n}: {d}\n" for s, n, d in lines)
        text += f"{'FAIL' if failed else 'PASS'}: {len(lines) - len(failed)}/{len(lines)} checks\n"
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_enumerate(cfg: RunConfig, code: ProductCode, weights: list[int], method: str, budget: int | None) -> int:
    rows = []
    limit = enumeration.closed_form_limit(code.d1, code.d2)
    for w in weights:
        if method == "closed":
            if w > limit:
                raise InvalidInput(f"closed forms cover w <= {limit}; use --method oracle")
            c = enumeration.count_closed_form(code.n1, code.n2, code.d1, code.d2, w)
        else:
            c = enumeration.brute_force_count(code.n1, code.n2, code.d1, code.d2, w, budget=budget)
        rows.append({"w": w, "tau_a": c.tau_a, "tau_b": c.tau_b, "tau": c.tau})
    emit(cfg, {str(r["w"]): {"tau_a": r["tau_a"], "tau_b": r["tau_b"]} for r in rows}, rows)
    return EXIT_OK


def cmd_bound(cfg: RunConfig, code: ProductCode, eps: list[float], w_max: int, method: str) -> int:
    ub = enumeration.union_bound(code, w_max=w_max, method=method)
    rows = [{"eps": e, "union_bound": ub(e)} for e in eps]
    emit(cfg, {"coefficients": {str(w): t for w, t in ub.coefficients.items()}, "points": rows}, rows)
    return EXIT_OK


def cmd_color(cfg: RunConfig, code: ProductCode, dc: deca.DecaConfig, trace: str | None = None) -> int:
    res = deca.deca_run(code, dc, strict=code.Nc % dc.M == 0)
    if trace:
        with open(trace, "w") as fh:
            for r in res.trace.rows():
                fh.write(json.dumps({k: _num(v) for k, v in r.items()}) + "\n")
    rep = coloring.coloring_report(code, res.best)
    data = {
        "coloring": res.best.to_json(),
        "letters": res.best.letters(),
        "eta": res.eta,
        "rho_max": _num(res.rho_max),
        "double_diversity": res.double_diversity,
        "eta_min": rep.eta_min,
        "trace": res.trace.rows(),
    }
    rows = [{k: _num(v) for k, v in r.items()} for r in res.trace.rows()]
    emit(cfg, data, rows)
    return EXIT_OK


def cmd_census(cfg: RunConfig, code: ProductCode, kind: str, M: int, samples: int) -> int:
    res = deca.census(code, kind, M, samples, cfg.seed, strict=False)
    data = {
        "diversity_fraction": res.diversity_fraction,
        "standard_error": res.standard_error,
        "diverse": res.diverse,
        "samples": samples,
        "eta_hist": {str(k): v for k, v in res.eta_hist.items()},
        "rho_max_hist": {str(k): v for k, v in res.rho_max_hist.items()},
    }
    rows = [{"samples": samples, "diverse": res.diverse, "fraction": res.diversity_fraction, "stderr": res.standard_error}]
    emit(cfg, data, rows)
    return EXIT_OK


def cmd_simulate(cfg: RunConfig, code: ProductCode, kind: str, col, eps_list, decoder: str, trials: int) -> int:
    rows = []
    for eps in eps_list:
        spec = channel.ChannelSpec(kind, eps, col)
        out = channel.monte_carlo(code, spec, decoder, trials, cfg.seed)
        for r in out if isinstance(out, tuple) else (out,):
            se_w, se_s = r.standard_errors
            rows.append(
                {
                    "eps": eps if np.isscalar(eps) else "/".join(str(x) for x in eps),
                    "decoder": r.decoder,
                    "trials": r.trials,
                    "wer": r.word_error_rate,
                    "ser": r.symbol_error_rate,
                    "wer_stderr": se_w,
                    "ser_stderr": se_s,
                }
            )
    emit(cfg, rows, rows)
    return EXIT_OK


def cmd_fixtures(cfg: RunConfig, names: list[str]) -> int:
    out = {}
    for name in names or list(coloring.FIXTURES):
        tag, col = coloring.fixture(name)
        code = preset(tag) if tag in PRESETS else product_from_params(*(int(x) for x in tag.split(",")), m=4)
        rm = coloring.rootcheck_orders(code, col)
        out[name] = {
            "code": tag,
            "letters": col.letters(),
            "eta": rm.eta,
            "eta_min": rm.eta_min,
            "rho_max": _num(rm.rho_max),
            "rho_hist": {str(k): v for k, v in rm.histogram().items()},
        }
    rows = [{"fixture": k, "code": v["code"], "eta": v["eta"], "eta_min": v["eta_min"], "rho_max": v["rho_max"]}
            for k, v in out.items()]
    emit(cfg, out, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default=None, help="default: csv for verify, json otherwise")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")
    common.add_argument("--threads", type=int, default=0, help="accepted for compatibility; runs single-process")
    common.add_argument("--field-m", type=int, default=8, help="field GF(2^m) for code specs")

    ap = argparse.ArgumentParser(prog="prodcodes", description="Product-code stopping sets, colorings and simulation.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("verify", parents=[common], help="recompute reference tables and fixture metrics")

    p = sub.add_parser("enumerate", parents=[common], help="stopping-set counts per weight")
    p.add_argument("code")
    p.add_argument("--w", default=None, help="weights a..b or list (default d1d2..(d1+1)(d2+1))")
    p.add_argument("--method", choices=("closed", "oracle"), default="closed")
    p.add_argument("--budget", type=int, default=None, help="oracle memo-state budget")

    p = sub.add_parser("bound", parents=[common], help="union bound over an erasure-probability grid")
    p.add_argument("code")
    p.add_argument("--eps", default="0.05..0.30:26")
    p.add_argument("--wmax", type=int, default=None)
    p.add_argument("--method", choices=("closed", "oracle"), default="closed")

    p = sub.add_parser("color", parents=[common], help="optimize a compact coloring with DECA")
    p.add_argument("code")
    p.add_argument("--M", type=int, default=4)
    p.add_argument("--aleph", type=int, default=8)
    p.add_argument("--aleph1", type=int, default=0)
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--initial", default=None, help="fixture name or coloring JSON")
    p.add_argument("--trace", default=None, help="write the per-round trace here as JSON lines")

    p = sub.add_parser("census", parents=[common], help="diversity statistics of uniform colorings")
    p.add_argument("code")
    p.add_argument("--kind", choices=coloring.KINDS, default="compact")
    p.add_argument("--M", type=int, default=4)
    p.add_argument("--samples", default="100000")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo word/symbol error rates")
    p.add_argument("code")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--sec", action="store_const", dest="channel", const="sec")
    g.add_argument("--cec", action="store_const", dest="channel", const="cec")
    g.add_argument("--unequal", action="store_const", dest="channel", const="unequal")
    p.set_defaults(channel="sec")
    p.add_argument("--coloring", default=None, help="fixture name or coloring JSON (cec / unequal)")
    p.add_argument("--eps", default="0.1", help="grid for sec/cec; per-color list for unequal, ';'-separated sets")
    p.add_argument("--decoder", choices=("iterative", "ml", "both"), default="iterative")
    p.add_argument("--trials", default="100000")

    p = sub.add_parser("fixtures", parents=[common], help="list shipped colorings and their metrics")
    p.add_argument("names", nargs="*")
    return ap


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.subcommand == "verify" else "json"
    cfg = RunConfig(args.subcommand, getattr(args, "code", None), {}, args.seed, args.format, args.out, args.threads)
    try:
        if args.subcommand == "verify":
            return cmd_verify(cfg)
        if args.subcommand == "fixtures":
            bad = [n for n in args.names if n not in coloring.FIXTURES]
            if bad:
                raise InvalidInput(f"unknown fixtures {bad}; choose from {list(coloring.FIXTURES)}")
            cfg.params = {"names": args.names}
            return cmd_fixtures(cfg, args.names)
        code = parse_code(args.code, args.field_m)
        cfg.params["resolved_code"] = [code.n1, code.k1, code.n2, code.k2, code.field.m]
        if args.subcommand == "enumerate":
            weights = parse_range(args.w) if args.w else list(range(code.dP, (code.d1 + 1) * (code.d2 + 1) + 1))
            cfg.params.update(weights=weights, method=args.method, budget=args.budget)
            return cmd_enumerate(cfg, code, weights, args.method, args.budget)
        if args.subcommand == "bound":
            eps = parse_grid(args.eps)
            w_max = args.wmax or (code.d1 + 1) * (code.d2 + 1)
            cfg.params.update(eps=eps, w_max=w_max, method=args.method)
            return cmd_bound(cfg, code, eps, w_max, args.method)
        if args.subcommand == "color":
            init = load_coloring(args.initial, code) if args.initial else None
            dc = deca.DecaConfig(args.M, args.aleph, args.aleph1, args.iters, args.seed, init)
            cfg.params.update(M=args.M, aleph=args.aleph, aleph1=args.aleph1, iters=args.iters, initial=args.initial)
            return cmd_color(cfg, code, dc, args.trace)
        if args.subcommand == "census":
            samples = parse_count(args.samples)
            cfg.params.update(kind=args.kind, M=args.M, samples=samples)
            return cmd_census(cfg, code, args.kind, args.M, samples)
        if args.subcommand == "simulate":
            trials = parse_count(args.trials)
            col = load_coloring(args.coloring, code) if args.coloring else None
            if args.channel != "sec" and col is None:
                raise InvalidInput(f"--{args.channel} needs --coloring")
            if args.channel == "unequal":
                eps_list = [tuple(float(x) for x in part.split(",")) for part in args.eps.split(";")]
            else:
                eps_list = parse_grid(args.eps)
            cfg.params.update(channel=args.channel, coloring=args.coloring, eps=eps_list, decoder=args.decoder,
                              trials=trials)
            return cmd_simulate(cfg, code, args.channel, col, eps_list, args.decoder, trials)
    except enumeration.BudgetExceeded as e:
        print(f"error: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInput, ValueError, KeyError) as e:
        print(f"error: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
