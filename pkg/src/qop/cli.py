"""``qop`` command line.

Machine-readable reports go to stdout, a short human summary to stderr.
Exit codes: 0 all checks pass, 1 an identity fails, 2 bad parameters,
3 internal alarm (a state the mathematics says cannot happen).
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .bethe import bae_residual, find_roots
from .errors import Alarm, IdentityViolation, InvalidParameters, QopError
from .functional import (
    check_decomposition,
    check_family,
    check_fundamental,
    fusion_check,
    IdentityResult,
    plucker_check,
    raw_plucker_residual,
    solve,
    wrong_side_p,
    wronskian_family,
)
from .qsolver import ChainParams, verify_tq

SCHEMA = 1
CHECKS = ("tq", "bae", "functional", "plucker", "fusion", "decompose")
METHODS = ("linear", "closed", "both")
OUTPUTS = ("json", "latex", "plain")
BAE_TOL = 1e-9
HIERARCHY_S = tuple(Fraction(k, 2) for k in range(-2, 4))
FUSION_S = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2))


@dataclass(frozen=True)
class RunConfig:
    command: str
    L: int
    N: int
    p: int | None = None
    method: str = "linear"
    checks: tuple[str, ...] = ("tq",)
    output: str = "json"
    seed: int = 0
    root_format: str = "json"

    def sectors(self) -> list[ChainParams]:
        if self.p is None:
            return ChainParams.sectors(self.L, self.N)
        return [ChainParams(self.L, self.N, self.p)]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("QOP_THREADS", "1")))
    except ValueError:
        return 1


def _fan_out(fn, items, config):
    workers = min(_threads(), len(items))
    if workers <= 1:
        return [fn(item, config) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, [config] * len(items)))


# --- solve ---------------------------------------------------------------------

def _solve_sector(params: ChainParams, config: RunConfig) -> dict:
    methods = ("linear", "closed") if config.method == "both" else (config.method,)
    solutions = {m: solve(params, m) for m in methods}
    first = solutions[methods[0]]
    return {
        "params": params.as_dict(),
        "solutions": {m: q.to_json() for m, q in solutions.items()},
        "latex": {m: q.to_latex() for m, q in solutions.items()},
        "equal": all(q == first for q in solutions.values()),
    }


def _emit_solve(results, config, out):
    if config.output == "json":
        json.dump({"schema": SCHEMA, "command": "solve", "results": results}, out, indent=2)
        out.write("\n")
        return
    for r in results:
        p = r["params"]
        for method, latex in r["latex"].items():
            if config.output == "latex":
                out.write(f"% L={p['L']} N={p['N']} p={p['p']} method={method}\nQ(z) = {latex}\n")
            else:
                coeffs = r["solutions"][method]["elementary"]
                out.write(f"L={p['L']} N={p['N']} p={p['p']} {method}: e = [{', '.join(coeffs)}]\n")
        if len(r["latex"]) > 1:
            out.write(f"methods agree: {r['equal']}\n")


# --- verify --------------------------------------------------------------------

def _bae_entry(params, residual):
    return {
        "identity_name": "bethe_equations",
        "params": params.as_dict(),
        "status": "zero" if residual < BAE_TOL else "nonzero",
        "residual_degree": None,
        "max_coeff_height": None,
        "max_residual": residual,
    }


def _verify_sector(params: ChainParams, config: RunConfig) -> list[dict]:
    checks = set(config.checks)
    method = "linear" if config.method == "both" else config.method
    Q = solve(params, method)
    entries: list[dict] = []
    if config.method == "both":
        other = solve(params, "closed")
        diff = Q.poly - other.poly
        entries.append(IdentityResult("linear_equals_closed", params, diff).to_json())
    if "tq" in checks:
        entries.append(IdentityResult("tq", params, verify_tq(Q)).to_json())
    if "bae" in checks:
        entries.append(_bae_entry(params, bae_residual(find_roots(Q))))
    needs_pair = checks & {"functional", "plucker", "fusion", "decompose"}
    if not needs_pair:
        return entries
    pair = wrong_side_p(Q, method)
    if "functional" in checks:
        entries.extend(r.to_json() for r in check_fundamental(pair))
    family = wronskian_family(pair) if checks & {"functional", "plucker", "fusion"} else None
    if "functional" in checks:
        entries.extend(r.to_json() for r in check_family(family))
    if "plucker" in checks:
        for s1, s2, s3 in itertools.product(HIERARCHY_S, repeat=3):
            name = f"hierarchy[{s1},{s2},{s3}]"
            entries.append(IdentityResult(name, params, plucker_check(family, s1, s2, s3)).to_json())
        rng = random.Random(config.seed)
        span = 2 * params.order
        for _ in range(4):
            a, b, c, d = (rng.randrange(-span, span) for _ in range(4))
            res = raw_plucker_residual(family.tilde.qt, family.tilde.pt, a, b, c, d)
            entries.append(IdentityResult(f"plucker[{a},{b},{c},{d}]", params, res).to_json())
    if "fusion" in checks:
        for s in FUSION_S:
            entries.append(IdentityResult(f"fusion[s={s}]", params, fusion_check(family, s)).to_json())
    if "decompose" in checks:
        entries.extend(r.to_json() for r in check_decomposition(pair))
    return entries


def _emit_verify(entries, config, out):
    if config.output == "json":
        json.dump({"schema": SCHEMA, "command": "verify", "checks": entries}, out, indent=2)
        out.write("\n")
        return
    for e in entries:
        p = e["params"]
        out.write(f"L={p['L']} N={p['N']} p={p['p']} {e['identity_name']}: {e['status']}\n")


# --- roots ---------------------------------------------------------------------

def _roots_sector(params: ChainParams, config: RunConfig):
    return find_roots(solve(params, "linear" if config.method == "both" else config.method))


# --- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qop", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--L", type=int, required=True, help="odd spin numerator (spin L/2)")
        p.add_argument("--N", type=int, required=True, help="chain has 2N+1 sites")
        p.add_argument("--p", type=int, default=None, help="Bethe root count; all sectors if omitted")
        p.add_argument("--method", choices=METHODS, default="linear")
        p.add_argument("--output", choices=OUTPUTS, default="json")

    solve_p = sub.add_parser("solve", help="compute Q polynomials")
    common(solve_p)
    verify_p = sub.add_parser("verify", help="check functional identities")
    common(verify_p)
    verify_p.add_argument("--checks", default="tq",
                          help=f"comma separated subset of {','.join(CHECKS)} (or 'all')")
    verify_p.add_argument("--seed", type=int, default=0, help="seed for random Plucker substitutions")
    roots_p = sub.add_parser("roots", help="numerical Bethe roots with residuals")
    common(roots_p)
    roots_p.add_argument("--format", dest="root_format", choices=("json", "csv"), default="json")
    return parser


def parse_config(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    checks = ("tq",)
    if args.command == "verify":
        checks = CHECKS if args.checks == "all" else tuple(c.strip() for c in args.checks.split(",") if c.strip())
        unknown = set(checks) - set(CHECKS)
        if unknown:
            raise InvalidParameters(f"unknown checks: {', '.join(sorted(unknown))}")
    config = RunConfig(
        command=args.command, L=args.L, N=args.N, p=args.p, method=args.method,
        checks=checks, output=args.output, seed=getattr(args, "seed", 0),
        root_format=getattr(args, "root_format", "json"),
    )
    config.sectors()  # validates L, N, p
    return config


def run(config: RunConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    sectors = config.sectors()
    if config.command == "solve":
        results = _fan_out(_solve_sector, sectors, config)
        _emit_solve(results, config, out)
        ok = all(r["equal"] for r in results)
        err.write(f"solved {len(results)} sector(s); methods agree: {ok}\n")
        return 0 if ok else 1
    if config.command == "verify":
        entries = [e for chunk in _fan_out(_verify_sector, sectors, config) for e in chunk]
        _emit_verify(entries, config, out)
        failed = [e for e in entries if e["status"] != "zero"]
        err.write(f"{len(entries) - len(failed)}/{len(entries)} checks hold\n")
        for e in failed:
            err.write(f"  FAILED {e['identity_name']} {e['params']}\n")
        return 0 if not failed else 1
    if config.command == "roots":
        found = _fan_out(_roots_sector, sectors, config)
        if config.root_format == "csv":
            for r in found:
                out.write(f"# L={r.params.L} N={r.params.N} p={r.params.p}\n")
                out.write(r.to_csv())
        else:
            json.dump({"schema": SCHEMA, "command": "roots", "results": [r.to_json() for r in found]},
                      out, indent=2)
            out.write("\n")
        worst = max(bae_residual(r) for r in found)
        err.write(f"{len(found)} sector(s); worst Bethe residual {worst:.2e}\n")
        return 0 if worst < BAE_TOL else 1
    raise InvalidParameters(f"unknown command {config.command}")


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
    except InvalidParameters as exc:
        sys.stderr.write(f"qop: invalid parameters: {exc}\n")
        return 2
    try:
        return run(config)
    except InvalidParameters as exc:
        sys.stderr.write(f"qop: invalid parameters: {exc}\n")
        return 2
    except IdentityViolation as exc:
        sys.stderr.write(f"qop: {exc}\n")
        return 1
    except Alarm as exc:
        sys.stderr.write(f"qop: internal alarm {type(exc).__name__}: {exc}\n")
        return 3
    except QopError as exc:
        sys.stderr.write(f"qop: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
