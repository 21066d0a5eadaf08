"""``bell`` command line: exit 0 on success, 2 when an expected verdict fails, 1 on usage errors."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import catalog
from .cglmp import (cglmp3_realization, gd_game, optimal_state, qutrit_gamma, top_coefficients,
                    zohren_gill)
from .fixtures import fixture_names, load_fixture
from .mermin import ghz_realization, mermin_expression, tripartite_ow_report
from .nsalgebra import ns_constant_by_stencil, ns_constant_value, ns_equivalent
from .ow import default_tol, ow_game_search, ow_report, solve_gamma
from .quantum import Realization, behavior_of
from .report import RunConfig, document, emit_report, ow_dict
from .scenario import (CHSH_SCENARIO, BellExpression, Scenario, evaluate, format_table, local_bound,
                       optimal_strategies, parse_table, table_rows)
from .seesaw import seesaw_maximize

log = logging.getLogger("bellsteer")

EXIT_OK, EXIT_USAGE, EXIT_VERDICT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# --- argument plumbing ---------------------------------------------------------

def _scenario(text):
    try:
        mA, mB, nA, nB = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("scenario must be mA,mB,nA,nB") from None
    return Scenario.bipartite(mA, mB, nA, nB)


def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v
    return conv


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=_positive(float), help="gap tolerance (default: BELL_TOL or 1e-7)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", dest="fmt", choices=("json", "text", "csv"), default="json")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _expr_args(p, table=True):
    if table:
        p.add_argument("table", nargs="?", help="coefficient table file ('-' for stdin)")
    p.add_argument("--scenario", type=_scenario, help="expected layout mA,mB,nA,nB")
    p.add_argument("--family", choices=catalog.FAMILY_NAMES)
    p.add_argument("--gamma", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--restarts", type=_positive(int), default=catalog.DEFAULT_RESTARTS)


def _real_args(p):
    p.add_argument("--realization", help="realization JSON file")
    p.add_argument("--fixture", choices=fixture_names(), help="shipped realization")
    p.add_argument("--direction", default=None, help="A->B (default), B->A, i or ii")


def _read_table(path, scenario):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_table(text, scenario, label=Path(path).stem if path != "-" else "stdin")


def _config(args) -> RunConfig:
    return RunConfig(tol=args.tol, seed=args.seed, samples=getattr(args, "samples", 1) or 1,
                     fmt=args.fmt, output=args.output)


def _case(args, need_realization=True):
    """Expression, realization (or None) and direction from the flags."""
    case = None
    if getattr(args, "family", None):
        if getattr(args, "table", None):
            raise UsageError("give either a table or --family, not both")
        case = catalog.named_case(args.family, args.gamma, args.theta, args.seed, args.restarts)
        expr, r, direction = case.expr, case.realization, case.direction
    elif getattr(args, "table", None):
        expr, r, direction = _read_table(args.table, args.scenario), None, "A->B"
    else:
        raise UsageError("a table file or --family is required")
    if getattr(args, "realization", None):
        r = Realization.from_json(Path(args.realization).read_text())
    elif getattr(args, "fixture", None):
        r = load_fixture(args.fixture)
    if getattr(args, "direction", None):
        direction = args.direction
    if need_realization and r is None:
        raise UsageError("a realization is needed: use --realization, --fixture or --family")
    return expr, r, direction, case


def _expr_info(expr: BellExpression) -> dict:
    return {"label": expr.label, "scenario": str(expr.scenario)}


# --- commands -------------------------------------------------------------------

def cmd_eval(args):
    expr, r, _, _ = _case(args)
    cfg = _config(args)
    return document("value", cfg, expression=_expr_info(expr), value=evaluate(expr, behavior_of(r))), EXIT_OK


def cmd_local_bound(args):
    expr, _, _, _ = _case(args, need_realization=False)
    value, best = optimal_strategies(expr)
    return document("local-bound", _config(args), expression=_expr_info(expr), value=value,
                    optimal_strategies=len(best)), EXIT_OK


def cmd_show(args):
    expr, _, _, _ = _case(args, need_realization=False)
    return document("table", _config(args), expression=_expr_info(expr), table=format_table(expr),
                    rows=[dict(zip((f"c{j}" for j in range(len(row))), map(float, row)))
                          for row in table_rows(expr)]), EXIT_OK


def cmd_ns_const(args):
    expr, _, _, _ = _case(args, need_realization=False)
    k = ns_constant_value(expr)
    cert = ns_constant_by_stencil(expr) if expr.scenario == CHSH_SCENARIO else None
    doc = {"constant": k is not None, "k": k}
    if cert is not None:
        doc["certificate"] = cert.to_dict()
    return document("ns-const", _config(args), expression=_expr_info(expr), **doc), EXIT_OK


def cmd_ns_equiv(args):
    a = _read_table(args.table, args.scenario)
    b = _read_table(args.other, args.scenario)
    cert = ns_equivalent(a, b)
    doc = {"equivalent": cert is not None}
    if cert is not None:
        doc["certificate"] = cert.to_dict()
    return document("ns-equiv", _config(args), **doc), EXIT_OK


def _verdict_exit(args, rep):
    return EXIT_VERDICT if args.expect_ow and not rep.verdict else EXIT_OK


def cmd_ow_check(args):
    expr, r, direction, case = _case(args)
    rep = ow_report(expr, r, direction, args.tol)
    doc = document("ow-check", _config(args), expression=_expr_info(expr),
                   params=case.params if case else None, report=ow_dict(rep))
    return doc, _verdict_exit(args, rep)


def cmd_ow_search(args):
    expr, r, _, _ = _case(args)
    res = ow_game_search(expr, r, args.tol)
    doc = document("ow-search", _config(args), expression=_expr_info(expr), found=res.game is not None,
                   constant=res.constant, margin=res.margin, rank=res.rank, message=res.message,
                   table=format_table(res.game) if res.game is not None else None,
                   report=ow_dict(res.report))
    if doc["table"] is None:
        del doc["table"]
    return doc, EXIT_VERDICT if args.expect_ow and res.game is None else EXIT_OK


def cmd_gamma_solve(args):
    from . import families as fam
    if args.family in ("c1", "c2"):
        family = fam.counterexample_family(args.family)
        r = catalog.counterexample_realization(args.family, args.seed, args.restarts)
    elif args.family == "tilted":
        p = fam.TiltedPoint(catalog._theta(args.theta))
        family, r = fam.tilted_family(p), p.realization()
    else:
        raise UsageError("gamma-solve supports --family c1, c2 or tilted")
    res = solve_gamma(family, r, ow_tol=args.tol)
    doc = document("gamma-solve", _config(args), family=args.family, gamma=res.gamma,
                   candidates=[{"x": x, "a": a, "gamma": float(g)} for (x, a), g in res.candidates.items()],
                   spread=res.spread, message=res.message, report=ow_dict(res.report))
    if args.save_realization:
        Path(args.save_realization).write_text(r.to_json() + "\n")
    failed = res.gamma is None
    return doc, EXIT_VERDICT if args.expect_ow and failed else EXIT_OK


def cmd_seesaw(args):
    expr, _, direction, _ = _case(args, need_realization=False)
    dims = tuple(int(v) for v in args.dims.split(","))
    value, r = seesaw_maximize(expr, dims, args.restarts, args.seed)
    rep = ow_report(expr, r, direction, args.tol)
    doc = document("seesaw", _config(args), expression=_expr_info(expr), dims=list(dims),
                   restarts=args.restarts, value=value, report=ow_dict(rep), realization=r.to_dict())
    return doc, _verdict_exit(args, rep)


def cmd_family(args):
    case = catalog.named_case(args.name, args.gamma, args.theta, args.seed, args.restarts)
    rep = ow_report(case.expr, case.realization, case.direction, args.tol)
    doc = document("family", _config(args), family=args.name, params=case.params,
                   expression=_expr_info(case.expr), local_bound=local_bound(case.expr),
                   value=evaluate(case.expr, behavior_of(case.realization)),
                   table=format_table(case.expr), report=ow_dict(rep))
    return doc, _verdict_exit(args, rep)


def cmd_scan(args):
    recs = catalog.run_scan(args.name, args.samples, args.seed, args.tol, args.gamma)
    rows = [r.row() for r in recs]
    failing = sum(not r.verdict for r in recs)
    log.info("scan %s: %d samples, %d not-OW, %.2f s", args.name, len(recs), failing,
             sum(r.wall_time for r in recs))
    doc = document("scan", _config(args), scan=args.name, samples=len(recs), not_ow=failing,
                   max_gap=max(r.max_gap for r in recs), records=rows)
    return doc, EXIT_VERDICT if args.expect_ow and failing else EXIT_OK


def cmd_cglmp(args):
    d = args.d
    cfg = _config(args)
    if args.report == "table1":
        expr, r = zohren_gill(3), cglmp3_realization()
        rep = ow_report(expr, r, "A->B", args.tol)
        rows = [{"x": c.inputs[0], "a": c.outputs[0], "lambda_max": c.lambda_max, "expectation": c.expectation}
                for c in rep.contexts]
        doc = document("cglmp", cfg, d=3, game="zg", gamma=qutrit_gamma(),
                       value=evaluate(expr, behavior_of(r)), rows=rows, report=ow_dict(rep))
        return doc, _verdict_exit(args, rep)
    expr = zohren_gill(d) if args.game == "zg" else gd_game(d)
    r = optimal_state(d)
    rep = ow_report(expr, r, "A->B", args.tol)
    beta = top_coefficients(d)
    doc = document("cglmp", cfg, d=d, game=args.game, value=evaluate(expr, behavior_of(r)),
                   local_bound=local_bound(expr) if d <= 6 else None,
                   schmidt=[float(v.real) for v in beta], report=ow_dict(rep))
    return doc, _verdict_exit(args, rep)


def cmd_mermin(args):
    expr, r = mermin_expression(), ghz_realization()
    rep = tripartite_ow_report(expr, r, args.type, args.tol)
    doc = document("mermin", _config(args), type=args.type, local_bound=local_bound(expr),
                   value=evaluate(expr, behavior_of(r)), report=ow_dict(rep))
    return doc, _verdict_exit(args, rep)


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = _Parser(prog="bell", description="Bell expressions, no-signaling rewritings and steering saturation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, table=True, real=False, expect=False):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if table is not None:
            _expr_args(sp, table)
        if real:
            _real_args(sp)
        if expect:
            sp.add_argument("--expect-ow", action="store_true", help="exit 2 unless the verdict is OW")
        sp.set_defaults(func=fn)
        return sp

    add("eval", cmd_eval, "value of an expression at a realization", real=True)
    add("local-bound", cmd_local_bound, "maximum over deterministic strategies")
    add("show", cmd_show, "print the coefficient table")
    add("ns-const", cmd_ns_const, "is the table constant on no-signaling behaviors?")
    sp = sub.add_parser("ns-equiv", parents=[common], help="certify that two tables differ by a constant")
    sp.add_argument("table")
    sp.add_argument("other")
    sp.add_argument("--scenario", type=_scenario)
    sp.set_defaults(func=cmd_ns_equiv)
    add("ow-check", cmd_ow_check, "saturation report at a realization", real=True, expect=True)
    add("ow-search", cmd_ow_search, "search an equivalent saturating game", real=True, expect=True)
    sp = add("gamma-solve", cmd_gamma_solve, "solve a one-parameter family for saturation", table=False,
             expect=True)
    sp.add_argument("--save-realization", help="write the realization used to this JSON file")
    sp = add("seesaw", cmd_seesaw, "see-saw maximization and report at the maximizer", expect=True)
    sp.add_argument("--dims", default="2,2")
    sp.add_argument("--direction", default=None)
    sp = sub.add_parser("family", parents=[common], help="a named family member at its realization")
    sp.add_argument("name", choices=catalog.FAMILY_NAMES)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--restarts", type=_positive(int), default=catalog.DEFAULT_RESTARTS)
    sp.add_argument("--expect-ow", action="store_true")
    sp.set_defaults(func=cmd_family)
    sp = sub.add_parser("scan", parents=[common], help="seeded scan over a family")
    sp.add_argument("name", choices=catalog.SCAN_NAMES)
    sp.add_argument("--samples", type=_positive(int), default=100)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--expect-ow", action="store_true")
    sp.set_defaults(func=cmd_scan)
    sp = sub.add_parser("cglmp", parents=[common], help="CGLMP expressions with d outcomes")
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--game", choices=("zg", "gd"), default="gd")
    sp.add_argument("--report", choices=("table1",))
    sp.add_argument("--expect-ow", action="store_true")
    sp.set_defaults(func=cmd_cglmp)
    sp = sub.add_parser("mermin", parents=[common], help="Mermin expression at GHZ")
    sp.add_argument("--type", choices=("i", "ii"), default="i")
    sp.add_argument("--expect-ow", action="store_true")
    sp.set_defaults(func=cmd_mermin)
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"bell: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    if args.tol is None:
        args.tol = default_tol()
    try:
        cfg = _config(args)
        if getattr(args, "command", "") == "cglmp" and not 2 <= args.d <= 32:
            raise UsageError("--d must lie in 2..32")
        doc, code = args.func(args)
        text = emit_report(doc, cfg)
    except (UsageError, ValueError, KeyError, OSError) as e:
        print(f"bell: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if not cfg.output:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
