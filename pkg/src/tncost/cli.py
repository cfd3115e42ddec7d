"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from .costmodel import (
    CostReport,
    MpsStrategy,
    mps_total_exponent,
    summary_table,
    ttns_total_report,
)
from .geometry import (
    BC,
    AxisSpec,
    DivisibilityError,
    LatticeSpec,
    axis_names,
    boundary_area_numeric,
    crossing_edges,
)
from .optimizer import SearchBudgetExceeded, SearchConfig, analytic_floor, optimize_splits
from .partition import (
    AxisPolicy,
    SplitStrategy,
    build_ttns_tree,
    mps_max_cut,
    snake_ordering,
)
from .presets import DEFAULT_HYPERCUBE_DIM, DEFAULT_K, SUMMARY_ORDER, get_preset
from .renyi import (
    SpectrumError,
    bond_lower_bound,
    bond_upper_bound,
    min_rank_for_accuracy,
    read_spectrum,
    renyi_entropy,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
# rows shown by default; deeper layers only shrink
DEFAULT_LAST_LAYER = 5


class UsageError(Exception):
    pass


def rational(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator, "str": str(x)}


# ---------------------------------------------------------------- rendering

def _layer_label(row) -> str:
    if row.top_edge:
        return f"{row.layer} (top edge)"
    if row.prefix:
        return f"{row.layer} (prefix)"
    return str(row.layer)


def _report_rows(report: CostReport, last_layer: int | None):
    return [r for r in report.rows if last_layer is None or r.layer <= last_layer]


def report_to_dict(report: CostReport, name: str, last_layer: int | None = DEFAULT_LAST_LAYER, mps=None) -> dict:
    rows = []
    for r in _report_rows(report, last_layer):
        rows.append({
            "layer": r.layer,
            "label": _layer_label(r),
            "areas": [rational(a.coeff) for a in r.areas],
            "cost": None if r.exponent is None else rational(r.exponent.coeff),
            "layer_max": None if r.layer_max is None else rational(r.layer_max.coeff),
            "dominant": r.dominant,
            "prefix": r.prefix,
            "top_edge": r.top_edge,
        })
    out = {
        "preset": name,
        "lattice": report.lattice.describe(),
        "rule": report.rule.name,
        "order": report.order,
        "rows": rows,
        "total": rational(report.total.coeff),
        "dominant_layers": report.dominant_layers,
    }
    if mps is not None:
        strategy, exp = mps
        out["mps"] = {"strategy": strategy.value, "total": rational(exp.coeff)}
    return out


def _table_cells(d: dict) -> list[list[str]]:
    cells = []
    for r in d["rows"]:
        cost = "--" if r["cost"] is None else r["cost"]["str"]
        cells.append([r["label"], ", ".join(a["str"] for a in r["areas"]), cost, "*" if r["dominant"] else ""])
    return cells


def _markdown(header: list[str], cells: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(c) + " |" for c in cells]
    return "\n".join(lines)


def _csv(header: list[str], cells: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(cells)
    return buf.getvalue().rstrip("\n")


def render_report(d: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(d, indent=2)
    order = d["order"]
    header = ["layer", f"area / L^{order}", f"cost / L^{order}", "dominant"]
    cells = _table_cells(d)
    if fmt == "csv":
        return _csv(header, cells)
    lines = [f"# {d['preset']}: {d['lattice']}", ""]
    lines.append(_markdown(header, cells))
    lines += ["", f"TTNS ({d['rule']}): q^({d['total']['str']} L^{order})"]
    if "mps" in d:
        lines.append(f"MPS ({d['mps']['strategy']}): q^({d['mps']['total']['str']} L^{order})")
    lines.append("dominant layers: " + ", ".join(str(x) for x in d["dominant_layers"]))
    return "\n".join(lines)


def summary_to_dict(rows) -> dict:
    out = []
    for r in rows:
        out.append({
            "preset": r.preset,
            "geometry": r.geometry,
            "pbc": r.pbc,
            "order": r.mps.order,
            "mps": rational(r.mps.coeff),
            "mps_strategy": r.mps_strategy.value,
            "asterisk": r.asterisk,
            "ttns": {"lower": rational(r.ttns.lower), "upper": rational(r.ttns.upper)},
        })
    return {"preset": "summary", "rows": out}


def render_summary(d: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(d, indent=2)
    header = ["system", "PBC", "order", "MPS", "TTNS"]
    cells = []
    for r in d["rows"]:
        lo, hi = r["ttns"]["lower"]["str"], r["ttns"]["upper"]["str"]
        ttns = hi if lo == hi else f"{lo}..{hi}"
        mps = r["mps"]["str"] + ("*" if r["asterisk"] else "")
        cells.append([r["geometry"], r["pbc"], str(r["order"]), mps, ttns])
    if fmt == "csv":
        return _csv(header, cells)
    note = "* periodic x handled by an infinite MPS (or an equivalent periodic-MPS scheme)"
    return "\n".join([_markdown(header, cells), "", "exponents are coefficients of L^order in q^(...)", note])


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------- commands

def _preset(args):
    try:
        return get_preset(args.preset, k=args.k, dim=args.dim)
    except (KeyError, ValueError) as exc:
        raise UsageError(exc.args[0]) from None


def cmd_table(args) -> int:
    if args.preset == "summary":
        try:
            rows = summary_table([get_preset(n, k=args.k, dim=args.dim) for n in SUMMARY_ORDER])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _emit(render_summary(summary_to_dict(rows), args.format), args.out)
        return EXIT_OK
    p = _preset(args)
    report = ttns_total_report(p.build_tree())
    mps = (p.mps_strategy, mps_total_exponent(p.lattice, p.mps_strategy))
    d = report_to_dict(report, p.name, args.last_layer, mps)
    _emit(render_report(d, args.format), args.out)
    return EXIT_OK


def _parse_assignments(items, dim: int, what: str) -> dict[int, str]:
    names = axis_names(dim)
    out = {}
    for item in items or []:
        for tok in item.split(","):
            tok = tok.strip()
            if not tok:
                continue
            if "=" not in tok:
                raise UsageError(f"--{what}: expected AXIS=VALUE, got {tok!r}")
            ax, val = (s.strip().lower() for s in tok.split("=", 1))
            if ax == "all":
                targets = range(dim)
            elif ax in names:
                targets = [names.index(ax)]
            else:
                raise UsageError(f"--{what}: unknown axis {ax!r} for a {dim}D lattice")
            for t in targets:
                out[t] = val
    return out


def lattice_from_flags(dim: int, bc_items, multiple_items) -> LatticeSpec:
    if dim < 1:
        raise UsageError("--dim must be >= 1")
    bcs = _parse_assignments(bc_items, dim, "bc")
    mults = _parse_assignments(multiple_items, dim, "multiple")
    axes = []
    for a in range(dim):
        bc_name = bcs.get(a, "obc")
        if bc_name not in ("obc", "pbc"):
            raise UsageError(f"--bc: boundary condition must be obc or pbc, got {bc_name!r}")
        bc = BC(bc_name)
        m = mults.get(a, "1")
        try:
            if m in ("inf", "unbounded"):
                axes.append(AxisSpec(None, bc))
            else:
                axes.append(AxisSpec(Fraction(m), bc))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"axis {axis_names(dim)[a]}: {exc}") from None
    return LatticeSpec(tuple(axes))


def cmd_analyze(args) -> int:
    lattice = lattice_from_flags(args.dim, args.bc, args.multiple)
    if not lattice.is_finite:
        raise UsageError("TTNS analysis needs finite axes; drop the unbounded --multiple")
    if args.strategy:
        policy = AxisPolicy(args.strategy)
    else:
        policy = AxisPolicy.ALTERNATE_2D if lattice.dim <= 2 else AxisPolicy.CYCLIC
    long_axes = any(ax.multiple != 1 for ax in lattice.axes)
    try:
        strategy = SplitStrategy(policy, elongated_prefix=long_axes and not args.no_prefix, max_depth=args.depth)
        tree = build_ttns_tree(lattice, strategy)
        report = ttns_total_report(tree)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.mps_strategy:
        mps_strategy = MpsStrategy(args.mps_strategy)
    else:
        mps_strategy = MpsStrategy.INFINITE_LX if lattice.axes[0].bc is BC.PBC else MpsStrategy.SNAKE_OBC
    try:
        mps = mps_total_exponent(lattice, mps_strategy)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d = report_to_dict(report, "custom", args.last_layer, (mps_strategy, mps))
    _emit(render_report(d, args.format), args.out)
    return EXIT_OK


def verify_tree(tree, L: int) -> list[str]:
    """Compare symbolic and numeric areas at every node; returns mismatch messages."""
    lattice = tree.lattice
    scale = L ** lattice.order
    bad = []
    for node in tree.nodes():
        numeric = boundary_area_numeric(node.region, lattice, L)
        if node.area.coeff * scale != numeric:
            bad.append(f"{node.region}: symbolic {node.area.coeff} x {scale} != numeric {numeric}")
    return bad


def verify_snake(lattice: LatticeSpec, L: int) -> tuple[int, list[str]]:
    """Max snake cut, cross-checked prefix by prefix against a direct recount."""
    ordering = snake_ordering(lattice, L)
    best, where = mps_max_cut(ordering)
    shape = lattice.shape(L)
    mask = np.zeros(shape, dtype=bool)
    bad = []
    counts = []
    for site in ordering.sites[:-1]:
        mask[site] = True
        counts.append(crossing_edges(mask, lattice))
    if max(counts) != best or counts.index(best) + 1 != where:
        bad.append(f"snake max cut: incremental {best} at {where}, recount {max(counts)}")
    return best, bad


def cmd_verify(args) -> int:
    p = _preset(args)
    failures = 0
    for L in args.L:
        tree = p.build_tree(max_depth=p.prefix_layers + args.depth)
        try:
            bad = verify_tree(tree, L)
        except DivisibilityError as exc:
            raise UsageError(f"L={L}: {exc}") from None
        status = "ok" if not bad else "FAIL"
        print(f"{p.name} L={L}: {len(tree)} nodes, area check {status}")
        for msg in bad:
            print("  " + msg)
        failures += len(bad)
        if p.lattice.n_sites(L) <= args.snake_budget:
            cut, bad = verify_snake(p.lattice, L)
            print(f"{p.name} L={L}: snake max cut {cut}" + ("" if not bad else " FAIL"))
            for msg in bad:
                print("  " + msg)
            failures += len(bad)
        else:
            print(f"{p.name} L={L}: snake check skipped ({p.lattice.n_sites(L)} sites)")
    return EXIT_FAIL if failures else EXIT_OK


def _tree_listing(tree) -> list[str]:
    lines = []

    def visit(node, indent):
        lines.append(f"{'  ' * indent}{node.region}  area {node.area.coeff}")
        for c in node.children:
            visit(c, indent + 1)

    visit(tree.root, 0)
    return lines


def cmd_optimize(args) -> int:
    p = _preset(args)
    try:
        config = SearchConfig(args.grid, args.depth, args.balanced, args.budget)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    floor = analytic_floor(p.lattice)
    order = p.lattice.order
    try:
        tree, exp = optimize_splits(p.lattice, config)
        code = EXIT_OK
    except SearchBudgetExceeded as exc:
        print(f"search budget exceeded: {exc}", file=sys.stderr)
        if exc.tree is None:
            print("no complete tree found before the budget ran out", file=sys.stderr)
            return EXIT_BUDGET
        tree, exp, code = exc.tree, exc.exponent, EXIT_BUDGET
        print("best so far:")
    lines = [f"# {p.name}: grid 1/{args.grid}, depth {args.depth}"]
    lines += _tree_listing(tree)
    lines.append(f"exponent: q^({exp.coeff} L^{order})")
    if floor is not None:
        lines.append(f"analytic floor: {floor}, gap {exp.coeff - floor}")
    _emit("\n".join(lines), args.out)
    return code


def cmd_renyi(args) -> int:
    try:
        spec = read_spectrum(args.spectrum)
        s_a = renyi_entropy(spec, args.alpha)
        s_at = renyi_entropy(spec, args.alpha_tilde)
        rank = min_rank_for_accuracy(spec, args.delta)
        lower = bond_lower_bound(spec, args.alpha_tilde, args.delta)
        upper = bond_upper_bound(spec, args.alpha, args.delta, args.n_sites)
    except OSError as exc:
        raise UsageError(f"cannot read spectrum: {exc}") from None
    except (SpectrumError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    holds = lower <= rank * (1 + 1e-9) and rank <= upper * (1 + 1e-9)
    d = {
        "alpha": args.alpha,
        "alpha_tilde": args.alpha_tilde,
        "delta": args.delta,
        "n_sites": args.n_sites,
        "S_alpha": s_a,
        "S_alpha_tilde": s_at,
        "min_rank": rank,
        "lower_bound": lower,
        "upper_bound": upper,
        "sandwich_holds": holds,
    }
    if args.format == "json":
        text = json.dumps(d, indent=2)
    else:
        text = "\n".join(f"{k}: {v:.10g}" if isinstance(v, float) else f"{k}: {v}" for k, v in d.items())
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tncost", description="Area-law cost planner for MPS and tree tensor networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def preset_args(sp, allow_summary=False):
        names = SUMMARY_ORDER + (["summary"] if allow_summary else [])
        sp.add_argument("--preset", required=True, help="one of: " + ", ".join(names) + " (or hypercube-D)")
        sp.add_argument("--k", type=int, default=DEFAULT_K, help="long axis is 2^k L (default %(default)s)")
        sp.add_argument("--dim", type=int, default=DEFAULT_HYPERCUBE_DIM, help="hypercube dimension")

    def output_args(sp, formats=("markdown", "csv", "json")):
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--out", help="write to this file instead of stdout")

    sp = sub.add_parser("table", help="per-layer cost table for a preset, or the summary table")
    preset_args(sp, allow_summary=True)
    output_args(sp)
    sp.add_argument("--last-layer", type=int, default=DEFAULT_LAST_LAYER)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("analyze", help="MPS and TTNS costs for a custom box lattice")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--bc", action="append", help="e.g. y=pbc, all=pbc (repeatable, comma-separated)")
    sp.add_argument("--multiple", action="append", help="axis extent in units of L, e.g. x=4 or x=inf")
    sp.add_argument("--strategy", choices=[p.value for p in AxisPolicy])
    sp.add_argument("--no-prefix", action="store_true", help="do not halve the long axis first")
    sp.add_argument("--mps-strategy", choices=[s.value for s in MpsStrategy])
    sp.add_argument("--depth", type=int, default=12, help="tree depth from the root")
    sp.add_argument("--last-layer", type=int, default=DEFAULT_LAST_LAYER)
    output_args(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("verify", help="check symbolic areas and snake cuts against brute-force counts")
    preset_args(sp)
    sp.add_argument("--L", type=int, nargs="+", default=[8])
    sp.add_argument("--depth", type=int, default=4, help="tree depth below any elongated prefix")
    sp.add_argument("--snake-budget", type=int, default=200_000, help="max sites for the snake check")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("optimize", help="grid search over split axes and fractions")
    preset_args(sp)
    sp.add_argument("--grid", type=int, default=2, help="cut fractions k/grid")
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--balanced", action="store_true", help="only cut at 1/2")
    sp.add_argument("--budget", type=int, default=2_000_000, help="max distinct subproblems")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("renyi", help="entropies and bond-dimension bounds for a Schmidt spectrum")
    sp.add_argument("--spectrum", required=True, help="text file, one coefficient per line")
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--alpha-tilde", type=float, default=2.0)
    sp.add_argument("--delta", type=float, default=0.1)
    sp.add_argument("--n-sites", type=int, default=2)
    output_args(sp, formats=("text", "json"))
    sp.set_defaults(func=cmd_renyi)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tncost: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
