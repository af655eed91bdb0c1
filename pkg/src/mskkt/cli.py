"""Command-line entry point.

Exit codes: 0 success, 1 internal error, 2 invalid user input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import __version__, kkt, replicator, structure
from .graph import GraphError, clique_number, induced_subgraph, maximal_cliques
from .io import ParseError, parse_graph, rat, rats, vset
from .simplex import SimplexError, SimplexPoint, VertexFamily, barycentric, characteristic_vector

SCHEMA_VERSION = "1.0"
DEFAULT_SCAN_CAP = 12
PROBE_C_VALUES = (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))

USER_ERRORS = (
    ParseError,
    GraphError,
    SimplexError,
    kkt.KktError,
    structure.StructureError,
    replicator.ReplicatorError,
)


class UsageError(ValueError):
    pass


def scan_cap() -> int:
    raw = os.environ.get("MSKKT_MAX_N")
    if raw is None:
        return DEFAULT_SCAN_CAP
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"MSKKT_MAX_N must be an integer, got {raw!r}") from None


def _exact(text: str, what: str) -> Fraction:
    try:
        from .simplex import parse_rational

        return parse_rational(text)
    except SimplexError:
        raise UsageError(f"{what} must be an integer or a fraction a/b, got {text!r}") from None


def graph_summary(g) -> dict:
    cliques = maximal_cliques(g) if g.n else []
    return {
        "n": g.n,
        "edge_count": g.edge_count(),
        "degree_sequence": g.degrees(),
        "clique_number": clique_number(g) if g.n else 0,
        "maximal_clique_count": len(cliques),
    }


def certificate(cert: kkt.KktCertificate) -> dict:
    return {
        "verdict": cert.verdict.value,
        "lambda": rat(cert.lam),
        "mu": rats(cert.mu),
        "witness": cert.witness,
    }


def point_entry(p: kkt.ParametricProgram, x) -> dict:
    return {"point": rats(x), "verdict": kkt.classify(p, x).verdict.value, "objective": rat(kkt.objective(p, x))}


# -- subcommands ---------------------------------------------------------------


def cmd_classify(args, g) -> dict:
    c = _exact(args.c, "--c")
    try:
        x = SimplexPoint(_exact(t, "point coordinate") for t in args.point.split(","))
    except SimplexError as exc:
        raise UsageError(f"point not on the simplex: {exc}") from None
    if len(x) != g.n:
        raise UsageError(f"point has {len(x)} coordinates but the graph has {g.n} vertices")
    p = kkt.ParametricProgram(g, c)
    return {"parameters": {"c": rat(c), "point": rats(x)}, "result": certificate(kkt.classify(p, x))}


def cmd_scan(args, g) -> dict:
    c = _exact(args.c, "--c")
    cap = scan_cap()
    if args.max_support is None and g.n > cap:
        raise UsageError(
            f"exhaustive scan limited to n <= {cap} (graph has {g.n}); pass --max-support or set MSKKT_MAX_N"
        )
    if args.max_support is not None and args.max_support < 1:
        raise UsageError("--max-support must be positive")
    p = kkt.ParametricProgram(g, c)
    case = {Fraction(0): "b", Fraction(1): "a"}.get(c)
    realized, absent = [], []
    for sol in kkt.scan(p, args.max_support):
        if sol:
            entry = {"support": vset(sol.support), "status": sol.status.value}
            entry["points"] = [point_entry(p, x) for x in sol]
            if sol.status is kkt.SupportStatus.NON_UNIQUE:
                entry["base"] = rats(sol.base)
                entry["directions"] = [rats(d) for d in sol.directions]
            realized.append(entry)
        else:
            ob = kkt.obstruction_applies(g, sol.support, case) if case else None
            absent.append(
                {
                    "support": vset(sol.support),
                    "status": sol.status.value,
                    "obstruction": None if ob is None else {"case": ob.case, "witness": list(ob.witness)},
                }
            )
    return {
        "parameters": {"c": rat(c), "max_support": args.max_support},
        "result": {"realized": realized, "absent": absent},
    }


def cmd_replicator(args, g) -> dict:
    if args.starts < 0:
        raise UsageError("--starts must be nonnegative")
    for name in ("c", "t_end", "dt"):
        if not math.isfinite(getattr(args, name)):
            raise UsageError(f"--{name.replace('_', '-')} must be finite")
    if args.dt <= 0 or args.t_end <= 0:
        raise UsageError("--dt and --t-end must be positive")
    rng = np.random.default_rng(args.seed)
    exact_c = Fraction(args.c).limit_denominator(10**6)
    exact_p = kkt.ParametricProgram(g, exact_c) if float(exact_c) == args.c else None
    runs = []
    trace = open(args.trace, "w") if args.trace else None
    try:
        for k in range(args.starts):
            x0 = replicator.random_interior_point(g.n, rng)
            traj = replicator.integrate(g, args.c, x0, args.t_end, args.dt, record_every=args.record_every)
            xt = traj.terminal
            run = {
                "start": [float(v) for v in x0],
                "terminal": [float(v) for v in xt],
                "kkt_residual": replicator.kkt_residual(g, args.c, xt),
                "steps": traj.steps,
                "converged": traj.converged,
                "f_initial": float(traj.fvals[0]),
                "f_final": float(traj.fvals[-1]),
                "f_min_increment": None if traj.steps == 0 else traj.min_increment(),
                "monotone": traj.is_monotone(),
                "exact_point": None,
            }
            if exact_p is not None:
                snapped = kkt.snap(exact_p, xt)
                if snapped is not None:
                    run["exact_point"] = point_entry(exact_p, snapped)
            runs.append(run)
            if trace:
                for line in traj.records():
                    trace.write(f"{k} {line}\n")
    finally:
        if trace:
            trace.close()
    return {
        "parameters": {
            "c": args.c,
            "starts": args.starts,
            "seed": args.seed,
            "t_end": args.t_end,
            "dt": args.dt,
            "backend": replicator.BACKEND,
        },
        "result": {"runs": runs},
    }


def _shared_core_candidates(g, vertices) -> list[frozenset]:
    sub, labels = induced_subgraph(g, vertices)
    cl = [frozenset(labels[v - 1] for v in c) for c in maximal_cliques(sub) if len(c) >= 2]
    if len(cl) < 2:
        return []
    core = frozenset.intersection(*cl)
    if core and all(a & b == core for a, b in combinations(cl, 2)):
        return cl
    return []


def cmd_structure(args, g) -> dict:
    c = _exact(args.c, "--c")
    try:
        fam = VertexFamily.parse(args.family)
    except SimplexError as exc:
        raise UsageError(str(exc)) from None
    g.mask(fam.union)
    p = kkt.ParametricProgram(g, c)
    hr = structure.is_highly_regular(g, fam)
    rp = structure.reduce(g, c, fam)
    out: dict = {
        "highly_regular": hr,
        "D": [rats(row) for row in rp.D],
        "Lambda": list(rp.sizes),
    }
    sols = structure.solve_reduced(rp)
    out["reduced_solutions"] = {
        "status": sols.status.value,
        "points": [
            {"y": rats(y), "lift": point_entry(p, structure.lift(rp, y, g.n))} for y in sols.points
        ],
    }
    # uniform point on the union, reduced vs full verdict across several c
    xu = characteristic_vector(g.n, fam.union)
    yu = barycentric(xu, fam)
    probe = []
    for cc in sorted(set(PROBE_C_VALUES) | {c}):
        probe.append(
            {
                "c": rat(cc),
                "reduced_kkt": structure.reduced_kkt_check(structure.reduce(g, cc, fam), yu),
                "full_verdict": kkt.classify(kkt.ParametricProgram(g, cc), xu).verdict.value,
            }
        )
    out["union_probe"] = {"y": rats(yu), "samples": probe}

    out["two_block"] = None
    out["generalized_star"] = None
    if fam.k == 2 and hr:
        tb = structure.two_block_analysis(g, fam[0], fam[1])
        pts = tb.segment_points(c)
        out["two_block"] = {
            "alpha": rat(tb.alpha),
            "beta": rat(tb.beta),
            "regular_case": tb.regular_case,
            "c_star": None if tb.c_star is None else rat(tb.c_star),
            "interval": None if tb.interval is None else rats(tb.interval),
            "whole_segment": pts is None,
            "segment_points": None if pts is None else [rats(x) for x in pts],
            "x_c": None if tb.x_c(c) is None else rats(tb.x_c(c)),
        }
    if fam.k == 2:
        for core, periphery in ((fam[1], fam[0]), (fam[0], fam[1])):
            gs = structure.detect_generalized_star(g, core, periphery)
            if gs is not None:
                entry = {"core": vset(core), "periphery": vset(periphery), "d": gs.d, "b": gs.b, "point": None}
                if not 1 <= c <= gs.b:
                    entry["point"] = point_entry(p, structure.genstar_kkt_point(gs, c))
                out["generalized_star"] = entry
                break

    if args.cliques:
        try:
            cliques = [frozenset(int(v) for v in part.split(",")) for part in args.cliques.split("|")]
        except ValueError:
            raise UsageError(f"malformed --cliques {args.cliques!r}") from None
    else:
        cliques = _shared_core_candidates(g, fam.union)
    out["shared_core"] = None
    if cliques:
        try:
            rep = structure.shared_core_analysis(g, cliques, c)
            out["shared_core"] = {
                "cliques": [vset(x) for x in cliques],
                "point": point_entry(p, rep.point),
                "outside_hull": rep.outside_hull,
                "equals_mean": rep.equals_mean,
                "c0": rat(rep.c0),
                "b": rep.b,
            }
        except structure.StructureError as exc:
            if args.cliques:
                raise
            out["shared_core"] = {"cliques": [vset(x) for x in cliques], "skipped": str(exc)}
    return {"parameters": {"c": rat(c), "family": [vset(v) for v in fam]}, "result": out}


COMMANDS = {
    "classify": cmd_classify,
    "scan": cmd_scan,
    "replicator": cmd_replicator,
    "structure": cmd_structure,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mskkt", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"mskkt {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("graph", help="graph file (DIMACS, edge list or JSON)")
        sp.add_argument("--format", default="auto", choices=["auto", "dimacs", "edgelist", "json"])
        sp.add_argument("--out", help="write the JSON report here instead of stdout")

    sp = sub.add_parser("classify", help="exact KKT classification of one point")
    common(sp)
    sp.add_argument("--c", required=True, help="parameter, integer or a/b")
    sp.add_argument("--point", required=True, help="comma-separated rationals")

    sp = sub.add_parser("scan", help="stationary points on every support")
    common(sp)
    sp.add_argument("--c", required=True)
    sp.add_argument("--max-support", type=int, default=None)

    sp = sub.add_parser("replicator", help="integrate replicator dynamics from random starts")
    common(sp)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--starts", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--t-end", type=float, default=500.0)
    sp.add_argument("--dt", type=float, default=0.01)
    sp.add_argument("--record-every", type=int, default=100)
    sp.add_argument("--trace", help="write trajectory records (start step time x.. f) to this file")

    sp = sub.add_parser("structure", help="reduction, two-block, star and shared-core analyses")
    common(sp)
    sp.add_argument("--c", required=True)
    sp.add_argument("--family", required=True, help='classes separated by "|", e.g. "1,2|3"')
    sp.add_argument("--cliques", help='explicit clique list for the shared-core analysis, e.g. "1,2,3|1,4,5"')
    return ap


def run(argv=None) -> tuple[int, dict | None]:
    args = build_parser().parse_args(argv)
    g, fmt, raw = parse_graph(args.graph, args.format)
    body = COMMANDS[args.command](args, g)
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "mskkt", "version": __version__},
        "command": args.command,
        "input": {"sha256": hashlib.sha256(raw).hexdigest(), "format": fmt},
        "graph": graph_summary(g),
        **body,
    }
    text = json.dumps(report, indent=2, sort_keys=False) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0, report


def main(argv=None) -> int:
    try:
        return run(argv)[0]
    except (UsageError, *USER_ERRORS) as exc:
        print(f"mskkt: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        print(f"mskkt: internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
