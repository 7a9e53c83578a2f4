"""Command-line front end.

Exit codes: 0 all requested properties pass, 1 a property failed,
2 bad input or a depth guard tripped, 3 an internal invariant broke.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .cartan import NotClusterCyclic, congruence_product, initial_quasi_cartan, quasi_cartan_at
from .core import Mat, NotSkewSymmetrizable, fmt, fmt_decimal, load_matrix
from .exchange_graph import build_graph, export_dot, graph_to_json
from .monoid import TABLE_NAMES, check_dihedral, polygon_labeling, quotient_monoid
from .patterns import NotSignCoherent, PatternTree, is_reduced, parse_seq
from .signs import (
    Incoherent,
    InvariantViolation,
    RankError,
    cluster_cyclic_data,
    is_cluster_cyclic,
    is_cyclic,
    kst_labels,
    sign_matrix,
    tropical_signs,
)
from .sweep import AUTOMATON_SUITES, SUITES, instances_from_seed

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3

AUTOMATON_DEPTH_LIMIT = 16
MATRIX_DEPTH_LIMIT = 10

DEFAULT_DEPTH = {"signs": 8, "inequalities": 8, "cartan": 8, "quadric": 8,
                 "dualities": 8, "tree": 10, "reddening": 12, "fractal": 5}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    matrix_path: str | None = None
    seq: tuple[int, ...] | None = None
    depth: int | None = None
    trials: int = 0
    seed: int = 0
    format: str = "json"
    suite: str | None = None
    pattern: str = "c"
    out: str | None = None
    decimals: int | None = None
    show: tuple[str, ...] = ("b", "c", "g")
    pairs: int = 50
    cayley: bool = False
    polygon: bool = False
    extra: dict = field(default_factory=dict)


def depth_limit(automaton: bool) -> int:
    limit = AUTOMATON_DEPTH_LIMIT if automaton else MATRIX_DEPTH_LIMIT
    env = os.environ.get("CYCLO_DEPTH_LIMIT")
    if env:
        try:
            limit = min(limit, int(env))  # may only lower the guard
        except ValueError:
            raise InputError(f"CYCLO_DEPTH_LIMIT must be an integer, got {env!r}")
    return limit


def _check_depth(depth: int, automaton: bool) -> None:
    if depth < 0:
        raise InputError("depth must be non-negative")
    limit = depth_limit(automaton)
    if depth > limit:
        kind = "automaton" if automaton else "full-matrix"
        raise InputError(f"depth {depth} exceeds the {kind} guard of {limit}")


def _load(cfg: RunConfig):
    if not cfg.matrix_path:
        raise InputError("--matrix is required")
    try:
        B, d = load_matrix(cfg.matrix_path)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise InputError(f"cannot read matrix {cfg.matrix_path}: {exc}")
    return B, d


def _tree(cfg: RunConfig) -> PatternTree:
    B, d = _load(cfg)
    try:
        return PatternTree(B, d)
    except NotSkewSymmetrizable as exc:
        raise InputError(str(exc))


def _node(tree: PatternTree, seq):
    try:
        return tree.node_at(seq or ())
    except (ValueError, IndexError) as exc:
        raise InputError(str(exc))


def _render(M: Mat, decimals: int | None) -> list[list[str]]:
    if decimals is None:
        return M.to_strings()
    return [[fmt_decimal(x, decimals) for x in r] for r in M.data]


def _text_matrix(rows: list[list[str]]) -> str:
    w = max((len(x) for r in rows for x in r), default=1)
    return "\n".join("  [" + " ".join(x.rjust(w) for x in r) + "]" for r in rows)


# commands ---------------------------------------------------------------

def cmd_mutate(cfg: RunConfig) -> tuple[int, dict]:
    tree = _tree(cfg)
    node = _node(tree, cfg.seq)
    mats = {"b": node.B, "c": node.C, "g": node.G}
    report = {"command": "mutate", "w": list(node.seq)}
    for key in cfg.show:
        if key not in mats:
            raise InputError(f"--show accepts b,c,g; got {key!r}")
        report[key.upper()] = _render(mats[key], cfg.decimals)
    return EXIT_OK, report


def cmd_check_cyclic(cfg: RunConfig) -> tuple[int, dict]:
    B, _ = _load(cfg)
    try:
        data = cluster_cyclic_data(B)
    except RankError as exc:
        raise InputError(str(exc))
    cc = is_cluster_cyclic(B)
    report = {
        "command": "check-cyclic",
        "cyclic": data["cyclic"],
        "products": [fmt(x) for x in data["products"]],
        "triple": fmt(data["triple"]),
        "lhs": fmt(data["lhs"]),
        "slack": fmt(data["slack"]),
        "cluster_cyclic": cc,
    }
    return (EXIT_OK if cc else EXIT_FAIL), report


def cmd_signs(cfg: RunConfig) -> tuple[int, dict]:
    tree = _tree(cfg)
    seq = cfg.seq or ()
    steps = []
    status = EXIT_OK
    for r in range(len(seq) + 1):
        node = _node(tree, seq[:r])
        eps = tropical_signs(node.C)
        entry = {"w": list(node.seq), "b_signs": [list(x) for x in sign_matrix(node.B)]}
        if isinstance(eps, Incoherent):
            entry["sign_coherent"] = False
            entry["mixed_columns"] = list(eps.columns)
            steps.append(entry)
            status = EXIT_FAIL
            break
        entry["eps"] = list(eps)
        if node.seq and node.n == 3 and is_cyclic(node.B):
            lab = kst_labels(node)
            entry["kst"] = [lab.k, lab.s, lab.t]
        steps.append(entry)
    return status, {"command": "signs", "steps": steps}


def _instances(cfg: RunConfig):
    if cfg.matrix_path:
        B, d = _load(cfg)
        return [(B, d)]
    if cfg.trials > 0:
        return instances_from_seed(cfg.seed, cfg.trials)
    raise InputError("verify needs --matrix or --trials")


def _cartan_single(cfg: RunConfig) -> tuple[int, dict]:
    tree = _tree(cfg)
    node = _node(tree, cfg.seq)
    if not node.seq:
        raise InputError("--seq must be non-empty for the congruence")
    k1 = node.seq[0]
    try:
        At = initial_quasi_cartan(tree.B0, tree.d, k1).deformation
        Aw = quasi_cartan_at(node, tree.d).deformation
    except NotClusterCyclic as exc:
        raise InputError(str(exc))
    prod = congruence_product(tree, node.seq)
    ok = prod == Aw
    report = {
        "command": "verify", "suite": "cartan", "w": list(node.seq), "k1": k1,
        "A_tilde_k1": At.to_strings(), "C": node.C.to_strings(),
        "A_tilde_w": Aw.to_strings(), "product": prod.to_strings(),
        "congruence": "PASS" if ok else "FAIL",
    }
    return (EXIT_OK if ok else EXIT_FAIL), report


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    suite = cfg.suite
    if suite not in SUITES:
        raise InputError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    depth = DEFAULT_DEPTH[suite] if cfg.depth is None else cfg.depth
    _check_depth(depth, suite in AUTOMATON_SUITES)
    if suite == "cartan" and cfg.seq:
        return _cartan_single(cfg)
    if cfg.seq is not None and not is_reduced(cfg.seq):
        raise InputError(f"{list(cfg.seq)} is not reduced")
    instances = _instances(cfg)
    try:
        if suite == "fractal":
            rep = SUITES[suite](instances, depth, pairs=cfg.pairs, seed=cfg.seed)
        elif suite in ("tree", "reddening"):
            rep = SUITES[suite](instances, depth)
        else:
            rep = SUITES[suite](instances, depth, seq=cfg.seq)
    except (NotClusterCyclic, RankError, NotSignCoherent) as exc:
        raise InputError(str(exc))
    except ValueError as exc:
        # e.g. the sign automaton refusing a non-cyclic sign pattern
        raise InputError(str(exc))
    report = {"command": "verify", "depth": depth, **rep.to_json()}
    if not cfg.matrix_path:
        report.update(seed=cfg.seed, trials=cfg.trials)
    return (EXIT_OK if rep.passed else EXIT_FAIL), report


def cmd_graph(cfg: RunConfig) -> tuple[int, dict | str]:
    depth = 10 if cfg.depth is None else cfg.depth
    _check_depth(depth, automaton=False)
    tree = _tree(cfg)
    if cfg.pattern not in ("c", "g"):
        raise InputError("--pattern must be c or g")
    g = build_graph(tree, depth, cfg.pattern)
    if cfg.format == "dot":
        payload: dict | str = export_dot(g)
    else:
        payload = {"command": "graph", **graph_to_json(g)}
    if cfg.out:
        text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True, indent=2) + "\n"
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        payload = {"command": "graph", "out": cfg.out, "vertices": len(g),
                   "edges": len(g.edges), "collisions": len(g.collisions)}
    return EXIT_OK, payload


def cmd_monoid(cfg: RunConfig) -> tuple[int, dict]:
    q = quotient_monoid()
    checks = check_dihedral(q)
    report: dict = {"command": "monoid", "order": len(q), "relations": checks}
    if cfg.cayley:
        report["elements"] = list(TABLE_NAMES)
        report["cayley"] = q.table
    if cfg.polygon:
        report["polygon"] = polygon_labeling()
    return (EXIT_OK if all(checks.values()) else EXIT_FAIL), report


COMMANDS = {
    "mutate": cmd_mutate,
    "check-cyclic": cmd_check_cyclic,
    "signs": cmd_signs,
    "verify": cmd_verify,
    "graph": cmd_graph,
    "monoid": cmd_monoid,
}


def to_text(report: dict) -> str:
    """Human-readable rendering; matrices are printed as aligned rows."""
    lines = []
    for key, val in report.items():
        if isinstance(val, list) and val and isinstance(val[0], list) and val[0] \
                and isinstance(val[0][0], str):
            lines.append(f"{key} =")
            lines.append(_text_matrix(val))
        elif key == "properties":
            for p in val:
                status = "PASS" if p["pass"] else "FAIL"
                lines.append(f"{p['name']}: {status} ({p['nodes']} nodes, {p['failures']} failures)")
                if p["counterexample"] is not None:
                    lines.append("  first counterexample: " + json.dumps(p["counterexample"], sort_keys=True))
        elif key == "cayley":
            names = report.get("elements", [])
            w = max(len(n) for n in names)
            lines.append(" " * (w + 1) + " ".join(n.rjust(w) for n in names))
            for name, row in zip(names, val):
                lines.append(name.rjust(w) + " " + " ".join(names[i].rjust(w) for i in row))
        elif isinstance(val, (dict, list)):
            lines.append(f"{key}: {json.dumps(val, sort_keys=True)}")
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig) -> tuple[int, str]:
    """Run one command; returns (exit status, rendered report)."""
    try:
        status, report = COMMANDS[cfg.command](cfg)
    except InputError as exc:
        return EXIT_INPUT, json.dumps({"error": str(exc), "exit": EXIT_INPUT}, sort_keys=True) + "\n"
    except InvariantViolation as exc:
        dump = {"error": "invariant violation", "message": str(exc), "data": exc.data,
                "config": {k: v for k, v in asdict(cfg).items() if k != "extra"},
                "exit": EXIT_INVARIANT}
        return EXIT_INVARIANT, json.dumps(dump, sort_keys=True, default=str, indent=2) + "\n"
    if isinstance(report, str):
        return status, report
    if cfg.format == "text":
        return status, to_text(report)
    return status, json.dumps(report, sort_keys=True, indent=2) + "\n"


def _seq_arg(text: str) -> tuple[int, ...]:
    try:
        return parse_seq(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"sequence must be comma-separated integers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_choices=("json", "text")):
        sp.add_argument("--matrix", dest="matrix_path", help="JSON exchange matrix file")
        sp.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])

    sp = sub.add_parser("mutate", help="B, C, G at a reduced sequence")
    common(sp)
    sp.add_argument("--seq", type=_seq_arg, default=())
    sp.add_argument("--show", default="b,c,g", help="comma list from b,c,g")
    sp.add_argument("--decimals", type=int, default=None, help="display entries rounded to N places")

    sp = sub.add_parser("check-cyclic", help="cluster-cyclicity test")
    common(sp)

    sp = sub.add_parser("signs", help="tropical signs and K/S/T labels along a sequence")
    common(sp)
    sp.add_argument("--seq", type=_seq_arg, default=())

    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    sp.add_argument("--suite", required=True, choices=sorted(SUITES))
    sp.add_argument("--seq", type=_seq_arg, default=None,
                    help="check only the prefixes of this sequence")
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--trials", type=int, default=0, help="random cluster-cyclic matrices")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--pairs", type=int, default=50, help="branch pairs for the fractal suite")

    sp = sub.add_parser("graph", help="exchange graph export")
    common(sp, ("dot", "json"))
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--pattern", choices=("c", "g"), default="c")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("monoid", help="the D6 quotient and the polygon model")
    sp.add_argument("--cayley", action="store_true")
    sp.add_argument("--polygon", action="store_true")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    kw = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    if isinstance(kw.get("show"), str):
        kw["show"] = tuple(x.strip().lower() for x in kw["show"].split(",") if x.strip())
    return RunConfig(**kw)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    status, text = run(config_from_args(ns))
    stream = sys.stdout if status in (EXIT_OK, EXIT_FAIL) else sys.stderr
    stream.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
