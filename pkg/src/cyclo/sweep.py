"""Verification suites over one or many exchange matrices.

Each suite walks nodes of the mutation tree, records pass/fail counts per
property and keeps the first counterexample with its exact matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cartan import (
    axis_columns,
    axis_cvector_check,
    check_congruence,
    check_cvectors_on_quadric,
    pset_of,
    quadric_matches_congruence_diagonal,
)
from .core import Mat, Rational, fmt
from .exchange_graph import build_graph
from .monoid import fractal_check, letters_to_word
from .patterns import (
    PatternNode,
    PatternTree,
    check_first_duality,
    check_second_duality,
    is_sign_coherent,
    reconstruct_C_from_G,
)
from .sampling import sample_many
from .signs import (
    Incoherent,
    automaton_ball,
    automaton_reach,
    check_ks_inequality,
    check_monotonicity,
    detect_reddening,
    is_cluster_cyclic,
    is_cyclic,
    negate_signs,
    root_state,
    sign_matrix,
    sign_step,
    tropical_signs,
)

Instance = tuple[Mat, Sequence[Rational] | None]


@dataclass
class PropertyResult:
    name: str
    nodes: int = 0
    failures: int = 0
    counterexample: dict | None = None
    note: str | None = None

    def record(self, ok: bool, dump: Callable[[], dict]) -> bool:
        self.nodes += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = dump()
        return ok

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        out = {"name": self.name, "nodes": self.nodes, "failures": self.failures,
               "pass": self.passed, "counterexample": self.counterexample}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class SuiteReport:
    suite: str
    instances: int
    properties: list[PropertyResult] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def prop(self, name: str) -> PropertyResult:
        for p in self.properties:
            if p.name == name:
                return p
        p = PropertyResult(name)
        self.properties.append(p)
        return p

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def to_json(self) -> dict:
        return {"suite": self.suite, "instances": self.instances, "pass": self.passed,
                "properties": [p.to_json() for p in self.properties], **self.extra}


def strings(M: Mat) -> list[list[str]]:
    return M.to_strings()


def node_dump(idx: int, node: PatternNode, **more) -> dict:
    return {"instance": idx, "w": list(node.seq), "B": strings(node.B),
            "C": strings(node.C), "G": strings(node.G), **more}


def as_tree(x: Instance | PatternTree) -> PatternTree:
    """Suites accept (B, d) pairs or prebuilt trees, whose memo is then reused."""
    return x if isinstance(x, PatternTree) else PatternTree(*x)


def instances_from_seed(seed: int, trials: int) -> list[Instance]:
    return sample_many(seed, trials)


def _nodes(tree: PatternTree, depth: int, seq: Sequence[int] | None):
    """(parent, node) pairs: the depth ball, or the prefixes of seq."""
    if seq is None:
        for parent, _, node in tree.ball(depth):
            yield parent, node
    else:
        parent = None
        for r in range(len(seq) + 1):
            node = tree.node_at(seq[:r])
            yield parent, node
            parent = node


# suites -----------------------------------------------------------------

def suite_signs(instances: Sequence[Instance], depth: int, seq=None) -> SuiteReport:
    rep = SuiteReport("signs", len(instances))
    coh = rep.prop("sign_coherence")
    for idx, tree in enumerate(map(as_tree, instances)):
        B = tree.B0
        cyclic = B.shape == (3, 3) and is_cyclic(B)
        cc = cyclic and is_cluster_cyclic(B)
        states = {(): root_state(sign_matrix(B))} if cyclic else None
        for parent, node in _nodes(tree, depth, seq):
            eps = tropical_signs(node.C)
            ok = coh.record(not isinstance(eps, Incoherent), lambda: node_dump(
                idx, node, columns=list(eps.columns)))
            if not ok:
                break  # descendants of an incoherent node are not meaningful here
            if states is None:
                continue
            if node.seq:
                states[node.seq] = sign_step(states[parent.seq], node.seq[-1])
            st = states[node.seq]
            rep.prop("automaton_eps").record(st.eps == eps, lambda: node_dump(
                idx, node, automaton=list(st.eps), oracle=list(eps)))
            rep.prop("automaton_b_signs").record(st.b_signs == sign_matrix(node.B),
                                                 lambda: node_dump(idx, node))
            want = sign_matrix(B) if len(node.seq) % 2 == 0 else negate_signs(sign_matrix(B))
            rep.prop("b_sign_alternation").record(sign_matrix(node.B) == want,
                                                  lambda: node_dump(idx, node))
            if cc:
                rep.prop("cluster_cyclic_invariant").record(is_cluster_cyclic(node.B),
                                                            lambda: node_dump(idx, node))
        if states is None:
            rep.prop("automaton_eps").note = "skipped for non-cyclic input"
    return rep


def suite_inequalities(instances: Sequence[Instance], depth: int, seq=None) -> SuiteReport:
    rep = SuiteReport("inequalities", len(instances))
    for idx, tree in enumerate(map(as_tree, instances)):
        for parent, node in _nodes(tree, depth, seq):
            if parent is None:
                continue
            rep.prop("monotonicity").record(check_monotonicity(parent, node),
                                            lambda: node_dump(idx, node))
            rep.prop("ks_inequality").record(check_ks_inequality(node),
                                             lambda: node_dump(idx, node))
    return rep


def suite_cartan(instances: Sequence[Instance], depth: int, seq=None) -> SuiteReport:
    rep = SuiteReport("cartan", len(instances))
    for idx, tree in enumerate(map(as_tree, instances)):
        for _, node in _nodes(tree, depth, seq):
            if not node.seq:
                continue
            P = pset_of(node)
            rep.prop("pset_size_4_symmetric").record(len(P) == 4 and P.is_symmetric(),
                                                     lambda: node_dump(idx, node, P=P.sorted()))
            rep.prop("congruence").record(check_congruence(tree, node.seq),
                                          lambda: node_dump(idx, node))
    return rep


def suite_quadric(instances: Sequence[Instance], depth: int, seq=None) -> SuiteReport:
    rep = SuiteReport("quadric", len(instances))
    axis_hits = []
    for idx, tree in enumerate(map(as_tree, instances)):
        for _, node in _nodes(tree, depth, seq):
            rep.prop("cvectors_on_quadric").record(check_cvectors_on_quadric(tree, node.seq),
                                                   lambda: node_dump(idx, node))
            if node.seq:
                rep.prop("quadric_equals_congruence_diagonal").record(
                    quadric_matches_congruence_diagonal(tree, node.seq),
                    lambda: node_dump(idx, node))
            rep.prop("axis_cvectors").record(axis_cvector_check(node, tree.d),
                                             lambda: node_dump(idx, node))
            for i, j, a in axis_columns(node):
                if i != j:
                    axis_hits.append({"instance": idx, "w": list(node.seq), "i": i, "j": j,
                                      "alpha": fmt(a)})
    rep.extra["off_axis_occurrences"] = axis_hits
    return rep


def suite_dualities(instances: Sequence[Instance], depth: int, seq=None) -> SuiteReport:
    rep = SuiteReport("dualities", len(instances))
    for idx, tree in enumerate(map(as_tree, instances)):
        for _, node in _nodes(tree, depth, seq):
            w = node.seq
            rep.prop("first_duality").record(check_first_duality(tree, w),
                                             lambda: node_dump(idx, node))
            rep.prop("det_C_unimodular").record(abs(node.C.det()) == 1,
                                                lambda: node_dump(idx, node))
            rep.prop("det_G_unimodular").record(abs(node.G.det()) == 1,
                                                lambda: node_dump(idx, node))
            if is_sign_coherent(node.C):
                rep.prop("second_duality").record(check_second_duality(tree, w),
                                                  lambda: node_dump(idx, node))
                rep.prop("C_from_G").record(reconstruct_C_from_G(tree, w) == node.C,
                                            lambda: node_dump(idx, node))
    return rep


def suite_tree(instances: Sequence[Instance], depth: int, seq=None) -> SuiteReport:
    rep = SuiteReport("tree", len(instances))
    logs = []
    for idx, tree in enumerate(map(as_tree, instances)):
        gc = build_graph(tree, depth, "c")
        gg = build_graph(tree, depth, "g")
        dump = lambda g: {"instance": idx, "vertices": len(g), "expected": g.expected_tree_size(),
                          "collisions": [[list(a), list(b)] for a, b in g.collisions[:5]]}
        rep.prop("c_graph_tree_ball").record(gc.is_tree_ball(), lambda: dump(gc))
        rep.prop("g_graph_tree_ball").record(gg.is_tree_ball(), lambda: dump(gg))
        rep.prop("same_identifications").record(gc.collisions == gg.collisions,
                                                lambda: {"instance": idx})
        rep.prop("kappa_increasing").record(gc.kappa_increasing(), lambda: {"instance": idx})
        logs.append({"instance": idx, "c_vertices": len(gc), "g_vertices": len(gg),
                     "c_collisions": len(gc.collisions), "g_collisions": len(gg.collisions)})
    rep.extra["graphs"] = logs
    return rep


def suite_reddening(instances: Sequence[Instance], depth: int, seq=None) -> SuiteReport:
    """Uses the sign automaton, so deep searches stay cheap."""
    rep = SuiteReport("reddening", len(instances))
    for idx, tree in enumerate(map(as_tree, instances)):
        bs = sign_matrix(tree.B0)
        found = detect_reddening(bs, depth)
        rep.prop("no_reddening_sequence").record(not found, lambda: {
            "instance": idx, "sequences": [[list(w), m] for w, m in found[:10]]})
        reach = automaton_reach(bs)
        bad = [s for s in reach if s.last is not None and len(set(s.eps)) == 1]
        rep.prop("two_signs_closure").record(not bad, lambda: {"instance": idx})
        rep.extra["words_searched"] = rep.extra.get("words_searched", 0) + sum(
            1 for _ in automaton_ball(bs, depth)) - 1
        rep.extra.setdefault("closure_sizes", []).append(len(reach))
    return rep


def _random_branch_word(rng: random.Random, bs) -> tuple[int, ...]:
    i = rng.randint(1, 3)
    X = "S" * rng.randint(0, 2) + "T" + "".join(rng.choice("ST") for _ in range(rng.randint(0, 2)))
    return letters_to_word(bs, i, X)


def suite_fractal(instances: Sequence[Instance], depth: int, pairs: int = 50,
                  seed: int = 0) -> SuiteReport:
    rep = SuiteReport("fractal", len(instances))
    rng = random.Random(seed)
    trees = [as_tree(x) for x in instances]
    prop = rep.prop("fractal_correspondence")
    for p in range(pairs):
        idx = p % len(trees)
        tree = trees[idx]
        bs = sign_matrix(tree.B0)
        w0, w1 = _random_branch_word(rng, bs), _random_branch_word(rng, bs)
        r = fractal_check(tree, w0, w1, depth)
        prop.record(r.ok, lambda: {"instance": idx, "w0": list(w0), "w1": list(w1),
                                   "xi": str(r.xi), "failures": r.failures[:5]})
        rep.extra["continuations_checked"] = rep.extra.get("continuations_checked", 0) + r.checked
    return rep


SUITES = {
    "signs": suite_signs,
    "inequalities": suite_inequalities,
    "cartan": suite_cartan,
    "quadric": suite_quadric,
    "dualities": suite_dualities,
    "tree": suite_tree,
    "reddening": suite_reddening,
    "fractal": suite_fractal,
}

AUTOMATON_SUITES = {"reddening"}
