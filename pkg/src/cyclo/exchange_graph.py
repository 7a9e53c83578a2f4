"""Exchange graphs of unlabeled C- and G-matrices, and the complexity kappa."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TextIO

from .core import Mat, Perm, Rational, ZERO, apply_perm_both, apply_perm_cols, fmt
from .patterns import PatternNode, PatternTree, Seq, mutate_c, mutate_exchange, mutate_g


@dataclass(frozen=True)
class UnlabeledMat:
    """Column-permutation class of a matrix, represented by its least member."""

    canonical: Mat

    @property
    def key(self) -> tuple:
        return self.canonical.data


def canonicalize(M: Mat) -> UnlabeledMat:
    """Least row-major flattening over all column permutations."""
    if not M.is_square():
        raise ValueError("canonicalize expects a square matrix")
    best = min((apply_perm_cols(s, M) for s in Perm.all(M.ncols)),
               key=lambda A: A.entries)
    return UnlabeledMat(best)


def kappa(C: Mat) -> Rational:
    return sum((abs(x) for x in C.entries), ZERO)


@dataclass
class EGraph:
    pattern: str
    radius: int
    vertices: dict[tuple, int] = field(default_factory=dict)
    words: list[Seq] = field(default_factory=list)
    depth: list[int] = field(default_factory=list)
    kappa: list[Rational] = field(default_factory=list)
    # unordered pairs stored as (first endpoint seen, other, direction of that edge)
    edges: list[tuple[int, int, int]] = field(default_factory=list)
    collisions: list[tuple[Seq, Seq]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.words)

    def degree(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b, _ in self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * len(self.words)
        for a, b, _ in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def expected_tree_size(self, n: int = 3) -> int:
        # ball of radius r in the n-regular tree
        return 1 + sum(n * (n - 1) ** (i - 1) for i in range(1, self.radius + 1))

    def is_tree_ball(self, n: int = 3) -> bool:
        """No identifications, |E| = |V| - 1, interior degree n, boundary degree 1."""
        if self.collisions or len(self) != self.expected_tree_size(n):
            return False
        if len(self.edges) != len(self) - 1:
            return False
        for v, deg in enumerate(self.degrees()):
            want = n if self.depth[v] < self.radius else (1 if self.radius else 0)
            if deg != want:
                return False
        return True

    def kappa_increasing(self) -> bool:
        return all(self.kappa[a] < self.kappa[b] for a, b, _ in self.edges)


def _matrix_of(node: PatternNode, pattern: str) -> Mat:
    if pattern == "c":
        return node.C
    if pattern == "g":
        return node.G
    raise ValueError(f"pattern must be 'c' or 'g', got {pattern!r}")


def build_graph(tree: PatternTree, depth: int, pattern: str = "c") -> EGraph:
    """Breadth-first insertion of canonical forms up to ``depth``.

    The shortlex-least word registers each vertex.  A later word landing on an
    existing vertex is recorded in ``collisions`` and its subtree is not
    explored further (the quotient graph already has that vertex).
    """
    g = EGraph(pattern, depth)
    ids: dict[Seq, int] = {}
    seen_edges: set[frozenset] = set()
    for parent, k, node in tree.ball(depth):
        if parent is not None and parent.seq not in ids:
            continue
        key = canonicalize(_matrix_of(node, pattern)).key
        v = g.vertices.get(key)
        if v is None:
            v = len(g.words)
            g.vertices[key] = v
            g.words.append(node.seq)
            g.depth.append(len(node.seq))
            g.kappa.append(kappa(node.C))
            ids[node.seq] = v
        else:
            g.collisions.append((g.words[v], node.seq))
        if parent is not None:
            e = frozenset((ids[parent.seq], v))
            if e not in seen_edges:
                seen_edges.add(e)
                g.edges.append((ids[parent.seq], v, k))
    return g


def export_dot(g: EGraph, out: TextIO | None = None) -> str:
    lines = [
        f"graph exchange_{g.pattern} {{",
        "  // edge labels are advisory: one representative direction per edge",
    ]
    for v, w in enumerate(g.words):
        word = ",".join(map(str, w)) or "()"
        lines.append(f'  v{v} [label="kappa={fmt(g.kappa[v])}\\ndepth={g.depth[v]}", '
                     f'word="{word}"];')
    for a, b, k in g.edges:
        lines.append(f'  v{a} -- v{b} [label="{k}", advisory="true"];')
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write(text)
    return text


def graph_to_json(g: EGraph) -> dict:
    return {
        "pattern": g.pattern,
        "radius": g.radius,
        "vertices": [{"id": v, "word": list(w), "depth": g.depth[v], "kappa": fmt(g.kappa[v])}
                     for v, w in enumerate(g.words)],
        "edges": [{"from": a, "to": b, "direction_advisory": k} for a, b, k in g.edges],
        "collisions": [[list(a), list(b)] for a, b in g.collisions],
    }


def check_compatibility(node: PatternNode, B0: Mat, sigma: Perm, k: int) -> bool:
    """Relabelling commutes with mutation: mu_{sigma(k)} of the permuted node
    equals the permuted mu_k, for B, C and G (B0 stays fixed)."""
    B, C, G = node.B, node.C, node.G
    sB = apply_perm_both(sigma, B)
    sC = apply_perm_cols(sigma, C)
    sG = apply_perm_cols(sigma, G)
    sk = sigma(k)
    ok_b = mutate_exchange(sB, sk) == apply_perm_both(sigma, mutate_exchange(B, k))
    ok_c = mutate_c(sC, sB, sk) == apply_perm_cols(sigma, mutate_c(C, B, k))
    ok_g = (mutate_g(sG, sC, sB, B0, sk)
            == apply_perm_cols(sigma, mutate_g(G, C, B, B0, k)))
    return ok_b and ok_c and ok_g
