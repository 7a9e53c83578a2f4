"""Mutation of exchange matrices and the C/G-matrix recursion on the n-regular tree."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    Rational,
    J,
    as_rational,
    Mat,
    column_mask,
    find_skew_symmetrizer,
    is_skew_symmetrizer,
    NotSkewSymmetrizable,
    row_mask,
    truncate_plus,
)

Seq = tuple[int, ...]


class NotSignCoherent(ValueError):
    """Raised when a check needs sign-coherence and the C-matrix lacks it."""


def is_reduced(w: Sequence[int]) -> bool:
    return all(a != b for a, b in zip(w, w[1:]))


def seq_append(w: Sequence[int], k: int) -> Seq:
    """w[k]: append k, or cancel it against an equal last letter."""
    w = tuple(w)
    if w and w[-1] == k:
        return w[:-1]
    return w + (k,)


def seq_product(w: Sequence[int], u: Sequence[int]) -> Seq:
    w = tuple(w)
    for k in u:
        w = seq_append(w, k)
    return w


def parse_seq(text: str) -> Seq:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(x) for x in text.split(","))


def is_prefix(w: Sequence[int], u: Sequence[int]) -> bool:
    """The prefix partial order w <= u on reduced words."""
    return len(w) <= len(u) and tuple(u[: len(w)]) == tuple(w)


def mutate_exchange(B: Mat, k: int) -> Mat:
    """mu_k(B) = (J_k + [-B]^{.k}_+) B (J_k + [B]^{k.}_+)."""
    n = B.nrows
    Jk = J(n, k)
    left = Jk + truncate_plus(column_mask(-B, k))
    right = Jk + truncate_plus(row_mask(B, k))
    return left @ B @ right


def mutate_exchange_entrywise(B: Mat, k: int) -> Mat:
    """Entrywise mutation rule; kept as an independent check of the matrix form."""
    n = B.nrows
    k -= 1
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-B[i, j])
            else:
                bik, bkj = B[i, k], B[k, j]
                row.append(B[i, j] + max(bik, 0) * bkj + bik * max(-bkj, 0))
        out.append(row)
    return Mat(out)


def mutate_c(C: Mat, B: Mat, k: int, eps: int = 1) -> Mat:
    """C J_k + C[eps B]^{k.}_+ + [-eps C]^{.k}_+ B; independent of eps = +-1."""
    n = B.nrows
    return (C @ J(n, k) + C @ truncate_plus(row_mask(B.scale(eps), k))
            + truncate_plus(column_mask(C.scale(-eps), k)) @ B)


def mutate_g(G: Mat, C: Mat, B: Mat, B0: Mat, k: int, eps: int = 1) -> Mat:
    """G J_k + G[-eps B]^{.k}_+ - B0 [-eps C]^{.k}_+."""
    n = B.nrows
    return (G @ J(n, k) + G @ truncate_plus(column_mask(B.scale(-eps), k))
            - B0 @ truncate_plus(column_mask(C.scale(-eps), k)))


@dataclass(frozen=True)
class PatternNode:
    seq: Seq
    B: Mat
    C: Mat
    G: Mat

    @property
    def n(self) -> int:
        return self.B.nrows

    @property
    def last(self) -> int | None:
        return self.seq[-1] if self.seq else None

    def cvector(self, i: int) -> tuple[Rational, ...]:
        """c-vector i (1-based): column i of C."""
        return self.C.col(i - 1)

    def gvector(self, i: int) -> tuple[Rational, ...]:
        return self.G.col(i - 1)


def root_node(B: Mat) -> PatternNode:
    eye = Mat.identity(B.nrows)
    return PatternNode((), B, eye, eye)


def step_node(node: PatternNode, k: int, B0: Mat, eps: int = 1) -> PatternNode:
    """Node at w[k] from the general recursion (no sign-coherence assumed)."""
    B, C, G = node.B, node.C, node.G
    return PatternNode(
        seq_append(node.seq, k),
        mutate_exchange(B, k),
        mutate_c(C, B, k, eps),
        mutate_g(G, C, B, B0, k, eps),
    )


def tropical_column_sign(col: Sequence[Rational]) -> int | None:
    pos = any(x > 0 for x in col)
    neg = any(x < 0 for x in col)
    if pos and neg:
        return None
    return 1 if pos else (-1 if neg else 0)


def step_node_coherent(node: PatternNode, k: int) -> tuple[Mat, Mat]:
    """Simplified (C, G) recursion valid when C^w is sign-coherent."""
    n = node.n
    ek = tropical_column_sign(node.C.col(k - 1))
    if ek is None:
        raise NotSignCoherent(f"column {k} of C^{list(node.seq)} is not sign-coherent")
    Jk = J(n, k)
    C = node.C @ (Jk + truncate_plus(row_mask(node.B.scale(ek), k)))
    G = node.G @ (Jk + truncate_plus(column_mask(node.B.scale(-ek), k)))
    return C, G


def step_vectors(node: PatternNode, k: int) -> tuple[Mat, Mat]:
    """Column-by-column c/g-vector recursion (sign-coherent case)."""
    n = node.n
    ek = tropical_column_sign(node.C.col(k - 1))
    if ek is None:
        raise NotSignCoherent(f"column {k} of C^{list(node.seq)} is not sign-coherent")
    kk = k - 1
    B = node.B
    ck = node.C.col(kk)
    cols = []
    for i in range(n):
        if i == kk:
            cols.append(tuple(-x for x in ck))
        else:
            coef = max(ek * B[kk, i], 0)
            cols.append(tuple(a + coef * b for a, b in zip(node.C.col(i), ck)))
    C = Mat.from_columns(cols)
    gcols = [node.G.col(i) for i in range(n)]
    new_gk = [-x for x in gcols[kk]]
    for j in range(n):
        coef = max(-ek * B[j, kk], 0)
        if coef:
            new_gk = [a + coef * b for a, b in zip(new_gk, gcols[j])]
    gcols[kk] = tuple(new_gk)
    return C, Mat.from_columns(gcols)


class PatternTree:
    """Memoised C/G-pattern rooted at an initial exchange matrix.

    ``d`` is a skew-symmetrizer; found automatically when omitted.
    Insertion is compute-if-absent under a lock so shared trees are safe to
    use from several threads.
    """

    def __init__(self, B: Mat, d: Sequence[Rational] | None = None):
        if not B.is_square():
            raise ValueError("exchange matrix must be square")
        if d is None:
            d = find_skew_symmetrizer(B)
        elif not is_skew_symmetrizer(B, d):
            raise NotSkewSymmetrizable("supplied symmetrizer does not skew-symmetrize B")
        self.B0 = B
        self.d = tuple(as_rational(x) for x in d)
        self.n = B.nrows
        self.root = root_node(B)
        self._memo: dict[Seq, PatternNode] = {(): self.root}
        self._lock = threading.Lock()

    @property
    def D(self) -> Mat:
        return Mat.diag(self.d)

    def __len__(self) -> int:
        return len(self._memo)

    def __contains__(self, w) -> bool:
        return tuple(w) in self._memo

    def node_at(self, w: Iterable[int]) -> PatternNode:
        w = tuple(w)
        if not is_reduced(w):
            raise ValueError(f"{list(w)} is not reduced")
        for k in w:
            if not 1 <= k <= self.n:
                raise IndexError(f"direction {k} out of range 1..{self.n}")
        node = self._memo.get(w)
        if node is not None:
            return node
        # longest memoised prefix, then extend
        r = len(w)
        while w[:r] not in self._memo:
            r -= 1
        node = self._memo[w[:r]]
        for k in w[r:]:
            child = step_node(node, k, self.B0)
            with self._lock:
                node = self._memo.setdefault(child.seq, child)
        return node

    def walk(self, ks: Iterable[int]) -> PatternNode:
        """Node reached by an arbitrary (possibly non-reduced) walk."""
        w: Seq = ()
        for k in ks:
            w = seq_append(w, k)
        return self.node_at(w)

    def step(self, node: PatternNode, k: int) -> PatternNode:
        return self.node_at(seq_append(node.seq, k))

    def children(self, node: PatternNode) -> list[PatternNode]:
        return [self.step(node, k) for k in range(1, self.n + 1) if k != node.last]

    def ball(self, depth: int):
        """Yield (parent, direction, node) for every reduced word of length <= depth,
        breadth first, lexicographic within a level.  The root comes with
        parent None."""
        yield None, None, self.root
        level = [self.root]
        for _ in range(depth):
            nxt = []
            for node in level:
                for k in range(1, self.n + 1):
                    if k == node.last:
                        continue
                    child = self.step(node, k)
                    yield node, k, child
                    nxt.append(child)
            level = nxt

    def forget(self, keep_depth: int = 0) -> None:
        """Drop memoised nodes deeper than keep_depth."""
        with self._lock:
            self._memo = {w: v for w, v in self._memo.items() if len(w) <= keep_depth}


def check_first_duality(tree: PatternTree, w) -> bool:
    node = tree.node_at(w)
    return node.G @ node.B == tree.B0 @ node.C


def is_sign_coherent(C: Mat) -> bool:
    return all(tropical_column_sign(c) is not None for c in C.columns())


def check_second_duality(tree: PatternTree, w) -> bool:
    node = tree.node_at(w)
    if not is_sign_coherent(node.C):
        raise NotSignCoherent(f"C^{list(node.seq)} is not sign-coherent")
    D = tree.D
    return D.inverse() @ node.C.T @ D @ node.G == Mat.identity(tree.n)


def reconstruct_C_from_G(tree: PatternTree, w) -> Mat:
    node = tree.node_at(w)
    if not is_sign_coherent(node.C):
        raise NotSignCoherent(f"C^{list(node.seq)} is not sign-coherent")
    D = tree.D
    return D.inverse() @ node.G.T.inverse() @ D


def reconstruct_B_from_G(tree: PatternTree, w) -> Mat:
    node = tree.node_at(w)
    Ginv = node.G.inverse()
    D = tree.D
    return Ginv @ tree.B0 @ D.inverse() @ Ginv.T @ D
