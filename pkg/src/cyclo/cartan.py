"""Quasi-Cartan companions, the congruence identity and the c-vector quadric (rank 3)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import Mat, Rational, ZERO, as_rational
from .patterns import PatternNode, PatternTree
from .signs import Incoherent, RankError, is_cluster_cyclic, tropical_signs


class NotClusterCyclic(ValueError):
    """The quasi-Cartan machinery is only defined for cluster-cyclic matrices."""


Pair = tuple[int, int]


def _guard(B: Mat) -> None:
    if B.shape != (3, 3):
        raise RankError(f"quasi-Cartan operations are rank-3 only, got {B.shape}")
    if not is_cluster_cyclic(B):
        raise NotClusterCyclic("exchange matrix is not cluster-cyclic")


@dataclass(frozen=True)
class PSet:
    pairs: frozenset[Pair]  # 1-based ordered pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, ij) -> bool:
        return tuple(ij) in self.pairs

    def is_symmetric(self) -> bool:
        return all((j, i) in self.pairs for i, j in self.pairs)

    def sorted(self) -> list[Pair]:
        return sorted(self.pairs)


@dataclass(frozen=True)
class QuasiCartan:
    A: Mat
    deformation: Mat  # D A

    def is_valid(self, B: Mat) -> bool:
        n = self.A.nrows
        diag_ok = all(self.A[i, i] == 2 for i in range(n))
        mags = all(abs(self.A[i, j]) == abs(B[i, j])
                   for i in range(n) for j in range(n) if i != j)
        return diag_ok and mags and self.deformation == self.deformation.T


def _signs(node: PatternNode) -> tuple[int, ...]:
    eps = tropical_signs(node.C)
    if isinstance(eps, Incoherent):
        raise ValueError(f"C^{list(node.seq)} is not sign-coherent (columns {list(eps.columns)})")
    return eps


def pset_of(node: PatternNode) -> PSet:
    """{(i,j) : eps_i b_ij > 0 or eps_j b_ji > 0}."""
    _guard(node.B)
    eps = _signs(node)
    B = node.B
    pairs = frozenset((i + 1, j + 1) for i in range(3) for j in range(3) if i != j
                      and (eps[i] * B[i, j] > 0 or eps[j] * B[j, i] > 0))
    return PSet(pairs)


def _companion(B: Mat, d: Sequence[Rational], negative) -> QuasiCartan:
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            if i == j:
                row.append(as_rational(2))
            else:
                m = abs(B[i, j])
                row.append(-m if negative(i + 1, j + 1) else m)
        rows.append(row)
    A = Mat(rows)
    return QuasiCartan(A, Mat.diag(d) @ A)


def initial_quasi_cartan(B: Mat, d: Sequence[Rational], q: int) -> QuasiCartan:
    """A_q: off-diagonal sign -1 exactly when q is one of the two indices."""
    if B.shape != (3, 3):
        raise RankError(f"quasi-Cartan operations are rank-3 only, got {B.shape}")
    if not 1 <= q <= 3:
        raise IndexError(f"direction {q} out of range 1..3")
    return _companion(B, d, lambda i, j: q in (i, j))


def quasi_cartan_at(node: PatternNode, d: Sequence[Rational]) -> QuasiCartan:
    if not node.seq:
        raise ValueError("the companion A^w is defined for non-root nodes; use initial_quasi_cartan")
    P = pset_of(node)
    return _companion(node.B, d, lambda i, j: (i, j) in P)


def congruence_product(tree: PatternTree, w) -> Mat:
    node = tree.node_at(w)
    k1 = node.seq[0]
    At = initial_quasi_cartan(tree.B0, tree.d, k1).deformation
    return node.C.T @ At @ node.C


def check_congruence(tree: PatternTree, w) -> bool:
    """(C^w)^T Ã_{k1} C^w == Ã^w with k1 the first letter of w."""
    _guard(tree.B0)
    node = tree.node_at(w)
    if not node.seq:
        raise ValueError("congruence needs |w| >= 1")
    return congruence_product(tree, w) == quasi_cartan_at(node, tree.d).deformation


@dataclass(frozen=True)
class QForm:
    d: tuple[Rational, Rational, Rational]
    abs_b: tuple[Rational, Rational, Rational]  # |b12|, |b23|, |b31|
    cross_signs: tuple[int, int, int]  # eps1 eps2, eps2 eps3, eps1 eps3


def quadratic_form(B: Mat, d: Sequence[Rational], k1: int) -> QForm:
    _guard(B)
    if not 1 <= k1 <= 3:
        raise IndexError(f"direction {k1} out of range 1..3")
    e = [-1 if i == k1 else 1 for i in (1, 2, 3)]
    return QForm(
        tuple(as_rational(x) for x in d),
        (abs(B[0, 1]), abs(B[1, 2]), abs(B[2, 0])),
        (e[0] * e[1], e[1] * e[2], e[0] * e[2]),
    )


def eval_qform(q: QForm, x: Sequence) -> Rational:
    x1, x2, x3 = (as_rational(v) for v in x)
    d1, d2, d3 = q.d
    b12, b23, b31 = q.abs_b
    s12, s23, s13 = q.cross_signs
    return (d1 * x1 * x1 + d2 * x2 * x2 + d3 * x3 * x3
            + s12 * d1 * b12 * x1 * x2
            + s23 * d2 * b23 * x2 * x3
            + s13 * d3 * b31 * x1 * x3)


def _qform_for(tree: PatternTree, node: PatternNode) -> QForm:
    # at the root every k1 gives Q(e_i) = d_i; direction 1 is used
    return quadratic_form(tree.B0, tree.d, node.seq[0] if node.seq else 1)


def check_cvectors_on_quadric(tree: PatternTree, w) -> bool:
    node = tree.node_at(w)
    q = _qform_for(tree, node)
    return all(eval_qform(q, node.C.col(i)) == tree.d[i] for i in range(3))


def quadric_matches_congruence_diagonal(tree: PatternTree, w) -> bool:
    """2 Q(c_i) equals the i-th diagonal entry of (C^w)^T Ã_{k1} C^w."""
    node = tree.node_at(w)
    if not node.seq:
        raise ValueError("needs |w| >= 1")
    q = _qform_for(tree, node)
    prod = congruence_product(tree, w)
    return all(2 * eval_qform(q, node.C.col(i)) == prod[i, i] for i in range(3))


def axis_columns(node: PatternNode) -> list[tuple[int, int, Rational]]:
    """(i, j, alpha) for every c-vector c_i equal to alpha e_j (1-based)."""
    out = []
    for i, col in enumerate(node.C.columns()):
        nz = [(j, x) for j, x in enumerate(col) if x != ZERO]
        if len(nz) == 1:
            out.append((i + 1, nz[0][0] + 1, nz[0][1]))
    return out


def axis_cvector_check(node: PatternNode, d: Sequence[Rational]) -> bool:
    """Every axis c-vector alpha e_j in slot i has alpha^2 = d_i / d_j."""
    _signs(node)
    return all(a * a == as_rational(d[i - 1]) / as_rational(d[j - 1])
               for i, j, a in axis_columns(node))
