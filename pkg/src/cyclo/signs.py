"""Cluster-cyclicity, tropical signs and the magnitude-free sign automaton (rank 3)."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Mat, Rational, sign
from .patterns import PatternNode, PatternTree, Seq, mutate_c, tropical_column_sign

SignMatrix = tuple[tuple[int, ...], ...]

CYCLIC_PATTERN: SignMatrix = ((0, -1, 1), (1, 0, -1), (-1, 1, 0))


class RankError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    """A property that must hold for cluster-cyclic input failed."""

    def __init__(self, message: str, data: dict | None = None):
        super().__init__(message)
        self.data = data or {}


@dataclass(frozen=True)
class Incoherent:
    """Result of tropical_signs for a C-matrix with mixed-sign columns."""

    columns: tuple[int, ...]  # 1-based

    @property
    def column(self) -> int:
        return self.columns[0]


def _rank3(B: Mat) -> None:
    if B.shape != (3, 3):
        raise RankError(f"rank-3 operation got a {B.shape[0]}x{B.shape[1]} matrix")


def sign_matrix(B: Mat) -> SignMatrix:
    return tuple(tuple(sign(x) for x in r) for r in B.data)


def negate_signs(s: SignMatrix) -> SignMatrix:
    return tuple(tuple(-x for x in r) for r in s)


def is_cyclic_pattern(s: SignMatrix) -> bool:
    return s == CYCLIC_PATTERN or s == negate_signs(CYCLIC_PATTERN)


def is_cyclic(B: Mat) -> bool:
    _rank3(B)
    return is_cyclic_pattern(sign_matrix(B))


def cluster_cyclic_data(B: Mat) -> dict:
    """The quantities entering the cluster-cyclicity criterion."""
    _rank3(B)
    p12 = abs(B[0, 1] * B[1, 0])
    p23 = abs(B[1, 2] * B[2, 1])
    p31 = abs(B[2, 0] * B[0, 2])
    triple = abs(B[0, 1] * B[1, 2] * B[2, 0])
    lhs = p12 + p23 + p31 - triple
    return {
        "cyclic": is_cyclic(B),
        "products": (p12, p23, p31),
        "triple": triple,
        "lhs": lhs,
        "slack": 4 - lhs,
    }


def is_cluster_cyclic(B: Mat) -> bool:
    data = cluster_cyclic_data(B)
    return (data["cyclic"] and all(p >= 4 for p in data["products"])
            and data["lhs"] <= 4)


def tropical_signs(C: Mat) -> tuple[int, ...] | Incoherent:
    """Column signs of C, or Incoherent listing every mixed column."""
    signs = []
    bad = []
    for j, col in enumerate(C.columns(), start=1):
        s = tropical_column_sign(col)
        if s is None:
            bad.append(j)
        signs.append(s)
    if bad:
        return Incoherent(tuple(bad))
    return tuple(signs)


@dataclass(frozen=True)
class KstLabel:
    k: int
    s: int
    t: int


def choose_s(eps: Sequence[int], bsigns: SignMatrix, k: int) -> int:
    """The unique s != k with eps_s sign(b_ks) = -1 and eps_k != eps_s."""
    cands = [s for s in (1, 2, 3) if s != k
             and eps[s - 1] * bsigns[k - 1][s - 1] == -1 and eps[k - 1] != eps[s - 1]]
    if len(cands) != 1:
        raise InvariantViolation(
            f"expected exactly one s for k={k}, eps={tuple(eps)}; found {cands}",
            {"k": k, "eps": list(eps), "b_signs": [list(r) for r in bsigns]})
    return cands[0]


def labels_from(eps: Sequence[int], bsigns: SignMatrix, k: int) -> KstLabel:
    s = choose_s(eps, bsigns, k)
    return KstLabel(k, s, 6 - k - s)


def kst_labels(node: PatternNode) -> KstLabel:
    _rank3(node.B)
    if not node.seq:
        raise ValueError("K/S/T labels are undefined at the root")
    eps = tropical_signs(node.C)
    if isinstance(eps, Incoherent):
        raise ValueError(f"C^{list(node.seq)} is not sign-coherent")
    return labels_from(eps, sign_matrix(node.B), node.seq[-1])


# sign automaton ---------------------------------------------------------

@dataclass(frozen=True)
class SignState:
    b_signs: SignMatrix
    eps: tuple[int, int, int]
    last: int | None = None


def root_state(bsigns: SignMatrix) -> SignState:
    if not is_cyclic_pattern(bsigns):
        raise ValueError("sign automaton needs a cyclic sign matrix")
    return SignState(bsigns, (1, 1, 1), None)


def sign_step(state: SignState, j: int) -> SignState:
    if j == state.last:
        raise ValueError(f"non-reduced step: direction {j} repeats the last one")
    if not 1 <= j <= 3:
        raise IndexError(f"direction {j} out of range 1..3")
    bs = negate_signs(state.b_signs)
    if state.last is None:
        eps = tuple(-1 if i == j else 1 for i in (1, 2, 3))
        return SignState(bs, eps, j)
    lab = labels_from(state.eps, state.b_signs, state.last)
    eps = list(state.eps)
    if j == lab.s:
        eps[lab.k - 1] = -eps[lab.k - 1]
        eps[lab.s - 1] = -eps[lab.s - 1]
    else:
        eps[lab.t - 1] = -eps[lab.t - 1]
    return SignState(bs, tuple(eps), j)


def run_automaton(bsigns: SignMatrix, w: Iterable[int]) -> SignState:
    state = root_state(bsigns)
    for j in w:
        state = sign_step(state, j)
    return state


def automaton_labels(state: SignState) -> KstLabel:
    if state.last is None:
        raise ValueError("K/S/T labels are undefined at the root")
    return labels_from(state.eps, state.b_signs, state.last)


def automaton_reach(bsigns: SignMatrix) -> set[SignState]:
    """All states reachable from the root by reduced steps (finite closure)."""
    start = root_state(bsigns)
    seen = {start}
    queue = deque([start])
    while queue:
        st = queue.popleft()
        for j in (1, 2, 3):
            if j == st.last:
                continue
            nxt = sign_step(st, j)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def automaton_ball(bsigns: SignMatrix, depth: int):
    """Yield (word, state) for all reduced words up to depth, breadth first."""
    level = [((), root_state(bsigns))]
    yield level[0]
    for _ in range(depth):
        nxt = []
        for w, st in level:
            for j in (1, 2, 3):
                if j != st.last:
                    item = (w + (j,), sign_step(st, j))
                    yield item
                    nxt.append(item)
        level = nxt


# inequalities -----------------------------------------------------------

def _coherent_signs(node: PatternNode) -> tuple[int, ...]:
    eps = tropical_signs(node.C)
    if isinstance(eps, Incoherent):
        raise ValueError(f"C^{list(node.seq)} is not sign-coherent")
    return eps


def _scaled(c: Sequence[Rational], a) -> tuple:
    return tuple(a * x for x in c)


def check_monotonicity(parent: PatternNode, child: PatternNode) -> bool:
    """eps_i c_i grows componentwise from parent to child, strictly somewhere."""
    ep, ec = _coherent_signs(parent), _coherent_signs(child)
    strict = False
    for i in range(parent.n):
        a = _scaled(parent.C.col(i), ep[i])
        b = _scaled(child.C.col(i), ec[i])
        if any(x > y for x, y in zip(a, b)):
            return False
        strict = strict or a != b
    return strict


def check_ks_inequality(node: PatternNode) -> bool:
    """Both k,s inequalities at a non-root node (the second uses C^{w[s]})."""
    lab = kst_labels(node)
    eps = _coherent_signs(node)
    k, s = lab.k - 1, lab.s - 1
    B = node.B
    bsk, bks = abs(B[s, k]), abs(B[k, s])
    ck, cs = node.C.col(k), node.C.col(s)
    v = tuple(eps[s] * ((bsk * bks - 2) * x + bsk * y) for x, y in zip(ck, cs))
    if any(x < 0 for x in v):
        return False
    Cs = mutate_c(node.C, B, lab.s)
    eps_s = tropical_signs(Cs)
    if isinstance(eps_s, Incoherent):
        return False
    lhs = _scaled(Cs.col(k), eps_s[k])
    rhs = _scaled(ck, (bsk * bks - 3) * eps[k])
    return all(x >= y for x, y in zip(lhs, rhs))


# reddening --------------------------------------------------------------

def m_count(signs_along: Sequence[Sequence[int]], w: Sequence[int]) -> int:
    """#{i : eps^{w_i}_{k_{i+1}} = -1}; signs_along[i] are the signs at w_i."""
    return sum(1 for i, k in enumerate(w) if signs_along[i][k - 1] == -1)


def detect_reddening(source: PatternTree | SignMatrix, depth: int) -> list[tuple[Seq, int]]:
    """Reduced words up to depth whose tropical signs are all -1, with m-counts.

    ``source`` is a PatternTree (signs read off C-matrices) or a cyclic sign
    matrix (signs from the automaton).
    """
    found = []
    if isinstance(source, PatternTree):
        if source.n != 3:
            raise RankError(f"reddening detection is rank-3 only, got n={source.n}")
        signs: dict[Seq, tuple[int, ...]] = {}
        for _, _, node in source.ball(depth):
            eps = tropical_signs(node.C)
            if isinstance(eps, Incoherent):
                raise ValueError(f"C^{list(node.seq)} is not sign-coherent")
            signs[node.seq] = eps
    else:
        signs = {w: st.eps for w, st in automaton_ball(source, depth)}
    for w, eps in signs.items():
        if w and all(e == -1 for e in eps):
            along = [signs[w[:i]] for i in range(len(w))]
            found.append((w, m_count(along, w)))
    return sorted(found)
