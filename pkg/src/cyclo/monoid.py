"""The 12-element sign set, its {S,T} word action, the D6 quotient and the
fractal correspondence between branches."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .core import Perm
from .patterns import PatternTree, Seq
from .signs import (
    Incoherent,
    InvariantViolation,
    SignMatrix,
    SignState,
    automaton_labels,
    kst_labels,
    root_state,
    sign_matrix,
    sign_step,
    tropical_signs,
)


@dataclass(frozen=True)
class EpsState:
    eps: tuple[int, int, int]
    k: int

    def __post_init__(self):
        if len(self.eps) != 3 or any(e not in (1, -1) for e in self.eps) or self.k not in (1, 2, 3):
            raise ValueError(f"malformed sign state {self.eps};{self.k}")
        ek = self.eps[self.k - 1]
        if sum(1 for j in (1, 2, 3) if j != self.k and self.eps[j - 1] != ek) != 1:
            raise ValueError(f"{self} is not in the 12-element set")

    def __str__(self) -> str:
        return "(" + ",".join("+" if e > 0 else "-" for e in self.eps) + f";{self.k})"


def _st(text: str) -> EpsState:
    signs, k = text.split(";")
    return EpsState(tuple(1 if c == "+" else -1 for c in signs), int(k))


LABELS: dict[str, EpsState] = {
    "A1": _st("++-;1"), "B1": _st("+--;2"), "C1": _st("+-+;3"),
    "D1": _st("--+;1"), "E1": _st("-++;2"), "F1": _st("-+-;3"),
    "A2": _st("-++;3"), "B2": _st("-+-;1"), "C2": _st("++-;2"),
    "D2": _st("+--;3"), "E2": _st("+-+;1"), "F2": _st("--+;2"),
}
LABEL_OF = {v: k for k, v in LABELS.items()}


def all_states() -> list[EpsState]:
    """Every (eps; k) satisfying the membership rule, in lexicographic order."""
    out = []
    for eps in product((1, -1), repeat=3):
        for k in (1, 2, 3):
            try:
                out.append(EpsState(eps, k))
            except ValueError:
                pass
    return out


ALL_STATES: tuple[EpsState, ...] = tuple(LABELS.values())


def s_index(E: EpsState) -> int:
    return next(j for j in (1, 2, 3) if j != E.k and E.eps[j - 1] != E.eps[E.k - 1])


def t_index(E: EpsState) -> int:
    return next(j for j in (1, 2, 3) if j != E.k and E.eps[j - 1] == E.eps[E.k - 1])


def _flip(eps, *idx) -> tuple[int, int, int]:
    e = list(eps)
    for i in idx:
        e[i - 1] = -e[i - 1]
    return tuple(e)


def act(E: EpsState, word: Iterable[str]) -> EpsState:
    """Right action of a word over {S, T}, applied left to right."""
    for letter in word:
        if letter == "S":
            s = s_index(E)
            E = EpsState(_flip(E.eps, E.k, s), s)
        elif letter == "T":
            t = t_index(E)
            E = EpsState(_flip(E.eps, t), t)
        else:
            raise ValueError(f"unknown letter {letter!r}; words use S and T")
    return E


# quotient monoid --------------------------------------------------------

@dataclass(frozen=True)
class GroupElt:
    """An action map, tabulated as images of ALL_STATES by index."""

    images: tuple[int, ...]

    @classmethod
    def of_word(cls, word: str) -> "GroupElt":
        return cls(tuple(ALL_STATES.index(act(E, word)) for E in ALL_STATES))

    def __call__(self, E: EpsState) -> EpsState:
        return ALL_STATES[self.images[ALL_STATES.index(E)]]

    def then(self, other: "GroupElt") -> "GroupElt":
        """Right-action product: first self, then other."""
        return GroupElt(tuple(other.images[i] for i in self.images))

    def is_identity(self) -> bool:
        return self.images == tuple(range(len(self.images)))

    def order(self) -> int:
        g, n = self, 1
        while not g.is_identity():
            g, n = g.then(self), n + 1
        return n


TABLE_ORDER = ("", "T", "TT", "TTT", "TTTT", "TTTTT",
               "S", "ST", "STT", "STTT", "STTTT", "STTTTT")
TABLE_NAMES = ("id", "T", "T^2", "T^3", "T^4", "T^5",
               "S", "ST", "ST^2", "ST^3", "ST^4", "ST^5")


@dataclass
class QuotientMonoid:
    elements: dict[GroupElt, str]  # element -> shortlex-least word
    order: list[GroupElt]  # TABLE_ORDER
    table: list[list[int]]  # table[a][b] = index of order[a] then order[b]

    def __len__(self) -> int:
        return len(self.elements)


def quotient_monoid() -> QuotientMonoid:
    """Closure of the S/T action maps under composition."""
    ident = GroupElt.of_word("")
    gens = {"S": GroupElt.of_word("S"), "T": GroupElt.of_word("T")}
    elements = {ident: ""}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for letter in "ST":
                h = g.then(gens[letter])
                if h not in elements:
                    elements[h] = elements[g] + letter
                    nxt.append(h)
        frontier = nxt
    if len(elements) != 12:
        raise InvariantViolation(f"quotient has {len(elements)} elements, expected 12")
    order = [GroupElt.of_word(w) for w in TABLE_ORDER]
    if len(set(order)) != 12 or set(order) != set(elements):
        raise InvariantViolation("fixed table order does not list the 12 elements")
    index = {g: i for i, g in enumerate(order)}
    table = [[index[a.then(b)] for b in order] for a in order]
    return QuotientMonoid(elements, order, table)


def check_dihedral(q: QuotientMonoid) -> dict[str, bool]:
    S, T = GroupElt.of_word("S"), GroupElt.of_word("T")
    ST = S.then(T)
    Tinv = GroupElt.of_word("TTTTT")
    ident = GroupElt.of_word("")
    n = len(q.order)
    return {
        "size_12": len(q) == 12,
        "S^2=id": S.then(S) == ident,
        "T^6=id": GroupElt.of_word("T" * 6) == ident,
        "(ST)^2=id": ST.then(ST) == ident,
        "order(T)=6": T.order() == 6,
        "order(S)=2": S.order() == 2,
        "TS=ST^-1": T.then(S) == S.then(Tinv),
        "every row a permutation": all(sorted(r) == list(range(n)) for r in q.table),
        "associative": all(q.table[q.table[a][b]][c] == q.table[a][q.table[b][c]]
                           for a in range(n) for b in range(n) for c in range(n)),
        "T^3 is global flip": all(act(E, "TTT") == EpsState(tuple(-e for e in E.eps), E.k)
                                  for E in ALL_STATES),
    }


# trunks and branches ----------------------------------------------------

def trunk_state(i: int, n: int, k0: int, s0: int, t0: int) -> tuple[tuple[int, int, int], int]:
    """Signs and last direction at [i]S^n from the labels (k0, s0, t0) at [i].

    eps_{k0} = (-1)^{n+1}, eps_{s0} = (-1)^n, eps_{t0} = 1; the K and S roles
    swap at every S step so the last direction alternates s0, k0, ...
    """
    if k0 != i or {k0, s0, t0} != {1, 2, 3}:
        raise ValueError("trunk labels must be a permutation with k0 = i")
    if n < 0:
        raise ValueError("n must be non-negative")
    eps = [0, 0, 0]
    eps[k0 - 1] = (-1) ** (n + 1)
    eps[s0 - 1] = (-1) ** n
    eps[t0 - 1] = 1
    return tuple(eps), (k0 if n % 2 == 0 else s0)


def branch_state(X: str) -> dict[str, int]:
    """Signs on the K/S/T slots at [i]S^nTX."""
    p = (-1) ** X.count("T")
    return {"K": -p, "S": p, "T": -p}


def word_to_letters(bsigns: SignMatrix, w: Sequence[int]) -> tuple[int, str]:
    """Rewrite a non-empty reduced word as [i] followed by S/T letters."""
    if not w:
        raise ValueError("the root has no S/T description")
    state = sign_step(root_state(bsigns), w[0])
    letters = []
    for j in w[1:]:
        lab = automaton_labels(state)
        letters.append("S" if j == lab.s else "T")
        state = sign_step(state, j)
    return w[0], "".join(letters)


def letters_to_word(bsigns: SignMatrix, i: int, X: str) -> Seq:
    state = sign_step(root_state(bsigns), i)
    w = [i]
    for letter in X:
        lab = automaton_labels(state)
        j = {"S": lab.s, "T": lab.t}[letter]
        w.append(j)
        state = sign_step(state, j)
    return tuple(w)


def classify(bsigns: SignMatrix, w: Sequence[int]) -> str:
    """'trunk' or 'branch', cross-checked against both sign criteria."""
    _, X = word_to_letters(bsigns, w)
    by_word = "trunk" if "T" not in X else "branch"
    state = _state_at(bsigns, w)
    lab = automaton_labels(state)
    e = state.eps
    eK, eS, eT = e[lab.k - 1], e[lab.s - 1], e[lab.t - 1]
    by_signs = "trunk" if (eT != eK and eK != eS) else "branch"
    by_b = "trunk" if eT * state.b_signs[lab.k - 1][lab.t - 1] == 1 else "branch"
    if not by_word == by_signs == by_b:
        raise InvariantViolation(
            f"trunk/branch criteria disagree at {list(w)}",
            {"word": by_word, "signs": by_signs, "b_sign": by_b, "eps": list(e)})
    return by_word


def _state_at(bsigns: SignMatrix, w: Sequence[int]) -> SignState:
    state = root_state(bsigns)
    for j in w:
        state = sign_step(state, j)
    return state


# permutation action and the fractal correspondence ----------------------

@dataclass(frozen=True)
class XiElt:
    nu: bool
    sigma: Perm

    def __str__(self) -> str:
        return ("nu*" if self.nu else "") + "sigma" + str(self.sigma.images)


def apply_perm(E: EpsState, sigma: Perm) -> EpsState:
    """E^sigma = (eps_sigma(1), eps_sigma(2), eps_sigma(3); sigma^-1(k))."""
    return EpsState(tuple(E.eps[sigma(i) - 1] for i in (1, 2, 3)), sigma.inverse()(E.k))


def apply_nu(E: EpsState) -> EpsState:
    return EpsState(tuple(-e for e in E.eps), E.k)


def apply_xi(E: EpsState, xi: XiElt) -> EpsState:
    E = apply_perm(E, xi.sigma)
    return apply_nu(E) if xi.nu else E


def all_xi() -> list[XiElt]:
    return [XiElt(nu, s) for nu in (False, True) for s in Perm.all(3)]


def labels_of(E: EpsState) -> tuple[int, int, int]:
    return E.k, s_index(E), t_index(E)


def find_xi(E0: EpsState, E1: EpsState) -> XiElt:
    """The unique xi with E1 = E0^xi."""
    img = [0, 0, 0]
    for m0, m1 in zip(labels_of(E0), labels_of(E1)):
        img[m1 - 1] = m0
    sigma = Perm(tuple(img))
    xi = XiElt(E0.eps[E0.k - 1] != E1.eps[E1.k - 1], sigma)
    if apply_xi(E0, xi) != E1:
        raise InvariantViolation(f"find_xi failed for {E0} -> {E1}")
    return xi


def eps_state_at(tree: PatternTree, w: Sequence[int]) -> EpsState:
    """E^w read off the full C-matrix (the oracle, not the automaton)."""
    node = tree.node_at(w)
    eps = tropical_signs(node.C)
    if isinstance(eps, Incoherent):
        raise InvariantViolation(f"C^{list(w)} is not sign-coherent",
                                 {"columns": list(eps.columns)})
    return EpsState(eps, node.seq[-1])


def _oracle_extend(tree: PatternTree, w: Seq, X: str) -> Seq:
    for letter in X:
        lab = kst_labels(tree.node_at(w))
        w = w + ({"S": lab.s, "T": lab.t}[letter],)
    return w


def _reduced_continuations(depth: int, avoid: int) -> list[Seq]:
    out = [()]
    level = [()]
    for _ in range(depth):
        nxt = []
        for u in level:
            for j in (1, 2, 3):
                if (u and j == u[-1]) or (not u and j == avoid):
                    continue
                nxt.append(u + (j,))
        out += nxt
        level = nxt
    return out


@dataclass
class FractalReport:
    xi: XiElt
    checked: int
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return not self.failures


def fractal_check(tree: PatternTree, w0: Sequence[int], w1: Sequence[int],
                  depth: int) -> FractalReport:
    """Check E^{w1 X} = (E^{w0 X})^xi for |X| <= depth and the direction-level
    relation E^{w1 u} = (E^{w0 sigma(u)})^xi for reduced u not starting with K(w1)."""
    w0, w1 = tuple(w0), tuple(w1)
    bs = sign_matrix(tree.B0)
    for w in (w0, w1):
        if classify(bs, w) != "branch":
            raise ValueError(f"{list(w)} is not in a branch")
    E0, E1 = eps_state_at(tree, w0), eps_state_at(tree, w1)
    xi = find_xi(E0, E1)
    failures, checked = [], 0
    for r in range(depth + 1):
        for X in map("".join, product("ST", repeat=r)):
            a = eps_state_at(tree, _oracle_extend(tree, w1, X))
            b = apply_xi(eps_state_at(tree, _oracle_extend(tree, w0, X)), xi)
            checked += 1
            if a != b:
                failures.append({"relation": "words", "X": X, "lhs": str(a), "rhs": str(b)})
    for u in _reduced_continuations(depth, avoid=E1.k):
        su = tuple(xi.sigma(j) for j in u)
        a = eps_state_at(tree, w1 + u)
        b = apply_xi(eps_state_at(tree, w0 + su), xi)
        checked += 1
        if a != b:
            failures.append({"relation": "directions", "u": list(u), "lhs": str(a), "rhs": str(b)})
    return FractalReport(xi, checked, failures)


# polygon model ----------------------------------------------------------

GLUED_PAIRS = (("A1", "D2"), ("B1", "C2"), ("C1", "B2"),
               ("D1", "A2"), ("E1", "F2"), ("F1", "E2"))


def _orbit(start: str, letter: str) -> list[str]:
    out = [start]
    E = act(LABELS[start], letter)
    while LABEL_OF[E] != start:
        out.append(LABEL_OF[E])
        E = act(E, letter)
    return out


def polygon_labeling() -> dict:
    """T-orbits, the S pairing and the glued hexagon, each checked against act()."""
    if set(LABELS.values()) != set(all_states()):
        raise InvariantViolation("tabulated labels are not the 12-element set")
    orbit1 = _orbit("A1", "T")
    orbit2 = _orbit("A2", "T")
    if orbit1 != ["A1", "B1", "C1", "D1", "E1", "F1"]:
        raise InvariantViolation(f"T-orbit of A1 is {orbit1}")
    # on the reflected hexagon the same rotation runs through the labels backwards
    if orbit2 != ["A2", "F2", "E2", "D2", "C2", "B2"]:
        raise InvariantViolation(f"T-orbit of A2 is {orbit2}")
    pairing = {}
    for x in "ABCDEF":
        img = LABEL_OF[act(LABELS[x + "1"], "S")]
        if img != x + "2":
            raise InvariantViolation(f"S({x}1) = {img}")
        pairing[x + "1"] = img
    cls = {}
    for c, pair in enumerate(GLUED_PAIRS):
        for lab in pair:
            cls[lab] = c
    induced = {}
    for letter in "ST":
        m = {}
        for lab, c in cls.items():
            img = cls[LABEL_OF[act(LABELS[lab], letter)]]
            if m.setdefault(c, img) != img:
                raise InvariantViolation(f"{letter} is not well defined on glued classes")
        induced[letter] = tuple(m[c] for c in range(6))

    def compose(*letters):
        m = tuple(range(6))
        for L in letters:
            m = tuple(induced[L][x] for x in m)
        return m

    ident = tuple(range(6))
    t_cycle = [0]
    while len(t_cycle) < 7:
        t_cycle.append(induced["T"][t_cycle[-1]])
    relations = {
        "T is a 6-cycle": t_cycle[6] == 0 and len(set(t_cycle[:6])) == 6,
        "S is a reflection": compose("S", "S") == ident and induced["S"] != ident,
        "S^2=id": compose("S", "S") == ident,
        "T^6=id": compose(*"TTTTTT") == ident,
        "(ST)^2=id": compose(*"STST") == ident,
    }
    if not all(relations.values()):
        raise InvariantViolation(f"glued hexagon relations fail: {relations}")
    return {
        "T_orbit_1": orbit1,
        "T_orbit_2": orbit2,
        "S_pairing": pairing,
        "glued_pairs": [list(p) for p in GLUED_PAIRS],
        "induced_T": list(induced["T"]),
        "induced_S": list(induced["S"]),
        "relations": relations,
    }
