import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from cyclo.core import Perm
from cyclo.monoid import (
    ALL_STATES,
    LABELS,
    LABEL_OF,
    EpsState,
    GroupElt,
    act,
    all_states,
    all_xi,
    apply_nu,
    apply_perm,
    apply_xi,
    branch_state,
    check_dihedral,
    classify,
    eps_state_at,
    find_xi,
    fractal_check,
    labels_of,
    letters_to_word,
    polygon_labeling,
    quotient_monoid,
    s_index,
    t_index,
    trunk_state,
    word_to_letters,
)
from cyclo.patterns import PatternTree
from cyclo.signs import CYCLIC_PATTERN, automaton_labels, negate_signs, run_automaton, sign_matrix

from conftest import cluster_cyclic_instances

words = st.text(alphabet="ST", max_size=8)
states = st.sampled_from(ALL_STATES)


class TestStates:
    def test_labels_are_the_set(self):
        assert len(all_states()) == 12
        assert set(all_states()) == set(LABELS.values())

    def test_membership(self):
        with pytest.raises(ValueError):
            EpsState((1, 1, 1), 1)
        with pytest.raises(ValueError):
            EpsState((1, -1, -1), 1)  # both others differ from eps_k

    @pytest.mark.parametrize("E,s,t", [
        (LABELS["A1"], 3, 2),
        (LABELS["B1"], 1, 3),
        (EpsState((-1, 1, 1), 2), 1, 3),
    ])
    def test_s_and_t(self, E, s, t):
        assert (s_index(E), t_index(E)) == (s, t)


class TestAction:
    def test_examples(self):
        assert act(LABELS["A1"], "T") == LABELS["B1"] == EpsState((1, -1, -1), 2)
        assert act(LABELS["A1"], "S") == LABELS["A2"] == EpsState((-1, 1, 1), 3)
        assert LABEL_OF[act(LABELS["A1"], "TTST")] == "B2"

    def test_S_involution(self):
        assert all(act(E, "SS") == E for E in ALL_STATES)

    @given(states, words, words)
    def test_right_action(self, E, v, w):
        assert act(E, v + w) == act(act(E, v), w)

    def test_bad_letter(self):
        with pytest.raises(ValueError):
            act(LABELS["A1"], "X")


class TestQuotient:
    def test_group(self):
        q = quotient_monoid()
        assert len(q) == 12
        assert all(check_dihedral(q).values())

    def test_nu_is_T_cubed(self):
        for E in ALL_STATES:
            assert act(E, "TTT") == apply_nu(E)

    def test_table_first_rows(self):
        q = quotient_monoid()
        assert q.table[0] == list(range(12))
        # T . S = S T^{-1} = S T^5
        assert q.table[1][6] == 11

    def test_all_words_land_in_quotient(self):
        q = quotient_monoid()
        for r in range(7):
            for w in map("".join, product("ST", repeat=r)):
                assert GroupElt.of_word(w) in q.elements


class TestXi:
    def test_identity(self):
        for E in ALL_STATES:
            xi = find_xi(E, E)
            assert not xi.nu and xi.sigma == Perm.identity(3)

    def test_worked_pair(self):
        xi = find_xi(EpsState((1, 1, -1), 1), EpsState((1, -1, -1), 2))
        assert xi.nu
        assert xi.sigma == Perm.cycle(3, 1, 3, 2)

    def test_all_pairs(self):
        for E0 in ALL_STATES:
            for E1 in ALL_STATES:
                assert apply_xi(E0, find_xi(E0, E1)) == E1

    def test_simply_transitive(self):
        for E in ALL_STATES:
            assert len({apply_xi(E, xi) for xi in all_xi()}) == 12

    def test_commutes_with_monoid(self):
        q = quotient_monoid()
        for xi in all_xi():
            for g in q.order:
                for E in ALL_STATES:
                    assert apply_xi(g(E), xi) == g(apply_xi(E, xi))

    def test_labels_transform(self):
        for E in ALL_STATES:
            assert labels_of(apply_nu(E)) == labels_of(E)
            for s in Perm.all(3):
                inv = s.inverse()
                assert labels_of(apply_perm(E, s)) == tuple(inv(m) for m in labels_of(E))

    def test_nu_commutes_with_sigma(self):
        for E in ALL_STATES:
            for s in Perm.all(3):
                assert apply_nu(apply_perm(E, s)) == apply_perm(apply_nu(E), s)


class TestTrunkBranch:
    @pytest.mark.parametrize("P", [CYCLIC_PATTERN, negate_signs(CYCLIC_PATTERN)])
    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_trunk_closed_form(self, P, i):
        lab = automaton_labels(run_automaton(P, (i,)))
        for n in range(11):
            w = letters_to_word(P, i, "S" * n)
            st = run_automaton(P, w)
            eps, last = trunk_state(i, n, lab.k, lab.s, lab.t)
            assert st.eps == eps and st.last == last

    def test_trunk_base(self):
        eps, last = trunk_state(2, 0, 2, 3, 1)
        assert eps == (1, -1, 1) and last == 2

    @given(st.sampled_from([CYCLIC_PATTERN, negate_signs(CYCLIC_PATTERN)]),
           st.sampled_from([1, 2, 3]), st.integers(0, 4), words)
    @settings(max_examples=80)
    def test_branch_formula(self, P, i, n, X):
        w = letters_to_word(P, i, "S" * n + "T" + X)
        st_ = run_automaton(P, w)
        lab = automaton_labels(st_)
        got = {"K": st_.eps[lab.k - 1], "S": st_.eps[lab.s - 1], "T": st_.eps[lab.t - 1]}
        assert got == branch_state(X)

    def test_branch_examples(self):
        assert branch_state("") == {"K": -1, "S": 1, "T": -1}
        assert branch_state("T") == {"K": 1, "S": -1, "T": 1}
        assert branch_state("S") == branch_state("")

    def test_classify(self):
        P = CYCLIC_PATTERN
        assert classify(P, letters_to_word(P, 1, "SSS")) == "trunk"
        w = letters_to_word(P, 2, "ST")
        assert classify(P, w) == "branch"
        st_ = run_automaton(P, w)
        lab = automaton_labels(st_)
        assert st_.eps[lab.t - 1] == st_.eps[lab.k - 1]
        with pytest.raises(ValueError):
            classify(P, ())

    @given(st.sampled_from([1, 2, 3]), words)
    def test_letters_roundtrip(self, i, X):
        w = letters_to_word(CYCLIC_PATTERN, i, X)
        assert word_to_letters(CYCLIC_PATTERN, w) == (i, X)


class TestFractal:
    def test_trivial(self, equa_tree):
        w = letters_to_word(sign_matrix(equa_tree.B0), 1, "T")
        r = fractal_check(equa_tree, w, w, 4)
        assert r.ok and not r.xi.nu and r.xi.sigma == Perm.identity(3)

    def test_worked_pair_edges(self, equa_tree):
        # w0 with E = (+,+,-;1) and w1 = w0 T; edge i below w0 maps to sigma^-1(i) below w1
        bs = sign_matrix(equa_tree.B0)
        target = EpsState((1, 1, -1), 1)
        w0 = next(w for i in (1, 2, 3) for X in ("T", "TS", "TT", "TST", "TTS", "STS", "ST")
                  for w in [letters_to_word(bs, i, X)] if eps_state_at(equa_tree, w) == target)
        lab = automaton_labels(run_automaton(bs, w0))
        w1 = w0 + (lab.t,)
        assert eps_state_at(equa_tree, w1) == EpsState((1, -1, -1), 2)
        r = fractal_check(equa_tree, w0, w1, 4)
        assert r.ok
        sigma = r.xi.sigma
        assert r.xi.nu and sigma == Perm.cycle(3, 1, 3, 2)
        inv = sigma.inverse()
        for j in (1, 2, 3):
            if j == w0[-1]:
                continue
            # E^{w1 [sigma^-1 j]} is the xi-image of E^{w0 [j]}
            assert eps_state_at(equa_tree, w1 + (inv(j),)) == apply_xi(
                eps_state_at(equa_tree, w0 + (j,)), r.xi)

    def test_trunk_rejected(self, equa_tree):
        bs = sign_matrix(equa_tree.B0)
        with pytest.raises(ValueError):
            fractal_check(equa_tree, letters_to_word(bs, 1, "S"), letters_to_word(bs, 1, "T"), 2)

    @given(cluster_cyclic_instances(), st.integers(0, 2**16))
    @settings(max_examples=10, deadline=None)
    def test_random_pairs(self, inst, seed):
        tree = PatternTree(*inst)
        bs = sign_matrix(tree.B0)
        rng = random.Random(seed)
        pick = lambda: letters_to_word(bs, rng.randint(1, 3), "S" * rng.randint(0, 2) + "T"
                                       + "".join(rng.choice("ST") for _ in range(rng.randint(0, 2))))
        r = fractal_check(tree, pick(), pick(), 3)
        assert r.ok, r.failures[:3]


class TestPolygon:
    def test_labeling(self):
        data = polygon_labeling()
        assert data["T_orbit_1"] == ["A1", "B1", "C1", "D1", "E1", "F1"]
        assert data["S_pairing"]["D1"] == "D2"
        assert act(LABELS["A1"], "T") == LABELS["B1"]
        assert all(data["relations"].values())
        assert len(data["glued_pairs"]) == 6

    def test_glued_classes_respect_action(self):
        data = polygon_labeling()
        # T rotates the six classes, S reverses them
        assert sorted(data["induced_T"]) == list(range(6))
        assert data["induced_S"] != list(range(6))
