import random

import pytest
from hypothesis import given, settings, strategies as st

from cyclo.cartan import (
    NotClusterCyclic,
    axis_columns,
    axis_cvector_check,
    check_congruence,
    check_cvectors_on_quadric,
    congruence_product,
    eval_qform,
    initial_quasi_cartan,
    pset_of,
    quadratic_form,
    quadric_matches_congruence_diagonal,
    quasi_cartan_at,
)
from cyclo.core import Mat
from cyclo.patterns import PatternNode, PatternTree
from cyclo.sampling import random_cluster_cyclic
from cyclo.signs import RankError

from conftest import cluster_cyclic_instances, reduced_words, small_rationals

W = (3, 2, 1)


class TestEquaExample:
    def test_pset(self, equa_tree):
        assert pset_of(equa_tree.node_at(W)).sorted() == [(1, 2), (1, 3), (2, 1), (3, 1)]

    def test_pset_base_case(self, equa_tree):
        assert pset_of(equa_tree.node_at((3,))).sorted() == [(1, 2), (1, 3), (2, 1), (3, 1)]

    def test_pset_root(self, equa_tree):
        assert len(pset_of(equa_tree.root)) == 6

    def test_companions(self, equa_tree):
        q = quasi_cartan_at(equa_tree.node_at(W), equa_tree.d)
        assert q.A == Mat([[2, -6, -32], [-9, 2, 282], [-16, 94, 2]])
        assert q.deformation == Mat([[6, -18, -96], [-18, 4, 564], [-96, 564, 12]])
        assert q.is_valid(equa_tree.node_at(W).B)

    def test_initial(self, equa_tree):
        q = initial_quasi_cartan(equa_tree.B0, equa_tree.d, 3)
        assert q.deformation == Mat([[6, 6, -12], [6, 4, -12], [-12, -12, 12]])

    def test_congruence(self, equa_tree):
        assert congruence_product(equa_tree, W) == Mat([[6, -18, -96], [-18, 4, 564], [-96, 564, 12]])
        assert check_congruence(equa_tree, W)

    def test_quadric(self, equa_tree):
        q = quadratic_form(equa_tree.B0, equa_tree.d, 3)
        assert eval_qform(q, (-1, -9, -2)) == 3
        assert check_cvectors_on_quadric(equa_tree, W)
        assert quadric_matches_congruence_diagonal(equa_tree, W)


class TestInitial:
    def test_q1_negates_row_and_column_one(self, equa_tree):
        A = initial_quasi_cartan(equa_tree.B0, equa_tree.d, 1).A
        assert [A[0, 1], A[0, 2], A[1, 0], A[2, 0]] == [-2, -4, -3, -2]
        assert [A[1, 2], A[2, 1]] == [6, 2]

    @given(cluster_cyclic_instances(), st.sampled_from([1, 2, 3]))
    @settings(max_examples=25, deadline=None)
    def test_symmetric(self, inst, q):
        B, d = inst
        At = initial_quasi_cartan(B, d, q).deformation
        assert At == At.T

    def test_rank(self):
        with pytest.raises(RankError):
            initial_quasi_cartan(Mat([[0, 1], [-1, 0]]), (1, 1), 1)


class TestQuadraticForm:
    def test_cross_signs_k1_is_1(self, equa_tree):
        assert quadratic_form(equa_tree.B0, equa_tree.d, 1).cross_signs == (-1, 1, -1)

    @pytest.mark.parametrize("k1", [1, 2, 3])
    def test_unit_vectors(self, equa_tree, k1):
        q = quadratic_form(equa_tree.B0, equa_tree.d, k1)
        for i in range(3):
            e = [0, 0, 0]
            e[i] = 1
            assert eval_qform(q, e) == equa_tree.d[i]

    @given(cluster_cyclic_instances(), st.tuples(small_rationals(), small_rationals(), small_rationals()))
    @settings(max_examples=40, deadline=None)
    def test_case_by_case_formulas(self, inst, x):
        # the three per-k1 equations written out separately
        B, d = inst
        x1, x2, x3 = x
        d1, d2, d3 = d
        b12, b23, b31 = abs(B[0, 1]), abs(B[1, 2]), abs(B[2, 0])
        sq = d1 * x1 * x1 + d2 * x2 * x2 + d3 * x3 * x3
        expect = {
            1: sq - d1 * b12 * x1 * x2 + d2 * b23 * x2 * x3 - d3 * b31 * x1 * x3,
            2: sq - d1 * b12 * x1 * x2 - d2 * b23 * x2 * x3 + d3 * b31 * x1 * x3,
            3: sq + d1 * b12 * x1 * x2 - d2 * b23 * x2 * x3 - d3 * b31 * x1 * x3,
        }
        for k1 in (1, 2, 3):
            assert eval_qform(quadratic_form(B, d, k1), x) == expect[k1]

    @given(cluster_cyclic_instances(), st.tuples(small_rationals(), small_rationals(), small_rationals()),
           st.sampled_from([1, 2, 3]))
    @settings(max_examples=30, deadline=None)
    def test_form_is_half_the_deformation(self, inst, x, k1):
        B, d = inst
        At = initial_quasi_cartan(B, d, k1).deformation
        xv = Mat([[v] for v in x])
        assert (xv.T @ At @ xv)[0, 0] == 2 * eval_qform(quadratic_form(B, d, k1), x)


class TestSweeps:
    @given(cluster_cyclic_instances(), reduced_words(max_len=6))
    @settings(max_examples=40, deadline=None)
    def test_congruence_and_quadric(self, inst, w):
        tree = PatternTree(*inst)
        node = tree.node_at(w)
        assert check_cvectors_on_quadric(tree, w)
        assert axis_cvector_check(node, tree.d)
        if w:
            P = pset_of(node)
            assert len(P) == 4 and P.is_symmetric()
            Aw = quasi_cartan_at(node, tree.d)
            assert Aw.is_valid(node.B)
            assert check_congruence(tree, w)
            assert quadric_matches_congruence_diagonal(tree, w)

    @given(cluster_cyclic_instances(), reduced_words(max_len=5),
           small_rationals(1, 5))
    @settings(max_examples=20, deadline=None)
    def test_scaling_invariance(self, inst, w, lam):
        B, d = inst
        a = PatternTree(B, d)
        b = PatternTree(B, [lam * x for x in d])
        assert check_cvectors_on_quadric(a, w) == check_cvectors_on_quadric(b, w)
        if w:
            assert check_congruence(a, w) == check_congruence(b, w)

    def test_single_step_congruence(self):
        rng = random.Random(5)
        for _ in range(10):
            tree = PatternTree(*random_cluster_cyclic(rng))
            for k in (1, 2, 3):
                assert check_congruence(tree, (k,))


class TestAxis:
    def test_root_and_depth_one(self, equa_tree):
        assert axis_columns(equa_tree.root) == [(1, 1, 1), (2, 2, 1), (3, 3, 1)]
        node = equa_tree.node_at((2,))
        assert (2, 2, -1) in axis_columns(node)
        assert axis_cvector_check(node, equa_tree.d)

    def test_detects_bad_alpha(self, equa_tree):
        # an axis column 2 e_1 in slot 2 would need 4 = d2/d1 = 2/3
        fake = PatternNode((1,), equa_tree.B0, Mat([[1, 2, 0], [0, 0, 0], [0, 0, 1]]),
                           Mat.identity(3))
        assert not axis_cvector_check(fake, equa_tree.d)


class TestRefusals:
    def test_non_cluster_cyclic(self, counter_tree):
        with pytest.raises(NotClusterCyclic):
            pset_of(counter_tree.node_at((1,)))
        with pytest.raises(NotClusterCyclic):
            quadratic_form(counter_tree.B0, counter_tree.d, 1)

    def test_cyclic_but_not_cluster_cyclic(self):
        tree = PatternTree(Mat([[0, -1, 1], [1, 0, -1], [-1, 1, 0]]))
        with pytest.raises(NotClusterCyclic):
            check_congruence(tree, (1,))

    def test_root_congruence_rejected(self, equa_tree):
        with pytest.raises(ValueError):
            check_congruence(equa_tree, ())
