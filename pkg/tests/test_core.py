import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cyclo.core import (
    Mat,
    NotSkewSymmetrizable,
    Perm,
    Rational,
    apply_perm_both,
    apply_perm_cols,
    as_rational,
    column_mask,
    find_skew_symmetrizer,
    fmt,
    fmt_decimal,
    is_skew_symmetrizer,
    matrix_from_json,
    matrix_to_json,
    row_mask,
    truncate_plus,
)

from conftest import EQUA_B, skew_symmetrizable, small_rationals


def frac_det3(rows):
    # cofactor expansion over Fraction, independent of the Gauss-Jordan code
    r = [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in rows]
    return (r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]))


mats3 = st.lists(st.lists(small_rationals(), min_size=3, max_size=3), min_size=3, max_size=3).map(Mat)


class TestScalars:
    def test_rational_strings(self):
        assert as_rational("3/6") == Rational(1, 2)
        assert as_rational(" -4 ") == -4
        assert as_rational(Fraction(2, 3)) == Rational(2, 3)

    @pytest.mark.parametrize("bad", [0.5, True, "0.5", "1e3", ""])
    def test_inexact_rejected(self, bad):
        with pytest.raises((TypeError, ValueError)):
            as_rational(bad)

    def test_lowest_terms(self):
        x = as_rational("6/8")
        assert (x.numerator, x.denominator) == (3, 4)
        assert fmt(x) == "3/4"
        assert fmt(as_rational(-5)) == "-5"

    def test_decimal_rendering(self):
        assert fmt_decimal(Rational(1, 16), 4) == "0.0625"
        assert fmt_decimal(Rational(-3, 32), 4) == "-0.0938"
        assert fmt_decimal(Rational(2, 3), 3) == "0.667"


class TestMasks:
    def test_truncate_plus(self):
        assert truncate_plus(Mat([[0, -1], [2, 0]])) == Mat([[0, 0], [2, 0]])
        assert truncate_plus(Mat.zeros(3)) == Mat.zeros(3)
        assert truncate_plus(Mat([["1/2", "-3/4"]])) == Mat([["1/2", 0]])

    def test_masks(self):
        A = Mat([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert column_mask(A, 2) == Mat([[0, 2, 0], [0, 5, 0], [0, 8, 0]])
        assert row_mask(A, 3) == Mat([[0, 0, 0], [0, 0, 0], [7, 8, 9]])

    @pytest.mark.parametrize("k", [0, 4])
    def test_mask_out_of_range(self, k):
        with pytest.raises(IndexError):
            column_mask(Mat.identity(3), k)
        with pytest.raises(IndexError):
            row_mask(Mat.identity(3), k)


class TestMat:
    def test_ragged(self):
        with pytest.raises(ValueError):
            Mat([[1, 2], [3]])

    def test_matmul_known(self):
        A = Mat([[1, 2], [3, 4]])
        B = Mat([[0, 1], [1, 0]])
        assert A @ B == Mat([[2, 1], [4, 3]])

    @given(mats3)
    def test_det_matches_cofactor(self, M):
        assert Fraction(int(M.det().numerator), int(M.det().denominator)) == frac_det3(M.data)

    @given(mats3)
    def test_inverse(self, M):
        if M.det() == 0:
            with pytest.raises(ZeroDivisionError):
                M.inverse()
        else:
            assert M @ M.inverse() == Mat.identity(3)
            assert M.inverse() @ M == Mat.identity(3)

    @given(mats3, mats3)
    def test_transpose_of_product(self, A, B):
        assert (A @ B).T == B.T @ A.T


class TestSymmetrizer:
    def test_equa_example(self):
        d = find_skew_symmetrizer(Mat(EQUA_B))
        assert d == (1, Rational(2, 3), 2)  # proportional to (3, 2, 6)
        assert is_skew_symmetrizer(Mat(EQUA_B), (3, 2, 6))

    @given(skew_symmetrizable())
    @settings(max_examples=50)
    def test_found_symmetrizer_is_valid(self, Bd):
        B, d = Bd
        assert is_skew_symmetrizer(B, d)
        assert is_skew_symmetrizer(B, find_skew_symmetrizer(B))

    @pytest.mark.parametrize("rows", [
        [[0, 1], [1, 0]],               # same signs
        [[1, 0], [0, 0]],               # nonzero diagonal
        [[0, 1], [0, 0]],               # one-sided zero
        [[0, 1, 1], [-1, 0, 1], [-2, -1, 0]],  # inconsistent cycle of ratios
    ])
    def test_not_symmetrizable(self, rows):
        with pytest.raises(NotSkewSymmetrizable):
            find_skew_symmetrizer(Mat(rows))

    def test_first_index_normalised_per_component(self):
        B = Mat([[0, 2, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 3], [0, 0, -1, 0]])
        d = find_skew_symmetrizer(B)
        assert d[0] == 1 and d[2] == 1
        assert is_skew_symmetrizer(B, d)


class TestPerm:
    def test_validation(self):
        with pytest.raises(ValueError):
            Perm((1, 1, 2))

    def test_cycle_and_inverse(self):
        s = Perm.cycle(3, 1, 3, 2)
        assert (s(1), s(3), s(2)) == (3, 2, 1)
        assert s * s.inverse() == Perm.identity(3)

    def test_matrix_realises_column_action(self):
        A = Mat([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        for s in Perm.all(3):
            assert apply_perm_cols(s, A) == A @ s.matrix()
            assert apply_perm_both(s, A) == s.matrix().T @ A @ s.matrix()

    def test_column_action_moves_k_to_sigma_k(self):
        A = Mat([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        s = Perm((2, 3, 1))
        for k in (1, 2, 3):
            assert apply_perm_cols(s, A).col(s(k) - 1) == A.col(k - 1)


class TestJson:
    def test_roundtrip(self):
        B = Mat([[0, "1/2"], ["-1", 0]])
        obj = json.loads(json.dumps(matrix_to_json(B, (2, 1))))
        B2, d2 = matrix_from_json(obj)
        assert B2 == B and d2 == (2, 1)

    @pytest.mark.parametrize("obj", [
        {"rows": [[0, 1], [-1, 0]], "n": 3},
        {"rows": [[0, 0.5], [-0.5, 0]]},
        {"n": 2},
        {"rows": [[0, 1], [-1, 0]], "skew_symmetrizer": [1, 2]},
    ])
    def test_bad_input(self, obj):
        with pytest.raises((ValueError, TypeError)):
            matrix_from_json(obj)
