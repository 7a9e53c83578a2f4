import random

import pytest
from hypothesis import strategies as st

from cyclo.core import Mat, Rational
from cyclo.patterns import PatternTree
from cyclo.sampling import random_cluster_cyclic

EQUA_B = [[0, 2, -4], [-3, 0, 6], [2, -2, 0]]
EQUA_D = [3, 2, 6]
COUNTER_B = [[0, "1/2", 1], ["-1/2", 0, "1/2"], [-1, "-1/2", 0]]
MARKOV_B = [[0, -2, 2], [2, 0, -2], [-2, 2, 0]]
A3_B = [[0, 1, 0], [-1, 0, 1], [0, -1, 0]]


@pytest.fixture
def equa_tree():
    return PatternTree(Mat(EQUA_B), EQUA_D)


@pytest.fixture
def counter_tree():
    return PatternTree(Mat(COUNTER_B))


@st.composite
def cluster_cyclic_instances(draw):
    """A random cluster-cyclic (B, d) driven by a drawn seed."""
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_cluster_cyclic(random.Random(seed))


@st.composite
def small_rationals(draw, lo=-6, hi=6, max_den=4):
    q = draw(st.integers(1, max_den))
    p = draw(st.integers(lo * q, hi * q))
    return Rational(p, q)


@st.composite
def skew_symmetrizable(draw, n=3):
    """B = D^{-1} S with S skew-symmetric, so D B is skew-symmetric."""
    d = [draw(small_rationals(1, 4)) for _ in range(n)]
    S = [[Rational(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = draw(small_rationals())
            S[i][j], S[j][i] = x, -x
    return Mat([[S[i][j] / d[i] for j in range(n)] for i in range(n)]), tuple(d)


@st.composite
def reduced_words(draw, n=3, max_len=6):
    length = draw(st.integers(0, max_len))
    w = []
    for _ in range(length):
        choices = [k for k in range(1, n + 1) if not w or k != w[-1]]
        w.append(draw(st.sampled_from(choices)))
    return tuple(w)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
