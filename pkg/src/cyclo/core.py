"""Exact rational matrices, permutations and skew-symmetrizers.

Scalars are exact rationals (``gmpy2.mpq``, exported as ``Rational``).
Matrix entries are indexed 0-based (``M[i, j]``) like numpy; every
*direction* argument (``k`` in masks, mutations, sequences) is 1-based to
match the usual cluster notation.
"""

from __future__ import annotations

import json
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

from gmpy2 import mpq

Rational = type(mpq(0))
ZERO = mpq(0)
ONE = mpq(1)


def as_rational(x) -> Rational:
    """Coerce ints, Fractions and "p/q" strings.  Floats are rejected."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact scalar {x!r}")
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not a decimal-free rational string: {x!r}")
        return mpq(s)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def sign(x) -> int:
    return (x > 0) - (x < 0)


def fmt(x: Rational) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_decimal(x: Rational, places: int) -> str:
    """Round-half-even decimal rendering; display only, never fed back."""
    x = as_rational(x)
    with localcontext() as ctx:
        ctx.prec = len(str(abs(x.numerator))) + len(str(x.denominator)) + places + 10
        q = Decimal(int(x.numerator)) / Decimal(int(x.denominator))
        return str(q.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


class NotSkewSymmetrizable(ValueError):
    pass


@dataclass(frozen=True)
class Mat:
    """Immutable dense rational matrix stored as a tuple of row tuples."""

    data: tuple[tuple[Rational, ...], ...]
    ncols: int

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(as_rational(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix rows")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def _raw(cls, data, ncols):
        # trusted constructor: data is already a tuple of Rational tuples
        m = object.__new__(cls)
        object.__setattr__(m, "data", data)
        object.__setattr__(m, "ncols", ncols)
        return m

    @classmethod
    def identity(cls, n: int) -> "Mat":
        one, zero = ONE, ZERO
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n))
                              for i in range(n)), n)

    @classmethod
    def zeros(cls, m: int, n: int | None = None) -> "Mat":
        n = m if n is None else n
        zero = ZERO
        return cls._raw(tuple((zero,) * n for _ in range(m)), n)

    @classmethod
    def diag(cls, d: Sequence) -> "Mat":
        d = [as_rational(x) for x in d]
        n = len(d)
        zero = ZERO
        return cls._raw(tuple(tuple(d[i] if i == j else zero for j in range(n))
                              for i in range(n)), n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Mat":
        n = len(cols)
        m = len(cols[0]) if n else 0
        return cls([[cols[j][i] for j in range(n)] for i in range(m)], n)

    @property
    def nrows(self) -> int:
        return len(self.data)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.data), self.ncols)

    @property
    def entries(self) -> tuple[Rational, ...]:
        return tuple(x for r in self.data for x in r)

    def is_square(self) -> bool:
        return len(self.data) == self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> Rational:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple[Rational, ...]:
        return self.data[i]

    def col(self, j: int) -> tuple[Rational, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple[Rational, ...]]:
        return [self.col(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Mat":
        return Mat._raw(tuple(zip(*self.data)) if self.data else (), len(self.data))

    def __add__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat._raw(tuple(tuple(a + b for a, b in zip(r, s))
                              for r, s in zip(self.data, other.data)), self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat._raw(tuple(tuple(a - b for a, b in zip(r, s))
                              for r, s in zip(self.data, other.data)), self.ncols)

    def __neg__(self) -> "Mat":
        return Mat._raw(tuple(tuple(-a for a in r) for r in self.data), self.ncols)

    def scale(self, c) -> "Mat":
        c = as_rational(c)
        return Mat._raw(tuple(tuple(c * a for a in r) for r in self.data), self.ncols)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.data)) if other.data else [()] * other.ncols
        out = []
        for r in self.data:
            row = []
            for c in cols:
                acc = ZERO
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return Mat._raw(tuple(out), other.ncols)

    def apply(self, v: Sequence) -> tuple[Rational, ...]:
        return tuple(sum((a * b for a, b in zip(r, v)), ZERO) for r in self.data)

    def _same_shape(self, other: "Mat") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def det(self) -> Rational:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        a = [list(r) for r in self.data]
        n = len(a)
        d = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                return ZERO
            if p != c:
                a[c], a[p] = a[p], a[c]
                d = -d
            d *= a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] / a[c][c]
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return d

    def inverse(self) -> "Mat":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = len(self.data)
        a = [list(r) + [mpq(int(i == j)) for j in range(n)]
             for i, r in enumerate(self.data)]
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                raise ZeroDivisionError("singular matrix")
            a[c], a[p] = a[p], a[c]
            piv = a[c][c]
            a[c] = [x / piv for x in a[c]]
            for r in range(n):
                if r != c and a[r][c]:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return Mat([r[n:] for r in a], n)

    def map(self, f) -> "Mat":
        return Mat._raw(tuple(tuple(f(a) for a in r) for r in self.data), self.ncols)

    def to_strings(self) -> list[list[str]]:
        return [[fmt(x) for x in r] for r in self.data]

    def __str__(self) -> str:
        cells = self.to_strings()
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)


@lru_cache(maxsize=None)
def J(n: int, k: int) -> Mat:
    """diag(1,..,-1,..,1) with the -1 in direction k."""
    d = [1] * n
    d[k - 1] = -1
    return Mat.diag(d)


def truncate_plus(A: Mat) -> Mat:
    return Mat._raw(tuple(tuple(x if x > 0 else ZERO for x in r) for r in A.data), A.ncols)


def _check_dir(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise IndexError(f"direction {k} out of range 1..{n}")


def column_mask(A: Mat, k: int) -> Mat:
    """Keep column k, zero elsewhere."""
    _check_dir(k, A.ncols)
    zero = ZERO
    j = k - 1
    return Mat._raw(tuple(tuple(x if c == j else zero for c, x in enumerate(r))
                          for r in A.data), A.ncols)


def row_mask(A: Mat, k: int) -> Mat:
    """Keep row k, zero elsewhere."""
    _check_dir(k, A.nrows)
    zero = (ZERO,) * A.ncols
    return Mat._raw(tuple(r if i == k - 1 else zero for i, r in enumerate(A.data)), A.ncols)


def find_skew_symmetrizer(B: Mat) -> tuple[Rational, ...]:
    """Positive diagonal d with d_i b_ij = -d_j b_ji.

    Normalised so the smallest index of every connected component of the
    nonzero pattern gets d = 1.  Raises NotSkewSymmetrizable otherwise.
    """
    if not B.is_square():
        raise ValueError("B must be square")
    n = B.nrows
    for i in range(n):
        if B[i, i] != 0:
            raise NotSkewSymmetrizable(f"nonzero diagonal entry at ({i + 1},{i + 1})")
        for j in range(i + 1, n):
            a, b = B[i, j], B[j, i]
            if (a == 0) != (b == 0) or a * b > 0:
                raise NotSkewSymmetrizable(
                    f"entries ({i + 1},{j + 1})={fmt(a)} and ({j + 1},{i + 1})={fmt(b)}")
    d: list[Rational | None] = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = ONE
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or B[i, j] == 0:
                    continue
                want = -d[i] * B[i, j] / B[j, i]
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    raise NotSkewSymmetrizable(
                        f"inconsistent symmetrizer propagation at index {j + 1}")
    return tuple(d)


def is_skew_symmetrizer(B: Mat, d: Sequence[Rational]) -> bool:
    n = B.nrows
    if len(d) != n or any(x <= 0 for x in d):
        return False
    return all(d[i] * B[i, j] == -d[j] * B[j, i] for i in range(n) for j in range(n))


# permutations -----------------------------------------------------------

@dataclass(frozen=True)
class Perm:
    """Bijection i -> images[i-1] on {1..n}."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def all(cls, n: int) -> list["Perm"]:
        return [cls(p) for p in permutations(range(1, n + 1))]

    @classmethod
    def cycle(cls, n: int, *cyc: int) -> "Perm":
        img = list(range(1, n + 1))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b
        return cls(tuple(img))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> "Perm":
        inv = [0] * self.n
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Perm(tuple(inv))

    def __mul__(self, other: "Perm") -> "Perm":
        """(self * other)(i) = self(other(i))."""
        return Perm(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def matrix(self) -> Mat:
        # p_ij = delta(i, sigma^-1(j))
        inv = self.inverse()
        return Mat([[int(i == inv(j)) for j in range(1, self.n + 1)]
                    for i in range(1, self.n + 1)])


def apply_perm_both(sigma: Perm, A: Mat) -> Mat:
    """sigma(A) = (a_{sigma^-1(i), sigma^-1(j)})."""
    if not A.is_square() or A.nrows != sigma.n:
        raise ValueError("permutation size does not match matrix")
    inv = [sigma.inverse()(i) - 1 for i in range(1, sigma.n + 1)]
    return Mat._raw(tuple(tuple(A.data[inv[i]][inv[j]] for j in range(A.ncols))
                          for i in range(A.nrows)), A.ncols)


def apply_perm_cols(sigma: Perm, A: Mat) -> Mat:
    """sigma~(A) = (a_{i, sigma^-1(j)})."""
    if A.ncols != sigma.n:
        raise ValueError("permutation size does not match matrix")
    inv = [sigma.inverse()(j) - 1 for j in range(1, sigma.n + 1)]
    return Mat._raw(tuple(tuple(r[inv[j]] for j in range(A.ncols)) for r in A.data),
                    A.ncols)


# JSON I/O ---------------------------------------------------------------

def matrix_from_json(obj: dict) -> tuple[Mat, tuple[Rational, ...] | None]:
    """Parse ``{"n":..,"rows":[[..]],"skew_symmetrizer":[..]}``."""
    if not isinstance(obj, dict) or "rows" not in obj:
        raise ValueError("matrix JSON needs a 'rows' field")
    rows = obj["rows"]
    B = Mat(rows) if rows else Mat.zeros(0)
    n = obj.get("n", B.nrows)
    if n != B.nrows or not B.is_square():
        raise ValueError(f"declared n={n} does not match a square {B.shape} matrix")
    d = obj.get("skew_symmetrizer")
    if d is not None:
        d = tuple(as_rational(x) for x in d)
        if not is_skew_symmetrizer(B, d):
            raise NotSkewSymmetrizable("supplied skew_symmetrizer does not skew-symmetrize B")
    return B, d


def matrix_to_json(B: Mat, d: Sequence[Rational] | None = None) -> dict:
    obj = {"n": B.nrows, "rows": B.to_strings()}
    if d is not None:
        obj["skew_symmetrizer"] = [fmt(x) for x in d]
    return obj


def load_matrix(path) -> tuple[Mat, tuple[Rational, ...] | None]:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))
