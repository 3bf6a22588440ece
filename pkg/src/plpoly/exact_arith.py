"""Exact rational scalars, vectors, matrices and canonical linear constraints.

Everything downstream that claims to be *certified* bottoms out here: all
values are arbitrary-precision rationals, all solves are exact, and all
results are immutable (tuples), so they can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as _mpq

    def rat(num=0, den=1):
        """Exact rational from integers, strings ("-3/8") or rationals."""
        return _mpq(num, den)

except ImportError:  # pragma: no cover - gmpy2 is a normal dependency
    from fractions import Fraction as _Fraction

    def rat(num=0, den=1):
        return _Fraction(num, den)


Rational = type(rat(0))
RationalVector = tuple  # tuple of Rational, length = dim
RationalMatrix = tuple  # tuple of row tuples, row-major

ZERO = rat(0)
ONE = rat(1)

LE = "<="
EQ = "="


class SingularMatrixError(ValueError):
    """Raised when an exact linear solve meets a singular matrix."""


def vec(entries: Iterable) -> RationalVector:
    return tuple(rat(e) for e in entries)


def zero_vec(dim: int) -> RationalVector:
    return (ZERO,) * dim


def vec_dot(u: Sequence, v: Sequence):
    assert len(u) == len(v)
    total = ZERO
    for a, b in zip(u, v):
        total += a * b
    return total


def vec_add(u: Sequence, v: Sequence) -> RationalVector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> RationalVector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(k, u: Sequence) -> RationalVector:
    k = rat(k)
    return tuple(k * a for a in u)


def vec_is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def mat(rows: Iterable[Iterable]) -> RationalMatrix:
    out = tuple(vec(row) for row in rows)
    if out:
        width = len(out[0])
        assert all(len(r) == width for r in out)
    return out


def identity(n: int) -> RationalMatrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def mat_vec(m: RationalMatrix, v: Sequence) -> RationalVector:
    return tuple(vec_dot(row, v) for row in m)


def transpose(m: RationalMatrix) -> RationalMatrix:
    if not m:
        return ()
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def _int_rows(m: Sequence[Sequence], extra: Sequence[Sequence]) -> list[list[int]]:
    """Scale each row of [m | extra-columns] to integers (exact row scaling)."""
    rows = []
    for i, row in enumerate(m):
        cells = list(row) + [col[i] for col in extra]
        scale = 1
        for c in cells:
            scale = scale * c.denominator // math.gcd(scale, int(c.denominator))
        rows.append([int(c * scale) for c in cells])
    return rows


def solve_linear_system(m: RationalMatrix, rhs: Sequence) -> RationalVector:
    """Solve M·x = rhs exactly for square M; raises SingularMatrixError."""
    return solve_many(m, [rhs])[0]


def solve_many(m: RationalMatrix, rhs_list: Sequence[Sequence]) -> list[RationalVector]:
    """Solve M·x = r for each r in rhs_list with one shared elimination.

    Fraction-free (Bareiss) elimination on the integer-scaled system with
    partial pivoting by integer magnitude, then exact rational back
    substitution.
    """
    n = len(m)
    for row in m:
        if len(row) != n:
            raise ValueError("matrix is not square")
    for r in rhs_list:
        if len(r) != n:
            raise ValueError("rhs dimension mismatch")
    if n == 0:
        return [() for _ in rhs_list]

    t = _int_rows(m, [vec(r) for r in rhs_list])
    width = n + len(rhs_list)
    prev = 1
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(t[i][k]))
        if t[piv][k] == 0:
            raise SingularMatrixError("singular matrix")
        if piv != k:
            t[k], t[piv] = t[piv], t[k]
        pk = t[k][k]
        for i in range(k + 1, n):
            tik = t[i][k]
            ti, tk = t[i], t[k]
            for j in range(k + 1, width):
                ti[j] = (pk * ti[j] - tik * tk[j]) // prev
            ti[k] = 0
        prev = pk

    solutions = []
    for col in range(len(rhs_list)):
        x = [ZERO] * n
        for i in range(n - 1, -1, -1):
            acc = rat(t[i][n + col])
            for j in range(i + 1, n):
                acc -= t[i][j] * x[j]
            x[i] = acc / t[i][i]
        solutions.append(tuple(x))
    return solutions


def matrix_rank_reduce(
    rows: Sequence[Sequence], rhs: Sequence
) -> tuple[list[RationalVector], list, bool]:
    """Select a maximal independent subset of the rows of [rows | rhs].

    Kept rows are returned unmodified (elimination happens on working
    copies); consistent is False when a dependent row contradicts the others
    (0 = c with c nonzero).
    """
    kept_rows: list = []
    kept_rhs: list = []
    echelon: list[list] = []
    pivots: list[int] = []
    consistent = True
    for orig_row, orig_b in zip(rows, rhs):
        row = list(vec(orig_row)) + [rat(orig_b)]
        ncols = len(row) - 1
        for prow, pcol in zip(echelon, pivots):
            if row[pcol] != 0:
                f = row[pcol] / prow[pcol]
                for j in range(ncols + 1):
                    row[j] -= f * prow[j]
        pcol = next((j for j in range(ncols) if row[j] != 0), None)
        if pcol is None:
            if row[ncols] != 0:
                consistent = False
            continue
        echelon.append(row)
        pivots.append(pcol)
        kept_rows.append(vec(orig_row))
        kept_rhs.append(rat(orig_b))
    return kept_rows, kept_rhs, consistent


# --- canonical constraints -------------------------------------------------


@dataclass(frozen=True)
class CanonicalConstraint:
    """Integer constraint coeffs·x (<=|=) bound with content 1.

    Equalities are sign-normalized (first nonzero coefficient positive);
    inequalities keep their orientation.
    """

    coeffs: tuple
    bound: int
    relation: str = LE

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def evaluate(self, point: Sequence):
        total = 0
        for c, x in zip(self.coeffs, point):
            if c:
                total = total + c * x
        return total

    def holds(self, point: Sequence) -> bool:
        lhs = self.evaluate(point)
        return lhs == self.bound if self.relation == EQ else lhs <= self.bound

    def holds_strictly(self, point: Sequence) -> bool:
        if self.relation == EQ:
            return self.evaluate(point) == self.bound
        return self.evaluate(point) < self.bound

    def negate_terms(self) -> "CanonicalConstraint":
        """The constraint with all terms negated (only meaningful for <=)."""
        return CanonicalConstraint(
            tuple(-c for c in self.coeffs), -self.bound, self.relation
        )

    def __str__(self) -> str:
        terms = " ".join(str(c) for c in self.coeffs)
        return f"{terms} {self.relation} {self.bound}"


class _Trivial:
    __slots__ = ("truth",)

    def __init__(self, truth: bool):
        self.truth = truth

    def __repr__(self):
        return "TRIVIALLY_TRUE" if self.truth else "TRIVIALLY_FALSE"


TRIVIALLY_TRUE = _Trivial(True)
TRIVIALLY_FALSE = _Trivial(False)


def canonicalize(coeffs: Sequence, bound, relation: str = LE):
    """Flush denominators, strip the content, normalize equality sign.

    Returns a CanonicalConstraint, or TRIVIALLY_TRUE / TRIVIALLY_FALSE when
    every coefficient vanishes.
    """
    cs = [rat(c) for c in coeffs]
    b = rat(bound)
    scale = 1
    for c in cs + [b]:
        scale = scale * c.denominator // math.gcd(scale, int(c.denominator))
    ints = [int(c * scale) for c in cs]
    bi = int(b * scale)
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    g = math.gcd(g, bi)
    if g > 1:
        ints = [c // g for c in ints]
        bi //= g
    if all(c == 0 for c in ints):
        if relation == EQ:
            return TRIVIALLY_TRUE if bi == 0 else TRIVIALLY_FALSE
        return TRIVIALLY_TRUE if bi >= 0 else TRIVIALLY_FALSE
    if relation == EQ:
        lead = next(c for c in ints if c != 0)
        if lead < 0:
            ints = [-c for c in ints]
            bi = -bi
    return CanonicalConstraint(tuple(ints), bi, relation)


def primitive_direction(v: Sequence) -> RationalVector:
    """Scale a nonzero rational vector to the content-1 integer vector on its ray."""
    cs = [rat(c) for c in v]
    scale = 1
    for c in cs:
        scale = scale * c.denominator // math.gcd(scale, int(c.denominator))
    ints = [int(c * scale) for c in cs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    if g == 0:
        raise ValueError("zero vector has no direction")
    return tuple(rat(c // g) for c in ints)


def parse_rational(text: str):
    """Parse the rational text syntax: optional sign, integer, optional /den."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        d = int(den)
        if d <= 0:
            raise ValueError(f"denominator must be positive: {text!r}")
        return rat(int(num), d)
    return rat(int(text))


def format_rational(value) -> str:
    return str(rat(value))
