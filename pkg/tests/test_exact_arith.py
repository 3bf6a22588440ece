import random

import pytest
from hypothesis import given, strategies as st

from plpoly.exact_arith import (
    EQ,
    LE,
    TRIVIALLY_FALSE,
    TRIVIALLY_TRUE,
    CanonicalConstraint,
    SingularMatrixError,
    canonicalize,
    format_rational,
    identity,
    mat,
    mat_vec,
    matrix_rank_reduce,
    parse_rational,
    primitive_direction,
    rat,
    solve_linear_system,
    solve_many,
    vec,
)


def test_solve_identity():
    assert solve_linear_system(identity(2), vec([6, 6])) == vec([6, 6])


def test_solve_polygon_basic_block():
    # the 2x2 system for x1, x2 of the square polygon at its top vertex
    m = mat([[3, -1], [-1, 3]])
    assert solve_linear_system(m, vec([6, 6])) == vec([3, 3])


def test_solve_random_4x4_roundtrip():
    rng = random.Random(42)
    for _ in range(20):
        while True:
            m = mat([[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)])
            try:
                known = vec([1, 2, 3, 4])
                rhs = mat_vec(m, known)
                assert solve_linear_system(m, rhs) == known
                break
            except SingularMatrixError:
                continue


def test_solve_singular_raises():
    m = mat([[1, 2], [2, 4]])
    with pytest.raises(SingularMatrixError):
        solve_linear_system(m, vec([1, 1]))


def test_solve_many_shares_elimination():
    m = mat([[2, 1], [1, 3]])
    sols = solve_many(m, [vec([1, 0]), vec([0, 1]), vec([5, 5])])
    for rhs, x in zip([(1, 0), (0, 1), (5, 5)], sols):
        assert mat_vec(m, x) == vec(rhs)


def test_rank_reduce_drops_dependent_rows():
    rows, rhs, ok = matrix_rank_reduce([[1, 1], [2, 2], [1, 0]], [3, 6, 1])
    assert ok and len(rows) == 2


def test_rank_reduce_flags_inconsistent():
    _, _, ok = matrix_rank_reduce([[1, 1], [2, 2]], [3, 7])
    assert not ok


class TestCanonicalize:
    def test_content_one_is_kept(self):
        con = canonicalize([2, 2], 3)
        assert con.coeffs == (2, 2) and con.bound == 3

    def test_common_factor_removed(self):
        con = canonicalize([2, 2], 2)
        assert con.coeffs == (1, 1) and con.bound == 1

    def test_denominators_flushed(self):
        con = canonicalize([rat(1, 2), rat(1, 3)], rat(1, 6))
        assert con.coeffs == (3, 2) and con.bound == 1

    def test_trivially_true(self):
        assert canonicalize([0], 1) is TRIVIALLY_TRUE
        assert canonicalize([0, 0], 0) is TRIVIALLY_TRUE

    def test_trivially_false(self):
        assert canonicalize([0], -1) is TRIVIALLY_FALSE
        assert canonicalize([0, 0], -1, EQ) is TRIVIALLY_FALSE

    def test_equality_sign_normalized(self):
        con = canonicalize([-2, 4], -6, EQ)
        assert con.coeffs == (1, -2) and con.bound == 3

    def test_inequality_keeps_orientation(self):
        con = canonicalize([-1, 0], 0)
        assert con.coeffs == (-1, 0)


rationals = st.fractions(
    min_value=-(10**6), max_value=10**6, max_denominator=10**4
)


@given(st.lists(rationals, min_size=1, max_size=5), rationals)
def test_canonicalize_idempotent(coeffs, bound):
    first = canonicalize(coeffs, bound)
    if isinstance(first, CanonicalConstraint):
        again = canonicalize(first.coeffs, first.bound, first.relation)
        assert again == first


@given(
    st.lists(rationals, min_size=1, max_size=5),
    rationals,
    st.fractions(min_value="1/100", max_value=100, max_denominator=100),
)
def test_canonicalize_scale_invariant(coeffs, bound, k):
    base = canonicalize(coeffs, bound)
    scaled = canonicalize([k * c for c in coeffs], k * bound)
    assert scaled == base


def test_constraint_evaluation():
    con = CanonicalConstraint((1, -2), 3, LE)
    assert con.holds(vec([1, -1]))
    assert con.holds(vec([3, 0]))  # boundary
    assert not con.holds_strictly(vec([3, 0]))
    assert not con.holds(vec([4, 0]))


def test_primitive_direction():
    assert primitive_direction(vec([rat(2, 3), rat(-4, 3)])) == vec([1, -2])
    assert primitive_direction(vec([4, 6])) == vec([2, 3])
    with pytest.raises(ValueError):
        primitive_direction(vec([0, 0]))


@pytest.mark.parametrize(
    "text,num,den", [("-3/8", -3, 8), ("7", 7, 1), ("+2/4", 1, 2)]
)
def test_rational_text_syntax(text, num, den):
    value = parse_rational(text)
    assert value.numerator == num and value.denominator == den


def test_rational_text_rejects_nonpositive_denominator():
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("1/-2")


def test_format_roundtrip():
    assert parse_rational(format_rational(rat(-3, 8))) == rat(-3, 8)
