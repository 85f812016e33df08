import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusternlf.errors import DivisionNotExact, RankMismatch
from clusternlf.laurent import LaurentPoly, lp_add, lp_cmp, lp_exact_div, lp_mul

from strategies import laurent

x1 = LaurentPoly.variable(2, 1)
x2 = LaurentPoly.variable(2, 2)
one = LaurentPoly.one(2)
zero = LaurentPoly.zero(2)
inv_x1 = LaurentPoly.monomial((-1, 0))


def test_add_examples():
    assert lp_add(x1, zero) == x1
    assert str(lp_add(x2, one)) == "1 + x2"
    assert lp_add(x1 + x2, -x2) == x1
    assert (x1 + x2 - x2).terms == x1.terms


def test_mul_examples():
    assert str(lp_mul(one + x2, inv_x1)) == "x1^-1 + x1^-1*x2"
    assert str(lp_mul(one + x1, one + x2)) == "1 + x1 + x2 + x1*x2"
    assert lp_mul(one + x1, zero) == zero


def test_exact_div_examples():
    assert lp_exact_div(one + x1 + x2 + x1 * x2, one + x2) == one + x1
    p = one + x1 * x1 - x2 * inv_x1
    assert lp_exact_div(p, p) == one
    assert str(lp_exact_div(one + x2, x1)) == "x1^-1 + x1^-1*x2"


def test_exact_div_rejects_remainder():
    with pytest.raises(DivisionNotExact):
        lp_exact_div(one + x1, one + x2)
    with pytest.raises(DivisionNotExact):
        lp_exact_div(one + x1, LaurentPoly.constant(2, 2))
    with pytest.raises(ZeroDivisionError):
        lp_exact_div(one, zero)


def test_cmp_examples():
    assert lp_cmp(x1, x1) == 0
    assert lp_cmp(x1, x2) == 1
    # leading exponents (-1, 1) vs (0, 1)
    assert lp_cmp(inv_x1 + inv_x1 * x2, x2) == -1


def test_rank_mismatch():
    y = LaurentPoly.variable(3, 1)
    for op in (lp_add, lp_mul, lp_exact_div, lp_cmp):
        with pytest.raises(RankMismatch):
            op(x1, y)


def test_rank_limit():
    LaurentPoly.one(32)
    with pytest.raises(ValueError):
        LaurentPoly.one(33)


def test_zero_coefficients_dropped():
    p = LaurentPoly(2, {(1, 0): 0, (0, 0): 3})
    assert p.terms == (((0, 0), 3),)
    assert not LaurentPoly(2, {(1, 1): 0})
    assert str(zero) == "0"


def test_canonical_order_is_descending_lex():
    p = one + x1 + x2 + x1 * x2
    exps = [e for e, _ in p.terms]
    assert exps == sorted(exps, reverse=True)


def test_render_coefficients_and_signs():
    p = LaurentPoly(2, {(0, 0): -2, (1, 0): 3, (0, -1): -1})
    assert str(p) == "-x2^-1 - 2 + 3*x1"


@given(laurent(), laurent(), laurent())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@given(laurent(rank=3), laurent(rank=3, nonzero=True))
@settings(max_examples=200)
def test_division_round_trip(a, b):
    assert lp_exact_div(lp_mul(a, b), b) == a


@given(laurent())
def test_canonical_idempotence(a):
    again = LaurentPoly(a.rank, a.as_dict())
    assert again.terms == a.terms
    assert hash(again) == hash(a)


@given(laurent(rank=3))
def test_parse_round_trip(a):
    assert LaurentPoly.parse(str(a), 3) == a


@given(laurent(), laurent(), laurent())
def test_cmp_is_total_order(a, b, c):
    assert (lp_cmp(a, b) == 0) == (a == b)
    assert lp_cmp(a, b) == -lp_cmp(b, a)
    if lp_cmp(a, b) <= 0 and lp_cmp(b, c) <= 0:
        assert lp_cmp(a, c) <= 0


@given(laurent(nonzero=True), st.integers(0, 4))
def test_power_matches_repeated_product(a, k):
    expected = one
    for _ in range(k):
        expected = expected * a
    assert a**k == expected


def test_split_monomial():
    p = lp_mul(one + x1 + x2, LaurentPoly.monomial((-1, -1)))
    low, poly = p.split_monomial()
    assert low == (-1, -1)
    assert poly == one + x1 + x2
    assert p.denominator() == (1, 1)
