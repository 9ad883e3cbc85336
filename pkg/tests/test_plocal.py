from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bpcobar.plocal import INF, PLocalityViolation, PLocalScalar, nu


def trial_division_nu(n, p):
    # independent oracle: repeated trial division
    if n == 0:
        return INF
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def test_nu_examples():
    assert nu(9, 3) == 2
    assert nu(0, 3) == INF
    assert nu(492, 3) == trial_division_nu(492, 3) == 1


def test_nu_rationals():
    assert nu(Fraction(1, 2), 3) == 0
    assert nu(Fraction(9, 2), 3) == 2
    assert nu(Fraction(2, 9), 3) == -2


def test_scalar_arithmetic():
    half = PLocalScalar(Fraction(1, 2))
    assert half + half == 1
    assert PLocalScalar(35) * PLocalScalar(Fraction(1, 4)) == Fraction(35, 4)
    with pytest.raises(PLocalityViolation):
        PLocalScalar(Fraction(1, 3))
    with pytest.raises(PLocalityViolation):
        PLocalScalar(1) / 3
    with pytest.raises(ZeroDivisionError):
        PLocalScalar(1) / 0


def test_canonical_text_form():
    assert str(PLocalScalar(Fraction(-3, 4))) == "-3/4"
    assert str(PLocalScalar(7)) == "7"
    assert PLocalScalar.parse("-3/4") == Fraction(-3, 4)


p_local = st.fractions(max_denominator=50).filter(lambda q: q.denominator % 3 != 0)


@given(p_local, p_local)
def test_nu_multiplicative(x, y):
    if x == 0 or y == 0:
        return
    assert nu(x * y, 3) == nu(x, 3) + nu(y, 3)


@given(p_local, p_local)
def test_nu_ultrametric(x, y):
    lhs = nu(x + y, 3)
    lo = min(nu(x, 3), nu(y, 3))
    assert lhs >= lo
    if nu(x, 3) != nu(y, 3):
        assert lhs == lo


@given(p_local)
def test_string_round_trip(q):
    s = PLocalScalar(q)
    assert PLocalScalar.parse(str(s)) == s
