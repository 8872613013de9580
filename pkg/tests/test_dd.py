from fractions import Fraction

import numpy as np
from hypothesis import given, strategies as st

from diracjc import _dd

finite = st.floats(-1e100, 1e100, allow_nan=False, allow_infinity=False)


def exact(x):
    return Fraction(float(x[0])) + Fraction(float(x[1]))


@given(finite, finite)
def test_two_sum_is_error_free(a, b):
    s, e = _dd.two_sum(a, b)
    assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


@given(st.floats(-1e150, 1e150), st.floats(-1e150, 1e150))
def test_two_prod_is_error_free(a, b):
    p, e = _dd.two_prod(a, b)
    if abs(a * b) > 1e-250 or a == 0.0 or b == 0.0:  # error term must not underflow
        assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


@given(st.floats(1e-50, 1e50), st.floats(1e-50, 1e50))
def test_div_has_double_double_accuracy(a, b):
    q = _dd.div(_dd.from_float(a), _dd.from_float(b))
    ref = Fraction(a) / Fraction(b)
    assert abs(exact(q) - ref) <= abs(ref) * Fraction(1, 2**100)


@given(st.complex_numbers(min_magnitude=1e-250, max_magnitude=1e250, allow_nan=False,
                          allow_infinity=False))
def test_cinv_round_trip(z):
    inv = _dd.cinv(_dd.cfrom_complex(z))
    back = _dd.to_complex(_dd.cmul(inv, _dd.cfrom_complex(z)))
    assert abs(back - 1.0) < 1e-15


def test_vectorised():
    a = np.array([1.0, 1e-20, 3.0])
    s, e = _dd.two_sum(a, np.array([1e-20, 1.0, -3.0]))
    assert np.all(s == np.array([1.0, 1.0, 0.0]))
    assert np.all(e == np.array([1e-20, 1e-20, 0.0]))
