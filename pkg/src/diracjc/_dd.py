"""Vectorised double-double arithmetic on numpy arrays.

A real double-double is a pair ``(hi, lo)`` with ``|lo| <= ulp(hi)/2``; a
complex one is a pair of those. Only what the Bessel series needs is here.
Algorithms are the classical error-free transformations of Knuth and Dekker.
"""

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def add(x, y):
    s, e = two_sum(x[0], y[0])
    t, f = two_sum(x[1], y[1])
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def neg(x):
    return -x[0], -x[1]


def mul(x, y):
    p, e = two_prod(x[0], y[0])
    e = e + (x[0] * y[1] + x[1] * y[0])
    return quick_two_sum(p, e)


def div(x, y):
    q1 = x[0] / y[0]
    r = add(x, neg(mul(y, (q1, 0.0 * q1))))
    q2 = r[0] / y[0]
    r = add(r, neg(mul(y, (q2, 0.0 * q2))))
    q3 = r[0] / y[0]
    q1, q2 = quick_two_sum(q1, q2)
    return add((q1, q2), (q3, 0.0 * q3))


def from_float(a):
    a = np.asarray(a, dtype=float)
    return a, np.zeros_like(a)


# complex double-double: (re, im) with re, im real double-doubles

def cfrom_complex(z):
    z = np.asarray(z, dtype=complex)
    return from_float(z.real), from_float(z.imag)


def cadd(x, y):
    return add(x[0], y[0]), add(x[1], y[1])


def cmul(x, y):
    re = add(mul(x[0], y[0]), neg(mul(x[1], y[1])))
    im = add(mul(x[0], y[1]), mul(x[1], y[0]))
    return re, im


def _scale(x, s):
    return x[0] * s, x[1] * s


def cinv(y):
    # scale by a power of two (exact) so |y|^2 neither underflows nor overflows
    _, e = np.frexp(np.maximum(np.abs(y[0][0]), np.abs(y[1][0])))
    s = np.ldexp(1.0, -e)
    re, im = _scale(y[0], s), _scale(y[1], s)
    den = add(mul(re, re), mul(im, im))
    return _scale(div(re, den), s), _scale(neg(div(im, den)), s)


def to_complex(x):
    return (x[0][0] + x[0][1]) + 1j * (x[1][0] + x[1][1])
