"""Double-double (compensated) arithmetic for series summation.

The ascending series of Bessel/Kummer type functions evaluated on or
near the imaginary axis cancel catastrophically: the largest partial
term exceeds the final sum by ~exp(x), so float64 accumulation loses
x/ln(10) digits and is useless already around x ~ 25.  Representing
every term as an unevaluated sum of two float64 (hi + lo, ~31 digits)
keeps the usable range up to x ~ 60 at 1e-9 accuracy.

Numbers are plain tuples:

    real dd     : (hi, lo)
    complex dd  : ((re_hi, re_lo), (im_hi, im_lo))

where hi/lo are python floats or numpy float64 arrays (any shape); all
kernels are elementwise and branch-free, so scalar and vectorized use
share one code path.  Error-free transforms follow Dekker/Knuth and do
not assume an FMA.
"""

from __future__ import annotations

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    t = s - a
    return s, (a - (s - t)) + (b - t)


def _fast_two_sum(a, b):
    # valid only when |a| >= |b| elementwise; all call sites guarantee it
    s = a + b
    return s, b - (s - a)


def _two_prod(a, b):
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


# ---------------------------------------------------------------- real dd

def dd(x):
    return (x, 0.0 * x)


def dd_neg(x):
    return (-x[0], -x[1])


def dd_add(x, y):
    s, e = _two_sum(x[0], y[0])
    return _fast_two_sum(s, e + (x[1] + y[1]))


def dd_add_d(x, d):
    s, e = _two_sum(x[0], d)
    return _fast_two_sum(s, e + x[1])


def dd_mul(x, y):
    p, e = _two_prod(x[0], y[0])
    return _fast_two_sum(p, e + (x[0] * y[1] + x[1] * y[0]))


def dd_mul_d(x, d):
    p, e = _two_prod(x[0], d)
    return _fast_two_sum(p, e + x[1] * d)


def dd_div(x, y):
    q1 = x[0] / y[0]
    r = dd_add(x, dd_neg(dd_mul_d(y, q1)))
    q2 = (r[0] + r[1]) / y[0]
    return _fast_two_sum(q1, q2)


def dd_to_float(x):
    return x[0] + x[1]


# ------------------------------------------------------------- complex dd

def cdd(z):
    """Promote a complex scalar/array to complex dd."""
    if isinstance(z, np.ndarray):
        re = np.array(z.real, dtype=float, copy=True)
        im = np.array(z.imag, dtype=float, copy=True)
        return ((re, np.zeros_like(re)), (im, np.zeros_like(im)))
    z = complex(z)
    return ((z.real, 0.0), (z.imag, 0.0))


def cdd_one_like(shape):
    if shape == ():
        return ((1.0, 0.0), (0.0, 0.0))
    one = np.ones(shape)
    zero = np.zeros(shape)
    return ((one, zero.copy()), (zero.copy(), zero.copy()))


def cdd_neg(a):
    return (dd_neg(a[0]), dd_neg(a[1]))


def cdd_add(a, b):
    return (dd_add(a[0], b[0]), dd_add(a[1], b[1]))


def cdd_mul(a, b):
    re = dd_add(dd_mul(a[0], b[0]), dd_neg(dd_mul(a[1], b[1])))
    im = dd_add(dd_mul(a[0], b[1]), dd_mul(a[1], b[0]))
    return (re, im)


def cdd_mul_c(a, zre, zim):
    """Multiply by an exact complex double (lo = 0): cheaper than cdd_mul."""
    re = dd_add(dd_mul_d(a[0], zre), dd_neg(dd_mul_d(a[1], zim)))
    im = dd_add(dd_mul_d(a[0], zim), dd_mul_d(a[1], zre))
    return (re, im)


def cdd_div(a, b):
    den = dd_add(dd_mul(b[0], b[0]), dd_mul(b[1], b[1]))
    num = cdd_mul(a, (b[0], dd_neg(b[1])))
    return (dd_div(num[0], den), dd_div(num[1], den))


def cdd_abs(a):
    return np.hypot(a[0][0] + a[0][1], a[1][0] + a[1][1])


def cdd_to_complex(a):
    return (a[0][0] + a[0][1]) + 1j * (a[1][0] + a[1][1])
