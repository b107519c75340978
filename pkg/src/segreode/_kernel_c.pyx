# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the pure-Python convolution kernel.

Same contract as ``segreode._kernel_py``: sparse Cauchy products over
Gaussian-integer pairs with truncation cutoffs.  Coefficients stay
arbitrary-precision Python ints; the win over the fallback is the
C-level loop, key arithmetic and dict traffic around them.
"""

BACKEND_NAME = "c"

SHIFT1 = 42
SHIFT2 = 21
MASK = (1 << 21) - 1

cdef long long C_SHIFT1 = 42
cdef long long C_SHIFT2 = 21
cdef long long C_MASK = (1 << 21) - 1


def mul1(dict ca, dict cb, long long trunc):
    """Univariate Cauchy product of coefficient dicts, degrees < trunc."""
    cdef dict out = {}
    cdef long long da, db, d
    cdef object va, vb, cur
    cdef object ar, ai, br, bi, re, im
    if len(ca) > len(cb):
        ca, cb = cb, ca
    for da, va in ca.items():
        ar = (<tuple>va)[0]
        ai = (<tuple>va)[1]
        for db, vb in cb.items():
            d = da + db
            if d >= trunc:
                continue
            br = (<tuple>vb)[0]
            bi = (<tuple>vb)[1]
            re = ar * br - ai * bi
            im = ar * bi + ai * br
            cur = out.get(d)
            if cur is not None:
                re = re + (<tuple>cur)[0]
                im = im + (<tuple>cur)[1]
            if re or im:
                out[d] = (re, im)
            elif cur is not None:
                del out[d]
    return out


def mul3(dict ca, dict cb, long long tz, long long tx, long long te):
    """Trivariate Cauchy product on packed keys, exponents < (tz, tx, te)."""
    cdef dict out = {}
    cdef long long ka, kb, k
    cdef object va, vb, cur
    cdef object ar, ai, br, bi, re, im
    if len(ca) > len(cb):
        ca, cb = cb, ca
    for ka, va in ca.items():
        ar = (<tuple>va)[0]
        ai = (<tuple>va)[1]
        for kb, vb in cb.items():
            k = ka + kb
            if ((k >> C_SHIFT1) >= tz or ((k >> C_SHIFT2) & C_MASK) >= tx
                    or (k & C_MASK) >= te):
                continue
            br = (<tuple>vb)[0]
            bi = (<tuple>vb)[1]
            re = ar * br - ai * bi
            im = ar * bi + ai * br
            cur = out.get(k)
            if cur is not None:
                re = re + (<tuple>cur)[0]
                im = im + (<tuple>cur)[1]
            if re or im:
                out[k] = (re, im)
            elif cur is not None:
                del out[k]
    return out
