# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled three-term recurrence kernel.

Computes x[j+1] = coeff[j-1] * x[j] - x[j-1] for j >= 1 given x[0], x[1].
Semantics are shared bit for bit with specrange._recurrence_py; see there
for the contract (normalization, log-scale tracking, overflow index).
"""

from libc.math cimport log


def three_term_scan(double complex[::1] coeff,
                    double complex x0,
                    double complex x1,
                    bint normalize,
                    double rescale_at,
                    double overflow_at,
                    double complex[::1] out_vals,
                    double[::1] out_scale):
    cdef Py_ssize_t m = coeff.shape[0]
    cdef Py_ssize_t i
    cdef double complex a = x0
    cdef double complex b = x1
    cdef double complex nxt
    cdef double s = 0.0
    cdef double mag, ma, mb

    if out_vals.shape[0] != m + 2 or out_scale.shape[0] != m + 2:
        raise ValueError("output buffers must have length len(coeff) + 2")

    out_vals[0] = a
    out_scale[0] = 0.0
    out_vals[1] = b
    out_scale[1] = 0.0
    for i in range(m):
        nxt = coeff[i] * b - a
        a = b
        b = nxt
        ma = abs(a)
        mb = abs(b)
        mag = ma if ma > mb else mb
        if normalize:
            if mag > rescale_at:
                a = a / mag
                b = b / mag
                s = s + log(mag)
        elif mag > overflow_at:
            return i + 2
        out_vals[i + 2] = b
        out_scale[i + 2] = s
    return -1
