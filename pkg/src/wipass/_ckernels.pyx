# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernels; same contract as ``wipass._pykernels``."""

import numpy as np

from libc.math cimport cos, log, pow, sin, sqrt
from libc.stdint cimport uint32_t, uint64_t

BACKEND = "cython"

cdef uint64_t M0 = 0xD2511F53
cdef uint64_t M1 = 0xCD9E8D57
cdef uint32_t W0 = 0x9E3779B9
cdef uint32_t W1 = 0xBB67AE85
cdef double TWO_POW_26 = 67108864.0
cdef double TWO_POW_53 = 9007199254740992.0
cdef double TWO_PI = 6.283185307179586
cdef double SQRT_HALF = 0.7071067811865476


cdef inline void philox(uint32_t* c, uint32_t k0, uint32_t k1) noexcept nogil:
    cdef uint64_t p0, p1
    cdef uint32_t c1, c3
    cdef int r
    for r in range(10):
        p0 = M0 * <uint64_t>c[0]
        p1 = M1 * <uint64_t>c[2]
        c1 = c[1]
        c3 = c[3]
        c[0] = <uint32_t>(p1 >> 32) ^ c1 ^ k0
        c[1] = <uint32_t>p1
        c[2] = <uint32_t>(p0 >> 32) ^ c3 ^ k1
        c[3] = <uint32_t>p0
        k0 = k0 + W0
        k1 = k1 + W1


cdef inline void block_uniform(uint32_t k0, uint32_t k1, uint64_t trial, uint32_t tag,
                               uint32_t block, double* u1, double* u2) noexcept nogil:
    cdef uint32_t c[4]
    c[0] = block
    c[1] = <uint32_t>trial
    c[2] = <uint32_t>(trial >> 32)
    c[3] = tag
    philox(c, k0, k1)
    u1[0] = ((c[0] >> 5) * TWO_POW_26 + (c[1] >> 6) + 0.5) / TWO_POW_53
    u2[0] = ((c[2] >> 5) * TWO_POW_26 + (c[3] >> 6) + 0.5) / TWO_POW_53


cdef inline void block_normal(uint32_t k0, uint32_t k1, uint64_t trial, uint32_t tag,
                              uint32_t block, double* z0, double* z1) noexcept nogil:
    cdef double u1, u2, r, theta
    block_uniform(k0, k1, trial, tag, block, &u1, &u2)
    r = sqrt(-2.0 * log(u1))
    theta = TWO_PI * u2
    z0[0] = r * cos(theta)
    z1[0] = r * sin(theta)


def user_uniforms(seed, tag, start, stop):
    cdef uint64_t s = seed
    cdef uint32_t k0 = <uint32_t>s
    cdef uint32_t k1 = <uint32_t>(s >> 32)
    cdef uint32_t t = tag
    cdef uint64_t lo = start
    cdef Py_ssize_t n = stop - start
    cdef Py_ssize_t i
    u1 = np.empty(n)
    u2 = np.empty(n)
    cdef double[::1] a = u1
    cdef double[::1] b = u2
    with nogil:
        for i in range(n):
            block_uniform(k0, k1, lo + i, t, 0, &a[i], &b[i])
    return u1, u2


def hop_gain_factors(seed, tag, start, stop, block_offset, n_ant, double k,
                     double sigma_db, bint fading):
    cdef uint64_t s = seed
    cdef uint32_t k0 = <uint32_t>s
    cdef uint32_t k1 = <uint32_t>(s >> 32)
    cdef uint32_t t = tag
    cdef uint64_t lo = start
    cdef uint32_t off = block_offset
    cdef int na = n_ant
    cdef Py_ssize_t n = stop - start
    cdef Py_ssize_t i
    cdef int j
    cdef bint rician = k >= 0
    cdef double a = 0.0, b = 1.0
    cdef double z0, z1, re, im, g
    if rician:
        a = sqrt(k / (k + 1.0))
        b = sqrt(1.0 / (k + 1.0))
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            if fading:
                g = 0.0
                for j in range(na):
                    block_normal(k0, k1, lo + i, t, off + j, &z0, &z1)
                    re = z0 * SQRT_HALF
                    im = z1 * SQRT_HALF
                    if rician:
                        re = a + b * re
                        im = b * im
                    g += re * re + im * im
            else:
                g = na
            block_normal(k0, k1, lo + i, t, off + na, &z0, &z1)
            o[i] = g * pow(10.0, sigma_db * z0 / 10.0)
    return out
