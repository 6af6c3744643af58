"""numba-compiled loop kernels; same contracts as ``_numpy``."""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def _powmod(b, e, m):
    r = 1 % m
    b = b % m
    while e > 0:
        if e & 1:
            r = (r * b) % m
        e >>= 1
        if e > 0:
            b = (b * b) % m
    return r


@njit(cache=True)
def _powmod_array(bases, exponent, modulus):
    out = np.empty(bases.shape[0], dtype=np.int64)
    for i in range(bases.shape[0]):
        out[i] = _powmod(bases[i] % modulus, exponent, modulus)
    return out


def powmod_array(bases, exponent, modulus):
    return _powmod_array(np.ascontiguousarray(bases, dtype=np.int64),
                         np.int64(exponent), np.int64(modulus))


@njit(cache=True)
def _difference_counts(ys, zs, n):
    out = np.zeros(n, dtype=np.int64)
    for i in range(ys.shape[0]):
        y = ys[i]
        for k in range(zs.shape[0]):
            d = zs[k] - y
            if d < 0:
                d += n
            out[d] += 1
    return out


def difference_counts(ys, zs, n):
    ys = np.ascontiguousarray(ys, dtype=np.int64) % n
    zs = np.ascontiguousarray(zs, dtype=np.int64) % n
    return _difference_counts(ys, zs, np.int64(n))


@njit(cache=True)
def _direct_dft(xs, re, im, n):
    ct = np.empty(n)
    st = np.empty(n)
    w = -2.0 * math.pi / n
    for k in range(n):
        ct[k] = math.cos(w * k)
        st[k] = math.sin(w * k)
    out = np.empty(n, dtype=np.complex128)
    m = xs.shape[0]
    # idx[j] tracks (xi * xs[j]) % n incrementally, no wide products
    idx = np.zeros(m, dtype=np.int64)
    for xi in range(n):
        sr = 0.0
        si = 0.0
        for j in range(m):
            k = idx[j]
            c = ct[k]
            s = st[k]
            sr += re[j] * c - im[j] * s
            si += re[j] * s + im[j] * c
            k += xs[j]
            if k >= n:
                k -= n
            idx[j] = k
        out[xi] = complex(sr, si)
    return out


def direct_dft(xs, vals, n):
    xs = np.ascontiguousarray(xs, dtype=np.int64) % n
    vals = np.asarray(vals, dtype=np.complex128)
    return _direct_dft(xs, np.ascontiguousarray(vals.real),
                       np.ascontiguousarray(vals.imag), np.int64(n))


@njit(cache=True)
def _horner_all(coeffs, p):
    out = np.empty(p, dtype=np.int64)
    deg = coeffs.shape[0]
    for x in range(p):
        acc = 0
        for k in range(deg - 1, -1, -1):
            acc = (acc * x + coeffs[k]) % p
        out[x] = acc
    return out


def horner_all(coeffs, p):
    return _horner_all(np.ascontiguousarray(coeffs, dtype=np.int64), np.int64(p))


@njit(cache=True)
def _conv_on_set(points, mask, gamma, n):
    out = np.zeros(points.shape[0], dtype=np.int64)
    for i in range(points.shape[0]):
        x = points[i]
        c = 0
        for k in range(gamma.shape[0]):
            d = x - gamma[k]
            if d < 0:
                d += n
            if mask[d]:
                c += 1
        out[i] = c
    return out


def conv_on_set(points, mask, gamma, n):
    return _conv_on_set(np.ascontiguousarray(points, dtype=np.int64) % n,
                        np.ascontiguousarray(mask, dtype=np.bool_),
                        np.ascontiguousarray(gamma, dtype=np.int64) % n,
                        np.int64(n))


@njit(cache=True)
def _triple_sum_direct(gamma, d_mask, counts, n):
    t = gamma.shape[0]
    nbr = np.empty(t, dtype=np.int64)
    total = 0
    for i in range(t):
        x = gamma[i]
        m = 0
        for k in range(t):
            d = x - gamma[k]
            if d < 0:
                d += n
            if d_mask[d]:
                nbr[m] = gamma[k]
                m += 1
        for a in range(m):
            y = nbr[a]
            for b in range(m):
                d = y - nbr[b]
                if d < 0:
                    d += n
                total += counts[d]
    return total


def triple_sum_direct(gamma, d_mask, counts, n):
    return int(_triple_sum_direct(np.ascontiguousarray(gamma, dtype=np.int64) % n,
                                  np.ascontiguousarray(d_mask, dtype=np.bool_),
                                  np.ascontiguousarray(counts, dtype=np.int64),
                                  np.int64(n)))


@njit(cache=True)
def _c3_block(d_elems, gamma, g_mask, n):
    m = d_elems.shape[0]
    out = np.zeros((m, m), dtype=np.int64)
    zs = np.empty(gamma.shape[0], dtype=np.int64)
    for i in range(m):
        a = d_elems[i]
        nz = 0
        for k in range(gamma.shape[0]):
            if g_mask[(gamma[k] + a) % n]:
                zs[nz] = gamma[k]
                nz += 1
        for j in range(m):
            b = d_elems[j]
            c = 0
            for k in range(nz):
                if g_mask[(zs[k] + b) % n]:
                    c += 1
            out[i, j] = c
    return out


def c3_block(d_elems, gamma, g_mask, n):
    return _c3_block(np.ascontiguousarray(d_elems, dtype=np.int64) % n,
                     np.ascontiguousarray(gamma, dtype=np.int64) % n,
                     np.ascontiguousarray(g_mask, dtype=np.bool_),
                     np.int64(n))


@njit(cache=True)
def _c3_square_sum(gamma, d_mask, g_mask, n):
    t = gamma.shape[0]
    alphas = np.empty(t, dtype=np.int64)
    total = 0
    for i in range(t):
        m = 0
        for k in range(t):
            d = gamma[k] - gamma[i]
            if d < 0:
                d += n
            if d_mask[d]:
                alphas[m] = d
                m += 1
        for k in range(t):
            zp = gamma[k]
            w = 0
            for a in range(m):
                s = zp + alphas[a]
                if s >= n:
                    s -= n
                if g_mask[s]:
                    w += 1
            total += w * w
    return total


def c3_square_sum(gamma, d_mask, g_mask, n):
    return int(_c3_square_sum(np.ascontiguousarray(gamma, dtype=np.int64) % n,
                              np.ascontiguousarray(d_mask, dtype=np.bool_),
                              np.ascontiguousarray(g_mask, dtype=np.bool_),
                              np.int64(n)))
