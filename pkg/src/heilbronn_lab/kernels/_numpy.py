"""Vectorized numpy implementations of the hot kernels."""
import numpy as np

# rows of an outer-difference block; bounds scratch memory to ~32 MB
_BLOCK = 1 << 22


def _chunk_rows(ncols):
    return max(1, _BLOCK // max(1, ncols))


def powmod_array(bases, exponent, modulus):
    base = np.asarray(bases, dtype=np.int64) % modulus
    result = np.ones_like(base) % modulus
    e = int(exponent)
    while e > 0:
        if e & 1:
            result = (result * base) % modulus
        e >>= 1
        if e:
            base = (base * base) % modulus
    return result


def difference_counts(ys, zs, n):
    ys = np.asarray(ys, dtype=np.int64)
    zs = np.asarray(zs, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    step = _chunk_rows(len(zs))
    for lo in range(0, len(ys), step):
        diff = (zs[None, :] - ys[lo:lo + step, None]) % n
        out += np.bincount(diff.ravel(), minlength=n)
    return out


def direct_dft(xs, vals, n):
    xs = np.asarray(xs, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.complex128)
    k = np.arange(n, dtype=np.float64) * (-2.0 * np.pi / n)
    table = np.cos(k) + 1j * np.sin(k)
    out = np.empty(n, dtype=np.complex128)
    step = _chunk_rows(len(xs))
    xi = np.arange(n, dtype=np.int64)
    for lo in range(0, n, step):
        idx = (xi[lo:lo + step, None] * xs[None, :]) % n
        out[lo:lo + step] = table[idx] @ vals
    return out


def horner_all(coeffs, p):
    coeffs = np.asarray(coeffs, dtype=np.int64)
    x = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in coeffs[::-1]:
        acc = (acc * x + c) % p
    return acc


def conv_on_set(points, mask, gamma, n):
    points = np.asarray(points, dtype=np.int64)
    gamma = np.asarray(gamma, dtype=np.int64)
    out = np.empty(len(points), dtype=np.int64)
    step = _chunk_rows(len(gamma))
    for lo in range(0, len(points), step):
        diff = (points[lo:lo + step, None] - gamma[None, :]) % n
        out[lo:lo + step] = mask[diff].sum(axis=1)
    return out


def triple_sum_direct(gamma, d_mask, counts, n):
    # sum_x (V M)[x, z] V[x, z] with V[x, y] = D(x - y), M[y, z] = counts(y - z)
    gamma = np.asarray(gamma, dtype=np.int64)
    diff = (gamma[:, None] - gamma[None, :]) % n
    v = d_mask[diff].astype(np.int64)
    m = np.asarray(counts, dtype=np.int64)[diff]
    return int(((v @ m) * v).sum())


def c3_block(d_elems, gamma, g_mask, n):
    d_elems = np.asarray(d_elems, dtype=np.int64)
    gamma = np.asarray(gamma, dtype=np.int64)
    out = np.zeros((len(d_elems), len(d_elems)), dtype=np.int64)
    for i, a in enumerate(d_elems):
        zs = gamma[g_mask[(gamma + a) % n]]
        if len(zs) == 0:
            continue
        step = _chunk_rows(len(d_elems))
        for lo in range(0, len(zs), step):
            hit = g_mask[(zs[lo:lo + step, None] + d_elems[None, :]) % n]
            out[i] += hit.sum(axis=0)
    return out


def c3_square_sum(gamma, d_mask, g_mask, n):
    gamma = np.asarray(gamma, dtype=np.int64)
    total = 0
    for z in gamma:
        alphas = (gamma - z) % n
        alphas = alphas[d_mask[alphas]]
        if alphas.size == 0:
            continue
        w = np.zeros(len(gamma), dtype=np.int64)
        step = _chunk_rows(len(gamma))
        for lo in range(0, len(alphas), step):
            w += g_mask[(alphas[lo:lo + step, None] + gamma[None, :]) % n].sum(axis=0)
        total += int((w * w).sum())
    return total
