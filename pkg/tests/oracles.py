"""Independent brute-force references, pure Python (no numpy, no package code)."""
import cmath
import math
from collections import Counter


def primes_upto(n):
    return [k for k in range(2, n + 1) if all(k % d for d in range(2, math.isqrt(k) + 1))]


def gamma(p):
    return sorted({pow(m, p, p * p) for m in range(1, p)})


def correlation(a, n):
    return Counter((x - y) % n for x in a for y in a)


def energy_k(a, n, k):
    return sum(c ** k for c in correlation(a, n).values())


def quadruple_energy(a, n):
    """E(A) counted straight from its definition: a1 + b1 = a2 + b2."""
    sums = Counter((x + y) % n for x in a for y in a)
    return sum(c * c for c in sums.values())


def dft(f, n):
    return [sum(f[x] * cmath.exp(-2j * math.pi * xi * x / n) for x in range(n) if f[x])
            for xi in range(n)]


def heilbronn_sum(p, a):
    n = p * p
    return sum(cmath.exp(2j * math.pi * ((a * pow(m, p, n)) % n) / n) for m in range(1, p + 1))


def fermat_q(p, n):
    return ((pow(n, p - 1, p * p) - 1) // p) % p


def lp(p):
    n = 1
    while fermat_q(p, n) == 0:
        n += 1
    return n


def f_values(p):
    """f(x) = sum_{k=1}^{p-1} x^k / k over F_p."""
    return [sum(pow(x, k, p) * pow(k, p - 2, p) for k in range(1, p)) % p for x in range(p)]


def F_counts(p):
    c = Counter(f_values(p))
    return [c[v] for v in range(p)]


def c3(a, n, alpha, beta):
    s = set(a)
    return sum(1 for z in a if (z + alpha) % n in s and (z + beta) % n in s)


def triple_sum(a, n, d):
    s = set(d)
    corr = correlation(a, n)
    return sum(corr[(y - z) % n] for x in a for y in a for z in a
               if (x - y) % n in s and (x - z) % n in s)


def d_star_gamma(a, n, d, x):
    s = set(d)
    return sum(1 for g in a if (x - g) % n in s)
