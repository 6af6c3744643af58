"""Exact arithmetic mod p and p**2, and the Heilbronn subgroup of (Z/p^2)*.

All residues are canonical representatives in ``[0, modulus)``.  Scalar
operations use Python integers; array operations go through the int64
kernels, which are exact for ``p**2 < 3.03e9``.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import InvalidArgument, InvariantViolation

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def pow_mod(base, exp, modulus):
    if modulus < 2:
        raise InvalidArgument(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise InvalidArgument("exponent must be nonnegative")
    return pow(int(base), int(exp), int(modulus))


def inv_mod(x, p):
    x = int(x) % p
    if x == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(x, -1, p)


def is_prime(n):
    """Deterministic Miller-Rabin; the fixed base set is exact below 3.3e24."""
    n = int(n)
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_between(lo, hi):
    """Sorted primes p with lo <= p <= hi (sieve of Eratosthenes)."""
    if hi < 2 or hi < lo:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, int(hi ** 0.5) + 1):
        if sieve[k]:
            sieve[k * k::k] = False
    return [int(p) for p in np.flatnonzero(sieve) if p >= lo]


def primitive_root(p):
    if p == 2:
        return 1
    phi = p - 1
    factors = []
    m, q = phi, 2
    while q * q <= m:
        if m % q == 0:
            factors.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in factors):
            return g
    raise InvariantViolation(f"no primitive root found mod {p}")


@dataclass(frozen=True)
class PrimeContext:
    p: int
    psq: int = field(init=False)
    t: int = field(init=False)

    def __post_init__(self):
        p = int(self.p)
        if p == 2:
            raise InvalidArgument("p = 2 is not supported (odd primes only)")
        if p < 3 or not is_prime(p):
            raise InvalidArgument(f"{p} is not an odd prime")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "psq", p * p)
        object.__setattr__(self, "t", p - 1)

    @property
    def n(self):
        """Order of the additive group Z/p^2."""
        return self.psq


@dataclass(frozen=True)
class CrtIndex:
    a: int
    b: int
    p: int

    @property
    def value(self):
        return self.a + self.b * self.p


def crt_split(x, ctx):
    x = int(x)
    if not 0 <= x < ctx.psq:
        raise InvalidArgument(f"{x} is not a residue mod {ctx.psq}")
    return CrtIndex(x % ctx.p, x // ctx.p, ctx.p)


def crt_join(a, b, ctx):
    return int(a) + int(b) * ctx.p


@dataclass(frozen=True, eq=False)
class HeilbronnSubgroup:
    ctx: PrimeContext
    elements: np.ndarray
    bitmap: np.ndarray

    def __post_init__(self):
        self.elements.setflags(write=False)
        self.bitmap.setflags(write=False)

    @property
    def t(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return member(self, x)

    @cached_property
    def generator(self):
        """g**p mod p^2 for a primitive root g mod p; generates the cyclic group."""
        g = primitive_root(self.ctx.p)
        return pow(g, self.ctx.p, self.ctx.psq)

    def indicator(self, dtype=np.float64):
        return self.bitmap.astype(dtype)


def build_gamma(ctx):
    p, n = ctx.p, ctx.psq
    m = np.arange(1, p, dtype=np.int64)
    if n <= kernels.POWMOD_MAX_MODULUS:
        powers = kernels.powmod_array(m, p, n)
    else:
        powers = np.array([pow(int(k), p, n) for k in m], dtype=np.int64)
    elements = np.unique(powers)
    if len(elements) != p - 1:
        raise InvariantViolation(
            f"m -> m^p mod {n} not injective on [1, {p - 1}]: {len(elements)} images")
    bitmap = np.zeros(n, dtype=bool)
    bitmap[elements] = True
    return HeilbronnSubgroup(ctx, elements, bitmap)


def member(gamma, x):
    x = int(x)
    if not 0 <= x < gamma.ctx.psq:
        raise InvalidArgument(f"{x} is not a residue mod {gamma.ctx.psq}")
    return bool(gamma.bitmap[x])


def characterization_check(ctx, x):
    """Whether x^(p-1) == 1 mod p^2 (the order-(p-1) subgroup test)."""
    return pow(int(x), ctx.p - 1, ctx.psq) == 1


def literal_characterization_check(ctx, x):
    """Whether x^p == 1 mod p^2."""
    return pow(int(x), ctx.p, ctx.psq) == 1


def characterization_report(gamma):
    """Compare the generated set with both algebraic descriptions.

    Returns a dict with, for each description, whether its solution set in
    Z/p^2 coincides with Gamma and how large that set is.
    """
    ctx = gamma.ctx
    xs = np.arange(ctx.psq, dtype=np.int64)
    if ctx.psq <= kernels.POWMOD_MAX_MODULUS:
        pm1 = kernels.powmod_array(xs, ctx.p - 1, ctx.psq) == 1
        pp = kernels.powmod_array(xs, ctx.p, ctx.psq) == 1
    else:
        pm1 = np.array([characterization_check(ctx, x) for x in xs])
        pp = np.array([literal_characterization_check(ctx, x) for x in xs])
    return {
        "x^(p-1)=1": {"size": int(pm1.sum()), "coincides": bool(np.array_equal(pm1, gamma.bitmap))},
        "x^p=1": {"size": int(pp.sum()), "coincides": bool(np.array_equal(pp, gamma.bitmap))},
    }


def _as_residue_array(q, n):
    arr = np.unique(np.asarray(list(q) if not isinstance(q, np.ndarray) else q, dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise InvalidArgument(f"set elements must lie in [0, {n})")
    return arr


def is_invariant(q, gamma):
    """True iff q * Gamma == q.

    Gamma is cyclic, so q*g0 == q for a generator g0 implies closure under
    every power of g0.  Multiplication by a unit is injective, so q*g0 being
    contained in q already forces equality.
    """
    n = gamma.ctx.psq
    arr = _as_residue_array(q, n)
    if arr.size == 0:
        return True
    mask = np.zeros(n, dtype=bool)
    mask[arr] = True
    return bool(mask[(arr * gamma.generator) % n].all())


def orbit_of(x, gamma):
    n = gamma.ctx.psq
    x = int(x)
    if not 0 <= x < n:
        raise InvalidArgument(f"{x} is not a residue mod {n}")
    return np.unique((x * gamma.elements) % n)


def orbits(gamma):
    """Partition of Z/p^2 into Gamma-orbits, each a sorted int64 array."""
    n = gamma.ctx.psq
    seen = np.zeros(n, dtype=bool)
    out = []
    for x in range(n):
        if not seen[x]:
            orb = orbit_of(x, gamma)
            seen[orb] = True
            out.append(orb)
    return out
