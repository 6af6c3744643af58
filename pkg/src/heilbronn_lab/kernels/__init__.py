"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports and the environment variable
``HEILBRONN_LAB_NUMBA`` is not set to ``0``/``false``/``off``.  Both paths
compute identical integers (and floats within rounding), so tests and the
benchmark script import them side by side as ``numpy_impl`` and
``numba_impl``.
"""
import os

from . import _numpy as numpy_impl

try:  # pragma: no cover - exercised implicitly
    from . import _numba as numba_impl
    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    numba_impl = None
    HAS_NUMBA = False


def _numba_requested():
    flag = os.environ.get("HEILBRONN_LAB_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


USE_NUMBA = HAS_NUMBA and _numba_requested()

_impl = numba_impl if USE_NUMBA else numpy_impl

# int64 products stay exact while modulus**2 < 2**63
POWMOD_MAX_MODULUS = 3_037_000_499


def active_backend():
    return "numba" if USE_NUMBA else "numpy"


def powmod_array(bases, exponent, modulus):
    """Elementwise ``bases**exponent % modulus`` for an int64 array."""
    if modulus > POWMOD_MAX_MODULUS:
        raise OverflowError(f"modulus {modulus} too large for int64 kernel")
    return _impl.powmod_array(bases, exponent, modulus)


def difference_counts(ys, zs, n):
    """``out[x] = #{(y, z) : z - y == x (mod n)}`` over the two residue arrays."""
    return _impl.difference_counts(ys, zs, n)


def direct_dft(xs, vals, n):
    """O(n * len(xs)) DFT of a sparse function given by support ``xs``."""
    return _impl.direct_dft(xs, vals, n)


def horner_all(coeffs, p):
    """Evaluate ``sum_k coeffs[k] x**k mod p`` at every x in [0, p)."""
    return _impl.horner_all(coeffs, p)


def conv_on_set(points, mask, gamma, n):
    """``out[i] = #{g in gamma : mask[(points[i] - g) % n]}``."""
    return _impl.conv_on_set(points, mask, gamma, n)


def triple_sum_direct(gamma, d_mask, counts, n):
    """Sum over x, y, z in gamma of D(x-y) D(x-z) counts(y-z)."""
    return _impl.triple_sum_direct(gamma, d_mask, counts, n)


def c3_block(d_elems, gamma, g_mask, n):
    """Matrix ``C[i, k] = #{z in gamma : z + d_i, z + d_k in gamma}``."""
    return _impl.c3_block(d_elems, gamma, g_mask, n)


def c3_square_sum(gamma, d_mask, g_mask, n):
    """sum over alpha, beta in D of C_3(Gamma)(alpha, beta)^2.

    Evaluated as sum_{z, z' in Gamma} W(z, z')^2 with
    W(z, z') = #{alpha in D : z + alpha, z' + alpha in Gamma}.
    """
    return _impl.c3_square_sum(gamma, d_mask, g_mask, n)
