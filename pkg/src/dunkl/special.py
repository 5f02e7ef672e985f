"""Special functions for the rank-one closed forms.

``hyp1f1`` sums the Kummer series in extended precision for |z| <= 30 and
uses the two-term large-argument expansion beyond.  The normalized Bessel
function j_a(z) = Gamma(a+1) sum (-1)^n (z/2)^{2n} / (n! Gamma(n+a+1)) is
taken from scipy's J and I functions on the real and imaginary axes.
"""

from __future__ import annotations

import mpmath
import numpy as np
from scipy.special import gammaln, ive, jv

from .errors import ConfigurationError

SERIES_RADIUS = 30.0


def _to_mp(z):
    z = complex(z)
    return mpmath.mpc(z.real, z.imag) if z.imag else mpmath.mpf(z.real)


def hyp1f1_series(a, b, z, tol=1e-17, max_terms=100000):
    """Kummer series M(a, b, z) with term-ratio stopping, summed at raised precision."""
    if b <= 0 and float(b) == int(b):
        raise ConfigurationError("1F1 undefined for b a nonpositive integer")
    dps = 20 + int(2 * abs(complex(z)) / 2.3)
    with mpmath.workdps(dps):
        a_, b_, z_ = mpmath.mpf(float(a)), mpmath.mpf(float(b)), _to_mp(z)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        n = 0
        while n < max_terms:
            term = term * (a_ + n) / (b_ + n) * z_ / (n + 1)
            total += term
            n += 1
            if term == 0 or (n > abs(complex(z)) and abs(term) <= tol * abs(total)):
                break
        return complex(total) if isinstance(total, mpmath.mpc) else float(total)


def _asymptotic_mp(a, b, z, tol):
    a_, b_, z_ = mpmath.mpf(float(a)), mpmath.mpf(float(b)), mpmath.mpc(z)

    def series(p, q, w):
        total, term, prev = mpmath.mpf(1), mpmath.mpf(1), mpmath.inf
        s = 0
        while True:
            term = term * (p + s) * (q + s) / ((s + 1) * w)
            s += 1
            if abs(term) >= prev or s > 200:
                break
            total += term
            prev = abs(term)
            if prev <= tol * abs(total):
                break
        return total

    sign = 1 if mpmath.im(z_) >= 0 else -1
    first = mpmath.gamma(b_) * mpmath.rgamma(a_) * mpmath.exp(z_) * z_ ** (a_ - b_) \
        * series(1 - a_, b_ - a_, z_)
    second = mpmath.gamma(b_) * mpmath.rgamma(b_ - a_) * mpmath.exp(sign * 1j * mpmath.pi * a_) \
        * z_ ** (-a_) * series(a_, a_ - b_ + 1, -z_)
    return first + second


def hyp1f1_asymptotic(a, b, z, tol=1e-17):
    """Two-term large-|z| expansion, optimally truncated.

    M(a,b,z) ~ G(b)/G(a) e^z z^{a-b} sum (1-a)_s (b-a)_s / s! z^{-s}
             + G(b)/G(b-a) e^{+-i pi a} z^{-a} sum (a)_s (a-b+1)_s / s! (-z)^{-s},
    upper sign for Im z >= 0.
    """
    with mpmath.workdps(30):
        return complex(_asymptotic_mp(a, b, complex(z), tol))


def hyp1f1(a, b, z):
    """Confluent hypergeometric function 1F1(a; b; z) for real a, b and complex z."""
    zc = complex(z)
    if abs(zc) <= SERIES_RADIUS:
        return hyp1f1_series(a, b, zc)
    with mpmath.workdps(30):
        if zc.real < 0:
            # Kummer transformation keeps the expansion on Re z >= 0
            value = mpmath.exp(mpmath.mpc(zc)) * _asymptotic_mp(b - a, b, -zc, 1e-17)
        else:
            value = _asymptotic_mp(a, b, zc, 1e-17)
        value = complex(value)
    return value.real if zc.imag == 0 else value


def bessel_j_normalized(alpha, z):
    """j_alpha(z) for a complex scalar z, at raised precision."""
    with mpmath.workdps(30 + int(abs(complex(z)))):
        return complex(mpmath.gamma(alpha + 1) * mpmath.besselj(alpha, _to_mp(z))
                       * (2 / _to_mp(z)) ** alpha) if z != 0 else 1.0


def j_real(alpha: float, s):
    """j_alpha(s) for real s (array), via J_alpha; even in s."""
    s = np.abs(np.asarray(s, dtype=float))
    out = np.ones_like(s)
    nz = s > 1e-6
    lg = gammaln(alpha + 1)
    out[nz] = np.exp(lg + alpha * np.log(2.0 / s[nz])) * jv(alpha, s[nz])
    small = ~nz
    if small.any():
        q = (s[small] / 2) ** 2
        out[small] = 1 - q / (alpha + 1) + q * q / (2 * (alpha + 1) * (alpha + 2))
    return out


def j_imag_scaled(alpha: float, u):
    """e^{-|u|} j_alpha(i u) for real u (array), via the scaled I_alpha; even in u."""
    u = np.abs(np.asarray(u, dtype=float))
    out = np.empty_like(u)
    nz = u > 1e-6
    lg = gammaln(alpha + 1)
    out[nz] = np.exp(lg + alpha * np.log(2.0 / u[nz])) * ive(alpha, u[nz])
    small = ~nz
    if small.any():
        q = (u[small] / 2) ** 2
        out[small] = (1 + q / (alpha + 1) + q * q / (2 * (alpha + 1) * (alpha + 2))) * np.exp(-u[small])
    return out


def rank_one_kernel_scaled(k: float, u):
    """e^{-|u|} E_k(u) for real u = x*y, with E_k(u) = j_{k-1/2}(iu) + u/(2k+1) j_{k+1/2}(iu)."""
    k = float(k)
    u = np.asarray(u, dtype=float)
    return j_imag_scaled(k - 0.5, u) + u / (2 * k + 1) * j_imag_scaled(k + 0.5, u)


def rank_one_kernel_real(k: float, u):
    u = np.asarray(u, dtype=float)
    return rank_one_kernel_scaled(k, u) * np.exp(np.abs(u))


def rank_one_kernel_imag(k: float, s):
    """E_k(i s) for real s: j_{k-1/2}(s) + i s/(2k+1) j_{k+1/2}(s)."""
    k = float(k)
    s = np.asarray(s, dtype=float)
    return j_real(k - 0.5, s) + 1j * s / (2 * k + 1) * j_real(k + 0.5, s)


def rank_one_kernel(k, z):
    """E_k(z) = E_k(1, z) in rank one for complex scalar z (E_k(x, y) depends on x y only)."""
    zc = complex(z)
    if zc.imag == 0:
        return float(rank_one_kernel_real(k, zc.real))
    if zc.real == 0:
        return complex(rank_one_kernel_imag(k, zc.imag))
    return complex(mpmath.exp(_to_mp(zc)) * _to_mp(hyp1f1(k, 2 * float(k) + 1, -2 * zc)))


def rank_one_kernel_1f1(k, z):
    """Oracle form e^{z} 1F1(k, 2k+1, -2z)."""
    zc = complex(z)
    return complex(mpmath.exp(_to_mp(zc)) * _to_mp(hyp1f1(k, 2 * float(k) + 1, -2 * zc)))


