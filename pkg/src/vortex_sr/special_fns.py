"""Laguerre functions, generalized Laguerre polynomials and Bessel functions.

The Laguerre functions

    I_{n,s}(x) = sqrt(s!/n!) exp(-x/2) x^((n-s)/2) Q_s^(n-s)(x),   n >= s,

are the radial overlap functions of Landau states.  For n < s the analytic
continuation of the same expression is used, which is equivalent to the
symmetry ``I_{n,s} = (-1)^(n-s) I_{s,n}``.  A negative index gives 0.

Large indices are handled by running the three-term recurrence on the
*normalized* functions at fixed superscript ``m = |n - s|``,

    sqrt((k+1)(k+m+1)) phi_{k+1} = (2k+m+1-x) phi_k - sqrt(k(k+m)) phi_{k-1},

with a floating mantissa and a separate base-2 exponent; the starting value
``phi_0 = exp(-x/2) x^(m/2) / sqrt(m!)`` is kept in log space.

Bessel functions of integer order use Miller's backward recurrence for
``x < nu`` and upward recurrence from J_0, J_1 otherwise.  All kernels are
pure and thread-safe.
"""

import math

import mpmath
import numpy as np
from numba import njit
from scipy.special import gammaln, jv

from .errors import PrecisionError

__all__ = [
    "generalized_laguerre",
    "laguerre_function",
    "laguerre_function_oracle",
    "bessel_j",
    "bessel_j_prime",
    "bessel_j_and_prime",
    "bessel_j_oracle",
]

_LN2 = math.log(2.0)


# recompute in double-double when intermediate values exceed the result by
# this factor (cancellation near a root of the polynomial)
_CANCEL_RATIO = 16.0


@njit(cache=True)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit(cache=True)
def _split(a):
    c = 134217729.0 * a
    hi = c - (c - a)
    return hi, a - hi


@njit(cache=True)
def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


@njit(cache=True)
def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e += ah * bl + al * bh
    return _two_sum(p, e)


@njit(cache=True)
def _dd_sub(ah, al, bh, bl):
    s, e = _two_sum(ah, -bh)
    e += al - bl
    return _two_sum(s, e)


@njit(cache=True)
def _dd_div_d(ah, al, b):
    q1 = ah / b
    p1, p2 = _two_prod(q1, b)
    s, e = _two_sum(ah, -p1)
    e = e - p2 + al
    return _two_sum(q1, (s + e) / b)


@njit(cache=True)
def _laguerre_dd(degree, m, x):
    """Unnormalized L_degree^(m)(x) in double-double: (mantissa, power-of-2 exponent).

    The three-term coefficients are exact integers and 2k+m+1-x is formed
    exactly, so only the arithmetic rounds (at ~1e-32).
    """
    ph, pl = 1.0, 0.0
    qh, ql = 0.0, 0.0
    e = 0
    for k in range(degree):
        ch, cl = _two_sum(2.0 * k + m + 1.0, -x)
        th, tl = _dd_mul(ch, cl, ph, pl)
        uh, ul = _dd_mul(k + m + 0.0, 0.0, qh, ql)
        th, tl = _dd_sub(th, tl, uh, ul)
        qh, ql = ph, pl
        ph, pl = _dd_div_d(th, tl, k + 1.0)
        big = max(abs(ph), abs(qh))
        if big > 1e100 or (big < 1e-100 and big > 0.0):
            sh = int(math.floor(math.log2(big)))
            ph, pl = math.ldexp(ph, -sh), math.ldexp(pl, -sh)
            qh, ql = math.ldexp(qh, -sh), math.ldexp(ql, -sh)
            e += sh
    return ph + pl, e


@njit(cache=True)
def _normalized_laguerre_kernel(degree, m, x, mant, expo, shift):
    # shift[i] is an extra log-factor for entries computed by the fallback
    log_norm = 0.5 * (math.lgamma(degree + 1.0) + math.lgamma(m + 1.0) - math.lgamma(degree + m + 1.0))
    for i in range(x.size):
        xi = x[i]
        p_prev = 0.0
        p = 1.0
        e = 0
        peak = 1.0
        for k in range(degree):
            p_next = ((2.0 * k + m + 1.0 - xi) * p
                      - math.sqrt(k * (k + m)) * p_prev) / math.sqrt((k + 1.0) * (k + m + 1.0))
            p_prev = p
            p = p_next
            big = max(abs(p), abs(p_prev))
            peak = max(peak, big)
            if (k + 1) % 64 == 0 or big > 1e250:  # renormalize every 64 steps
                if big > 0.0:
                    sh = int(math.floor(math.log2(big)))
                    p = math.ldexp(p, -sh)
                    p_prev = math.ldexp(p_prev, -sh)
                    peak = math.ldexp(peak, -sh)
                    e += sh
        if degree > 1 and peak > _CANCEL_RATIO * abs(p):
            p, e = _laguerre_dd(degree, m, xi)
            shift[i] = log_norm
        else:
            shift[i] = 0.0
        mant[i] = p
        expo[i] = e


def _log_phi0(m, x):
    """log of exp(-x/2) x^(m/2) / sqrt(m!); -inf where x == 0 and m > 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        if m == 0:
            return -0.5 * x
        return -0.5 * x + 0.5 * m * np.log(x) - 0.5 * gammaln(m + 1.0)


def laguerre_function(n, s, x):
    """Laguerre function I_{n,s}(x).

    Parameters
    ----------
    n, s : int
        Indices.  Negative indices return 0; ``n < s`` uses the symmetry
        extension.
    x : float or array_like
        Argument, ``x >= 0``.

    Returns
    -------
    float or numpy.ndarray
        Same shape as `x`.
    """
    n = int(n)
    s = int(s)
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise ValueError("Laguerre function argument must be >= 0")
    if n < 0 or s < 0:
        out = np.zeros_like(xa)
        return out if out.ndim else float(out)
    m = abs(n - s)
    degree = min(n, s)
    flat = np.ascontiguousarray(xa.ravel())
    mant = np.empty_like(flat)
    expo = np.empty(flat.shape, dtype=np.int64)
    shift = np.empty_like(flat)
    _normalized_laguerre_kernel(degree, m, flat, mant, expo, shift)
    with np.errstate(divide="ignore"):
        log_mag = np.log(np.abs(mant)) + expo * _LN2 + shift + _log_phi0(m, flat)
    out = np.sign(mant) * np.exp(log_mag)
    if n < s and m % 2:
        out = -out
    out = out.reshape(xa.shape)
    return out if out.ndim else float(out)


def generalized_laguerre(s, l, x):
    """Generalized Laguerre polynomial Q_s^l(x) (the standard L_s^(l)).

    The value at x = 0 is returned exactly as the binomial coefficient
    C(s+l, s).

    Raises
    ------
    OverflowError
        If the value exceeds the double range.
    """
    s = int(s)
    l = int(l)
    if s < 0 or l < 0:
        raise ValueError(f"need s >= 0 and l >= 0, got s={s}, l={l}")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise ValueError("generalized Laguerre argument must be >= 0")

    def _range_error():
        return OverflowError(f"Q_{s}^{l}(x) out of double range (s={s}, l={l}, max x={xa.max() if xa.size else 0})")

    if s == 0:
        out = np.ones_like(xa)
    else:
        prev = np.ones_like(xa)
        cur = l + 1.0 - xa
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(1, s):
                prev, cur = cur, ((2 * k + l + 1 - xa) * cur - (k + l) * prev) / (k + 1)
        out = cur
    at_zero = xa == 0
    if np.any(at_zero):
        exact = math.comb(s + l, s)
        try:
            out = np.where(at_zero, float(exact), out)
        except OverflowError:
            raise _range_error() from None
    if not np.all(np.isfinite(out)):
        raise _range_error()
    return out if out.ndim else float(out)


def laguerre_function_oracle(n, s, x, precision_digits=30):
    """Arbitrary-precision reference value of I_{n,s}(x).

    Sums the polynomial term by term in mpmath with ``precision_digits + 10``
    digits plus the digits lost to cancellation (measured as the ratio of
    the sum of absolute terms to the result), then again at twice that, and
    requires the two to agree to `precision_digits`.  Validation scale only
    (n, s <= 200).

    Returns
    -------
    mpmath.mpf
    """
    n = int(n)
    s = int(s)
    if n > 200 or s > 200:
        raise ValueError("oracle is limited to n, s <= 200")
    if precision_digits < 1:
        raise ValueError("precision_digits must be >= 1")
    if x < 0:
        raise ValueError("x must be >= 0")
    if n < 0 or s < 0:
        return mpmath.mpf(0)

    def _evaluate(dps):
        with mpmath.workdps(dps):
            xm = mpmath.mpf(x)
            hi, lo = max(n, s), min(n, s)
            m = hi - lo
            terms = [mpmath.binomial(lo + m, lo - j) * xm ** j / mpmath.factorial(j) for j in range(lo + 1)]
            poly = mpmath.fsum((-1) ** j * t for j, t in enumerate(terms))
            lost = mpmath.log10(mpmath.fsum(terms) / abs(poly)) if poly != 0 else mpmath.mpf(dps)
            if m == 0:
                power = mpmath.mpf(1)
            else:
                power = xm ** (mpmath.mpf(m) / 2)
            val = mpmath.sqrt(mpmath.factorial(lo) / mpmath.factorial(hi)) * mpmath.exp(-xm / 2) * power * poly
            if n < s and m % 2:
                val = -val
            return +val, int(lost) + 1

    d1 = precision_digits + 10
    v1, lost = _evaluate(d1)
    for _ in range(4):
        if d1 >= precision_digits + 10 + lost:
            break
        d1 = precision_digits + 10 + lost
        v1, lost = _evaluate(d1)
    v2, _ = _evaluate(2 * d1)
    with mpmath.workdps(2 * d1):
        scale = max(abs(v2), mpmath.mpf(10) ** (-2 * d1))
        if abs(v1 - v2) > mpmath.mpf(10) ** (-precision_digits) * scale:
            raise PrecisionError(
                f"oracle I_{{{n},{s}}}({x}) disagrees between {d1} and {2 * d1} digits: "
                f"{mpmath.nstr(v1, 20)} vs {mpmath.nstr(v2, 20)}"
            )
    return v2


@njit(cache=True)
def _bessel_miller_kernel(nu, x, jm1, j, jp1):
    for i in range(x.size):
        xi = x[i]
        top = max(nu, int(xi)) + 1
        start = 2 * ((top + int(math.sqrt(160.0 * top)) + 16) // 2)
        tp = 0.0
        t = 1.0
        total = 0.0
        sm1 = 0.0
        s0 = 0.0
        sp1 = 0.0
        for k in range(start - 1, -1, -1):
            tm = 2.0 * (k + 1) / xi * t - tp
            tp = t
            t = tm
            if abs(t) > 1e250:
                t *= 1e-250
                tp *= 1e-250
                total *= 1e-250
                sm1 *= 1e-250
                s0 *= 1e-250
                sp1 *= 1e-250
            if k > 0 and k % 2 == 0:
                total += 2.0 * t
            if k == nu + 1:
                sp1 = t
            elif k == nu:
                s0 = t
            elif k == nu - 1:
                sm1 = t
        total += t
        jm1[i] = sm1 / total
        j[i] = s0 / total
        jp1[i] = sp1 / total


@njit(cache=True)
def _bessel_upward_kernel(nu, x, b0, b1, jm1, j, jp1):
    for i in range(x.size):
        xi = x[i]
        prev = b0[i]
        cur = b1[i]
        if nu == 0:
            jm1[i] = -cur
            j[i] = prev
            jp1[i] = cur
            continue
        for k in range(1, nu + 1):
            nxt = 2.0 * k / xi * cur - prev
            if k == nu:
                jm1[i] = prev
                j[i] = cur
                jp1[i] = nxt
            prev = cur
            cur = nxt


# below this argument three series terms are exact to double precision and
# the downward recurrence would overflow on its first step
_BESSEL_SERIES_X = 1e-5


def _bessel_small(m, x):
    """Leading series terms of J_m(x) for tiny x."""
    h2 = 0.25 * x * x
    if m > 170:  # (x/2)^m underflows long before m! overflows
        return np.zeros_like(x)
    lead = np.power(0.5 * x, m) / math.factorial(m)
    return lead * (1.0 - h2 / (m + 1) + h2 * h2 / (2.0 * (m + 1) * (m + 2)))


def _bessel_triplet(nu, x):
    """J_{nu-1}, J_nu, J_{nu+1} at x (J_{-1} = -J_1)."""
    nu = int(nu)
    if nu < 0:
        raise ValueError("Bessel order must be >= 0")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or not np.all(np.isfinite(xa)):
        raise ValueError("Bessel argument must be finite and >= 0")
    flat = np.ascontiguousarray(xa.ravel())
    jm1 = np.zeros_like(flat)
    jj = np.zeros_like(flat)
    jp1 = np.zeros_like(flat)

    zero = flat == 0.0
    tiny = (flat < _BESSEL_SERIES_X) & ~zero
    miller = (flat < nu) & ~zero & ~tiny
    upward = (flat >= nu) & ~zero & ~tiny
    if np.any(tiny):
        xs = flat[tiny]
        jm1[tiny] = _bessel_small(nu - 1, xs) if nu > 0 else -_bessel_small(1, xs)
        jj[tiny] = _bessel_small(nu, xs)
        jp1[tiny] = _bessel_small(nu + 1, xs)
    if np.any(miller):
        xs = flat[miller]
        a, b, c = np.empty_like(xs), np.empty_like(xs), np.empty_like(xs)
        _bessel_miller_kernel(nu, xs, a, b, c)
        jm1[miller], jj[miller], jp1[miller] = a, b, c
    if np.any(upward):
        xs = flat[upward]
        a, b, c = np.empty_like(xs), np.empty_like(xs), np.empty_like(xs)
        _bessel_upward_kernel(nu, xs, jv(0, xs), jv(1, xs), a, b, c)
        jm1[upward], jj[upward], jp1[upward] = a, b, c
    if nu == 0:
        jj[zero] = 1.0
    elif nu == 1:
        jm1[zero] = 1.0
    shape = xa.shape
    return jm1.reshape(shape), jj.reshape(shape), jp1.reshape(shape)


def bessel_j_and_prime(nu, x):
    """J_nu(x) and dJ_nu/dx from one recurrence sweep.

    The derivative uses ``J'_nu = (J_{nu-1} - J_{nu+1}) / 2``.
    """
    jm1, jj, jp1 = _bessel_triplet(nu, x)
    jprime = 0.5 * (jm1 - jp1)
    if jj.ndim == 0:
        return float(jj), float(jprime)
    return jj, jprime


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x), integer nu >= 0, x >= 0."""
    return bessel_j_and_prime(nu, x)[0]


def bessel_j_prime(nu, x):
    """Derivative dJ_nu/dx."""
    return bessel_j_and_prime(nu, x)[1]


def bessel_j_oracle(nu, x, precision_digits=30):
    """Power-series reference value of J_nu(x) in arbitrary precision.

    The working precision grows with `x` to absorb the cancellation in the
    alternating series; two precisions must agree to `precision_digits`.
    """
    nu = int(nu)
    if nu < 0 or x < 0:
        raise ValueError("need nu >= 0 and x >= 0")

    def _evaluate(dps):
        with mpmath.workdps(dps):
            h = mpmath.mpf(x) / 2
            term = h ** nu / mpmath.factorial(nu)
            total = term
            k = 0
            h2 = h * h
            while True:
                k += 1
                term = -term * h2 / (k * (k + nu))
                total += term
                if k > h and abs(term) < mpmath.mpf(10) ** (-dps) * max(abs(total), mpmath.mpf(10) ** (-dps)):
                    break
            return +total

    d1 = precision_digits + 10 + int(x / 2.3) + nu // 10
    v1 = _evaluate(d1)
    v2 = _evaluate(2 * d1)
    with mpmath.workdps(2 * d1):
        if abs(v1 - v2) > mpmath.mpf(10) ** (-precision_digits) * max(abs(v2), mpmath.mpf(10) ** (-2 * d1)):
            raise PrecisionError(f"Bessel oracle J_{nu}({x}) not self-consistent")
    return v2
