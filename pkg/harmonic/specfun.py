"""
Scalar special-function kernels: complex log-Gamma, Gamma ratios, Gauss 2F1.

Everything here accepts numpy arrays (broadcast) as well as plain scalars
and returns a Python ``complex`` for scalar input. No state is shared
between calls.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .conf import harmonic_settings
from .exceptions import (
    BudgetExceeded,
    DivergesAtOne,
    OutOfRange,
    ParameterPole,
    PoleOfGamma,
)

logger = logging.getLogger(__name__)

POLE_TOL = 1e-14
LOG_PI = math.log(math.pi)
HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Lanczos approximation, g = 607/128, 15 terms
LANCZOS_G = 607.0 / 128.0
LANCZOS_COEFFS = np.array([
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
])


def _as_complex(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _finish(out, scalar):
    return complex(out) if scalar else out


def pole_index(z):
    """
    Index k of the Gamma pole at -k that z sits on (within POLE_TOL), else -1.
    """
    arr = np.asarray(z, dtype=complex)
    nearest = np.round(arr.real)
    hit = (nearest <= 0) & (np.abs(arr - nearest) <= POLE_TOL)
    return np.where(hit, -nearest, -1).astype(int)


def _lanczos(z):
    # valid for Re z >= 1/2
    z = z - 1.0
    x = np.full(z.shape, LANCZOS_COEFFS[0], dtype=complex)
    for k in range(1, len(LANCZOS_COEFFS)):
        x = x + LANCZOS_COEFFS[k] / (z + k)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def _log_sin_pi(z):
    # log sin(pi z) for Im z >= 0, free of overflow for large Im z
    return np.log(0.5j) - 1j * np.pi * z + np.log1p(-np.exp(2j * np.pi * z))


def ln_gamma(z):
    """
    log Gamma(z) for complex z.

    Conjugate symmetry is exact: the lower half plane is evaluated as the
    conjugate of the upper one. Raises PoleOfGamma on non-positive integers.
    """
    arr, scalar = _as_complex(z)
    arr = np.atleast_1d(arr)

    poles = pole_index(arr)
    if (poles >= 0).any():
        raise PoleOfGamma(int(poles[poles >= 0][0]))

    lower = arr.imag < 0
    w = np.where(lower, np.conj(arr), arr)
    out = np.empty(w.shape, dtype=complex)

    reflect = w.real < 0.5
    out[~reflect] = _lanczos(w[~reflect])
    if reflect.any():
        wr = w[reflect]
        out[reflect] = LOG_PI - _log_sin_pi(wr) - _lanczos(1.0 - wr)

    out = np.where(lower, np.conj(out), out)
    return _finish(out.reshape(np.shape(z)), scalar)


def gamma(z):
    return _finish(np.exp(np.asarray(ln_gamma(z))), np.ndim(z) == 0)


def rgamma(z):
    """1/Gamma(z); exactly zero at the poles."""
    arr, scalar = _as_complex(z)
    at_pole = pole_index(arr) >= 0
    safe = np.where(at_pole, 1.0, arr)
    out = np.where(at_pole, 0.0, np.exp(-np.asarray(ln_gamma(safe))))
    return _finish(out, scalar)


def ln_gamma_ratio(numerators, denominators):
    """
    log of prod Gamma(n_i) / prod Gamma(d_j).

    A pole in a numerator raises PoleOfGamma; a pole in a denominator gives
    -inf, the log of an exact zero.
    """
    nums = [np.asarray(n, dtype=complex) for n in numerators]
    dens = [np.asarray(d, dtype=complex) for d in denominators]
    shape = np.broadcast_shapes(*(a.shape for a in nums + dens))

    total = np.zeros(shape, dtype=complex)
    dead = np.zeros(shape, dtype=bool)
    for n in nums:
        total = total + np.asarray(ln_gamma(n))
    for d in dens:
        d = np.broadcast_to(d, shape)
        at_pole = pole_index(d) >= 0
        dead = dead | at_pole
        total = total - np.asarray(ln_gamma(np.where(at_pole, 1.0, d)))
    return np.where(dead, complex(-np.inf, 0.0), total), shape == ()


def gamma_ratio(numerators, denominators):
    """prod Gamma(n_i) / prod Gamma(d_j), accumulated in log space."""
    total, scalar = ln_gamma_ratio(numerators, denominators)
    dead = np.isneginf(total.real)
    with np.errstate(over='ignore'):
        out = np.where(dead, 0.0, np.exp(np.where(dead, 0.0, total)))
    return _finish(out, scalar)


def beta(a, b):
    return gamma_ratio([a, b], [np.add(a, b)])


def pochhammer(a, n):
    """Rising factorial (a)_n for integer n >= 0."""
    if n < 0:
        raise OutOfRange(f'pochhammer needs n >= 0, got {n}')
    arr, scalar = _as_complex(a)
    out = np.ones(arr.shape, dtype=complex)
    for k in range(n):
        out = out * (arr + k)
    return _finish(out, scalar)


def gamma_residue(k):
    """Residue of Gamma at -k."""
    if k < 0:
        raise OutOfRange(f'gamma_residue needs k >= 0, got {k}')
    return (-1) ** k / math.factorial(k)


def ln_gamma_residue(k):
    """log of the residue of Gamma at -k, for k arrays where (-1)^k / k! would underflow."""
    k = np.asarray(k)
    if (k < 0).any():
        raise OutOfRange(f'gamma_residue needs k >= 0, got {k.min()}')
    return -np.asarray(ln_gamma(k + 1.0)).real + 1j * math.pi * (k % 2)


def gamma_decay_ratio(x, y):
    """|Gamma(x+iy)| over its Stirling envelope sqrt(2 pi)|y|^(x-1/2) e^(-pi|y|/2)."""
    y = abs(y)
    log_abs = ln_gamma(complex(x, y)).real
    return math.exp(log_abs - HALF_LOG_2PI - (x - 0.5) * math.log(y) + math.pi * y / 2.0)


# Gauss hypergeometric 2F1 on the real segment (-1, 1]

@dataclass(frozen=True)
class SeriesBudget:
    max_terms: int = field(default_factory=lambda: harmonic_settings.SERIES_MAX_TERMS)
    rel_tol: float = field(default_factory=lambda: harmonic_settings.SERIES_REL_TOL)

    def __post_init__(self):
        if self.max_terms <= 0 or self.max_terms > 10 ** 6:
            raise OutOfRange(f'max_terms must lie in [1, 1e6], got {self.max_terms}')
        if self.rel_tol < 8 * np.finfo(float).eps:
            raise OutOfRange(f'rel_tol below 8 eps: {self.rel_tol}')


def _hyp_series(a, b, c, z, budget):
    a, b, c, z = np.broadcast_arrays(a, b, c, z)
    term = np.ones(a.shape, dtype=complex)
    total = term.copy()
    quiet = np.zeros(a.shape, dtype=int)
    done = z == 0

    for n in range(budget.max_terms):
        if done.all():
            return total
        ratio = (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        term = np.where(done, 0.0, term * ratio)
        total = total + term
        small = np.abs(term) <= budget.rel_tol * np.abs(total)
        quiet = np.where(small & (np.abs(ratio) < 1), quiet + 1, 0)
        done = done | (quiet >= 2) | (term == 0)

    if done.all():
        return total
    raise BudgetExceeded(f'2F1 series not converged after {budget.max_terms} terms')


def _near_integer(x, tol=1e-12):
    return (np.abs(x.imag) <= tol) & (np.abs(x.real - np.round(x.real)) <= tol)


def gauss_2f1(a, b, c, z, budget=None):
    """
    2F1(a, b; c; z) for complex parameters and real z in (-1, 1].

      z <= 1/2        direct power series
      z < -1/2        Pfaff: (1-z)^-a F(a, c-b; c; z/(z-1))
      1/2 < z < 1     connection formula in 1 - z
      z == 1          Gauss summation

    The logarithmic case (c - a - b an integer) is not supported for z > 1/2
    and raises ParameterPole.
    """
    budget = budget or SeriesBudget()
    scalar = all(np.ndim(v) == 0 for v in (a, b, c, z))
    a, b, c = (np.asarray(v, dtype=complex) for v in (a, b, c))
    z = np.asarray(z, dtype=float)
    a, b, c, z = np.broadcast_arrays(a, b, c, z)
    shape = a.shape
    a, b, c, z = (v.ravel() for v in (a, b, c, z))

    if ((z <= -1) | (z > 1)).any():
        raise OutOfRange('gauss_2f1 is defined here for -1 < z <= 1')
    if (pole_index(c) >= 0).any():
        raise ParameterPole('c is a non-positive integer')

    out = np.empty(z.shape, dtype=complex)
    s = c - a - b

    direct = (z >= -0.5) & (z <= 0.5)
    if direct.any():
        out[direct] = _hyp_series(a[direct], b[direct], c[direct], z[direct], budget)

    pfaff = z < -0.5
    if pfaff.any():
        ap, bp, cp, zp = a[pfaff], b[pfaff], c[pfaff], z[pfaff]
        out[pfaff] = (1.0 - zp) ** (-ap) * _hyp_series(ap, cp - bp, cp, zp / (zp - 1.0), budget)

    at_one = z == 1
    if at_one.any():
        if (s[at_one].real <= 0).any():
            raise DivergesAtOne()
        a1, b1, c1 = a[at_one], b[at_one], c[at_one]
        out[at_one] = gamma_ratio([c1, c1 - a1 - b1], [c1 - a1, c1 - b1])

    near_one = (z > 0.5) & (z < 1)
    if near_one.any():
        an, bn, cn, sn = a[near_one], b[near_one], c[near_one], s[near_one]
        w = 1.0 - z[near_one]
        if _near_integer(sn).any():
            raise ParameterPole('c - a - b is an integer (logarithmic case)')
        first = gamma_ratio([cn, sn], [cn - an, cn - bn])
        second = gamma_ratio([cn, -sn], [an, bn])
        f1 = _hyp_series(an, bn, 1.0 - sn, w, budget)
        f2 = _hyp_series(cn - an, cn - bn, 1.0 + sn, w, budget)
        out[near_one] = first * f1 + np.exp(sn * np.log(w)) * second * f2

    if not np.isfinite(out).all():
        raise BudgetExceeded('2F1 evaluation overflowed')

    out = out.reshape(shape)
    return complex(out) if scalar else out


def quadratic_transform_check(alpha, beta_, z):
    """
    Relative defect of the quadratic transformation

        F(a, b; 2b; z) = (1-z)^(-a/2) F(a/2, b - a/2; b + 1/2; z^2 / (4(z-1)))
    """
    if not -1 < z < 1:
        raise OutOfRange(f'|z| must be < 1, got {z}')
    if z == 0:
        return 0.0
    w = z * z / (4.0 * (z - 1.0))
    if abs(w) >= 1:
        raise OutOfRange(f'transformed argument {w:.4g} outside the unit disc')

    lhs = gauss_2f1(alpha, beta_, 2 * beta_, z)
    rhs = (1.0 - z) ** (-alpha / 2.0) * gauss_2f1(alpha / 2.0, beta_ - alpha / 2.0, beta_ + 0.5, w)
    scale = abs(lhs)
    return abs(lhs - rhs) / scale if scale > 0 else abs(lhs - rhs)
