"""
The Bochner density m(lambda, upsilon) of the spherical function restricted
to A, built from the per-orbit transform f~ and its Gamma/2F1 closed form.

upsilon is the geodesic-dual coordinate: phi_lambda(a_t) = int e^(-i upsilon t) m dupsilon.
With A = r(1 + lambda), B = r(1 - lambda) (lambda in rho units) the q = 0
density is

    m = Gamma(4r) / (4 pi Gamma(2r)^2) * Y(lambda, upsilon) Y(-lambda, upsilon)
    Y(lambda, upsilon) = Gamma(A - i upsilon/2) Gamma(A + i upsilon/2) / Gamma(2A)

and the constant makes the total mass exactly one for every lambda in the strip.
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy import integrate, stats

from .conf import harmonic_settings
from .exceptions import (
    InsufficientDecade,
    NonConvergent,
    OutOfRange,
    OutOfStrip,
)
from .quadrature import half_line_trapezoid, quad_vec_complex
from .rankone import SpectralParam
from .specfun import gamma_ratio, gauss_2f1, ln_gamma

logger = logging.getLogger(__name__)


def check_strip(space, lam):
    lam_rho = lam.rho(space)
    if abs(lam_rho.real) >= 1:
        raise OutOfStrip(f'|Re lambda| = {abs(lam_rho.real):g} >= 1 (rho units)')
    return lam_rho


# Master integral I(a, b, theta) = int_0^oo t^a / (1 + 2 t cos theta + t^2)^b dt

def _check_master(a, b, theta):
    a, b = complex(a), complex(b)
    if a.real <= -1 or (2 * b - a - 1).real <= 0:
        raise NonConvergent(f'need Re a > -1 and Re(2b - a - 1) > 0 (a={a}, b={b})')
    if not 0 <= theta <= math.pi / 2:
        raise OutOfRange(f'theta must lie in [0, pi/2], got {theta}')
    return a, b


def master_parameters(space, lam, upsilon):
    """(a, b) for which I(a, b, theta) is the orbit transform f~(lambda, upsilon, theta)."""
    big_a = space.r * (1.0 + lam.rho(space))
    return big_a - 0.5j * upsilon - 1.0, big_a


MASTER_TAIL = 1e-17


def _log_shifted(w, s):
    """log(e^w + e^(is)) on the principal branch, stable for either sign of Re w."""
    out = np.empty(w.shape, dtype=complex)
    hi = w.real > 0
    out[hi] = w[hi] + np.log1p(np.exp(1j * s - w[hi]))
    out[~hi] = 1j * s + np.log1p(np.exp(w[~hi] - 1j * s))
    return out


def _log_master_integrand(a, b, theta, phi, u):
    # t = e^(u + i phi): log(t^a (1 + 2 t cos theta + t^2)^-b dt/du)
    w = np.asarray(u, dtype=float) + 1j * phi
    log_denominator = _log_shifted(w, theta) + _log_shifted(w, -theta)
    return (a + 1.0) * w - b * log_denominator


def _contour_angle(a, b, theta, u):
    """Ray angle in the sector |phi| < pi - theta that minimises int |integrand| du."""
    phi_max = max(0.0, math.pi - theta - 0.6)
    best = None
    for phi in np.linspace(-phi_max, phi_max, 13):
        l1 = integrate.trapezoid(np.exp(_log_master_integrand(a, b, theta, phi, u).real), u)
        if best is None or l1 < best[1]:
            best = (phi, l1)
    return best


def master_integral_quad(a, b, theta, tail_tol=MASTER_TAIL):
    """
    I(a, b, theta) by adaptive quadrature in u = log t.

    The path is the ray arg t = phi, with phi chosen to keep int |integrand|
    close to |I|; the integrand is analytic in the sector |arg t| < pi - theta.
    """
    a, b = _check_master(a, b, theta)
    rate_lo = a.real + 1.0
    rate_hi = (2 * b - a - 1).real
    coarse = np.linspace(math.log(1e-20) / rate_lo, -math.log(1e-20) / rate_hi, 4001)
    phi, l1 = _contour_angle(a, b, theta, coarse)

    # tails: the integrand behaves like e^((a+1)w) at -oo and e^((a+1-2b)w) at +oo
    lower = (math.log(tail_tol * l1 * rate_lo) + a.imag * phi) / rate_lo
    upper = -(math.log(tail_tol * l1 * rate_hi) + (a + 1 - 2 * b).imag * phi) / rate_hi
    share = rate_lo / (2 * b.real)
    turning = math.log(share / (1.0 - share))
    lower, upper = min(lower, turning - 1.0), max(upper, turning + 1.0)

    def integrand(u):
        return np.exp(_log_master_integrand(a, b, theta, phi, np.atleast_1d(u)))[0]

    value, err = quad_vec_complex(integrand, lower, upper, epsabs=1e-13 * l1, epsrel=1e-10,
                                  points=(turning,))
    logger.debug(f'🔍 master integral on arg t = {phi:.3g}, u in [{lower:.3g}, {upper:.3g}], '
                 f'int|f| = {l1:.3g}, err {err:.2e}')
    return value


def master_integral_closed(a, b, theta):
    a, b = _check_master(a, b, theta)
    prefactor = gamma_ratio([a + 1.0, 2 * b - a - 1.0], [2 * b])
    if theta == 0:
        return prefactor
    z = min(math.sin(theta) ** 2, 1.0)
    return prefactor * gauss_2f1((a + 1.0) / 2.0, b - (a + 1.0) / 2.0, b + 0.5, z)


MASTER_ANGLES = (0.0, math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2)


def sample_master_parameters(rng, imag=5.0):
    """One (a, b, theta) from the acceptance grid; b keeps Re(2b - a - 1) >= 0.5."""
    a = complex(rng.uniform(-0.5, 2.0), rng.uniform(-imag, imag))
    b_re = rng.uniform(max(0.8, (a.real + 1.0) / 2.0 + 0.25), 3.0)
    b = complex(b_re, rng.uniform(-imag, imag))
    return a, b, MASTER_ANGLES[rng.integers(len(MASTER_ANGLES))]


def f_tilde(space, lam, upsilon, theta=0.0):
    """
    Orbit Fourier transform of the K-fixed vector at cross-section angle theta.
    Vectorised in upsilon.
    """
    lam_rho = check_strip(space, lam)
    if space.q == 0 and theta != 0:
        raise OutOfRange('q = 0 spaces have the single cross-section angle theta = 0')
    if not 0 <= theta <= math.pi / 2:
        raise OutOfRange(f'theta must lie in [0, pi/2], got {theta}')
    upsilon = np.asarray(upsilon, dtype=float)
    big_a = space.r * (1.0 + lam_rho)
    value = gamma_ratio([big_a - 0.5j * upsilon, big_a + 0.5j * upsilon], [2 * big_a])
    if theta == 0:
        return value
    z = min(math.sin(theta) ** 2, 1.0)
    return value * gauss_2f1(big_a / 2.0 - 0.25j * upsilon, big_a / 2.0 + 0.25j * upsilon, big_a + 0.5, z)


def _log_upsilon(r, lam_rho, upsilon):
    big_a = r * (1.0 + lam_rho)
    return (np.asarray(ln_gamma(big_a - 0.5j * upsilon))
            + np.asarray(ln_gamma(big_a + 0.5j * upsilon))
            - ln_gamma(2 * big_a))


def log_normalizer(space):
    """log of Gamma(4r) / (4 pi Gamma(2r)^2)."""
    r = space.r
    return (ln_gamma(4 * r) - 2 * ln_gamma(2 * r)).real - math.log(4 * math.pi)


@dataclass(frozen=True, eq=False)
class CrossSection:
    theta: np.ndarray
    weights: np.ndarray
    family: str

    @classmethod
    def for_space(cls, space, nodes=None, family=None):
        if space.q == 0:
            return cls(np.array([0.0]), np.array([1.0]), 'point')
        nodes = nodes or harmonic_settings.CROSS_SECTION_NODES
        family = family or harmonic_settings.CROSS_SECTION_WEIGHT
        x, w = np.polynomial.legendre.leggauss(nodes)
        theta = math.pi / 4.0 * (x + 1.0)
        w = math.pi / 4.0 * w
        if family == 'sphere':
            density = np.sin(theta) ** (space.p - 1) * np.cos(theta) ** (space.q - 1)
        elif family == 'uniform':
            density = np.ones_like(theta)
        else:
            raise OutOfRange(f"Unknown cross-section family '{family}'")
        return cls(theta, w * density, family)


@dataclass(frozen=True, eq=False)
class BochnerDensity:
    space: object
    lam: SpectralParam
    normalization: float
    closed_form: bool
    cross_section: CrossSection
    experimental: bool = False

    @property
    def lam_rho(self):
        return self.lam.rho(self.space)

    @property
    def strip_width(self):
        """Distance from the real upsilon axis to the nearest pole of m."""
        return 2.0 * self.space.r * (1.0 - abs(self.lam_rho.real))

    @property
    def decay_rate(self):
        return math.pi if self.space.q == 0 else math.pi / 2.0

    def unnormalized(self, upsilon):
        upsilon = np.asarray(upsilon, dtype=float)
        if self.closed_form:
            r, lam = self.space.r, self.lam_rho
            return np.exp(_log_upsilon(r, lam, upsilon) + _log_upsilon(r, -lam, upsilon))
        contragredient = self.lam.contragredient(self.space)
        total = np.zeros(upsilon.shape, dtype=complex)
        for theta, weight in zip(self.cross_section.theta, self.cross_section.weights):
            left = f_tilde(self.space, self.lam, upsilon, theta)
            right = f_tilde(self.space, contragredient, upsilon, theta)
            total = total + weight * left * np.conj(right)
        return total

    def log_eval(self, upsilon):
        upsilon = np.asarray(upsilon, dtype=float)
        if self.closed_form:
            r, lam = self.space.r, self.lam_rho
            return (math.log(self.normalization)
                    + _log_upsilon(r, lam, upsilon) + _log_upsilon(r, -lam, upsilon))
        return np.log(np.asarray(self(upsilon), dtype=complex))

    def __call__(self, upsilon):
        scalar = np.ndim(upsilon) == 0
        if self.closed_form:
            out = np.exp(self.log_eval(upsilon))
        else:
            out = self.normalization * self.unnormalized(upsilon)
        return complex(out) if scalar else out

    def total_mass(self, nats=None):
        nats = nats or -math.log(harmonic_settings.FOURIER_TAIL_TOL)
        upper = max(40.0, (nats + 10.0) / self.decay_rate)
        step = min(0.1, 2 * math.pi * self.strip_width / (nats + 10.0))
        nodes, weights = half_line_trapezoid(upper, step)
        return complex(np.sum(weights * self(nodes)))


def bochner_density(space, lam, cross_section=None):
    lam_rho = check_strip(space, lam)
    if space.q == 0:
        section = CrossSection.for_space(space)
        return BochnerDensity(space, lam, math.exp(log_normalizer(space)), True, section)

    section = cross_section or CrossSection.for_space(space)
    raw = BochnerDensity(space, lam, 1.0, False, section, experimental=True)
    mass = raw.total_mass()
    if abs(mass) == 0 or not np.isfinite(mass):
        raise NonConvergent(f'cross-section integral vanished for {space.label}')
    logger.warning(
        f'⚠️ {space.label} density at lambda={lam_rho:.4g} uses the experimental '
        f"'{section.family}' cross-section weight; normalised numerically"
    )
    return BochnerDensity(space, lam, 1.0 / abs(mass), False, section, experimental=True)


def density_matrix(space, lam_values, upsilon):
    """
    m(lambda_i, upsilon_j) for a family of lambdas (rho-unit complex numbers
    or SpectralParams).
    """
    upsilon = np.asarray(upsilon, dtype=float)
    params = [lam if isinstance(lam, SpectralParam) else SpectralParam(lam) for lam in lam_values]
    if space.q == 0:
        rhos = np.array([check_strip(space, lam) for lam in params])[:, None]
        log_m = (log_normalizer(space)
                 + _log_upsilon(space.r, rhos, upsilon[None, :])
                 + _log_upsilon(space.r, -rhos, upsilon[None, :]))
        return np.exp(log_m)
    return np.array([bochner_density(space, lam)(upsilon) for lam in params])


class Factorization(NamedTuple):
    upsilon_plus: complex
    upsilon_minus: complex
    h: complex


def bochner_factorization(space, lam, upsilon, density=None):
    """m = Y(lambda, upsilon) Y(-lambda, upsilon) h(lambda, upsilon)."""
    lam_rho = check_strip(space, lam)
    density = density or bochner_density(space, lam)
    plus = np.exp(_log_upsilon(space.r, lam_rho, np.asarray(upsilon, dtype=float)))
    minus = np.exp(_log_upsilon(space.r, -lam_rho, np.asarray(upsilon, dtype=float)))
    h = density(upsilon) / (plus * minus)
    if np.ndim(upsilon) == 0:
        return Factorization(complex(plus), complex(minus), complex(h))
    return Factorization(plus, minus, h)


class DecayFit(NamedTuple):
    rate: float
    r_squared: float
    intercept: float


def fit_decay_rate(density, upsilon_range, samples=81):
    """
    Exponential decay rate of m from a least-squares line through
    log|m| - (2r - 1) log(r^2 + upsilon^2/4).
    """
    lo, hi = upsilon_range
    if lo < 10 or hi - lo < 10:
        raise InsufficientDecade(f'fit range [{lo}, {hi}] must start at >= 10 and span >= 10')
    r = density.space.r
    upsilon = np.linspace(lo, hi, samples)
    log_m = np.real(density.log_eval(upsilon))
    envelope = (2 * r - 1) * np.log(r * r + upsilon ** 2 / 4.0)
    fit = stats.linregress(upsilon, log_m - envelope)
    logger.debug(f'🔍 decay fit on [{lo}, {hi}]: slope {fit.slope:.6f}, r^2 {fit.rvalue ** 2:.6f}')
    return DecayFit(-fit.slope, fit.rvalue ** 2, fit.intercept)


@dataclass(frozen=True)
class PositivityReport:
    status: str
    holds: Optional[bool]
    min_value: Optional[float]
    negative_count: int


def positivity_check(space, lam, upsilon_grid=None, threshold=-1e-10):
    lam_rho = lam.rho(space)
    if abs(lam_rho.real) > 1:
        raise OutOfRange(f'positivity is only defined for |Re lambda| <= 1, got {lam_rho}')
    if lam_rho.imag == 0 and abs(lam_rho.real) == 1:
        logger.info(f'✅ lambda = {lam_rho.real:+g}: Bochner measure is a multiple of the Dirac mass at 0')
        return PositivityReport('dirac', True, None, 0)

    grid = np.linspace(-40.0, 40.0, 801) if upsilon_grid is None else np.asarray(upsilon_grid, dtype=float)
    values = np.real(bochner_density(space, lam)(grid))
    negatives = int(np.sum(values < threshold))
    min_value = float(values.min())

    if lam_rho.real != 0 and lam_rho.imag != 0:
        return PositivityReport('unconstrained', None, min_value, negatives)
    status = 'positive' if negatives == 0 else 'negative'
    if negatives:
        logger.error(f'❌ m(lambda={lam_rho:.4g}) negative at {negatives} grid points (min {min_value:.3e})')
    return PositivityReport(status, negatives == 0, min_value, negatives)
