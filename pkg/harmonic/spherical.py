"""
Spherical function evaluation.

Three routes, all in the geodesic coordinate t:

    bochner_fourier   phi(t) = int e^(-i upsilon t) m(lambda, upsilon) dupsilon, any |Im t| < pi
    hc_series         Harish-Chandra residue series, q = 0, t > 0, lambda off the pole set
    oracle            K-integral quadrature (rankone.spherical_oracle)
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .bochner import bochner_density, check_strip
from .conf import harmonic_settings
from .exceptions import (
    NeedMoreTerms,
    OutOfRange,
    OutsideTube,
    SlowConvergence,
    SpectralPole,
    UnsupportedSpace,
)
from .quadrature import half_line_trapezoid
from .rankone import (
    SL2,
    Method,
    SpectralParam,
    SphericalValue,
    TubePoint,
    spherical_oracle,
)
from .specfun import gamma_ratio, ln_gamma_ratio, ln_gamma_residue

logger = logging.getLogger(__name__)

BOUNDARY_BAND = 0.02


def _tube_coordinate(t):
    return complex(t.t) if isinstance(t, TubePoint) else complex(t)


def _fourier_grid(density, x_extent, height, nats):
    """Truncation U and step h for the trapezoid rule on [0, U]."""
    gap = density.decay_rate - height
    if gap <= 0:
        raise OutsideTube(f'|Im t| = {height:g} outside the convergence tube of {density.space.label}')
    shift = abs(density.lam.geodesic(density.space).real)
    upper = max(40.0, (nats + 10.0) / gap) + shift
    step = min(harmonic_settings.FOURIER_STEP,
               2.0 * math.pi / (x_extent + 40.0),
               2.0 * math.pi * density.strip_width / (nats + 10.0))
    return upper, step, gap


def _damped_samples(density, upsilon, x, y):
    """m(u) [cos(u x) cosh(u y) - i sin(u x) sinh(u y)] without overflow in cosh."""
    if density.closed_form:
        log_m = density.log_eval(upsilon)
        grow = np.exp(log_m + y * upsilon)
        shrink = np.exp(log_m - y * upsilon)
    else:
        m = density(upsilon)
        grow = m * np.exp(y * upsilon)
        shrink = m * np.exp(-y * upsilon)
    cosh_part = 0.5 * (grow + shrink)
    sinh_part = 0.5 * (grow - shrink)
    return np.cos(upsilon * x) * cosh_part - 1j * np.sin(upsilon * x) * sinh_part


def _damped_modulus(density, upsilon, y):
    """|m(u)| cosh(u y) in log space; nodes where m underflows to zero contribute nothing."""
    if density.closed_form:
        log_m = density.log_eval(upsilon).real
    else:
        with np.errstate(divide='ignore'):
            log_m = np.log(np.abs(density(upsilon)))
    log_terms = log_m + np.logaddexp(y * upsilon, -y * upsilon) - math.log(2.0)
    out = np.zeros(log_terms.shape)
    keep = np.isfinite(log_terms)
    out[keep] = np.exp(log_terms[keep])
    return out


def phi_via_bochner(space, lam, t, tol=None, strict=True, density=None):
    """
    phi_lambda(t) for complex t in the tube |Im t| < pi.

    The even integrand is summed with the trapezoid rule on [0, U]; the rule
    converges geometrically because m is analytic in a strip around the real
    axis. abs_err combines the halving estimate and the tail bound.
    """
    t = _tube_coordinate(t)
    x, y = t.real, t.imag
    height = abs(y)
    if height >= math.pi:
        raise OutsideTube(f'|Im t| = {height:g} >= pi')

    density = density or bochner_density(space, lam)
    tol = tol or harmonic_settings.FOURIER_TAIL_TOL
    nats = -math.log(tol)
    upper, step, gap = _fourier_grid(density, abs(x), height, nats)

    # grow U until the tail bound meets tol
    for _ in range(20):
        edge = abs(_damped_samples(density, np.array([upper]), x, y)[0])
        tail = 2.0 * edge / gap
        if tail <= tol:
            break
        upper *= 1.5

    nodes, weights = half_line_trapezoid(upper, step)
    samples = _damped_samples(density, nodes, x, y)
    fine = np.sum(weights * samples)
    coarse_weights = 2.0 * weights[::2]
    coarse_weights[0] = 2.0 * step
    coarse = np.sum(coarse_weights * samples[::2])

    scale = max(abs(fine), 1e-300)
    halving = abs(fine - coarse) ** 2 / scale
    rounding = 1e-15 * float(np.sum(np.abs(weights * samples)))
    abs_err = halving + rounding + tail
    logger.debug(f'🔍 bochner route t={t}: U={upper:.1f} h={step:.3g} nodes={nodes.size} err={abs_err:.2e}')

    if math.pi - height < BOUNDARY_BAND:
        result = SphericalValue(complex(fine), Method.BOCHNER_FOURIER, 10.0 * abs_err + tail)
        if strict:
            raise SlowConvergence(result, f'|Im t| = {height:g} is within {BOUNDARY_BAND} of pi')
        logger.warning(f'⚠️ t = {t} is within {BOUNDARY_BAND} of the tube boundary; error estimate enlarged')
        return result
    return SphericalValue(complex(fine), Method.BOCHNER_FOURIER, float(abs_err))


def phi_bochner_grid(density, t_values, tol=None):
    """phi on a vector of real t, sharing one trapezoid grid (a cosine transform)."""
    t_values = np.asarray(t_values, dtype=float)
    tol = tol or harmonic_settings.FOURIER_TAIL_TOL
    nats = -math.log(tol)
    extent = float(np.max(np.abs(t_values))) if t_values.size else 0.0
    upper, step, _ = _fourier_grid(density, extent, 0.0, nats)
    nodes, weights = half_line_trapezoid(upper, step)
    weighted = weights * density(nodes)
    return np.cos(np.outer(t_values, nodes)) @ weighted


# Harish-Chandra residue series (q = 0)

@dataclass(frozen=True)
class HcSeriesTerm:
    k: int
    weyl_sign: int
    coefficient: complex
    exponent: float
    frequency: float

    def value(self, t):
        return self.coefficient * np.exp(-(self.exponent + 1j * self.frequency) * t)


def _series_parameters(space, lam):
    if space.q != 0:
        raise UnsupportedSpace(f'Series coefficients are only available for q = 0, not {space.label}')
    lam_rho = check_strip(space, lam)
    lam_alpha = lam_rho * space.rho_alpha
    if abs(lam_alpha) < 1e-12:
        raise SpectralPole('lambda = 0 gives double poles; use the Bochner route')
    if abs(lam_alpha.imag) < 1e-12 and abs(lam_alpha.real - round(lam_alpha.real)) < 1e-12:
        raise SpectralPole(f'lambda_alpha = {lam_alpha.real:g} is an integer')
    r = space.r
    return r * (1.0 + lam_rho), r * (1.0 - lam_rho)


def _family(r, first, second, terms, sign):
    """Residues of Gamma(first - i upsilon/2) contributing e^(-2(k + first) t)."""
    k = np.arange(terms)
    log_coefficients = ln_gamma_residue(k) + ln_gamma_ratio(
        [4 * r, 2 * first + k, 2 * r + k, second - first - k],
        [2 * r, 2 * second, 2 * first, 2 * r],
    )[0]
    coefficients = np.exp(log_coefficients)
    return [HcSeriesTerm(int(j), sign, complex(c), (2.0 * (j + first)).real, (2.0 * (j + first)).imag)
            for j, c in zip(k, coefficients)]


def hc_series_terms(space, lam, terms):
    big_a, big_b = _series_parameters(space, lam)
    r = space.r
    return _family(r, big_a, big_b, terms, -1) + _family(r, big_b, big_a, terms, +1)


@lru_cache(maxsize=None)
def series_calibration():
    """The single global constant: oracle over Bochner route at lambda = 0, t = 1 on SL(2,R)."""
    lam = SpectralParam(0.0)
    oracle = spherical_oracle(SL2, lam, 1.0).value
    bochner = phi_via_bochner(SL2, lam, 1.0).value
    constant = (oracle / bochner).real
    logger.info(f'✅ series calibration constant {constant:.15f}')
    return constant


def phi_hc_series(space, lam, t, terms=None, tol=None):
    """
    Two-Weyl-term residue series summed to ``terms`` terms per family
    (HC_MAX_TERMS by default). The tail is bounded geometrically from the
    last term ratio; NeedMoreTerms carries the partial sum when the bound
    exceeds tol. An explicit ``terms`` without ``tol`` skips the check.
    """
    if t <= 0:
        raise OutOfRange(f'the series needs t > 0, got {t}')
    count = terms or harmonic_settings.HC_MAX_TERMS
    if tol is None:
        tol = math.inf if terms else harmonic_settings.DEFAULT_TOL
    big_a, big_b = _series_parameters(space, lam)
    scale = series_calibration()

    total, tail = 0j, 0.0
    for first, second, sign in ((big_a, big_b, -1), (big_b, big_a, +1)):
        values = np.array([term.value(t) for term in _family(space.r, first, second, count + 1, sign)])
        total += values[:count].sum()
        last, after = abs(values[count - 1]), abs(values[count])
        ratio = 1.05 * max(after / last if last else 0.0, math.exp(-2.0 * t))
        tail += after / (1.0 - ratio) if ratio < 1 else math.inf

    result = SphericalValue(scale * total, Method.HC_SERIES, float(abs(scale) * tail))
    if result.abs_err > tol:
        raise NeedMoreTerms(result, f'tail bound {result.abs_err:.2e} above {tol:.1e} after {count} terms')
    return result


def leading_coefficient(space, lam):
    """c(nu) = Gamma(4r) Gamma(i nu) / (Gamma(2r) Gamma(2r + i nu)), calibrated."""
    lam_alpha = lam.alpha(space)
    if abs(lam_alpha) < 1e-12:
        raise SpectralPole('c(nu) has a pole at nu = 0')
    r = space.r
    return series_calibration() * gamma_ratio([4 * r, lam_alpha], [2 * r, 2 * r + lam_alpha])


class LeadingTerms(NamedTuple):
    c_plus: complex
    c_minus: complex


def extract_leading_coefficient(space, lam, times=(6.0, 8.0)):
    """
    Solve phi(t) = c(nu) e^((i nu - rho) t) + c(-nu) e^((-i nu - rho) t) at two
    large t using values from the Bochner route.
    """
    nu = lam.geodesic(space)
    rho = space.rho_alpha
    rows, rhs = [], []
    for t in times:
        rows.append([np.exp((1j * nu - rho) * t), np.exp((-1j * nu - rho) * t)])
        rhs.append(phi_via_bochner(space, lam, t).value)
    matrix = np.array(rows)
    if abs(np.linalg.det(matrix)) < 1e-6 * np.exp(-rho * sum(times)):
        raise OutOfRange(f'sample times {times} are degenerate for nu = {nu}')
    c_plus, c_minus = np.linalg.solve(matrix, np.array(rhs))
    return LeadingTerms(complex(c_plus), complex(c_minus))


# Tube boundary

class SingularityFit(NamedTuple):
    c_log: float
    c_const: float
    fit_quality: float
    location: float

    def predict(self, eps):
        return self.c_log * math.log(1.0 / eps) + self.c_const


def _boundary_values(space, lam, eps, density):
    values, errors = [], []
    for e in eps:
        result = phi_via_bochner(space, lam, complex(0.0, math.pi - e), strict=False, density=density)
        values.append(result.value.real)
        errors.append(result.abs_err)
    return np.array(values), np.array(errors)


def singularity_probe(space, lam, eps_grid):
    """
    Fit phi(i(pi - eps)) ~ c_log ln(1/eps) + c_const and locate the
    singularity with the shifted model c_log ln(1/(eps + delta)) + c_const.
    """
    eps = np.asarray(eps_grid, dtype=float)
    if eps.size < 6:
        raise OutOfRange('singularity_probe needs at least 6 points')
    if (eps <= 0).any() or (eps > 0.5).any() or (np.diff(eps) >= 0).any():
        raise OutOfRange('eps_grid must be strictly decreasing inside (0, 0.5]')

    density = bochner_density(space, lam)
    values, errors = _boundary_values(space, lam, eps, density)
    sigma = errors + 1e-6 * np.abs(values)
    log_inv = np.log(1.0 / eps)

    c_log, c_const = np.polyfit(log_inv, values, 1, w=1.0 / sigma)
    residual = values - (c_log * log_inv + c_const)
    spread = float(values.max() - values.min()) or 1.0
    fit_quality = float(np.sqrt(np.mean(residual ** 2)) / spread)

    def shifted(e, slope, const, delta):
        return -slope * np.log(e + delta) + const

    floor = -0.9 * float(eps.min())
    (_, _, delta), _ = optimize.curve_fit(
        shifted, eps, values, p0=(c_log, c_const, 0.0), sigma=sigma,
        bounds=([-np.inf, -np.inf, floor], [np.inf, np.inf, 0.5]),
    )
    logger.info(f'🔍 boundary fit: c_log={c_log:.6f} quality={fit_quality:.2e} location={math.pi + delta:.6f}')
    return SingularityFit(float(c_log), float(c_const), fit_quality, float(math.pi + delta))


class ConvexityReport(NamedTuple):
    heights: tuple
    l1_norms: tuple
    holds: bool


def tube_convexity_check(space, lam, y0, x=0.0):
    """
    Convergence at height y0 implies convergence on every inner height: the
    L1 norm of the damped integrand is finite and non-decreasing in |Im t|.
    """
    if not 0 < y0 < math.pi:
        raise OutOfRange(f'y0 must lie in (0, pi), got {y0}')
    density = bochner_density(space, lam)
    heights = (y0 / 3.0, 2.0 * y0 / 3.0, y0)
    norms = []
    for y in heights:
        upper, step, _ = _fourier_grid(density, abs(x), y, -math.log(harmonic_settings.FOURIER_TAIL_TOL))
        nodes, weights = half_line_trapezoid(upper, step)
        norms.append(float(np.sum(weights * _damped_modulus(density, nodes, y))))
    holds = all(np.isfinite(norms)) and norms[0] <= norms[1] <= norms[2]
    return ConvexityReport(heights, tuple(norms), holds)


def gram_min_eigenvalue(space, lam, n=12, seed=0, spread=5.0):
    """Smallest eigenvalue of [phi(t_i - t_j)] over n random real points."""
    rng = np.random.default_rng(seed)
    points = rng.uniform(-spread, spread, n)
    diffs = points[:, None] - points[None, :]
    density = bochner_density(space, lam)
    values = phi_bochner_grid(density, np.abs(diffs).ravel()).reshape(n, n)
    gram = 0.5 * (values + values.conj().T)
    return float(np.linalg.eigvalsh(gram).min())
