"""
Spherical analysis on SL(2,R)/SO(2): c-function, spherical transform and
its inverse, the Abel transform, and the spectral Abel transform F^s.

Spectral variable is the geodesic-dual nu (phi_nu(t) ~ c(nu) e^((i nu - 1/2) t)).
Measure constants are fixed once by TransformCalibration.
"""
import enum
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, interpolate

from .bochner import bochner_density, density_matrix
from .exceptions import (
    GridTooCoarse,
    InsufficientDecay,
    OutOfRange,
    PoleAtZero,
    TailTruncation,
)
from .quadrature import gauss_legendre_panels, half_line_trapezoid
from .rankone import SL2, SpectralParam, Units
from .specfun import gamma_ratio
from .spherical import extract_leading_coefficient, phi_bochner_grid

logger = logging.getLogger(__name__)

REFERENCE_WIDTH = 1.0
SPECTRAL_STEP = 0.1
TAPER = 0.5


class DecayClass(str, enum.Enum):
    COMPACT = 'compact'
    SCHWARTZ_LIKE = 'schwartz_like'


def _smoothstep(s):
    s = np.clip(s, 0.0, 1.0)
    return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)


@dataclass(frozen=True, eq=False)
class RadialFunction:
    profile: Callable
    support_bound: float = math.inf
    decay_class: DecayClass = DecayClass.COMPACT
    breakpoints: tuple = ()
    width: float = 1.0
    label: str = 'f'
    is_zero: bool = False

    def __call__(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        values = np.asarray(self.profile(t), dtype=float) * np.ones_like(t)
        if math.isfinite(self.support_bound):
            values = np.where(t <= self.support_bound, values, 0.0)
        return values

    @classmethod
    def truncated_gaussian(cls, sigma):
        """exp(-(t/sigma)^2) cut at R = 6 sigma with a C^2 taper on [R - 0.5, R]."""
        bound = 6.0 * sigma

        def profile(t):
            return np.exp(-(t / sigma) ** 2) * _smoothstep((bound - t) / TAPER)

        return cls(profile, bound, DecayClass.COMPACT, (bound - TAPER,), sigma, f'gaussian({sigma:g})')

    @classmethod
    def zero(cls):
        return cls(lambda t: np.zeros_like(t), 1.0, DecayClass.COMPACT, (), 1.0, 'zero', True)

    @classmethod
    def sampled(cls, t, values, decay_class=None):
        t = np.asarray(t, dtype=float)
        values = np.asarray(values, dtype=float)
        spline = interpolate.CubicSpline(t, values)
        bound = float(t[-1])
        if decay_class is None:
            compact = abs(values[-1]) <= 1e-12 * max(np.abs(values).max(), 1e-300)
            decay_class = DecayClass.COMPACT if compact else DecayClass.SCHWARTZ_LIKE

        def profile(s):
            return np.where(s <= bound, spline(np.minimum(s, bound)), 0.0)

        return cls(profile, bound, decay_class, (), 1.0, 'sampled', not np.any(values))

    @classmethod
    def linear_combination(cls, terms):
        """sum c_i f_i for terms = [(c_i, f_i), ...]."""
        terms = list(terms)

        def profile(t):
            return sum(c * f(t) for c, f in terms)

        bound = max(f.support_bound for _, f in terms)
        breaks = tuple(sorted({b for _, f in terms for b in f.breakpoints}
                              | {f.support_bound for _, f in terms if math.isfinite(f.support_bound)}))
        decay = (DecayClass.COMPACT if all(f.decay_class == DecayClass.COMPACT for _, f in terms)
                 else DecayClass.SCHWARTZ_LIKE)
        width = min(f.width for _, f in terms)
        zero = all(f.is_zero or c == 0 for c, f in terms)
        return cls(profile, bound, decay, breaks, width, 'combination', zero)


@dataclass(frozen=True, eq=False)
class SpectralProfile:
    grid: np.ndarray
    values: np.ndarray
    even: bool = True
    support_bound: float = math.inf

    def half_line(self):
        """Samples on nu >= 0, ascending."""
        keep = self.grid >= 0
        order = np.argsort(self.grid[keep])
        return self.grid[keep][order], self.values[keep][order]


@dataclass(frozen=True)
class TransformCalibration:
    kappa: float
    kappa_j: float
    inversion_scale: float

    @property
    def expected(self):
        """Analytic values for the Riemannian area measure on the hyperbolic plane."""
        return {
            'kappa': 1.0 / math.sqrt(math.pi),
            'kappa_j': 2.0 * math.pi,
            'inversion_scale': 1.0 / (4.0 * math.pi ** 2),
        }


def effective_support(f, floor=1e-16, limit=60.0):
    """Radius beyond which |f| stays below floor."""
    if math.isfinite(f.support_bound):
        return f.support_bound
    grid = np.arange(0.0, limit + 0.5, 0.5)
    values = np.abs(f(grid))
    above = np.nonzero(values > floor)[0]
    if above.size == 0:
        return 0.5
    if above[-1] == grid.size - 1:
        raise TailTruncation(f'{f.label} is still {values[-1]:.2e} at t = {limit}')
    return float(grid[above[-1] + 1])


def spectral_grid(f, step=SPECTRAL_STEP):
    """Uniform nu grid on [0, 16 / width]."""
    top = 16.0 / f.width
    return step * np.arange(int(np.ceil(top / step)) + 1)


def phi_matrix(nu_grid, t_nodes):
    """Real phi_nu(t) for nu in nu_grid (rows) and t in t_nodes (columns)."""
    rows = []
    for nu in np.asarray(nu_grid, dtype=float):
        density = bochner_density(SL2, SpectralParam(nu, Units.GEODESIC))
        rows.append(phi_bochner_grid(density, t_nodes).real)
    return np.array(rows)


def _radial_nodes(f):
    bound = effective_support(f)
    return gauss_legendre_panels(0.0, bound, breakpoints=f.breakpoints)


def _unscaled_spherical(f, nu_grid):
    nodes, weights = _radial_nodes(f)
    kernel = phi_matrix(nu_grid, nodes)
    return kernel @ (weights * f(nodes) * np.sinh(nodes))


def _plancherel_weight(nu, kappa):
    # |c(nu)|^-2 = nu tanh(pi nu) / kappa^2, finite at nu = 0
    nu = np.asarray(nu, dtype=float)
    return nu * np.tanh(math.pi * nu) / kappa ** 2


def _trapezoid_weights(nu_half):
    step = nu_half[1] - nu_half[0]
    if not np.allclose(np.diff(nu_half), step) or nu_half[0] != 0:
        raise OutOfRange('spectral grids must be uniform and start at nu = 0')
    return half_line_trapezoid(nu_half[-1], step)[1][:nu_half.size], step


@lru_cache(maxsize=None)
def transform_calibration():
    """
    kappa from the large-t Bochner route, kappa_j from the Abel identity at
    nu = 0, inversion_scale from the inversion formula at t = 0, all on the
    width-1 reference Gaussian.
    """
    nu_ref = 1.0
    lead = extract_leading_coefficient(SL2, SpectralParam(nu_ref, Units.GEODESIC))
    quotient = gamma_ratio([1j * nu_ref], [0.5 + 1j * nu_ref])
    kappa = (lead.c_plus / quotient).real

    ref = RadialFunction.truncated_gaussian(REFERENCE_WIDTH)
    abel_zero = _abel_cosine(ref, np.array([0.0]))[0]
    spherical_zero = _unscaled_spherical(ref, np.array([0.0]))[0]
    kappa_j = abel_zero / spherical_zero

    nu_half = spectral_grid(ref)
    weights, _ = _trapezoid_weights(nu_half)
    transform = kappa_j * _unscaled_spherical(ref, nu_half)
    raw = np.sum(weights * transform * _plancherel_weight(nu_half, kappa))
    inversion_scale = float(ref(0.0)) / raw

    calibration = TransformCalibration(kappa, kappa_j, inversion_scale)
    logger.info(
        f'✅ transform calibration: kappa={kappa:.10f} kappa_j={kappa_j:.10f} '
        f'inversion_scale={inversion_scale:.10e}'
    )
    for name, value in calibration.expected.items():
        logger.debug(f'🔍 {name}: calibrated/analytic = {getattr(calibration, name) / value:.12f}')
    return calibration


def c_function(nu, calibration=None):
    """c(nu) = kappa Gamma(i nu) / Gamma(1/2 + i nu)."""
    nu_arr = np.asarray(nu, dtype=float)
    if (nu_arr == 0).any():
        raise PoleAtZero()
    calibration = calibration or transform_calibration()
    return calibration.kappa * gamma_ratio([1j * nu_arr], [0.5 + 1j * nu_arr])


def plancherel_density(nu, calibration=None):
    value = np.abs(c_function(nu, calibration)) ** -2
    return float(value) if np.ndim(nu) == 0 else value


def spherical_transform(f, nu_grid, calibration=None):
    """f~(nu) = kappa_j int_0^oo f(t) phi_nu(t) sinh t dt."""
    nu_grid = np.asarray(nu_grid, dtype=float)
    bound = effective_support(f)
    if f.is_zero:
        return SpectralProfile(nu_grid, np.zeros_like(nu_grid), True, bound)
    calibration = calibration or transform_calibration()
    values = calibration.kappa_j * _unscaled_spherical(f, nu_grid)
    return SpectralProfile(nu_grid, values, True, bound)


def inverse_spherical(profile, t_grid, calibration=None):
    """f(t) = scale * int_R f~(nu) phi_nu(t) |c(nu)|^-2 dnu, returned as a sampled RadialFunction."""
    if not profile.even:
        raise OutOfRange('inversion needs an even spectral profile')
    nu_half, values = profile.half_line()
    weights, step = _trapezoid_weights(nu_half)
    if math.isfinite(profile.support_bound):
        limit = 2.0 * math.pi / (2.0 * profile.support_bound + 10.0)
        if step > limit:
            raise GridTooCoarse(f'nu step {step:g} exceeds {limit:.4g} for support {profile.support_bound:g}')
    t_grid = np.asarray(t_grid, dtype=float)
    if not np.any(values):
        return RadialFunction.sampled(t_grid, np.zeros_like(t_grid))
    calibration = calibration or transform_calibration()
    spectral = weights * values * _plancherel_weight(nu_half, calibration.kappa)
    recovered = calibration.inversion_scale * (spectral @ phi_matrix(nu_half, t_grid))
    return RadialFunction.sampled(t_grid, recovered)


# Abel transform

def _abel_point(f, t, bound):
    t = abs(t)
    if t >= bound:
        return 0.0
    shift = math.sinh(t / 2.0) ** 2
    grow = math.exp(t)

    def integrand(x):
        radius = 2.0 * math.asinh(math.sqrt(shift + grow * x * x / 4.0))
        return float(f(radius))

    def reach(d):
        return math.sqrt(max(2.0 * math.exp(-t) * (math.cosh(d) - math.cosh(t)), 0.0))

    upper = reach(bound)
    points = [reach(b) for b in f.breakpoints if t < b < bound] or None
    value = integrate.quad(integrand, 0.0, upper, points=points, epsabs=1e-14, epsrel=1e-12, limit=200)[0]
    return 2.0 * math.exp(t / 2.0) * value


def abel_transform(f, t_grid):
    """F_f(t) = e^(t/2) int_R f(d(t, x)) dx with cosh d = cosh t + e^t x^2 / 2."""
    t_grid = np.asarray(t_grid, dtype=float)
    if f.is_zero:
        return np.zeros_like(t_grid)
    bound = effective_support(f)
    return np.array([_abel_point(f, t, bound) for t in t_grid])


def _abel_cosine(f, nu_grid):
    # 2 int_0^R F_f(t) cos(nu t) dt
    bound = effective_support(f)
    nodes, weights = gauss_legendre_panels(0.0, bound, breakpoints=f.breakpoints)
    values = abel_transform(f, nodes)
    return 2.0 * np.cos(np.outer(nu_grid, nodes)) @ (weights * values)


def abel_fourier(f, nu_grid):
    """Euclidean Fourier transform of the (even) Abel transform."""
    nu_grid = np.asarray(nu_grid, dtype=float)
    bound = effective_support(f)
    if f.is_zero:
        return SpectralProfile(nu_grid, np.zeros_like(nu_grid), True, bound)
    return SpectralProfile(nu_grid, _abel_cosine(f, nu_grid), True, bound)


def abel_fourier_identity(f, nu_grid, calibration=None):
    """max |f~ - F_f^| / max |F_f^| over nu_grid."""
    if f.is_zero:
        return 0.0
    spherical = spherical_transform(f, nu_grid, calibration).values
    fourier = abel_fourier(f, nu_grid).values
    return float(np.max(np.abs(spherical - fourier)) / np.max(np.abs(fourier)))


def duality_defect(f, nu_grid, calibration=None):
    """
    <F_f, (e^(i nu t) + e^(-i nu t)) / 2> over the whole line against
    <f, phi_nu> over G/K.
    """
    if f.is_zero:
        return 0.0
    nu_grid = np.asarray(nu_grid, dtype=float)
    bound = effective_support(f)
    nodes, weights = gauss_legendre_panels(-bound, bound, breakpoints=(0.0,) + tuple(
        s * b for b in f.breakpoints for s in (-1, 1)))
    values = abel_transform(f, nodes)
    character = 0.5 * (np.exp(1j * np.outer(nu_grid, nodes)) + np.exp(-1j * np.outer(nu_grid, nodes)))
    left = character @ (weights * values)
    right = spherical_transform(f, nu_grid, calibration).values
    return float(np.max(np.abs(left - right)) / np.max(np.abs(right)))


# Spectral Abel transform

def spectral_ff(profile, upsilon_grid, calibration=None):
    """F^s(upsilon) = scale * int_R f~(nu) m(nu, upsilon) |c(nu)|^-2 dnu."""
    upsilon_grid = np.asarray(upsilon_grid, dtype=float)
    nu_half, values = profile.half_line()
    if not np.any(values):
        return np.zeros_like(upsilon_grid)
    peak = np.max(np.abs(values))
    if abs(values[-1]) > 1e-10 * peak:
        raise InsufficientDecay(f'|f~| at nu = {nu_half[-1]:g} is {abs(values[-1]) / peak:.2e} of its peak')
    calibration = calibration or transform_calibration()
    weights, _ = _trapezoid_weights(nu_half)
    spectral = weights * values * _plancherel_weight(nu_half, calibration.kappa)
    params = [SpectralParam(nu, Units.GEODESIC) for nu in nu_half]
    m = density_matrix(SL2, params, upsilon_grid).real
    return calibration.inversion_scale * (spectral @ m)


def _upsilon_grid(nu_half, step=0.05):
    return step * np.arange(int(np.ceil((nu_half[-1] + 15.0) / step)) + 1)


def spectral_roundtrip(f, t_grid=None, calibration=None):
    """f(t) against 2 int_0^oo F^s(upsilon) cos(upsilon t) dupsilon."""
    bound = effective_support(f)
    t_grid = np.linspace(0.0, bound, 41) if t_grid is None else np.asarray(t_grid, dtype=float)
    if f.is_zero:
        return 0.0
    nu_half = spectral_grid(f)
    profile = spherical_transform(f, nu_half, calibration)
    upsilon = _upsilon_grid(nu_half)
    weights = half_line_trapezoid(upsilon[-1], upsilon[1] - upsilon[0])[1][:upsilon.size]
    spectral = spectral_ff(profile, upsilon, calibration)
    recovered = np.cos(np.outer(t_grid, upsilon)) @ (weights * spectral)
    original = f(t_grid)
    return float(np.max(np.abs(recovered - original)) / np.max(np.abs(original)))


def inversion_roundtrip(f, t_grid=None, calibration=None):
    bound = effective_support(f)
    t_grid = np.linspace(0.0, bound, 41) if t_grid is None else np.asarray(t_grid, dtype=float)
    if f.is_zero:
        return 0.0
    profile = spherical_transform(f, spectral_grid(f), calibration)
    recovered = inverse_spherical(profile, t_grid, calibration)(t_grid)
    original = f(t_grid)
    return float(np.max(np.abs(recovered - original)) / np.max(np.abs(original)))
