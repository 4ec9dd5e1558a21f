"""
Rank-one symmetric spaces: root data, spectral units, the closed forms for
xi_{-rho} and e^{rho H} on V, the SL(2,R) Iwasawa map and the K-integral
oracle for the spherical function.

Coordinates. ``t`` is the geodesic coordinate with alpha(log a_t) = t, so the
oracle integrand is (cosh t - sinh t cos theta)^(-rho0 - i nu) and the
holomorphic extension lives in |Im t| < pi. Spectral parameters convert as

    lambda_alpha = rho0 * lambda_rho
    nu           = -i * lambda_alpha       (geodesic-dual, real on the unitary axis)
"""
import enum
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate

from .conf import harmonic_settings
from .exceptions import (
    DegeneratePoint,
    NotUnimodular,
    OutOfRange,
    UnsupportedSpace,
)
from .quadrature import quad_complex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RankOneSpace:
    p: int
    q: int = 0

    def __post_init__(self):
        if self.p < 1 or self.q < 0:
            raise UnsupportedSpace(f'Root multiplicities must satisfy p >= 1, q >= 0 (got {self.p},{self.q})')

    @classmethod
    def parse(cls, text):
        try:
            p, q = (int(part) for part in str(text).split(','))
        except ValueError:
            raise UnsupportedSpace(f"Space must be given as 'P,Q', got '{text}'")
        return cls(p, q)

    @property
    def r(self):
        return (self.p + 2 * self.q) / 4.0

    @property
    def c_h(self):
        return 1.0 / (4 * (self.p + 4 * self.q))

    @property
    def rho_alpha(self):
        return (self.p + 2 * self.q) / 2.0

    @property
    def exactness(self):
        return 'exact' if self.q == 0 else 'experimental'

    @property
    def is_sl2(self):
        return self.p == 1 and self.q == 0

    @property
    def label(self):
        p, q = self.p, self.q
        if (p, q) == (1, 0):
            return 'SL(2,R)'
        if q == 0:
            return f'SO({p + 1},1)'
        if q == 1 and p % 2 == 0:
            return f'SU({p // 2 + 1},1)'
        if q == 3 and p % 4 == 0:
            return f'Sp({p // 4 + 1},1)'
        if (p, q) == (8, 7):
            return 'F4(-20)'
        return f'(p={p},q={q})'

    def __str__(self):
        return f'{self.p},{self.q}'


SL2 = RankOneSpace(1, 0)


class Units(str, enum.Enum):
    RHO = 'rho'
    ALPHA = 'alpha'
    GEODESIC = 'geodesic'


@dataclass(frozen=True)
class SpectralParam:
    value: complex
    units: Units = Units.RHO

    def __post_init__(self):
        object.__setattr__(self, 'value', complex(self.value))
        object.__setattr__(self, 'units', Units(self.units))

    @classmethod
    def parse(cls, text, units=Units.RHO):
        cleaned = str(text).strip().replace(' ', '').replace('i', 'j')
        if cleaned in ('j', '+j', '-j'):
            cleaned = cleaned.replace('j', '1j')
        try:
            value = complex(cleaned)
        except ValueError:
            raise OutOfRange(f"Cannot read a spectral parameter from '{text}'")
        return cls(value, units)

    def rho(self, space):
        if self.units is Units.RHO:
            return self.value
        if self.units is Units.ALPHA:
            return self.value / space.rho_alpha
        return 1j * self.value / space.rho_alpha

    def alpha(self, space):
        return self.rho(space) * space.rho_alpha

    def geodesic(self, space):
        return -1j * self.alpha(space)

    def in_units(self, units, space):
        units = Units(units)
        value = {
            Units.RHO: self.rho,
            Units.ALPHA: self.alpha,
            Units.GEODESIC: self.geodesic,
        }[units](space)
        return SpectralParam(value, units)

    def contragredient(self, space=None):
        # lambda' = -conj(lambda) in rho and alpha units, conj(nu) in geodesic units
        if self.units is Units.GEODESIC:
            return SpectralParam(self.value.conjugate(), self.units)
        return SpectralParam(-self.value.conjugate(), self.units)

    def negated(self):
        return SpectralParam(-self.value, self.units)

    def is_unitary(self, space, tol=1e-15):
        return abs(self.rho(space).real) <= tol

    def __str__(self):
        return f'{self.value.real:g}{self.value.imag:+g}i [{self.units.value}]'


@dataclass(frozen=True)
class TubePoint:
    t: complex

    @property
    def height(self):
        return abs(complex(self.t).imag)


@dataclass(frozen=True)
class VPoint:
    x_norm: float
    y_norm: float = 0.0


class Method(str, enum.Enum):
    BOCHNER_FOURIER = 'bochner_fourier'
    HC_SERIES = 'hc_series'
    ORACLE = 'oracle'


@dataclass(frozen=True)
class SphericalValue:
    value: complex
    method: Method
    abs_err: float

    def __post_init__(self):
        if not self.abs_err >= 0:
            raise OutOfRange(f'abs_err must be non-negative, got {self.abs_err}')


# Closed forms on V

def xi_minus_rho(space, v):
    if v.x_norm == 0 and v.y_norm == 0:
        raise DegeneratePoint()
    c = space.c_h
    base = c * c * v.x_norm ** 4 + 4 * c * v.y_norm ** 2
    return base ** (-(space.p + 2 * space.q) / 4.0)


def exp_rho_h(space, v):
    c = space.c_h
    base = (1 + c * v.x_norm ** 2) ** 2 + 4 * c * v.y_norm ** 2
    return base ** ((space.p + 2 * space.q) / 4.0)


def xi_scaling_defect(x, s):
    """Relative defect of xi(e^s x) = e^-s xi(x) on the SL(2,R) model."""
    scaled = xi_minus_rho(SL2, VPoint(abs(math.exp(s) * x)))
    expected = math.exp(-s) * xi_minus_rho(SL2, VPoint(abs(x)))
    return abs(scaled - expected) / expected


def measure_invariance_defect(phi, s, support=(0.5, 3.0)):
    """
    Relative change of int phi(x) dx/|x| over R minus {0} when phi is
    replaced by x -> phi(e^s x). ``phi`` must vanish outside +-support.
    """
    lo, hi = support

    def total(func, scale):
        a, b = lo / scale, hi / scale
        pos = integrate.quad(lambda x: func(x) / x, a, b, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
        neg = integrate.quad(lambda x: func(-x) / x, a, b, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
        return pos + neg

    base = total(phi, 1.0)
    moved = total(lambda x: phi(math.exp(s) * x), math.exp(s))
    return abs(moved - base) / abs(base)


def acts_freely(points, s):
    """The dilation x -> e^s x has no fixed point on R minus {0} for s != 0."""
    points = np.asarray(points, dtype=float)
    if (points == 0).any():
        raise DegeneratePoint('x = 0 is not in V\'')
    if s == 0:
        return False
    return bool(np.all(np.exp(s) * points != points))


# SL(2,R) matrices

def lower_unipotent(x_norm):
    """The V-point exp X as a 2x2 matrix; |X| = 2 * (matrix entry)."""
    return np.array([[1.0, 0.0], [x_norm / 2.0, 1.0]])


def rotation(theta):
    return np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])


def iwasawa_compose(theta, t, x):
    a = np.diag([math.exp(t / 2.0), math.exp(-t / 2.0)])
    n = np.array([[1.0, x], [0.0, 1.0]])
    return rotation(theta) @ a @ n


def iwasawa_decompose(g):
    """g = k(theta) diag(e^(t/2), e^(-t/2)) n(x); returns (theta, t, x)."""
    g = np.asarray(g, dtype=float)
    if abs(np.linalg.det(g) - 1.0) > 1e-12:
        raise NotUnimodular(f'det g = {np.linalg.det(g):.15g}')
    (a, b), (c, d) = g
    norm2 = a * a + c * c
    return math.atan2(c, a), math.log(norm2), (a * b + c * d) / norm2


# K-integral oracle (q = 0)

@lru_cache(maxsize=None)
def _sphere_normalizer(p):
    if p == 1:
        return 1.0 / math.pi
    area = integrate.quad(lambda th: math.sin(th) ** (p - 1), 0.0, math.pi, epsabs=1e-14)[0]
    logger.debug(f'🔍 c_p for p={p}: {1.0 / area:.17g}')
    return 1.0 / area


def _oracle_base(t, theta):
    # cosh t - sinh t cos theta without cancellation
    return math.exp(-t) * math.cos(theta / 2.0) ** 2 + math.exp(t) * math.sin(theta / 2.0) ** 2


def spherical_oracle(space, lam, t):
    """
    phi_lambda(a_t) = c_p int_0^pi (cosh t - sinh t cos theta)^(-rho0(1 + lambda)) sin^(p-1) theta dtheta
    """
    if space.q != 0:
        raise UnsupportedSpace(f'K-integral oracle is only shipped for q = 0, not {space.label}')
    if t < 0:
        raise OutOfRange(f'oracle needs t >= 0, got {t}')
    if t == 0:
        return SphericalValue(1.0 + 0j, Method.ORACLE, 0.0)

    exponent = -space.rho_alpha * (1.0 + lam.rho(space))
    c_p = _sphere_normalizer(space.p)

    def integrand(theta):
        weight = math.sin(theta) ** (space.p - 1)
        return weight * np.exp(exponent * math.log(_oracle_base(t, theta)))

    knee = math.exp(-t)
    points = [knee, 4 * knee, 16 * knee] if t > 1 else None
    value, err = quad_complex(integrand, 0.0, math.pi, points=points)
    return SphericalValue(c_p * value, Method.ORACLE, c_p * err)


def spherical_oracle_iwasawa(lam, t):
    """SL(2,R) K-integral of a(a_t k)^(lambda - rho) through iwasawa_decompose."""
    lam_rho = lam.rho(SL2)
    a_t = np.diag([math.exp(t / 2.0), math.exp(-t / 2.0)])

    def integrand(phi):
        _, t_prime, _ = iwasawa_decompose(a_t @ rotation(phi))
        return np.exp((lam_rho - 1.0) * t_prime / 2.0)

    value, err = quad_complex(integrand, 0.0, 2.0 * math.pi)
    return SphericalValue(value / (2.0 * math.pi), Method.ORACLE, err / (2.0 * math.pi))


# A-adapted vectors (SL(2,R), orbit coordinate x = omega * 2 e^-u)

@dataclass(frozen=True)
class AdaptedVector:
    """
    A vector in the A-adapted realization of the principal series.

    ``profile(omega, u)`` is the twisted orbit profile P, vectorised in u;
    the vector itself is e^(lambda rho0 u) P(omega, u). ``extent``,
    ``bandwidth`` and ``step`` size the orbit and frequency grids: P is
    below e^-nats outside |u| <= extent, its Fourier transform below e^-nats
    outside |upsilon| <= bandwidth, and ``step`` resolves it.
    """
    profile: Callable
    lam: SpectralParam
    extent: float
    bandwidth: float
    step: float
    label: str = 'vector'
    space: RankOneSpace = SL2

    def twisted(self, omega, u):
        return np.asarray(self.profile(omega, np.asarray(u, dtype=float)), dtype=complex)

    def eval(self, omega, u):
        u = np.asarray(u, dtype=float)
        character = np.exp(self.lam.rho(self.space) * self.space.rho_alpha * u)
        return character * self.twisted(omega, u)

    def eval_x(self, x):
        x = np.asarray(x, dtype=float)
        if (x == 0).any():
            raise DegeneratePoint('x = 0 is not in V\'')
        u = -np.log(np.abs(x) / 2.0)
        omegas = np.sign(x)
        out = np.empty(x.shape, dtype=complex)
        for omega in (-1, 1):
            mask = omegas == omega
            out[mask] = self.eval(omega, u[mask])
        return out


def k_fixed_adapted_vector(space, lam, nats=None):
    """
    The K-fixed vector x -> (|x|/2)^(1/2) (1 + x^2/4)^(-(1+lambda)/2).

    On the orbits its twisted profile is (2 cosh u)^(-(1+lambda)/2), the same
    on both orbits.
    """
    if not space.is_sl2:
        raise UnsupportedSpace(f'The adapted realization is modelled for SL(2,R) only, not {space.label}')
    lam_rho = lam.rho(space)
    if abs(lam_rho.real) >= 1:
        raise OutOfRange(f'K-fixed vector needs |Re lambda| < 1 (rho units), got {lam_rho}')
    nats = nats or harmonic_settings.ORBIT_TAIL_NATS
    power = (1.0 + lam_rho) / 2.0

    def profile(omega, u):
        log_cosh = np.logaddexp(u, -u)
        return np.exp(-power * log_cosh)

    bandwidth = 2.0 * nats / math.pi + 4.0
    return AdaptedVector(
        profile=profile,
        lam=lam,
        extent=nats / power.real,
        bandwidth=bandwidth,
        step=math.pi / bandwidth,
        label='k_fixed',
    )
