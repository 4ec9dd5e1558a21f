"""
SL(2,R) principal series in the A-adapted realization.

V' = R minus {0} splits into two A-orbits, x = omega * 2 e^-u with omega = +-1;
the invariant measure is du on each orbit and a_s acts by a character times
translation in u. Vectors are handled through their twisted profiles P, so
for f in the lambda realization and g in the contragredient one

    c_{f,g}(a_s) = sum_omega int P_f(omega, u - s) conj(P_g(omega, u)) du
                 = int e^(-i upsilon s) m_{f,g}(upsilon) dupsilon
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import stats

from .bochner import bochner_density
from .conf import harmonic_settings
from .exceptions import (
    NonIntegrablePair,
    OutOfRange,
    OutOfStrip,
    ParsevalHypothesisFailed,
    RealizationMismatch,
)
from .quadrature import full_line_grid
from .rankone import SL2, AdaptedVector, SpectralParam, k_fixed_adapted_vector

logger = logging.getLogger(__name__)

OMEGAS = (-1, 1)
EDGE_TOL = 1e-10
PARSEVAL_EDGE_TOL = 1e-4
DFT_CHUNK = 256


def _same_realization(a, b, tol=1e-12):
    return abs(a.rho(SL2) - b.rho(SL2)) <= tol


def _require_pair(f, g):
    if not _same_realization(g.lam, f.lam.contragredient()):
        raise RealizationMismatch(
            f'{g.label} is in lambda={g.lam.rho(SL2):.4g}, expected the contragredient '
            f'{f.lam.contragredient().rho(SL2):.4g} of {f.label}'
        )


# Vectors

def adapted_action(lam, s, f):
    """U~(a_s) f: the twisted profile is translated by s."""
    if not _same_realization(lam, f.lam):
        raise RealizationMismatch(f'{f.label} lives in lambda={f.lam.rho(SL2):.4g}, not {lam.rho(SL2):.4g}')
    if s == 0:
        return f
    base = f.profile

    def profile(omega, u):
        return base(omega, np.asarray(u, dtype=float) - s)

    return AdaptedVector(profile, f.lam, f.extent + abs(s), f.bandwidth, f.step, f'{f.label}@{s:g}', f.space)


def bump_vector(lam, center=0.0, half_width=2.0, omega=1, amplitude=1.0, nats=None):
    """Compactly supported exp(-1/(1 - x^2)) bump on one orbit."""
    nats = nats or harmonic_settings.ORBIT_TAIL_NATS

    def profile(om, u):
        u = np.asarray(u, dtype=float)
        x = (u - center) / half_width
        inside = np.abs(x) < 1
        safe = np.where(inside, 1.0 - x * x, 1.0)
        values = np.where(inside, amplitude * np.exp(-1.0 / safe), 0.0)
        return values if om == omega else np.zeros_like(u)

    bandwidth = nats * nats / half_width
    return AdaptedVector(profile, lam, abs(center) + half_width, bandwidth, math.pi / bandwidth, 'bump')


def gaussian_mixture_vector(lam, components, nats=None):
    """components: iterable of (amplitude, center, sigma, omega)."""
    nats = nats or harmonic_settings.ORBIT_TAIL_NATS
    components = tuple(components)

    def profile(om, u):
        u = np.asarray(u, dtype=float)
        total = np.zeros(u.shape, dtype=complex)
        for amplitude, center, sigma, omega in components:
            if omega == om:
                total = total + amplitude * np.exp(-0.5 * ((u - center) / sigma) ** 2)
        return total

    sigma_min = min(c[2] for c in components)
    reach = max(abs(c[1]) + c[2] * math.sqrt(2.0 * nats) for c in components)
    bandwidth = math.sqrt(2.0 * nats) / sigma_min
    return AdaptedVector(profile, lam, reach, bandwidth, math.pi / bandwidth, 'mixture')


def random_vector(lam, seed=0, count=3, nats=None):
    rng = np.random.default_rng(seed)
    components = [
        (complex(rng.normal(), rng.normal()), rng.uniform(-3.0, 3.0), rng.uniform(0.6, 1.5), int(rng.choice(OMEGAS)))
        for _ in range(count)
    ]
    return gaussian_mixture_vector(lam, components, nats)


# Grids

@dataclass(frozen=True, eq=False)
class OrbitGrid:
    u: np.ndarray
    step: float
    upsilon: np.ndarray
    dupsilon: float

    @classmethod
    def for_pair(cls, f, g, shifts=(0.0,)):
        reach = max(abs(s) for s in shifts) if len(shifts) else 0.0
        half_width = max(f.extent, g.extent) + reach
        step = min(f.step, g.step)
        u = full_line_grid(half_width, step)
        band = min(f.bandwidth, g.bandwidth)
        dupsilon = 2.0 * math.pi / (f.extent + g.extent + reach + 10.0)
        upsilon = full_line_grid(band, dupsilon)
        logger.debug(f'🔍 orbit grid: {u.size} u-nodes (h={step:.3g}), {upsilon.size} upsilon-nodes')
        return cls(u, step, upsilon, dupsilon)


def _edge_ratio(values, peak=None):
    if peak is None:
        peak = np.max(np.abs(values))
    if peak == 0:
        return 0.0
    return max(abs(values[0]), abs(values[-1])) / peak


# Matrix coefficients

class MatrixCoefficient(NamedTuple):
    samples: np.ndarray
    values: np.ndarray
    lam: SpectralParam


def matrix_coefficient_direct(f, g, s_grid, grid=None):
    """c_{f,g}(a_s) by the trapezoid rule on each orbit."""
    _require_pair(f, g)
    s_grid = np.atleast_1d(np.asarray(s_grid, dtype=float))
    grid = grid or OrbitGrid.for_pair(f, g, tuple(s_grid))
    u, h = grid.u, grid.step

    values = np.zeros(s_grid.shape, dtype=complex)
    for omega in OMEGAS:
        right = np.conj(g.twisted(omega, u))
        scale = np.max(np.abs(right)) * np.max(np.abs(f.twisted(omega, u)))
        for i, s in enumerate(s_grid):
            product = f.twisted(omega, u - s) * right
            if _edge_ratio(product, scale) > EDGE_TOL:
                raise NonIntegrablePair(f'orbit integrand at s={s:g} not negligible at |u| = {u[-1]:.1f}')
            values[i] += h * np.sum(product)
    return MatrixCoefficient(s_grid, values, f.lam)


def _orbit_fourier(profile, u, h, upsilon):
    # h * sum_u e^(-i upsilon u) P(u), chunked over upsilon
    out = np.empty(upsilon.shape, dtype=complex)
    for start in range(0, upsilon.size, DFT_CHUNK):
        block = upsilon[start:start + DFT_CHUNK]
        out[start:start + DFT_CHUNK] = h * (np.exp(-1j * np.outer(block, u)) @ profile)
    return out


class BochnerSamples(NamedTuple):
    upsilon: np.ndarray
    values: np.ndarray
    dupsilon: float

    def fourier(self, s):
        """int e^(-i upsilon s) m dupsilon by the trapezoid rule."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return self.dupsilon * (np.exp(-1j * np.outer(s, self.upsilon)) @ self.values)


def bochner_from_vectors(f, g, upsilon_grid=None, grid=None, shifts=(0.0,)):
    """m_{f,g}(upsilon) = (1/2 pi) sum_omega P_f^(upsilon, omega) conj(P_g^(upsilon, omega))."""
    _require_pair(f, g)
    grid = grid or OrbitGrid.for_pair(f, g, shifts)
    upsilon = grid.upsilon if upsilon_grid is None else np.asarray(upsilon_grid, dtype=float)
    u, h = grid.u, grid.step

    total = np.zeros(upsilon.shape, dtype=complex)
    for omega in OMEGAS:
        left = f.twisted(omega, u)
        right = g.twisted(omega, u)
        for vector, samples in ((f, left), (g, right)):
            if _edge_ratio(samples) > PARSEVAL_EDGE_TOL:
                raise ParsevalHypothesisFailed(f'{vector.label} profile on omega={omega} not integrable on the grid')
        if not (left.any() and right.any()):
            continue
        total += _orbit_fourier(left, u, h, upsilon) * np.conj(_orbit_fourier(right, u, h, upsilon))
    return BochnerSamples(upsilon, total / (2.0 * math.pi), grid.dupsilon)


def unitary_coefficient_check(f, g, lam, s_samples):
    """max |c_{f,g}(a_s) - int e^(-i upsilon s) m_{f,g} dupsilon| for unitary lambda."""
    if not lam.is_unitary(SL2):
        raise OutOfRange(f'unitary check needs Re lambda = 0, got {lam.rho(SL2):.4g}')
    if not _same_realization(f.lam, lam):
        raise RealizationMismatch(f'{f.label} is not in the lambda={lam.rho(SL2):.4g} realization')
    s_samples = np.asarray(s_samples, dtype=float)
    grid = OrbitGrid.for_pair(f, g, tuple(s_samples))
    direct = matrix_coefficient_direct(f, g, s_samples, grid).values
    fourier = bochner_from_vectors(f, g, grid=grid).fourier(s_samples)
    defect = float(np.max(np.abs(direct - fourier)))
    logger.debug(f'🔍 unitary coefficient check ({f.label}, {g.label}): defect {defect:.2e}')
    return defect


def k_fixed_pair(lam, nats=None):
    f = k_fixed_adapted_vector(SL2, lam, nats)
    g = k_fixed_adapted_vector(SL2, lam.contragredient(), nats)
    return f, g


def strip_coefficient_check(lam, s_samples, nats=None):
    """Same comparison for the K-fixed pair in the strip 0 <= Re lambda < 1, relative to c(0)."""
    lam_rho = lam.rho(SL2)
    if not 0 <= lam_rho.real < 1:
        raise OutOfStrip(f'need 0 <= Re lambda < 1, got {lam_rho:.4g}')
    f, g = k_fixed_pair(lam, nats)
    s_samples = np.asarray(s_samples, dtype=float)
    grid = OrbitGrid.for_pair(f, g, tuple(s_samples) + (0.0,))
    direct = matrix_coefficient_direct(f, g, np.append(s_samples, 0.0), grid).values
    fourier = bochner_from_vectors(f, g, grid=grid).fourier(s_samples)
    scale = abs(direct[-1])
    defect = float(np.max(np.abs(direct[:-1] - fourier)) / scale)
    logger.debug(f'🔍 strip coefficient check lambda={lam_rho:.4g}: defect {defect:.2e}')
    return defect


def closed_form_defect(lam, upsilon_grid=None, nats=None):
    """m_{f,g} / c_{f,g}(e) from orbit transforms against the closed-form density."""
    f, g = k_fixed_pair(lam, nats)
    grid = OrbitGrid.for_pair(f, g)
    c0 = matrix_coefficient_direct(f, g, [0.0], grid).values[0]
    upsilon = np.linspace(-20.0, 20.0, 81) if upsilon_grid is None else np.asarray(upsilon_grid, dtype=float)
    orbit = bochner_from_vectors(f, g, upsilon, grid).values / c0
    closed = bochner_density(SL2, lam)(upsilon)
    return float(np.max(np.abs(orbit - closed)))


# Norms and invariants

def _wide_grid(f, g=None):
    vectors = [f] if g is None else [f, g]
    half_width = 2.0 * max(v.extent for v in vectors) + 40.0
    step = min(v.step for v in vectors)
    return full_line_grid(half_width, step), step


def inner_product(f, g):
    """sum_omega int f(omega, u) conj(g(omega, u)) du with the characters included."""
    u, h = _wide_grid(f, g)
    total = 0j
    for omega in OMEGAS:
        left, right = f.eval(omega, u), g.eval(omega, u)
        product = left * np.conj(right)
        if _edge_ratio(product, np.max(np.abs(left)) * np.max(np.abs(right))) > EDGE_TOL:
            raise NonIntegrablePair(f'<{f.label}, {g.label}> does not converge on the orbit')
        total += h * np.sum(product)
    return total


def orbit_norm(f):
    return math.sqrt(inner_product(f, f).real)


def translation_invariance_defect(f, g, s):
    """Relative change of (f, g) when f and g are translated together by a_s."""
    base = inner_product(f, g)
    moved = inner_product(adapted_action(f.lam, s, f), adapted_action(g.lam, s, g))
    return abs(moved - base) / abs(base)


class DecayRates(NamedTuple):
    left: float
    right: float


def orbit_decay_rates(f, omega=1, window=(10.0, 30.0), samples=41):
    """Log-slope fits of |P(omega, u)| on u in window and u in -window."""
    lo, hi = window
    u = np.linspace(lo, hi, samples)
    right = stats.linregress(u, np.log(np.abs(f.twisted(omega, u))))
    left = stats.linregress(-u, np.log(np.abs(f.twisted(omega, -u))))
    return DecayRates(left.slope, -right.slope)


def gram_min_eigenvalue(lam, n=12, seed=0, spread=5.0, nats=None):
    """Smallest eigenvalue of [c_{f,f}(s_i - s_j)] for the K-fixed vector, unitary lambda."""
    if not lam.is_unitary(SL2):
        raise OutOfRange('Gram sampling needs a unitary lambda')
    f = k_fixed_adapted_vector(SL2, lam, nats)
    rng = np.random.default_rng(seed)
    points = rng.uniform(-spread, spread, n)
    diffs = (points[:, None] - points[None, :]).ravel()
    values = matrix_coefficient_direct(f, f, diffs).values.reshape(n, n)
    gram = 0.5 * (values + values.conj().T)
    return float(np.linalg.eigvalsh(gram).min())
