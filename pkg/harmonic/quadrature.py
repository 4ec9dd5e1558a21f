"""
Quadrature helpers shared by the harmonic modules.

Adaptive work goes through scipy's QUADPACK bindings; complex integrands are
split into real and imaginary parts. Fixed rules (Gauss-Legendre panels,
trapezoid weights) are used where the integrand is sampled on a grid and
reused many times.
"""
import logging

import numpy as np
from scipy import integrate

from .conf import harmonic_settings
from .exceptions import QuadratureFailure

logger = logging.getLogger(__name__)


def _quad_part(func, a, b, epsabs, epsrel, limit, points):
    out = integrate.quad(func, a, b, epsabs=epsabs, epsrel=epsrel,
                         limit=limit, points=points, full_output=1)
    if len(out) > 3:
        raise QuadratureFailure(f'QUADPACK on [{a}, {b}]: {out[3].strip()}')
    return out[0], out[1]


def quad_complex(func, a, b, epsabs=None, epsrel=1e-12, limit=None, points=None):
    """Integrate a complex scalar function over [a, b]; returns (value, abs_err)."""
    epsabs = harmonic_settings.QUAD_ABS_TOL if epsabs is None else epsabs
    limit = harmonic_settings.QUAD_LIMIT if limit is None else limit
    if points is not None:
        points = [p for p in points if a < p < b] or None

    re, re_err = _quad_part(lambda x: complex(func(x)).real, a, b,
                            epsabs, epsrel, limit, points)
    im, im_err = _quad_part(lambda x: complex(func(x)).imag, a, b,
                            epsabs, epsrel, limit, points)
    return complex(re, im), float(np.hypot(re_err, im_err))


def quad_vec_complex(func, a, b, epsabs=None, epsrel=1e-12, limit=None, points=None):
    """
    Adaptive Gauss-Kronrod on a complex integrand evaluated once per node.

    Real and imaginary parts are stacked into one vector so scipy's
    quad_vec refines both on the same subdivision. A rounding-error status
    is accepted when the error estimate already meets the tolerance.
    """
    epsabs = harmonic_settings.QUAD_ABS_TOL if epsabs is None else epsabs
    limit = harmonic_settings.QUAD_LIMIT if limit is None else limit

    def stacked(x):
        value = complex(func(x))
        return np.array([value.real, value.imag])

    result, err, info = integrate.quad_vec(stacked, a, b, epsabs=epsabs, epsrel=epsrel,
                                           norm='max', limit=limit, points=points,
                                           full_output=True)
    value = complex(result[0], result[1])
    if not info.success:
        if info.status == 2 and err <= max(epsabs, epsrel * abs(value)):
            logger.debug(f'⚠️ quad_vec on [{a}, {b}] hit rounding at err {err:.2e}, within tolerance')
        else:
            raise QuadratureFailure(f'quad_vec on [{a}, {b}]: {info.message} (err {err:.2e})')
    return value, float(err)


def gauss_legendre_panels(a, b, breakpoints=(), panel_width=0.5, order=16):
    """
    Composite Gauss-Legendre nodes and weights on [a, b].

    Panels never straddle a breakpoint, so piecewise-smooth integrands keep
    spectral accuracy on each piece.
    """
    cuts = sorted({a, b, *[p for p in breakpoints if a < p < b]})
    x, w = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        count = max(1, int(np.ceil((hi - lo) / panel_width)))
        edges = np.linspace(lo, hi, count + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        nodes.append((mid[:, None] + half[:, None] * x[None, :]).ravel())
        weights.append((half[:, None] * w[None, :]).ravel())
    return np.concatenate(nodes), np.concatenate(weights)


def half_line_trapezoid(upper, step):
    """
    Nodes 0, h, 2h, ... and weights for integrating an even function over the
    whole line: h * [g(0) + 2 * sum g(kh)].
    """
    count = int(np.ceil(upper / step))
    nodes = step * np.arange(count + 1)
    weights = np.full(count + 1, 2.0 * step)
    weights[0] = step
    return nodes, weights


def full_line_grid(half_width, step):
    """Symmetric uniform grid covering [-half_width, half_width]."""
    count = int(np.ceil(half_width / step))
    return step * np.arange(-count, count + 1)
