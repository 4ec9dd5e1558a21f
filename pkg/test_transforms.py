#!/usr/bin/env python3
"""
Tests for the c-function, spherical/Abel transforms and the spectral Abel transform
"""

import math
import os
import django
import mpmath
import numpy as np
from django.test import SimpleTestCase

# Setup Django environment
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'zonal.settings')
django.setup()

from harmonic.exceptions import (
    GridTooCoarse,
    InsufficientDecay,
    OutOfRange,
    PoleAtZero,
    TailTruncation,
)
from harmonic.transforms import (
    DecayClass,
    RadialFunction,
    SpectralProfile,
    abel_fourier_identity,
    abel_transform,
    c_function,
    duality_defect,
    effective_support,
    inverse_spherical,
    inversion_roundtrip,
    plancherel_density,
    spectral_ff,
    spectral_grid,
    spectral_roundtrip,
    spherical_transform,
    transform_calibration,
)

WIDTHS = (0.5, 1.0, 1.5)


class CalibrationTests(SimpleTestCase):

    def test_constants_match_the_area_measure(self):
        calibration = transform_calibration()
        for name, value in calibration.expected.items():
            with self.subTest(name=name):
                self.assertAlmostEqual(getattr(calibration, name) / value, 1.0, delta=1e-5)

    def test_c_function(self):
        nu = 1.3
        expected = complex(mpmath.gamma(1j * nu) / (mpmath.sqrt(mpmath.pi) * mpmath.gamma(0.5 + 1j * nu)))
        self.assertAlmostEqual(c_function(nu), expected, delta=1e-6)
        with self.assertRaises(PoleAtZero):
            c_function(0.0)

    def test_plancherel_density(self):
        for nu in (0.2, 1.0, 4.0):
            with self.subTest(nu=nu):
                expected = math.pi * nu * math.tanh(math.pi * nu)
                self.assertAlmostEqual(plancherel_density(nu) / expected, 1.0, delta=1e-5)


class RadialFunctionTests(SimpleTestCase):

    def test_truncated_gaussian(self):
        f = RadialFunction.truncated_gaussian(1.0)
        self.assertEqual(f.support_bound, 6.0)
        self.assertEqual(f(7.0), 0.0)
        self.assertAlmostEqual(float(f(1.0)), math.exp(-1.0), places=14)
        self.assertEqual(f.decay_class, DecayClass.COMPACT)

    def test_effective_support(self):
        slow = RadialFunction(lambda t: 1.0 / (1.0 + t), decay_class=DecayClass.SCHWARTZ_LIKE)
        with self.assertRaises(TailTruncation):
            effective_support(slow)
        fast = RadialFunction(lambda t: np.exp(-t * t), decay_class=DecayClass.SCHWARTZ_LIKE)
        self.assertLessEqual(effective_support(fast), 7.0)

    def test_sampled_function_classifies_decay(self):
        t = np.linspace(0.0, 4.0, 81)
        self.assertEqual(RadialFunction.sampled(t, np.exp(-t)).decay_class, DecayClass.SCHWARTZ_LIKE)
        self.assertEqual(RadialFunction.sampled(t, np.maximum(0.0, 2.0 - t) ** 3).decay_class, DecayClass.COMPACT)


class AbelTransformTests(SimpleTestCase):

    def test_against_direct_quadrature(self):
        f = RadialFunction.truncated_gaussian(1.0)
        for t in (0.0, 1.0):
            with self.subTest(t=t):
                def integrand(x):
                    cosh_d = mpmath.cosh(t) + mpmath.exp(t) * x * x / 2
                    return float(f(float(mpmath.acosh(cosh_d))))

                reach = [float(mpmath.sqrt(2 * mpmath.exp(-t) * (mpmath.cosh(d) - mpmath.cosh(t)))) for d in (5.5, 6.0)]
                expected = 2 * math.exp(t / 2) * float(mpmath.quad(integrand, [0, reach[0], reach[1]]))
                self.assertAlmostEqual(abel_transform(f, [t])[0], expected, delta=1e-9)

    def test_even_and_compactly_supported(self):
        f = RadialFunction.truncated_gaussian(0.5)
        values = abel_transform(f, [-1.2, 1.2, 3.5])
        self.assertEqual(values[0], values[1])
        self.assertEqual(values[2], 0.0)

    def test_zero_function(self):
        zero = RadialFunction.zero()
        np.testing.assert_array_equal(abel_transform(zero, [0.0, 1.0]), [0.0, 0.0])
        self.assertEqual(abel_fourier_identity(zero, [0.0, 1.0]), 0.0)
        self.assertEqual(spectral_roundtrip(zero), 0.0)

    def test_abel_identity(self):
        for width in WIDTHS:
            with self.subTest(width=width):
                f = RadialFunction.truncated_gaussian(width)
                self.assertLess(abel_fourier_identity(f, spectral_grid(f)), 1e-4)

    def test_duality(self):
        f = RadialFunction.truncated_gaussian(1.0)
        self.assertLess(duality_defect(f, np.linspace(0.0, 6.0, 13)), 1e-4)


class SphericalTransformTests(SimpleTestCase):

    def test_linearity(self):
        f = RadialFunction.truncated_gaussian(1.0)
        g = RadialFunction.truncated_gaussian(0.5)
        combined = RadialFunction.linear_combination([(2.0, f), (-1.0, g)])
        nu = np.linspace(0.0, 5.0, 11)
        expected = 2.0 * spherical_transform(f, nu).values - spherical_transform(g, nu).values
        np.testing.assert_allclose(spherical_transform(combined, nu).values, expected, atol=1e-9)

    def test_inversion_roundtrip(self):
        for width in (0.5, 1.0):
            with self.subTest(width=width):
                self.assertLess(inversion_roundtrip(RadialFunction.truncated_gaussian(width)), 1e-3)

    def test_inversion_needs_fine_grid(self):
        f = RadialFunction.truncated_gaussian(1.0)
        coarse = spherical_transform(f, np.arange(0.0, 16.5, 0.5))
        with self.assertRaises(GridTooCoarse):
            inverse_spherical(coarse, np.linspace(0.0, 5.0, 11))

    def test_inversion_needs_even_profile(self):
        grid = np.linspace(0.0, 1.0, 11)
        with self.assertRaises(OutOfRange):
            inverse_spherical(SpectralProfile(grid, np.ones_like(grid), even=False), grid)


class SpectralAbelTests(SimpleTestCase):

    def test_roundtrip(self):
        for width in WIDTHS:
            with self.subTest(width=width):
                self.assertLess(spectral_roundtrip(RadialFunction.truncated_gaussian(width)), 1e-3)

    def test_insufficient_decay(self):
        f = RadialFunction.truncated_gaussian(1.0)
        truncated = spherical_transform(f, np.arange(0.0, 2.05, 0.1))
        with self.assertRaises(InsufficientDecay):
            spectral_ff(truncated, np.linspace(0.0, 5.0, 11))

    def test_zero_profile(self):
        grid = np.linspace(0.0, 10.0, 101)
        zero = SpectralProfile(grid, np.zeros_like(grid))
        np.testing.assert_array_equal(spectral_ff(zero, [0.0, 1.0]), [0.0, 0.0])
