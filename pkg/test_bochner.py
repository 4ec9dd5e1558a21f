#!/usr/bin/env python3
"""
Tests for the master integral and the Bochner density m(lambda, upsilon)
"""

import math
import os
import django
import mpmath
import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

# Setup Django environment
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'zonal.settings')
django.setup()

from harmonic.bochner import (
    MASTER_ANGLES,
    bochner_density,
    bochner_factorization,
    density_matrix,
    f_tilde,
    fit_decay_rate,
    log_normalizer,
    master_integral_closed,
    master_integral_quad,
    master_parameters,
    positivity_check,
    sample_master_parameters,
)
from harmonic.exceptions import (
    InsufficientDecade,
    NonConvergent,
    OutOfRange,
    OutOfStrip,
)
from harmonic.rankone import SL2, RankOneSpace, SpectralParam, Units

mpmath.mp.dps = 30


class MasterIntegralTests(SimpleTestCase):

    def test_closed_form_against_mpmath(self):
        for a, b, theta in ((0.3, 1.2, 0.4), (-0.5 + 1j, 0.9 - 0.3j, 1.2), (1.5, 2.0, 0.0)):
            with self.subTest(a=a, b=b, theta=theta):
                c = mpmath.cos(theta)
                expected = mpmath.quad(lambda t: t ** a / (1 + 2 * t * c + t * t) ** b, [0, 1, mpmath.inf])
                value = master_integral_closed(a, b, theta)
                self.assertLess(abs(value - complex(expected)) / abs(complex(expected)), 1e-10)

    def test_closed_form_against_quadrature(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            a, b, theta = sample_master_parameters(rng, imag=2.0)
            closed = master_integral_closed(a, b, theta)
            self.assertLess(abs(closed - master_integral_quad(a, b, theta)) / abs(closed), 1e-8)

    def test_large_imaginary_parts(self):
        # real-axis cancellation reaches 1e-7 here
        rng = np.random.default_rng(0)
        worst = 0.0
        for _ in range(30):
            a, b, theta = sample_master_parameters(rng)
            closed = master_integral_closed(a, b, theta)
            worst = max(worst, abs(closed - master_integral_quad(a, b, theta)) / abs(closed))
        self.assertLess(worst, 1e-8)

    def test_every_grid_angle_at_the_imaginary_corners(self):
        for theta in MASTER_ANGLES:
            for a, b in ((-0.5 + 5j, 0.8 - 5j), (2.0 - 5j, 3.0 + 5j), (0.5 + 5j, 1.2 + 5j)):
                with self.subTest(a=a, b=b, theta=theta):
                    closed = master_integral_closed(a, b, theta)
                    self.assertLess(abs(closed - master_integral_quad(a, b, theta)) / abs(closed), 1e-8)

    def test_preconditions(self):
        with self.assertRaises(NonConvergent):
            master_integral_closed(-1.5, 2.0, 0.3)
        with self.assertRaises(NonConvergent):
            master_integral_quad(1.0, 0.9, 0.3)
        with self.assertRaises(OutOfRange):
            master_integral_closed(0.5, 2.0, 2.0)

    def test_orbit_transform_is_the_master_integral(self):
        space = RankOneSpace(2, 1)
        lam = SpectralParam(0.5j)
        for upsilon, theta in ((0.0, 0.6), (3.0, 1.1)):
            with self.subTest(upsilon=upsilon, theta=theta):
                a, b = master_parameters(space, lam, upsilon)
                quad = master_integral_quad(a, b, theta)
                self.assertLess(abs(f_tilde(space, lam, upsilon, theta) - quad) / abs(quad), 1e-8)

    def test_single_angle_for_q_zero(self):
        with self.assertRaises(OutOfRange):
            f_tilde(SL2, SpectralParam(0.0), 1.0, theta=0.3)


class DensityTests(SimpleTestCase):

    def test_closed_form_against_mpmath(self):
        lam, r = 0.4j, 0.25

        def upsilon_factor(l, u):
            big_a = r * (1 + l)
            return mpmath.gamma(big_a - 0.5j * u) * mpmath.gamma(big_a + 0.5j * u) / mpmath.gamma(2 * big_a)

        density = bochner_density(SL2, SpectralParam(lam))
        for u in (0.0, 1.5, 7.0):
            with self.subTest(upsilon=u):
                expected = (mpmath.gamma(4 * r) / (4 * mpmath.pi * mpmath.gamma(2 * r) ** 2)
                            * upsilon_factor(lam, u) * upsilon_factor(-lam, u))
                self.assertLess(abs(density(u) - complex(expected)) / abs(complex(expected)), 1e-12)

    def test_probability_normalisation(self):
        for space in (SL2, RankOneSpace(3, 0)):
            for lam in (0.0, 0.5j, 1.0j, 3.0j, 0.5):
                with self.subTest(space=space.label, lam=lam):
                    mass = bochner_density(space, SpectralParam(lam)).total_mass()
                    self.assertLess(abs(mass - 1.0), 1e-8)

    @settings(max_examples=25, deadline=None, derandomize=True)
    @given(st.floats(-0.9, 0.9), st.floats(-5.0, 5.0))
    def test_weyl_symmetry(self, re, im):
        lam = SpectralParam(complex(re, im))
        grid = np.linspace(-20.0, 20.0, 41)
        plus = bochner_density(SL2, lam)(grid)
        minus = bochner_density(SL2, lam.negated())(grid)
        np.testing.assert_allclose(plus, minus, rtol=1e-12, atol=1e-300)

    def test_log_singularity_envelope(self):
        # m(0, upsilon) ~ (2 / pi) e^(-pi upsilon) / upsilon
        density = bochner_density(SL2, SpectralParam(0.0))
        u = 30.0
        log_ratio = density.log_eval(u).real + math.log(u) + math.pi * u - math.log(2.0 / math.pi)
        self.assertLess(abs(log_ratio), 5e-3)

    def test_strip(self):
        with self.assertRaises(OutOfStrip):
            bochner_density(SL2, SpectralParam(1.2))
        density = bochner_density(SL2, SpectralParam(0.5 + 2j))
        self.assertAlmostEqual(density.strip_width, 0.25)
        self.assertEqual(density.decay_rate, math.pi)

    def test_units(self):
        space = RankOneSpace(3, 0)
        rho = bochner_density(space, SpectralParam(1.0j))(2.0)
        geodesic = bochner_density(space, SpectralParam(1.5, Units.GEODESIC))(2.0)
        self.assertAlmostEqual(rho, geodesic, delta=1e-15)

    def test_factorization(self):
        upsilon = np.linspace(-5.0, 5.0, 11)
        parts = bochner_factorization(SL2, SpectralParam(0.3j), upsilon)
        np.testing.assert_allclose(parts.h, math.exp(log_normalizer(SL2)), rtol=1e-12)

    def test_factorization_with_a_double_root(self):
        # h is entire in upsilon: no poles or jumps show up on a fine grid
        upsilon = np.linspace(-10.0, 10.0, 201)
        parts = bochner_factorization(RankOneSpace(2, 1), SpectralParam(0.5j), upsilon)
        self.assertTrue(np.isfinite(parts.h).all())
        self.assertGreater(np.abs(parts.h).min(), 0.0)
        self.assertLess(np.abs(np.diff(np.log(np.abs(parts.h)), 2)).max(), 1e-2)

    def test_density_matrix(self):
        upsilon = np.array([0.0, 1.0, 4.0])
        lams = [0.2j, SpectralParam(0.5), 1.5j]
        matrix = density_matrix(SL2, lams, upsilon)
        self.assertEqual(matrix.shape, (3, 3))
        np.testing.assert_allclose(matrix[1], bochner_density(SL2, SpectralParam(0.5))(upsilon), rtol=1e-13)

    def test_experimental_cross_section(self):
        density = bochner_density(RankOneSpace(2, 1), SpectralParam(0.5j))
        self.assertTrue(density.experimental)
        self.assertEqual(density.decay_rate, math.pi / 2)
        self.assertAlmostEqual(density.total_mass(), 1.0, delta=1e-10)


class DecayAndPositivityTests(SimpleTestCase):

    def test_decay_rate_is_pi(self):
        fit = fit_decay_rate(bochner_density(SL2, SpectralParam(0.0)), (10.0, 50.0))
        self.assertLess(abs(fit.rate - math.pi) / math.pi, 1e-2)
        self.assertGreaterEqual(fit.r_squared, 0.999)

    def test_insufficient_decade(self):
        with self.assertRaises(InsufficientDecade):
            fit_decay_rate(bochner_density(SL2, SpectralParam(0.0)), (5.0, 12.0))

    def test_positive_classes(self):
        for lam in (0.0, 0.5j, 1.0j, 0.25, 0.5, 0.9):
            with self.subTest(lam=lam):
                report = positivity_check(SL2, SpectralParam(lam))
                self.assertEqual(report.status, 'positive')
                self.assertTrue(report.holds)
                self.assertGreaterEqual(report.min_value, -1e-10)

    def test_dirac_endpoint(self):
        report = positivity_check(SL2, SpectralParam(1.0))
        self.assertEqual(report.status, 'dirac')
        self.assertIsNone(report.min_value)

    def test_unconstrained_region(self):
        report = positivity_check(SL2, SpectralParam(0.3 + 0.4j))
        self.assertEqual(report.status, 'unconstrained')
        self.assertIsNone(report.holds)

    def test_outside_closed_strip(self):
        with self.assertRaises(OutOfRange):
            positivity_check(SL2, SpectralParam(1.5))
