#!/usr/bin/env python3
"""
Tests for principal-series matrix coefficients in the A-adapted realization
"""

import math
import os
import django
import numpy as np
from django.test import SimpleTestCase

# Setup Django environment
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'zonal.settings')
django.setup()

from harmonic.exceptions import (
    NonIntegrablePair,
    OutOfRange,
    OutOfStrip,
    RealizationMismatch,
)
from harmonic.rankone import SL2, SpectralParam, k_fixed_adapted_vector
from harmonic.repsim import (
    OrbitGrid,
    adapted_action,
    bochner_from_vectors,
    bump_vector,
    closed_form_defect,
    gram_min_eigenvalue,
    k_fixed_pair,
    matrix_coefficient_direct,
    orbit_decay_rates,
    orbit_norm,
    random_vector,
    unitary_coefficient_check,
    strip_coefficient_check,
    translation_invariance_defect,
)

S_SAMPLES = np.linspace(-3.0, 3.0, 8)


class VectorTests(SimpleTestCase):

    def test_bump_lives_on_one_orbit(self):
        f = bump_vector(SpectralParam(0.5j), center=1.0, omega=-1)
        u = np.linspace(-0.5, 2.5, 7)
        self.assertFalse(np.any(f.twisted(1, u)))
        self.assertTrue(np.all(np.abs(f.twisted(-1, u[1:-1])) > 0))
        self.assertEqual(f.extent, 3.0)

    def test_random_vector_is_reproducible(self):
        lam = SpectralParam(0.5j)
        u = np.linspace(-4.0, 4.0, 17)
        first, second = random_vector(lam, seed=11), random_vector(lam, seed=11)
        for omega in (-1, 1):
            np.testing.assert_array_equal(first.twisted(omega, u), second.twisted(omega, u))

    def test_action_translates_the_profile(self):
        lam = SpectralParam(0.2j)
        f = k_fixed_adapted_vector(SL2, lam)
        moved = adapted_action(lam, 1.5, f)
        u = np.linspace(-3.0, 3.0, 13)
        np.testing.assert_allclose(moved.twisted(1, u), f.twisted(1, u - 1.5), rtol=1e-15)
        self.assertIs(adapted_action(lam, 0.0, f), f)
        with self.assertRaises(RealizationMismatch):
            adapted_action(SpectralParam(0.4), 1.0, f)

    def test_orbit_decay_rates(self):
        rates = orbit_decay_rates(k_fixed_adapted_vector(SL2, SpectralParam(0.4)))
        self.assertAlmostEqual(rates.left, 0.7, delta=1e-6)
        self.assertAlmostEqual(rates.right, 0.7, delta=1e-6)


class InnerProductTests(SimpleTestCase):

    def test_norm_of_the_k_fixed_vector(self):
        f = k_fixed_adapted_vector(SL2, SpectralParam(0.5j))
        self.assertAlmostEqual(orbit_norm(f), math.sqrt(math.pi), delta=1e-8)

    def test_norm_diverges_below_minus_one_half(self):
        with self.assertRaises(NonIntegrablePair):
            orbit_norm(k_fixed_adapted_vector(SL2, SpectralParam(-0.6)))

    def test_invariance(self):
        f = k_fixed_adapted_vector(SL2, SpectralParam(0.5j))
        g = random_vector(SpectralParam(0.5j), seed=3)
        self.assertLess(translation_invariance_defect(f, f, 1.5), 1e-8)
        self.assertLess(translation_invariance_defect(f, g, -0.8), 1e-8)


class MatrixCoefficientTests(SimpleTestCase):

    def test_identity_value_of_the_k_fixed_pair(self):
        for lam in (0.0, 0.3 + 0.4j, 0.5):
            with self.subTest(lam=lam):
                f, g = k_fixed_pair(SpectralParam(lam))
                value = matrix_coefficient_direct(f, g, [0.0]).values[0]
                self.assertAlmostEqual(value, math.pi, delta=1e-9)

    def test_realization_mismatch(self):
        lam = SpectralParam(0.3)
        f = k_fixed_adapted_vector(SL2, lam)
        with self.assertRaises(RealizationMismatch):
            matrix_coefficient_direct(f, f, [0.0])
        with self.assertRaises(RealizationMismatch):
            bochner_from_vectors(f, f)

    def test_bochner_samples_integrate_to_the_coefficient(self):
        f, g = k_fixed_pair(SpectralParam(0.8j))
        samples = bochner_from_vectors(f, g)
        total = samples.dupsilon * np.sum(samples.values)
        self.assertAlmostEqual(total, math.pi, delta=1e-8)

    def test_unitary_pairs(self):
        lam = SpectralParam(0.5j)
        pairs = [
            (bump_vector(lam, center=-0.5), bump_vector(lam, center=1.0, half_width=1.5)),
            (random_vector(lam, seed=0), random_vector(lam, seed=1)),
            k_fixed_pair(lam),
        ]
        for f, g in pairs:
            with self.subTest(pair=(f.label, g.label)):
                self.assertLess(unitary_coefficient_check(f, g, lam, S_SAMPLES), 1e-6)

    def test_unitary_check_needs_unitary_lambda(self):
        lam = SpectralParam(0.3)
        f, g = k_fixed_pair(lam)
        with self.assertRaises(OutOfRange):
            unitary_coefficient_check(f, g, lam, S_SAMPLES)

    def test_strip_pairs(self):
        for lam in (0.3, 0.5, 0.3 + 0.4j, 0.9):
            with self.subTest(lam=lam):
                self.assertLess(strip_coefficient_check(SpectralParam(lam), S_SAMPLES), 1e-5)

    def test_close_to_the_strip_wall(self):
        # g decays like (2 cosh u)^-0.01, so the orbit grid runs out to |u| ~ 2000
        self.assertLess(strip_coefficient_check(SpectralParam(0.98), [-1.0, 0.5, 2.0], nats=20.0), 1e-4)

    def test_strip_check_domain(self):
        with self.assertRaises(OutOfStrip):
            strip_coefficient_check(SpectralParam(-0.3), S_SAMPLES)

    def test_orbit_density_matches_closed_form(self):
        for lam in (0.3, 0.3 + 0.4j):
            with self.subTest(lam=lam):
                self.assertLess(closed_form_defect(SpectralParam(lam)), 1e-6)

    def test_explicit_grid(self):
        f, g = k_fixed_pair(SpectralParam(0.5j))
        grid = OrbitGrid.for_pair(f, g, (2.0,))
        self.assertGreaterEqual(grid.u[-1], max(f.extent, g.extent) + 2.0)
        value = matrix_coefficient_direct(f, g, [2.0], grid).values[0]
        self.assertAlmostEqual(value, matrix_coefficient_direct(f, g, [2.0]).values[0], delta=1e-14)

    def test_positive_definite(self):
        for seed in range(5):
            with self.subTest(seed=seed):
                self.assertGreaterEqual(gram_min_eigenvalue(SpectralParam(0.5j), seed=seed), -1e-8)
