#!/usr/bin/env python3
"""
Tests for rank-one spaces, spectral units, the V-coordinates and the K-integral oracle
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
    DegeneratePoint,
    NotUnimodular,
    OutOfRange,
    UnsupportedSpace,
)
from harmonic.rankone import (
    SL2,
    Method,
    RankOneSpace,
    SpectralParam,
    SphericalValue,
    Units,
    VPoint,
    acts_freely,
    exp_rho_h,
    iwasawa_compose,
    iwasawa_decompose,
    k_fixed_adapted_vector,
    lower_unipotent,
    measure_invariance_defect,
    spherical_oracle,
    spherical_oracle_iwasawa,
    xi_minus_rho,
    xi_scaling_defect,
)


class RankOneSpaceTests(SimpleTestCase):

    def test_parse_and_constants(self):
        space = RankOneSpace.parse('2,1')
        self.assertEqual((space.p, space.q), (2, 1))
        self.assertEqual(space.r, 1.0)
        self.assertEqual(space.rho_alpha, 2.0)
        self.assertAlmostEqual(space.c_h, 1.0 / 24.0)
        self.assertEqual(space.exactness, 'experimental')
        self.assertEqual(str(space), '2,1')

    def test_sl2(self):
        self.assertEqual(RankOneSpace.parse('1,0'), SL2)
        self.assertTrue(SL2.is_sl2)
        self.assertEqual(SL2.r, 0.25)
        self.assertEqual(SL2.exactness, 'exact')

    def test_labels(self):
        self.assertEqual(SL2.label, 'SL(2,R)')
        self.assertEqual(RankOneSpace(3, 0).label, 'SO(4,1)')
        self.assertEqual(RankOneSpace(2, 1).label, 'SU(2,1)')
        self.assertEqual(RankOneSpace(4, 3).label, 'Sp(2,1)')
        self.assertEqual(RankOneSpace(8, 7).label, 'F4(-20)')

    def test_invalid_spaces(self):
        with self.assertRaises(UnsupportedSpace):
            RankOneSpace(0, 0)
        with self.assertRaises(UnsupportedSpace):
            RankOneSpace.parse('one,zero')


class SpectralParamTests(SimpleTestCase):

    def test_parse(self):
        self.assertEqual(SpectralParam.parse('1.0i').value, 1j)
        self.assertEqual(SpectralParam.parse('0.3-0.4i').value, 0.3 - 0.4j)
        self.assertEqual(SpectralParam.parse('-i').value, -1j)
        with self.assertRaises(OutOfRange):
            SpectralParam.parse('lambda')

    def test_unit_conversions(self):
        space = RankOneSpace(3, 0)
        lam = SpectralParam(0.5j)
        self.assertEqual(lam.alpha(space), 0.75j)
        self.assertAlmostEqual(lam.geodesic(space), 0.75)
        back = lam.in_units(Units.GEODESIC, space).in_units(Units.RHO, space)
        self.assertAlmostEqual(back.value, lam.value)
        self.assertEqual(SpectralParam(1.0, Units.GEODESIC).rho(SL2), 2j)

    def test_contragredient(self):
        self.assertEqual(SpectralParam(0.3 + 0.4j).contragredient().value, -0.3 + 0.4j)
        self.assertEqual(SpectralParam(2.0 + 0.1j, Units.GEODESIC).contragredient().value, 2.0 - 0.1j)
        unitary = SpectralParam(0.8j)
        self.assertEqual(unitary.contragredient(), unitary)

    def test_is_unitary(self):
        self.assertTrue(SpectralParam(1.0j).is_unitary(SL2))
        self.assertTrue(SpectralParam(3.0, Units.GEODESIC).is_unitary(SL2))
        self.assertFalse(SpectralParam(0.5).is_unitary(SL2))

    def test_spherical_value_rejects_negative_error(self):
        with self.assertRaises(OutOfRange):
            SphericalValue(1.0, Method.ORACLE, -1.0)


class VCoordinateTests(SimpleTestCase):

    def test_degenerate_point(self):
        with self.assertRaises(DegeneratePoint):
            xi_minus_rho(SL2, VPoint(0.0, 0.0))

    def test_xi_homogeneity(self):
        for x, s in ((1.3, 0.7), (0.2, -1.5), (5.0, 2.0)):
            with self.subTest(x=x, s=s):
                self.assertLess(xi_scaling_defect(x, s), 1e-13)

    def test_exp_rho_h_at_origin(self):
        self.assertEqual(exp_rho_h(RankOneSpace(2, 1), VPoint(0.0, 0.0)), 1.0)

    def test_sl2_values(self):
        for x in (0.3, 1.0, 4.0):
            with self.subTest(x=x):
                self.assertAlmostEqual(xi_minus_rho(SL2, VPoint(x)), 2.0 / x, delta=1e-14 * (2.0 / x))
                self.assertAlmostEqual(exp_rho_h(SL2, VPoint(x)), math.sqrt(1.0 + x * x / 4.0), delta=1e-14)

    def test_dilation_invariant_measure(self):
        def phi(x):
            s = (abs(x) - 1.75) / 1.25
            return math.exp(-1.0 / (1.0 - s * s)) if abs(s) < 1 else 0.0

        self.assertLess(measure_invariance_defect(phi, 0.4), 1e-9)

    def test_acts_freely(self):
        self.assertTrue(acts_freely([1.0, -2.0, 0.3], 0.5))
        self.assertFalse(acts_freely([1.0], 0.0))
        with self.assertRaises(DegeneratePoint):
            acts_freely([0.0, 1.0], 0.5)


class IwasawaTests(SimpleTestCase):

    def test_roundtrip(self):
        for theta, t, x in ((0.3, 1.2, -0.7), (-2.5, -0.4, 2.0), (1.0, 0.0, 0.0)):
            with self.subTest(theta=theta, t=t, x=x):
                decomposed = iwasawa_decompose(iwasawa_compose(theta, t, x))
                np.testing.assert_allclose(decomposed, (theta, t, x), atol=1e-12)

    def test_not_unimodular(self):
        with self.assertRaises(NotUnimodular):
            iwasawa_decompose(np.diag([2.0, 1.0]))

    def test_a_part_of_a_v_point(self):
        # exp(rho H(v)) is the A-component of exp X in G = KAN
        for x in (0.25, 1.0, 3.0, 10.0):
            with self.subTest(x=x):
                _, t, _ = iwasawa_decompose(lower_unipotent(x))
                self.assertAlmostEqual(exp_rho_h(SL2, VPoint(x)), math.exp(t / 2.0), delta=1e-13 * math.exp(t / 2.0))


class OracleTests(SimpleTestCase):

    def test_value_at_identity(self):
        self.assertEqual(spherical_oracle(SL2, SpectralParam(0.7j), 0.0).value, 1.0)

    def test_sl2_is_a_legendre_function(self):
        for lam in (0.0, 1.0j, 0.4, 0.2 + 0.5j):
            for t in (0.5, 2.0, 5.0):
                with self.subTest(lam=lam, t=t):
                    value = spherical_oracle(SL2, SpectralParam(lam), t).value
                    expected = complex(mpmath.legenp(-(1 + lam) / 2, 0, mpmath.cosh(t), type=3))
                    self.assertLess(abs(value - expected), 1e-10 * max(1.0, abs(expected)))

    def test_iwasawa_route_agrees(self):
        lam = SpectralParam(0.6j)
        for t in (0.5, 1.5):
            with self.subTest(t=t):
                self.assertAlmostEqual(
                    spherical_oracle_iwasawa(lam, t).value, spherical_oracle(SL2, lam, t).value, delta=1e-9)

    def test_higher_dimensional_oracle(self):
        space = RankOneSpace(3, 0)
        lam, t = SpectralParam(0.5j), 1.0
        exponent = -space.rho_alpha * (1 + lam.value)
        integral = mpmath.quad(
            lambda th: (mpmath.cosh(t) - mpmath.sinh(t) * mpmath.cos(th)) ** exponent * mpmath.sin(th) ** 2,
            [0, mpmath.pi])
        expected = complex(integral * 2 / mpmath.pi)
        self.assertLess(abs(spherical_oracle(space, lam, t).value - expected), 1e-10)

    def test_real_and_weyl_symmetric_on_the_unitary_axis(self):
        for space in (SL2, RankOneSpace(3, 0)):
            for nu, t in ((0.4, 0.8), (1.5, 2.0), (3.0, 1.0)):
                with self.subTest(space=space.label, nu=nu, t=t):
                    plus = spherical_oracle(space, SpectralParam(1j * nu), t).value
                    minus = spherical_oracle(space, SpectralParam(-1j * nu), t).value
                    self.assertLess(abs(plus.imag), 1e-10)
                    self.assertLess(abs(plus - minus), 1e-10)

    def test_unsupported(self):
        with self.assertRaises(UnsupportedSpace):
            spherical_oracle(RankOneSpace(2, 1), SpectralParam(0.0), 1.0)
        with self.assertRaises(OutOfRange):
            spherical_oracle(SL2, SpectralParam(0.0), -1.0)


class AdaptedVectorTests(SimpleTestCase):

    def test_k_fixed_vector_on_the_line(self):
        lam = SpectralParam(0.3 + 0.2j)
        vector = k_fixed_adapted_vector(SL2, lam)
        x = np.array([-3.0, 0.5, 2.0])
        expected = (np.abs(x) / 2) ** 0.5 * (1 + x * x / 4) ** (-(1 + lam.value) / 2)
        np.testing.assert_allclose(vector.eval_x(x), expected, rtol=1e-13)

    def test_k_fixed_vector_from_the_v_coordinates(self):
        lam = SpectralParam(0.5j)
        vector = k_fixed_adapted_vector(SL2, lam)
        for x in (-2.5, 0.4, 1.0, 6.0):
            with self.subTest(x=x):
                v = VPoint(abs(x))
                expected = xi_minus_rho(SL2, v) ** -0.5 * exp_rho_h(SL2, v) ** -(1 + lam.value)
                self.assertLess(abs(vector.eval_x(np.array([x]))[0] - expected), 1e-13 * abs(expected))

    def test_k_fixed_vector_limits(self):
        with self.assertRaises(OutOfRange):
            k_fixed_adapted_vector(SL2, SpectralParam(1.0))
        with self.assertRaises(UnsupportedSpace):
            k_fixed_adapted_vector(RankOneSpace(3, 0), SpectralParam(0.0))
        with self.assertRaises(DegeneratePoint):
            k_fixed_adapted_vector(SL2, SpectralParam(0.0)).eval_x(np.array([0.0]))
