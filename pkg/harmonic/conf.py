"""
Numerical defaults for the harmonic app.

Project settings may override any key through a ``HARMONIC`` dict, e.g.::

    HARMONIC = {
        'FOURIER_STEP': 0.05,
    }

Works the way rest_framework.settings.api_settings does: attributes are
looked up lazily, falling back to DEFAULTS, and the object is usable when
Django settings have not been configured (library use).
"""
from django.conf import settings

DEFAULTS = {
    # adaptive quadrature (scipy QUADPACK)
    'QUAD_ABS_TOL': 1e-11,
    'QUAD_LIMIT': 500,
    # 2F1 power series
    'SERIES_MAX_TERMS': 20000,
    'SERIES_REL_TOL': 2e-15,
    # Bochner-Fourier route
    'FOURIER_STEP': 0.1,
    'FOURIER_TAIL_TOL': 1e-11,
    # Harish-Chandra residue series
    'HC_MAX_TERMS': 150,
    # cross-section quadrature for q > 0
    'CROSS_SECTION_NODES': 48,
    'CROSS_SECTION_WEIGHT': 'sphere',
    # orbit grids, tails cut where the profile is below e^-nats
    'ORBIT_TAIL_NATS': 30.0,
    # command line
    'DEFAULT_TOL': 1e-10,
    'DEFAULT_SEED': 0,
    'WORKERS': 1,
}


class HarmonicSettings:
    def __init__(self, defaults=None):
        self.defaults = defaults or DEFAULTS

    @property
    def user_settings(self):
        if not settings.configured:
            return {}
        return getattr(settings, 'HARMONIC', {})

    def __getattr__(self, attr):
        if attr not in self.defaults:
            raise AttributeError(f"Invalid harmonic setting: '{attr}'")
        return self.user_settings.get(attr, self.defaults[attr])


harmonic_settings = HarmonicSettings(DEFAULTS)
