"""
Error hierarchy for the harmonic kernels.

Modelled on rest_framework.exceptions.APIException: every error carries a
human readable ``detail`` and a machine readable ``code``. ``exit_code`` is
what the management commands hand to CommandError.
"""


class HarmonicError(Exception):
    default_detail = 'A numerical failure occurred.'
    default_code = 'harmonic_error'
    exit_code = 3

    def __init__(self, detail=None, code=None):
        self.detail = detail if detail is not None else self.default_detail
        self.code = code if code is not None else self.default_code
        super().__init__(self.detail)

    def __str__(self):
        return str(self.detail)


class InvalidInput(HarmonicError):
    """Errors caused by the request rather than by the numerics."""
    default_detail = 'Invalid input.'
    default_code = 'invalid_input'
    exit_code = 2


# specfun

class PoleOfGamma(HarmonicError):
    default_detail = 'Gamma has a pole at this argument.'
    default_code = 'pole_of_gamma'

    def __init__(self, k, detail=None):
        self.k = k
        super().__init__(detail or f'Gamma has a pole at z = -{k}.')


class ParameterPole(HarmonicError):
    default_detail = 'Hypergeometric parameter hits a Gamma pole.'
    default_code = 'parameter_pole'


class DivergesAtOne(HarmonicError):
    default_detail = '2F1 diverges at z = 1 when Re(c - a - b) <= 0.'
    default_code = 'diverges_at_one'


class BudgetExceeded(HarmonicError):
    default_detail = 'Series did not converge within the term budget.'
    default_code = 'budget_exceeded'


# rankone

class DegeneratePoint(InvalidInput):
    default_detail = 'The point (0, 0) is not in V\'.'
    default_code = 'degenerate_point'


class NotUnimodular(InvalidInput):
    default_detail = 'Matrix determinant differs from 1.'
    default_code = 'not_unimodular'


class UnsupportedSpace(InvalidInput):
    default_detail = 'Operation is not available for this rank-one space.'
    default_code = 'unsupported_space'


class QuadratureFailure(HarmonicError):
    default_detail = 'Adaptive quadrature did not reach the requested accuracy.'
    default_code = 'quadrature_failure'


# bochner

class NonConvergent(InvalidInput):
    default_detail = 'Integral preconditions violated; the integral diverges.'
    default_code = 'non_convergent'


class OutOfStrip(InvalidInput):
    default_detail = 'Spectral parameter outside the strip |Re lambda| < 1.'
    default_code = 'out_of_strip'


class InsufficientDecade(InvalidInput):
    default_detail = 'Fit range too small for a decay-rate estimate.'
    default_code = 'insufficient_decade'


class OutOfRange(InvalidInput):
    default_detail = 'Argument outside the supported range.'
    default_code = 'out_of_range'


# spherical

class OutsideTube(InvalidInput):
    default_detail = 'Point lies outside the tube |Im t| < pi.'
    default_code = 'outside_tube'


class SlowConvergence(HarmonicError):
    default_detail = 'Point is within 0.02 of the tube boundary.'
    default_code = 'slow_convergence'

    def __init__(self, result, detail=None):
        self.result = result
        super().__init__(detail)


class SpectralPole(InvalidInput):
    default_detail = 'Spectral parameter sits on a pole of the series coefficients.'
    default_code = 'spectral_pole'


class NeedMoreTerms(HarmonicError):
    default_detail = 'Series tail bound exceeds the requested tolerance.'
    default_code = 'need_more_terms'

    def __init__(self, result, detail=None):
        self.result = result
        super().__init__(detail)


# transforms

class PoleAtZero(InvalidInput):
    default_detail = 'The c-function has a pole at lambda = 0.'
    default_code = 'pole_at_zero'


class GridTooCoarse(InvalidInput):
    default_detail = 'Spectral grid step too coarse for the support bound.'
    default_code = 'grid_too_coarse'


class TailTruncation(HarmonicError):
    default_detail = 'Radial profile does not decay within the truncation window.'
    default_code = 'tail_truncation'


class InsufficientDecay(HarmonicError):
    default_detail = 'Spectral profile is not negligible at the grid edge.'
    default_code = 'insufficient_decay'


# repsim

class RealizationMismatch(InvalidInput):
    default_detail = 'Vector belongs to a different principal-series realization.'
    default_code = 'realization_mismatch'


class NonIntegrablePair(HarmonicError):
    default_detail = 'Orbit integrand is not negligible at the grid edge.'
    default_code = 'non_integrable_pair'


class ParsevalHypothesisFailed(HarmonicError):
    default_detail = 'Twisted orbit profile is not absolutely integrable on the grid.'
    default_code = 'parseval_hypothesis_failed'
