from .glis import (
    DegenerateSamples,
    EvaluatedSample,
    GlisConfig,
    GlisState,
    Phase,
    acquisition,
    clamp_feedback,
    fit_surrogate,
    idw_terms,
    inverse_quadratic,
    minimize,
    next_point,
    propose,
    surrogate,
    update,
)
from .passive import PRIMES, UnsupportedDimension, halton, halton_unit, radical_inverse, uniform_random
from .space import Dimension, ParameterSpace

__all__ = [name for name in dir() if not name.startswith("_")]
