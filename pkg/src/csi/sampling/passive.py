"""Feedback-agnostic samplers: Halton sequence and uniform random."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .space import ParameterSpace

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


class UnsupportedDimension(ValueError):
    pass


def radical_inverse(index: int, base: int) -> Fraction:
    """Mirror the base-``base`` digits of ``index`` about the radix point."""
    if index < 0:
        raise ValueError("index must be non-negative")
    num, den = 0, 1
    while index > 0:
        index, digit = divmod(index, base)
        num = num * base + digit
        den *= base
    return Fraction(num, den)


def halton_unit(index: int, dims: int) -> np.ndarray:
    if index < 1:
        raise ValueError(f"Halton index must be >= 1, got {index}")
    if dims > len(PRIMES):
        raise UnsupportedDimension(f"Halton sampler supports at most {len(PRIMES)} dimensions, got {dims}")
    return np.array([float(radical_inverse(index, p)) for p in PRIMES[:dims]])


def halton(index: int, space: ParameterSpace) -> np.ndarray:
    """Point ``index`` (1-based, no skipping, no scrambling) of the Halton sequence in ``space``."""
    return space.from_unit(halton_unit(index, len(space)))


def uniform_random(rng: np.random.Generator, space: ParameterSpace) -> np.ndarray:
    return space.from_unit(rng.random(len(space)))
