"""Critical scenario identification: STL monitoring, A/G contracts and
sampling-based falsification of a car-following AEB model."""

__version__ = "0.1.0"
