"""Input validation helpers shared by the public functions and estimators."""
from __future__ import annotations

import numbers
from fractions import Fraction

from .exceptions import CoprimeJitterError, RangeError

SCHEMES = ("blind", "nonblind")


def check_int(value, name: str, minimum: int | None = None) -> int:
    """Return ``value`` as a Python int, rejecting bools, floats and out-of-range values."""
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise CoprimeJitterError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise RangeError(f"{name} must be >= {minimum}, got {value}")
    return value


def as_fraction(value, name: str) -> Fraction:
    """Convert an exact rational input to :class:`~fractions.Fraction`.

    Accepts ints, Fractions and strings such as ``"1/8"``. Floats are refused
    because their binary expansion would silently leak into exact comparisons.
    """
    if isinstance(value, bool):
        raise CoprimeJitterError(f"{name} must be rational, got {value!r}")
    if isinstance(value, (Fraction, numbers.Integral)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise CoprimeJitterError(f"{name}: cannot parse {value!r} as p/q") from exc
    raise CoprimeJitterError(
        f"{name} must be an int, Fraction or 'p/q' string, got {type(value).__name__}"
    )


def check_scheme(scheme: str) -> str:
    if scheme not in SCHEMES:
        raise CoprimeJitterError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    return scheme
