"""Exception types raised by the package."""


class CoprimeJitterError(ValueError):
    """Base class for all validation errors raised by this package."""


class NotCoprime(CoprimeJitterError):
    """The undersampling factors share a common divisor."""


class RangeError(CoprimeJitterError):
    """A configuration value lies outside its admissible range."""


class DegenerateGrid(CoprimeJitterError):
    """The quantization grid cannot represent any nonzero jitter below rho."""


class LengthMismatch(CoprimeJitterError):
    """Jitter arrays do not match the sampler index ranges."""


class NonIntegerResult(ArithmeticError):
    """A closed form that must be integral produced a fractional value."""


class EmptyLag(CoprimeJitterError):
    """A lag that must have contributors has none."""
