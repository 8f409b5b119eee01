"""Exception types raised across the package."""


class FingerprintError(Exception):
    """Base class for all package errors."""


class DomainError(FingerprintError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class LengthMismatchError(DomainError):
    """Two codewords (or a codeword and a code) have incompatible lengths."""


class CodeConstructionError(FingerprintError, RuntimeError):
    """A random linear code could not be built or certified."""


class NoCrossoverError(FingerprintError, RuntimeError):
    """No quantum/classical crossover exists inside the search window."""
