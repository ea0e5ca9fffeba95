"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, numerical
failures exit 2, I/O failures exit 3.
"""


class QbChainError(Exception):
    """Base class for all package errors."""


class UsageError(QbChainError):
    """Malformed command line or run configuration."""


class ConfigParseError(UsageError):
    """Config file could not be parsed; message carries file/field context."""


class NumericalError(QbChainError):
    """Base class for errors signalling numerical pathology."""


class NonFiniteParameter(NumericalError):
    """A model parameter is NaN or infinite."""


class OddDimerCount(NumericalError):
    """Momentum grids require an even dimer count (no self-paired k = pi mode)."""


class NegativeRadicand(NumericalError):
    """Dispersion radicand below the noise floor; formula/implementation bug."""


class EigensolverFailure(NumericalError):
    """Eigensolver did not converge or produced an inconsistent decomposition."""


class MomentumMismatch(NumericalError):
    """Overlap requested between mode decompositions at different momenta."""


class SizeLimit(NumericalError):
    """Requested many-body system size outside the supported range."""


class GaplessAmbiguity(UserWarning):
    """Ground state degenerate at criticality; deterministic basis used."""
