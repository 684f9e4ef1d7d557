"""
Exception hierarchy for the syntomic engine

Every domain error derives from SyntomicError, so the CLI maps exit codes
with a single except.
"""


class SyntomicError(Exception):
    """Base class for every engine error"""


class CompositionNonzero(SyntomicError):
    """d_out * d_in is not zero: the complex was built wrong"""


class WeightOverflow(SyntomicError):
    """A weight beyond the stored window (or beyond the headroom) was requested"""


class DegreeError(SyntomicError):
    """Operation only defined in cohomological degree 0"""


class NegativeScaling(SyntomicError):
    """Scaled differential would need a negative power of p"""


class IntegralityViolation(SyntomicError):
    """Divided Frobenius entry with negative valuation"""


class WindowTooSmall(SyntomicError):
    """Frobenius images of the requested weights leave the window"""


class CertificateFailure(SyntomicError):
    """No certified tower truncation fits in the weight window"""


class NonTermination(SyntomicError):
    """Precision escalation passed the configured ceiling"""


class Unsupported(SyntomicError):
    """Parameters outside the range an operation supports"""


class ValidationMismatch(SyntomicError):
    """Matrix computation disagrees with the closed form or an oracle"""
