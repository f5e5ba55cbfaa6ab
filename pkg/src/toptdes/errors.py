"""Exception types shared across the package."""


class ToptdesError(Exception):
    """Base class for all package errors."""


class InvalidProblemError(ToptdesError, ValueError):
    """Raised when a discrimination problem is malformed."""


class InvalidDesignError(ToptdesError, ValueError):
    """Raised when design points/weights cannot form a probability design."""


class ValidityError(ToptdesError, ValueError):
    """Raised when a closed-form construction is requested outside its
    validity region (e.g. |b| below the case threshold)."""


class CertificateError(ToptdesError):
    """Raised when an optimality certificate is undefined, e.g. the design
    annihilates the model difference (t_value ~ 0)."""


class SolverError(ToptdesError):
    """Raised when the solver exhausts its restarts without certifying.

    Carries the best uncertified design and its certificate so callers can
    inspect how close the run got.
    """

    def __init__(self, message, design=None, certificate=None, t_value=None):
        super().__init__(message)
        self.design = design
        self.certificate = certificate
        self.t_value = t_value
