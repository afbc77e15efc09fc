"""Exception hierarchy shared by all tropeig modules."""


class TropEigError(Exception):
    """Base class for every error raised by this package."""


class ZeroPolynomial(TropEigError, ValueError):
    """The min-plus polynomial is identically +inf (no degree)."""


class LengthMismatch(TropEigError, ValueError):
    pass


class SizeMismatch(TropEigError, ValueError):
    pass


class Infeasible(TropEigError):
    """No permutation with finite weight exists (the permanent is +inf)."""


class NotHungarianPair(TropEigError, ValueError):
    pass


class SingularMatrixPolynomial(TropEigError):
    """The (tropical or complex) characteristic polynomial vanishes identically.

    ``witness`` names what detected the singularity, e.g. ``"val"`` or
    ``"deg"`` for the tropical permanents, ``"det"`` for a numeric determinant.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SingularTropical(SingularMatrixPolynomial):
    pass


class SingularNumeric(SingularMatrixPolynomial):
    pass


class NoCircuit(TropEigError):
    pass


class DegenerateInput(TropEigError, ValueError):
    pass


class NoConvergence(TropEigError, RuntimeError):
    pass


class NotMonicLike(TropEigError, ValueError):
    pass


class CountMismatch(TropEigError, ValueError):
    pass


class CertificateError(TropEigError, AssertionError):
    """A dual certificate returned by the assignment solver failed verification."""


class ParseError(TropEigError, ValueError):
    pass
