"""Exception types.

Two families: ``InputError`` for malformed or inconsistent inputs and
``NumericalError`` for well-formed inputs that fall on a degenerate or
singular configuration. The CLI maps them to exit codes 3 and 2.
"""


class ObliqueError(Exception):
    pass


class InputError(ObliqueError):
    pass


class NumericalError(ObliqueError):
    pass


class NonFinite(InputError):
    """A NaN or infinite value reached a constructor or a chart evaluation."""


class DimensionMismatch(InputError):
    pass


class VarianceMismatch(InputError):
    """Components with the wrong variance tag were passed to an operation."""


class NotSymmetric(InputError):
    pass


class FingerprintMismatch(InputError):
    """Components were paired with a basis other than the one that produced them."""


class NotUnitBasis(InputError):
    pass


class DegenerateBasis(NumericalError):
    pass


class SingularGram(NumericalError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class SingularJacobian(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


class OutOfDomain(NumericalError):
    pass


class ZeroTangent(NumericalError):
    pass

