"""Exception hierarchy shared by all neglecton modules."""


class NeglectonError(Exception):
    """Base class for every error raised by the package."""


class InvalidLabel(NeglectonError, ValueError):
    pass


class NonScalarTwist(NeglectonError):
    pass


class UnsupportedFusion(NeglectonError):
    """Raised when a product contains a non-simple (projective) summand.

    ``found`` holds the simple channels that were identified and
    ``remainder_dim`` the dimension left unaccounted for.
    """

    def __init__(self, msg, found=(), remainder_dim=0):
        super().__init__(msg)
        self.found = tuple(found)
        self.remainder_dim = remainder_dim


class NoHighestWeight(NeglectonError):
    pass


class AmbiguousChannel(NeglectonError):
    pass


class SingularSystem(NeglectonError):
    pass


class InconsistentScalar(NeglectonError):
    pass


class UnsupportedDecomposition(NeglectonError):
    pass


class DegenerateForm(NeglectonError):
    pass


class NonScalarBubble(NeglectonError):
    pass


class UnsupportedTrace(NeglectonError):
    pass


class UnknownKey(NeglectonError, KeyError):
    pass


class IntegerAlpha(NeglectonError, ValueError):
    pass


class NonDiagonalJM(NeglectonError):
    pass


class UnsupportedN(NeglectonError, ValueError):
    pass


class OffDiagTooLarge(NeglectonError):
    pass


class NoRootInBracket(NeglectonError):
    pass


class InvalidRotation(NeglectonError, ValueError):
    pass


class LeakyGate(NeglectonError):
    pass


class InvalidWord(NeglectonError, ValueError):
    pass
