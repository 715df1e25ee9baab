"""Exception hierarchy.

Two families matter to callers (and to the CLI exit-code mapping):
``InputError`` means the caller handed us malformed or invalid data,
``NumericalError`` means an iteration or certificate failed at runtime.
"""


class CocycleLabError(Exception):
    """Base class for every error raised by this package."""


class InputError(CocycleLabError):
    """Invalid input data (bad table, bad matrices, mismatched objects)."""


class NumericalError(CocycleLabError):
    """A numerical procedure failed to converge or certify."""


# numkernel
class NotHermitian(InputError):
    pass


class DidNotConverge(NumericalError):
    pass


class DegenerateLeadingEigenvalue(NumericalError):
    pass


# groups
class NotAssociative(InputError):
    pass


class NoIdentity(InputError):
    pass


class NotBijectiveRows(InputError):
    pass


class NotUnitary(InputError):
    pass


class NotHomomorphism(InputError):
    pass


class ScalarAtNonIdentity(InputError):
    pass


# cohomology
class GroupMismatch(InputError):
    pass


class NonCommutingPair(InputError):
    pass


class GroupTooLarge(InputError):
    pass


# projrep
class CocycleMismatch(InputError):
    pass


class CocycleValueMismatch(InputError):
    pass


class NonIntegerMultiplicity(NumericalError):
    pass


class DegenerateSplit(NumericalError):
    pass


class DimensionOverflow(InputError):
    pass


# bounds
class NotFoundWithinCap(NumericalError):
    pass


# twisted
class Mismatch(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class NotSubWindow(InputError):
    pass


# mps
class NotInjective(NumericalError):
    pass


class NotSymmetric(NumericalError):
    pass


class NotProjectivelyConsistent(NumericalError):
    pass


class UnknownName(InputError):
    pass
