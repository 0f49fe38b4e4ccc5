"""Exception hierarchy shared by every module."""


class TautCyclesError(Exception):
    """Base class for all computation errors raised by the package."""


# root systems
class RootSystemError(TautCyclesError, ValueError):
    pass


class NonClosedUnderReflection(RootSystemError):
    pass


class MultiplicityNotWeylInvariant(RootSystemError):
    pass


class NotABase(RootSystemError):
    pass


class RankTooLarge(RootSystemError):
    pass


class ElementNotInGroup(RootSystemError):
    pass


class InvalidTheta(RootSystemError):
    pass


# Morse data on flag manifolds
class ZeroPoint(TautCyclesError, ValueError):
    pass


class QNotRegular(TautCyclesError, ValueError):
    pass


class NonGenericSegment(TautCyclesError, ValueError):
    pass


class CosetMismatch(TautCyclesError, RuntimeError):
    """Internal invariant violated: crossing word and Weyl element disagree."""


# reduced geometry
class BadCase(TautCyclesError, ValueError):
    pass


class BadN(TautCyclesError, ValueError):
    pass


class PointOnCircleButRegularFlag(TautCyclesError, ValueError):
    pass


class PointOffCirclesButSingularFlag(TautCyclesError, ValueError):
    pass


class DegenerateDirection(TautCyclesError, ValueError):
    pass


class CoincidentCollapse(TautCyclesError, ValueError):
    """Two distinct collapse events happen at the same circle parameter."""


class CollapseAtBasepoint(TautCyclesError, ValueError):
    pass


class QOnFocalPoint(TautCyclesError, ValueError):
    pass


class QNotGeneric(TautCyclesError, ValueError):
    pass


class MonodromyError(TautCyclesError, RuntimeError):
    """Arc words are not related by the expected gluing permutation."""


# numerical oracle
class UnsupportedCase(TautCyclesError, ValueError):
    pass


class NotNormal(TautCyclesError, ValueError):
    pass


class RankDeficientTangentFrame(TautCyclesError, ValueError):
    pass


class SampleDegenerate(TautCyclesError, RuntimeError):
    pass


class FixedSpaceError(TautCyclesError, RuntimeError):
    """The located fixed subspace or its circle action has the wrong shape."""
