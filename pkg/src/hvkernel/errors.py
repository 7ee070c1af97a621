"""Exception types raised by the kernel."""


class HVError(Exception):
    """Base class for all kernel errors."""


class InvalidGenerator(HVError, ValueError):
    pass


class BoundExceeded(HVError):
    pass


class InconsistentCharacter(HVError, ValueError):
    pass


class ZeroLevel(HVError, ValueError):
    pass


class ZeroLambda(HVError, ValueError):
    pass


class WindowExceeded(HVError):
    pass


class KindMismatch(HVError, ValueError):
    pass


class NonRestrictedVector(HVError):
    pass


class ZeroVector(HVError, ValueError):
    pass


class HypothesisViolated(HVError):
    """A lemma's hypothesis does not hold for the supplied base module."""
