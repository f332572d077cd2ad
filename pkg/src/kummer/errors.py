"""Exception types raised across the package."""


class KummerError(ValueError):
    """Base class for invalid inputs."""


class DomainError(KummerError):
    """A point lies in an excluded set (coordinate origin, pole, ...)."""


class DimensionError(KummerError):
    """Operands have incompatible dimensions."""


class SignatureError(KummerError):
    """Invalid resonance frequency vector."""


class GroupMembershipError(KummerError):
    """A matrix is not an element of the expected Lie group."""
