from enum import Enum


class Variance(str, Enum):
    CONTRAVARIANT = "contravariant"
    COVARIANT = "covariant"

    def flipped(self) -> "Variance":
        return Variance.COVARIANT if self is Variance.CONTRAVARIANT else Variance.CONTRAVARIANT


class Role(str, Enum):
    """Whether a basis is the original frame or the dual built from one."""

    ORIGINAL = "original"
    DUAL = "dual"

    def flipped(self) -> "Role":
        return Role.DUAL if self is Role.ORIGINAL else Role.ORIGINAL
