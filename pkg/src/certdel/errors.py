"""Exception types shared across the package."""


class CertDelError(Exception):
    """Base class for all package errors."""


class LengthMismatch(CertDelError, ValueError):
    pass


class RegisterTooLarge(CertDelError, ValueError):
    pass


class BallTooLarge(CertDelError, ValueError):
    pass


class EmptyOutcome(CertDelError, RuntimeError):
    """A sampled projective outcome carried zero probability mass."""


class AlreadyConsumed(CertDelError, RuntimeError):
    """A ciphertext register was used after a consuming operation."""


class UnsupportedScheme(CertDelError, ValueError):
    pass


class MalformedCiphertext(CertDelError, ValueError):
    pass


class StrategyUnavailable(CertDelError, ValueError):
    pass


class DomainError(CertDelError, ValueError):
    pass


class FormatError(CertDelError, ValueError):
    """A serialized artifact failed schema, version or length checks."""
