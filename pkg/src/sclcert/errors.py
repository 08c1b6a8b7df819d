"""Exception and warning types shared across the package."""


class SclError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SclError):
    """Input text does not match the word or chain grammar."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class TrivialWord(SclError):
    """A word reduced to the identity where a nontrivial word is required."""


class NotHomologicallyTrivial(SclError):
    """The chain has a generator with nonzero total signed exponent."""


class OracleTooLarge(SclError):
    """Band-cycle enumeration was requested for a chain beyond the size guard."""


class UnbalancedSigns(SclError):
    """The exponent signs of a relator family do not sum to zero."""


class ArityMismatch(SclError):
    """Sign and conjugator lists of a relator family have different lengths."""


class DegenerateFamily(SclError):
    """Family parameters collapse the construction (e.g. a trivial commutator)."""


class MissingExternalScl(SclError):
    """An external factor was used without a supplied scl value."""


class InvalidSurface(SclError):
    """A certificate surface has a sphere or torus component."""


class InvalidInput(SclError):
    """Numeric inputs violate a precondition (e.g. norm exceeding -chi)."""


class NegativeScl(SclError):
    """A supplied scl value is negative."""


class EmptyInput(SclError):
    """An aggregate operation received no records."""


class SolveTimeout(SclError):
    """A computation exceeded its deadline."""


class InternalInvariantViolation(SclError):
    """A checked internal invariant failed; indicates a bug, not bad input."""


class ProperPowerRelator(UserWarning):
    """Warning: a relator is a proper power, so the quotient may have torsion."""
