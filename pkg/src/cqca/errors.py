"""Exception types shared across the package."""


class CqcaError(Exception):
    """Base class for all package errors."""


class StructureError(CqcaError, ValueError):
    """Operands do not share the same modulus, rank or lattice."""


class DomainError(CqcaError, ValueError):
    """Input violates a documented precondition (e.g. zero polynomial degree)."""


class PolyParseError(CqcaError, ValueError):
    """Text does not match the polynomial or Pauli grammar.

    Carries the character offset of the first offending position.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class GuardrailError(CqcaError, RuntimeError):
    """A dense computation would exceed the configured size guardrail."""


class InternalError(CqcaError, RuntimeError):
    """A consistency check that should be unreachable failed."""
