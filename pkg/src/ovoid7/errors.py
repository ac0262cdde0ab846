"""Exception hierarchy shared by all ovoid7 modules.

The CLI maps these onto process exit codes: parse/usage problems exit 2,
unsupported parameters exit 3, everything else is an ordinary failure.
"""


class OvoidError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(OvoidError):
    """Malformed textual input (polynomial grammar, field spec, JSON witness)."""


class CompositeP(ParseError):
    """The characteristic given for a field is not prime."""


class Unsupported(OvoidError):
    """Parameters outside the supported range of an operation."""


class FieldMismatch(OvoidError):
    """Operands live over different coefficient fields."""


class NotRational(OvoidError):
    """A coefficient expected in the base field has extension components."""


class NonzeroAtOrigin(OvoidError):
    """A parameterizing triple does not vanish at (0, 0, 0)."""


class OddCharacteristic(Unsupported):
    """Construction requires characteristic 2."""


class WrongCharacteristic(Unsupported):
    """Construction requires a different characteristic."""


class WrongResidue(Unsupported):
    """Field order has the wrong residue class for this construction."""


class SquareMu(Unsupported):
    """The supplied parameter must be a non-square."""


class BadExponent(Unsupported):
    """Field order is not an admissible odd power for the twisted family."""


class DependentBasis(Unsupported):
    """{1, alpha, beta} fail to be linearly independent over the base field."""


class NotAQuadricPair(Unsupported):
    """The second quadric of a candidate factorization is identically zero."""


class BudgetExceeded(Unsupported):
    """Enumeration size exceeds the configured search budget."""

    def __init__(self, count, budget):
        super().__init__(f"search space has {count} candidates, budget is {budget}")
        self.count = count
        self.budget = budget
