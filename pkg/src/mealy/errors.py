"""Exception hierarchy shared by the whole package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class MealyError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(MealyError):
    """Malformed input document (bad JSON, missing field, unknown name)."""


class InputDomainError(MealyError):
    """An argument is outside the domain of the operation (bad state/letter)."""


class InvariantError(MealyError):
    """A structural invariant is violated (e.g. a bogus identity state)."""


class CapabilityError(MealyError):
    """The automaton lacks the property the operation requires."""


class SizeBudgetError(MealyError):
    """A size cap or exploration budget would be exceeded."""


class SamplingExhaustedError(MealyError):
    """Rejection sampling hit its retry limit."""
