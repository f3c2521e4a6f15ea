"""Exception types shared across the package."""


class StructureError(ValueError):
    """Malformed input: unknown variable ids, bad gate order, bad clause."""


class BudgetExceeded(ValueError):
    """An exhaustive check would enumerate more than the configured budget."""

    def __init__(self, required, budget, what="states"):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs 2^{required} {what}, budget is 2^{budget}"
        )


class NotMonotoneError(ValueError):
    """A transform that needs a monotone circuit was handed one with NOT gates."""


class NormalizationError(ValueError):
    """A checker decomposition cannot be brought into the requested normal form."""


class ParseError(ValueError):
    """Text input does not follow one of the supported file formats."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
