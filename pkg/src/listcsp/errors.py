"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """An argument violates an operation's precondition."""


class ParameterError(ValueError):
    """A parameter inequality required by a decoding step does not hold."""

    def __init__(self, inequality: str, values: dict):
        self.inequality = inequality
        self.values = dict(values)
        super().__init__(f"parameter inequality violated: {inequality} with {self.values}")


class TriviallyUnsatisfiable(Exception):
    """Normalization emptied a variable's domain."""

    def __init__(self, var: int):
        self.var = var
        super().__init__(f"domain of variable {var} became empty")


class NotRectangular(ValueError):
    """A relation is not rectangular; ``witness`` is a closure violation."""

    def __init__(self, constraint_index: int, witness):
        self.constraint_index = constraint_index
        self.witness = witness
        a, a2, b, b2 = witness
        super().__init__(
            f"constraint {constraint_index} is not rectangular: "
            f"({a},{b}),({a},{b2}),({a2},{b}) in R but ({a2},{b2}) not in R"
        )


class SizeCapExceeded(RuntimeError):
    """A construction would exceed the configured size cap."""


class Uncoverable(ValueError):
    """The union of all sets does not cover the universe."""
