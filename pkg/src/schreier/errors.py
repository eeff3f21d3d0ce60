"""Exception types shared across the package."""


class SchreierError(Exception):
    """Base class for every error raised by this package."""


class OrdinalParseError(SchreierError, ValueError):
    pass


class DescriptorError(SchreierError, ValueError):
    """A family, block or space descriptor string could not be parsed."""


class InsufficientPrefix(SchreierError):
    """A computation needed more elements of an infinite set than the prefix holds."""

    def __init__(self, needed: int, available: int):
        super().__init__(f"prefix exhausted: needed element {needed}, only {available} available")
        self.needed = needed
        self.available = available


class BudgetExceeded(SchreierError):
    def __init__(self, what: str, budget: int):
        super().__init__(f"{what}: budget of {budget} exceeded")
        self.what = what
        self.budget = budget


class NotDecomposable(SchreierError):
    """A finite set has no decomposition into successive maximal members of a family."""

    def __init__(self, F, blocks=()):
        super().__init__(f"{tuple(F)} is not a union of successive maximal members")
        self.set = tuple(F)
        self.partial = tuple(blocks)


class AuxiliaryNotFound(SchreierError):
    pass


class UnsupportedScalarMix(SchreierError, TypeError):
    pass


class NotHereditary(SchreierError, ValueError):
    pass
