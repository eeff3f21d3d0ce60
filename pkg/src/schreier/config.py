"""Runtime knobs: enumeration budget and numeric tolerance."""

import os

DEFAULT_BUDGET = 10_000_000
DEFAULT_TOL = 1e-9


def default_budget() -> int:
    raw = os.environ.get("SCHREIER_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_BUDGET


class Counter:
    """Counts enumeration steps and raises once a budget is spent."""

    __slots__ = ("what", "budget", "used")

    def __init__(self, what: str, budget: int | None = None):
        self.what = what
        self.budget = default_budget() if budget is None else budget
        self.used = 0

    def tick(self, n: int = 1) -> None:
        from .errors import BudgetExceeded

        self.used += n
        if self.used > self.budget:
            raise BudgetExceeded(self.what, self.budget)
