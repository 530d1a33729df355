"""Error type shared by every engine.

Each error carries a short machine-readable code (for example
``incoherent-pair`` or ``enumeration-budget-exceeded``) plus free text.
"""

from __future__ import annotations


class BistableError(Exception):
    def __init__(self, code: str, detail: str = "", **data):
        self.code = code
        self.detail = detail
        self.data = data
        msg = code if not detail else f"{code}: {detail}"
        super().__init__(msg)


class BudgetExceeded(BistableError):
    """Raised when an enumeration would exceed its configured budget."""

    def __init__(self, needed: int, budget: int, what: str = "candidate tables"):
        super().__init__(
            "enumeration-budget-exceeded",
            f"{what}: {needed} > budget {budget}",
            needed=needed,
            budget=budget,
        )
        self.needed = needed
        self.budget = budget
