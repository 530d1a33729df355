"""Results of running a program under a step budget."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class ConvergedTop:
    steps: int = 0

    @property
    def kind(self) -> str:
        return "top"


@dataclass(frozen=True)
class DivergedBot:
    """Reached ⊥, or a form no rule applies to (``reason`` says which)."""

    steps: int = 0
    reason: str = "bot"

    @property
    def kind(self) -> str:
        return "bot"


@dataclass(frozen=True)
class FuelExhausted:
    steps: int

    @property
    def kind(self) -> str:
        return "fuel"


EvalOutcome = Union[ConvergedTop, DivergedBot, FuelExhausted]
