"""Semantic domains: biorders whose points are concrete Python values.

Denotations are computed with ordinary Python closures and only turned
into canonical values ("reified") when they must be compared, stored or
indexed.  Canonical values are:

* base types: whatever the base domain lists (0/1 for Σ),
* products: tuples of canonical component values,
* function types: tuples indexed by the canonical order of the domain.

The carrier of a function type is only enumerated when it is itself used
as the domain of another function type, so large codomains stay cheap.
"""

from __future__ import annotations

import itertools
from typing import Any, Optional, Sequence

from . import bifun
from .biorder import FiniteBiorder, product_of, sigma
from .errors import BistableError

SIGMA_BOT, SIGMA_TOP = 0, 1

class Domain:
    kind: str  # "base" | "prod" | "arrow"

    def __init__(self, kind: str, parts: Sequence["Domain"] = (), biorder: Optional[FiniteBiorder] = None,
                 values: Optional[Sequence[Any]] = None, budget: int = bifun.DEFAULT_BUDGET, name: str = ""):
        self.kind = kind
        self.parts = tuple(parts)
        self.budget = budget
        self.name = name
        self._biorder = biorder
        self._values = None if values is None else list(values)
        self._index: Optional[dict] = None

    # ---- constructors

    @classmethod
    def base(cls, biorder: FiniteBiorder, values: Sequence[Any], name: str = "") -> "Domain":
        if len(values) != biorder.size:
            raise BistableError("bad-domain", "one value per carrier element is required")
        return cls("base", (), biorder, values, name=name)

    @classmethod
    def product(cls, parts: Sequence["Domain"]) -> "Domain":
        return cls("prod", parts, name="(*" + "".join(" " + p.name for p in parts) + ")")

    @classmethod
    def arrow(cls, dom: "Domain", cod: "Domain", budget: int = bifun.DEFAULT_BUDGET) -> "Domain":
        return cls("arrow", (dom, cod), budget=budget, name=f"(-> {dom.name} {cod.name})")

    # ---- carrier

    @property
    def values(self) -> list:
        if self._values is None:
            if self.kind == "prod":
                self._values = [tuple(t) for t in itertools.product(*[p.values for p in self.parts])]
            elif self.kind == "arrow":
                dom, cod = self.parts
                tables = bifun._hom_tables(dom.biorder, cod.biorder, self.budget)
                cv = cod.values
                self._values = [tuple(cv[j] for j in t) for t in tables]
        return self._values

    @property
    def biorder(self) -> FiniteBiorder:
        if self._biorder is None:
            if self.kind == "prod":
                self._biorder = product_of([p.biorder for p in self.parts])
            elif self.kind == "arrow":
                dom, cod = self.parts
                self._biorder = bifun.exponential(dom.biorder, cod.biorder, self.budget).biorder
        return self._biorder

    def __len__(self) -> int:
        return len(self.values)

    def index(self, v) -> int:
        if self._index is None:
            self._index = {x: k for k, x in enumerate(self.values)}
        c = self.reify(v)
        try:
            return self._index[c]
        except KeyError:
            raise BistableError("not-a-member", f"{c!r} is not a point of {self.name}") from None

    # ---- values

    def reify(self, v):
        if self.kind == "base":
            return v
        if self.kind == "prod":
            return tuple(p.reify(x) for p, x in zip(self.parts, v))
        if isinstance(v, tuple):
            return v
        dom, cod = self.parts
        return tuple(cod.reify(v(x)) for x in dom.values)

    def apply(self, f, x):
        """Apply a value of this (function) domain to an argument."""
        if callable(f):
            return f(x)
        return f[self.parts[0].index(x)]

    def bottom(self):
        if self.kind == "base":
            return self.values[self.biorder.bottom()]
        if self.kind == "prod":
            return tuple(p.bottom() for p in self.parts)
        dom, cod = self.parts
        return (cod.bottom(),) * len(dom.values)

    def top(self):
        if self.kind == "base":
            return self.values[self.biorder.top()]
        if self.kind == "prod":
            return tuple(p.top() for p in self.parts)
        dom, cod = self.parts
        return (cod.top(),) * len(dom.values)

    def le(self, u, v) -> bool:
        """Extensional order on canonical values, computed structurally."""
        if self.kind == "base":
            return self.biorder.le(self.values.index(u), self.values.index(v))
        if self.kind == "prod":
            return all(p.le(a, b) for p, a, b in zip(self.parts, u, v))
        cod = self.parts[1]
        return all(cod.le(a, b) for a, b in zip(self.reify(u), self.reify(v)))

    def element_label(self, v) -> str:
        return self.biorder.elements[self.index(v)]

def sigma_domain() -> Domain:
    return Domain.base(sigma(), [SIGMA_BOT, SIGMA_TOP], name="S")

def as_function(dom: Domain, cod: Domain, value) -> bifun.BiFunction:
    """The BiFunction table of a function value between two domains."""
    f = Domain.arrow(dom, cod)
    table = f.reify(value)
    return bifun.BiFunction(dom.biorder, cod.biorder, tuple(cod.index(y) for y in table))

