"""Monotone and bistable functions between finite biorders.

Functions are total tables from domain indices to codomain indices.  This
module enumerates hom-sets, builds exponentials, supplies the
Cartesian-closed structure maps and analyses sequentiality (strictness
indices).
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .biorder import FiniteBiorder, _bits, product_of
from .errors import BistableError, BudgetExceeded

DEFAULT_BUDGET = 2 ** 20


@dataclass(frozen=True)
class BiFunction:
    dom: FiniteBiorder
    cod: FiniteBiorder
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.dom.size or any(not 0 <= j < self.cod.size for j in self.table):
            raise BistableError("bad-table", f"table {self.table} does not fit {self.dom.size} -> {self.cod.size}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def label(self) -> str:
        return "[" + ",".join(self.cod.elements[j] for j in self.table) + "]"

    def to_json(self) -> dict:
        return {"dom": self.dom.to_json(), "cod": self.cod.to_json(), "table": list(self.table)}

    @classmethod
    def from_json(cls, data: dict) -> "BiFunction":
        try:
            return cls(FiniteBiorder.from_json(data["dom"]), FiniteBiorder.from_json(data["cod"]),
                       tuple(int(j) for j in data["table"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise BistableError("bad-json", f"function JSON malformed: {exc}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, sort_keys=True)


# ------------------------------------------------------------------- checks


def is_monotone(f: BiFunction) -> bool:
    return all(f.cod.le(f.table[a], f.table[b]) for a, b in f.dom.leq)


def is_bistable(f: BiFunction) -> bool:
    A, B, t = f.dom, f.cod, f.table
    for c in A.classes:
        for x, y in itertools.combinations(c, 2):
            fx, fy = t[x], t[y]
            if not B.coherent(fx, fy):
                return False
            if t[A.meet(x, y)] != B.meet(fx, fy) or t[A.join(x, y)] != B.join(fx, fy):
                return False
    return True


def is_morphism(f: BiFunction) -> bool:
    return is_monotone(f) and is_bistable(f)


def coherent(f: BiFunction, g: BiFunction) -> bool:
    """Bistable coherence of two functions with the same type."""
    if f.dom != g.dom or f.cod != g.cod:
        raise BistableError("type-mismatch", "coherence needs functions of the same type")
    A, B = f.dom, f.cod
    return _coherent_tables(A, B, f.table, g.table)


def _coherent_tables(A: FiniteBiorder, B: FiniteBiorder, f, g) -> bool:
    for x in range(A.size):
        if not B.coherent(f[x], g[x]):
            return False
    for c in A.classes:
        for x, y in itertools.permutations(c, 2):
            if B.meet(f[x], g[y]) != B.meet(f[y], g[x]):
                return False
            if B.join(f[x], g[y]) != B.join(f[y], g[x]):
                return False
    return True


# ---------------------------------------------------------------- hom-sets


def hom_set_bruteforce(A: FiniteBiorder, B: FiniteBiorder, budget: int = DEFAULT_BUDGET) -> list[BiFunction]:
    """Generate every table and keep the monotone bistable ones."""
    total = B.size ** A.size
    if total > budget:
        raise BudgetExceeded(total, budget)
    out = []
    for table in itertools.product(range(B.size), repeat=A.size):
        f = BiFunction(A, B, table)
        if is_monotone(f) and is_bistable(f):
            out.append(f)
    return out


class _Search:
    """Backtracking enumeration of monotone bistable tables.

    Domain points are assigned in a linear extension of the order.  A
    point whose value is determined by a join of two earlier coherent
    points gets that value only; everything else is filtered by the
    constraints that become fully assigned at that point.
    """

    def __init__(self, A: FiniteBiorder, B: FiniteBiorder, budget: int):
        self.A, self.B, self.budget = A, B, budget
        order = A.topological_order()
        pos = {x: p for p, x in enumerate(order)}
        self.order = order
        n = A.size
        self.lower = [[] for _ in range(n)]
        for a, b in A.cover_pairs():
            self.lower[b].append(a)
        self.rep = [None] * n
        for c in A.classes:
            r = min(c, key=pos.__getitem__)
            for x in c:
                if x != r:
                    self.rep[x] = r
        self.forced = [None] * n
        self.meets = [[] for _ in range(n)]
        self.joins = [[] for _ in range(n)]
        for c in A.classes:
            for y, z in itertools.combinations(c, 2):
                if A.le(y, z) or A.le(z, y):
                    continue
                m, j = A.meet(y, z), A.join(y, z)
                self.meets[max(y, z, key=pos.__getitem__)].append((y, z, m))
                if self.forced[j] is None:
                    self.forced[j] = (y, z)
                else:
                    self.joins[j].append((y, z))
        self.nodes = 0
        self.results: list[tuple[int, ...]] = []

    def run(self) -> list[tuple[int, ...]]:
        self.f = [-1] * self.A.size
        self._go(0)
        return sorted(self.results)

    def _go(self, p: int):
        A, B, f = self.A, self.B, self.f
        if p == A.size:
            self.results.append(tuple(f))
            return
        x = self.order[p]
        if self.forced[x] is not None:
            y, z = self.forced[x]
            cands = [B.join(f[y], f[z])]
        else:
            mask = (1 << B.size) - 1
            for y in self.lower[x]:
                mask &= B.up_mask(f[y])
            cands = list(_bits(mask))
        for v in cands:
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(self.nodes, self.budget, "search nodes")
            if not all(B.le(f[y], v) for y in self.lower[x]):
                continue
            r = self.rep[x]
            if r is not None and not B.coherent(f[r], v):
                continue
            f[x] = v
            if all(f[m] == B.meet(f[y], f[z]) for y, z, m in self.meets[x]) and all(
                v == B.join(f[y], f[z]) for y, z in self.joins[x]
            ):
                self._go(p + 1)
            f[x] = -1


@functools.lru_cache(maxsize=256)
def _hom_tables(A: FiniteBiorder, B: FiniteBiorder, budget: int) -> tuple[tuple[int, ...], ...]:
    if A.size == 0:
        return ((),)
    if B.size == 0:
        return ()
    return tuple(_Search(A, B, budget).run())


def hom_set(A: FiniteBiorder, B: FiniteBiorder, budget: int = DEFAULT_BUDGET) -> list[BiFunction]:
    """All monotone bistable functions A -> B in lexicographic table order.

    Uses a pruned search; ``budget`` bounds the number of search nodes.
    ``hom_set_bruteforce`` is the generate-and-filter reference.
    """
    return [BiFunction(A, B, t) for t in _hom_tables(A, B, budget)]


# -------------------------------------------------------------- exponential


@dataclass(frozen=True, eq=False)
class Exponential:
    dom: FiniteBiorder
    cod: FiniteBiorder
    biorder: FiniteBiorder
    tables: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "_pos", {t: k for k, t in enumerate(self.tables)})

    @property
    def functions(self) -> list[BiFunction]:
        return [BiFunction(self.dom, self.cod, t) for t in self.tables]

    def function(self, i: int) -> BiFunction:
        return BiFunction(self.dom, self.cod, self.tables[i])

    def index_of(self, f) -> int:
        table = f.table if isinstance(f, BiFunction) else tuple(f)
        try:
            return self._pos[table]
        except KeyError:
            raise BistableError("not-a-member", f"table {table} is not monotone and bistable") from None


@functools.lru_cache(maxsize=256)
def exponential(A: FiniteBiorder, B: FiniteBiorder, budget: int = DEFAULT_BUDGET) -> Exponential:
    """The function-space biorder: pointwise order, classes by coherence."""
    tables = _hom_tables(A, B, budget)
    N = len(tables)
    pos = {t: k for k, t in enumerate(tables)}
    # up-set of each function via per-point masks
    point_masks = []
    for x in range(A.size):
        by_value = {}
        for v in range(B.size):
            m = 0
            for k, t in enumerate(tables):
                if B.le(v, t[x]):
                    m |= 1 << k
            by_value[v] = m
        point_masks.append(by_value)
    full = (1 << N) - 1
    leq = set()
    for k, t in enumerate(tables):
        m = full
        for x in range(A.size):
            m &= point_masks[x][t[x]]
        leq.update((k, j) for j in _bits(m))
    # coherent functions agree on the class of every value, so only
    # functions with the same class signature need a full comparison
    groups: list[list[int]] = []
    by_sig: dict[tuple[int, ...], list[list[int]]] = {}
    for k, t in enumerate(tables):
        bucket = by_sig.setdefault(tuple(B.class_of(v) for v in t), [])
        for g in bucket:
            if _coherent_tables(A, B, tables[g[0]], t):
                g.append(k)
                break
        else:
            bucket.append([k])
            groups.append(bucket[-1])

    def meet_hint(a, b):
        return pos[tuple(B.meet(u, v) for u, v in zip(tables[a], tables[b]))]

    def join_hint(a, b):
        return pos[tuple(B.join(u, v) for u, v in zip(tables[a], tables[b]))]

    labels = tuple("[" + ",".join(B.elements[j] for j in t) + "]" for t in tables)
    bio = FiniteBiorder(labels, frozenset(leq), tuple(tuple(g) for g in groups), meet_hint, join_hint)
    return Exponential(A, B, bio, tables)


# ---------------------------------------------------------- CCC structure


def identity(A: FiniteBiorder) -> BiFunction:
    return BiFunction(A, A, tuple(range(A.size)))


def compose(f: BiFunction, g: BiFunction) -> BiFunction:
    """Diagrammatic composition: first f, then g."""
    if f.cod != g.dom:
        raise BistableError("type-mismatch", "codomain of the first map differs from domain of the second")
    return BiFunction(f.dom, g.cod, tuple(g.table[j] for j in f.table))


def _tuples(factors: Sequence[FiniteBiorder]) -> list[tuple[int, ...]]:
    return list(itertools.product(*[range(F.size) for F in factors]))


def pair(f: BiFunction, g: BiFunction) -> BiFunction:
    if f.dom != g.dom:
        raise BistableError("type-mismatch", "paired maps need a common domain")
    P = product_of([f.cod, g.cod])
    return BiFunction(f.dom, P, tuple(f.table[x] * g.cod.size + g.table[x] for x in range(f.dom.size)))


def tuple_map(fs: Sequence[BiFunction]) -> BiFunction:
    """n-ary pairing into the product of the codomains."""
    if not fs:
        raise BistableError("type-mismatch", "tuple_map needs at least one map")
    dom = fs[0].dom
    if any(f.dom != dom for f in fs):
        raise BistableError("type-mismatch", "tupled maps need a common domain")
    cods = [f.cod for f in fs]
    P = product_of(cods)
    pos = {t: k for k, t in enumerate(_tuples(cods))}
    return BiFunction(dom, P, tuple(pos[tuple(f.table[x] for f in fs)] for x in range(dom.size)))


def proj(factors: Sequence[FiniteBiorder], i: int) -> BiFunction:
    """The i-th projection (1-based) out of the product of ``factors``."""
    if not 1 <= i <= len(factors):
        raise BistableError("type-mismatch", f"projection {i} out of {len(factors)} factors")
    P = product_of(factors)
    return BiFunction(P, factors[i - 1], tuple(t[i - 1] for t in _tuples(factors)))


def curry(f: BiFunction, A: FiniteBiorder, B: FiniteBiorder, budget: int = DEFAULT_BUDGET) -> BiFunction:
    """Λ(f)(a)(b) = f(a, b) for f : A×B -> C."""
    if f.dom != product_of([A, B]):
        raise BistableError("type-mismatch", "curry needs a map out of A×B")
    E = exponential(B, f.cod, budget)
    nb = B.size
    table = tuple(E.index_of(tuple(f.table[a * nb + b] for b in range(nb))) for a in range(A.size))
    return BiFunction(A, E.biorder, table)


def uncurry(g: BiFunction, B: FiniteBiorder, C: FiniteBiorder, budget: int = DEFAULT_BUDGET) -> BiFunction:
    E = exponential(B, C, budget)
    if g.cod != E.biorder:
        raise BistableError("type-mismatch", "uncurry needs a map into B⇒C")
    A = g.dom
    table = tuple(E.tables[g.table[a]][b] for a in range(A.size) for b in range(B.size))
    return BiFunction(product_of([A, B]), C, table)


def evaluation(B: FiniteBiorder, C: FiniteBiorder, budget: int = DEFAULT_BUDGET) -> BiFunction:
    """ev : (B⇒C)×B -> C."""
    E = exponential(B, C, budget)
    table = tuple(E.tables[k][b] for k in range(len(E.tables)) for b in range(B.size))
    return BiFunction(product_of([E.biorder, B]), C, table)


# ------------------------------------------------------------ sequentiality


def is_bistrict(f: BiFunction) -> bool:
    return f.table[f.dom.bottom()] == f.cod.bottom() and f.table[f.dom.top()] == f.cod.top()


def strictness_indices(f: BiFunction, factors: Sequence[FiniteBiorder]) -> set[int]:
    """1-based indices i for which f is i-strict."""
    if f.dom != product_of(factors):
        raise BistableError("type-mismatch", "domain is not the product of the given factors")
    bot, top = f.cod.bottom(), f.cod.top()
    fb = [F.bottom() for F in factors]
    ft = [F.top() for F in factors]
    out = set()
    for i in range(len(factors)):
        ok = True
        for x, t in enumerate(_tuples(factors)):
            if t[i] == fb[i] and f.table[x] != bot or t[i] == ft[i] and f.table[x] != top:
                ok = False
                break
        if ok:
            out.add(i + 1)
    return out


def constant(A: FiniteBiorder, B: FiniteBiorder, j: int) -> BiFunction:
    return BiFunction(A, B, (j,) * A.size)


def find(functions: Sequence[BiFunction], table: Sequence[int]) -> Optional[int]:
    table = tuple(table)
    return next((k for k, f in enumerate(functions) if f.table == table), None)
