"""Finite bistable biorders.

A biorder is a finite carrier with an extensional order (``leq``) and a
partition into coherence classes.  Each class must be a distributive
lattice whose binary meets and joins are also the meets and joins of the
whole carrier.  Orders are stored as reflexive-transitive pair sets plus
bitmask reachability tables for fast queries.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .errors import BistableError

Pair = tuple[int, int]
LatticeOp = Callable[[int, int], int]


def _close(n: int, pairs: Iterable[Pair]) -> list[int]:
    """Reflexive-transitive closure, returned as up-set bitmasks."""
    up = [1 << i for i in range(n)]
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise BistableError("bad-index", f"pair ({a},{b}) outside carrier of size {n}")
        up[a] |= 1 << b
    for k in range(n):
        bit = 1 << k
        row = up[k]
        for i in range(n):
            if up[i] & bit:
                up[i] |= row
    return up


def _bits(mask: int) -> Iterable[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True)
class FiniteBiorder:
    elements: tuple[str, ...]
    leq: frozenset[Pair]
    classes: tuple[tuple[int, ...], ...]
    # structural meet/join, supplied by constructions that know them
    # (products, exponentials); never used by validate
    meet_hint: Optional[LatticeOp] = field(default=None, compare=False, repr=False)
    join_hint: Optional[LatticeOp] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        n = len(self.elements)
        object.__setattr__(self, "elements", tuple(self.elements))
        up = _close(n, self.leq)
        down = [0] * n
        for i in range(n):
            for j in _bits(up[i]):
                down[j] |= 1 << i
        closed = frozenset((i, j) for i in range(n) for j in _bits(up[i]))
        object.__setattr__(self, "leq", closed)
        classes = tuple(sorted(tuple(sorted(c)) for c in self.classes if c))
        object.__setattr__(self, "classes", classes)
        cls = [-1] * n
        for k, c in enumerate(classes):
            for i in c:
                if 0 <= i < n and cls[i] == -1:
                    cls[i] = k
        object.__setattr__(self, "_up", up)
        object.__setattr__(self, "_down", down)
        object.__setattr__(self, "_cls", cls)
        object.__setattr__(self, "_glb", {})
        object.__setattr__(self, "_lub", {})
        object.__setattr__(self, "_meets", {})
        object.__setattr__(self, "_joins", {})

    # ---- basic queries

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def le(self, a: int, b: int) -> bool:
        return bool(self._up[a] >> b & 1)

    def up_mask(self, a: int) -> int:
        return self._up[a]

    def down_mask(self, a: int) -> int:
        return self._down[a]

    def class_of(self, a: int) -> int:
        return self._cls[a]

    def coherent(self, a: int, b: int) -> bool:
        return self._cls[a] == self._cls[b] and self._cls[a] != -1

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise BistableError("unknown-element", label) from None

    def glb(self, a: int, b: int) -> Optional[int]:
        """Greatest lower bound in the extensional order, or None."""
        key = (a, b) if a <= b else (b, a)
        memo = self._glb
        if key not in memo:
            common = self._down[a] & self._down[b]
            memo[key] = next((g for g in _bits(common) if common & ~self._down[g] == 0), None)
        return memo[key]

    def lub(self, a: int, b: int) -> Optional[int]:
        key = (a, b) if a <= b else (b, a)
        memo = self._lub
        if key not in memo:
            common = self._up[a] & self._up[b]
            memo[key] = next((g for g in _bits(common) if common & ~self._up[g] == 0), None)
        return memo[key]

    def meet(self, a: int, b: int) -> int:
        key = (a, b)
        r = self._meets.get(key)
        if r is None:
            r = self._meets[key] = meet(self, a, b).index
        return r

    def join(self, a: int, b: int) -> int:
        key = (a, b)
        r = self._joins.get(key)
        if r is None:
            r = self._joins[key] = join(self, a, b).index
        return r

    def least(self) -> Optional[int]:
        full = (1 << self.size) - 1
        return next((i for i in range(self.size) if self._up[i] == full), None)

    def greatest(self) -> Optional[int]:
        full = (1 << self.size) - 1
        return next((i for i in range(self.size) if self._down[i] == full), None)

    def is_pointed(self) -> bool:
        b, t = self.least(), self.greatest()
        return b is not None and t is not None and self.coherent(b, t)

    def bottom(self) -> int:
        self._require_pointed()
        return self.least()

    def top(self) -> int:
        self._require_pointed()
        return self.greatest()

    def _require_pointed(self):
        if not self.is_pointed():
            raise BistableError("not-pointed", "biorder has no coherent least and greatest elements")

    def topological_order(self) -> list[int]:
        """Indices sorted so that every element follows everything below it."""
        return sorted(range(self.size), key=lambda i: (bin(self._down[i]).count("1"), i))

    # ---- serialization

    def to_json(self) -> dict:
        return {
            "elements": list(self.elements),
            "leq": sorted([list(p) for p in self.cover_pairs()]),
            "classes": [list(c) for c in self.classes],
        }

    def cover_pairs(self) -> list[Pair]:
        """Hasse diagram of the extensional order (its transitive reduction)."""
        out = []
        for a, b in self.leq:
            if a == b:
                continue
            between = self._up[a] & self._down[b] & ~(1 << a) & ~(1 << b)
            if not between:
                out.append((a, b))
        return sorted(out)

    @classmethod
    def from_json(cls, data: dict) -> "FiniteBiorder":
        try:
            elements = [str(e) for e in data["elements"]]
            leq = [(int(a), int(b)) for a, b in data["leq"]]
            classes = [tuple(int(i) for i in c) for c in data["classes"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise BistableError("bad-json", f"biorder JSON malformed: {exc}") from None
        return cls(tuple(elements), frozenset(leq), tuple(classes))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, sort_keys=True)


@dataclass(frozen=True)
class Element:
    biorder: FiniteBiorder
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.biorder.size:
            raise BistableError("bad-index", f"{self.index} outside carrier of size {self.biorder.size}")

    @property
    def label(self) -> str:
        return self.biorder.elements[self.index]

    def __repr__(self) -> str:
        return f"Element({self.label!r})"


# ---------------------------------------------------------------- validation


def validate(B: FiniteBiorder) -> list[str]:
    """Every violated invariant, one line each; empty iff B is a bistable biorder."""
    diags: list[str] = []
    n = B.size
    lbl = B.elements
    for a in range(n):
        for b in range(a + 1, n):
            if B.le(a, b) and B.le(b, a):
                diags.append(f"antisymmetry: {lbl[a]} and {lbl[b]} are mutually below each other")
    seen: dict[int, int] = {}
    for k, c in enumerate(B.classes):
        for i in c:
            if not 0 <= i < n:
                diags.append(f"partition: class {k} mentions index {i} outside the carrier")
            elif i in seen:
                diags.append(f"partition: {lbl[i]} lies in classes {seen[i]} and {k}")
            else:
                seen[i] = k
    for i in range(n):
        if i not in seen:
            diags.append(f"partition: {lbl[i]} lies in no class")
    if any(d.startswith("partition") for d in diags):
        return diags
    for c in B.classes:
        for a, b in itertools.combinations(c, 2):
            m, j = B.glb(a, b), B.lub(a, b)
            if m is None:
                diags.append(f"meet: coherent {lbl[a]}, {lbl[b]} have no glb")
            elif not B.coherent(m, a):
                diags.append(f"meet: glb {lbl[m]} of {lbl[a]}, {lbl[b]} leaves their class")
            if j is None:
                diags.append(f"join: coherent {lbl[a]}, {lbl[b]} have no lub")
            elif not B.coherent(j, a):
                diags.append(f"join: lub {lbl[j]} of {lbl[a]}, {lbl[b]} leaves their class")
    if diags:
        return diags
    for c in B.classes:
        for a in c:
            for b, d in itertools.combinations(c, 2):
                lhs = B.lub(a, B.glb(b, d))
                rhs = B.glb(B.lub(a, b), B.lub(a, d))
                if lhs != rhs:
                    diags.append(f"distributivity: fails at {lbl[a]}, {lbl[b]}, {lbl[d]}")
    return diags


# -------------------------------------------------------------- constructions


def empty() -> FiniteBiorder:
    return FiniteBiorder((), frozenset(), ())


def flat(k: int) -> FiniteBiorder:
    """k discrete points with singleton classes."""
    if k < 0:
        raise BistableError("bad-argument", "flat needs k >= 0")
    return FiniteBiorder(tuple(str(i) for i in range(k)), frozenset(), tuple((i,) for i in range(k)))


def unit() -> FiniteBiorder:
    return product_of([])


def _fresh(label: str, taken: set[str]) -> str:
    while label in taken:
        label += "'"
    return label


def bilift(A: FiniteBiorder) -> FiniteBiorder:
    """Add a fresh least and greatest element forming a new class."""
    n = A.size
    taken = set(A.elements)
    bot, top = _fresh("⊥", taken), _fresh("⊤", taken)
    elements = (bot,) + A.elements + (top,)
    leq = {(0, i) for i in range(n + 2)} | {(i, n + 1) for i in range(n + 2)}
    leq |= {(a + 1, b + 1) for a, b in A.leq}
    classes = [(0, n + 1)] + [tuple(i + 1 for i in c) for c in A.classes]
    return FiniteBiorder(elements, frozenset(leq), tuple(classes))


def sigma() -> FiniteBiorder:
    """The two-point biorder ⊥ ≤ ⊤, one class."""
    return bilift(empty())


def product_of(factors: Sequence[FiniteBiorder]) -> FiniteBiorder:
    """n-ary product; carrier in lexicographic order of component indices."""
    factors = list(factors)
    sizes = [f.size for f in factors]
    tuples = list(itertools.product(*[range(s) for s in sizes]))
    pos = {t: k for k, t in enumerate(tuples)}
    elements = tuple(
        "(" + ",".join(f.elements[i] for f, i in zip(factors, t)) + ")" for t in tuples
    )
    leq = set()
    for t in tuples:
        # all componentwise upper bounds
        ups = [list(_bits(f.up_mask(i))) for f, i in zip(factors, t)]
        for u in itertools.product(*ups):
            leq.add((pos[t], pos[u]))
    groups: dict[tuple[int, ...], list[int]] = {}
    for t in tuples:
        key = tuple(f.class_of(i) for f, i in zip(factors, t))
        groups.setdefault(key, []).append(pos[t])

    def meet_hint(a: int, b: int) -> int:
        return pos[tuple(f.meet(x, y) for f, x, y in zip(factors, tuples[a], tuples[b]))]

    def join_hint(a: int, b: int) -> int:
        return pos[tuple(f.join(x, y) for f, x, y in zip(factors, tuples[a], tuples[b]))]

    return FiniteBiorder(elements, frozenset(leq), tuple(tuple(g) for g in groups.values()),
                         meet_hint, join_hint)


def product(A: FiniteBiorder, B: FiniteBiorder) -> FiniteBiorder:
    return product_of([A, B])


def power(A: FiniteBiorder, n: int) -> FiniteBiorder:
    return product_of([A] * n)


def coproduct(A: FiniteBiorder, B: FiniteBiorder) -> FiniteBiorder:
    """Tagged disjoint union, left summand first; summands unrelated and incoherent."""
    n = A.size
    elements = tuple("inl:" + e for e in A.elements) + tuple("inr:" + e for e in B.elements)
    leq = set(A.leq) | {(a + n, b + n) for a, b in B.leq}
    classes = list(A.classes) + [tuple(i + n for i in c) for c in B.classes]
    return FiniteBiorder(elements, frozenset(leq), tuple(classes))


# ------------------------------------------------------------ meets and joins


def _lattice_op(B: FiniteBiorder, a: int, b: int, hint, order_op, name: str) -> Element:
    if not B.coherent(a, b):
        raise BistableError("incoherent-pair", f"{B.elements[a]} and {B.elements[b]} lie in different classes")
    r = hint(a, b) if hint is not None else order_op(a, b)
    if r is None:
        raise BistableError("invalid-biorder", f"no {name} for {B.elements[a]}, {B.elements[b]}")
    return Element(B, r)


def meet(B: FiniteBiorder, a: int, b: int) -> Element:
    return _lattice_op(B, a, b, B.meet_hint, B.glb, "meet")


def join(B: FiniteBiorder, a: int, b: int) -> Element:
    return _lattice_op(B, a, b, B.join_hint, B.lub, "join")


# ------------------------------------------------------- two presentations


def to_bistable_order(B: FiniteBiorder) -> frozenset[Pair]:
    """The bistable order: extensional order restricted to coherent pairs."""
    return frozenset((a, b) for a, b in B.leq if B.coherent(a, b))


def from_bistable_order(elements: Sequence[str], leqE: Iterable[Pair], leqB: Iterable[Pair]) -> FiniteBiorder:
    """Rebuild a biorder from its extensional and bistable orders.

    Classes are the equivalence closure of "bounded above in the bistable
    order".  Raises ``not-a-bistable-order`` naming the failed condition.
    """
    n = len(elements)
    upE = _close(n, leqE)
    upB = _close(n, leqB)
    leE = lambda a, b: bool(upE[a] >> b & 1)
    leB = lambda a, b: bool(upB[a] >> b & 1)
    downB = [0] * n
    for i in range(n):
        for j in _bits(upB[i]):
            downB[j] |= 1 << i
    for a in range(n):
        for b in range(a + 1, n):
            if (leE(a, b) and leE(b, a)) or (leB(a, b) and leB(b, a)):
                raise BistableError("not-a-bistable-order", f"not a partial order at {elements[a]}, {elements[b]}")
            if leB(a, b) and not leE(a, b):
                raise BistableError("not-a-bistable-order", f"{elements[a]} ≤B {elements[b]} but not ≤E")
    above = lambda a, b: bool(upB[a] & upB[b])
    below = lambda a, b: bool(downB[a] & downB[b])
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(n):
        for b in range(a + 1, n):
            if above(a, b) != below(a, b):
                raise BistableError(
                    "not-a-bistable-order",
                    f"bounded-above iff bounded-below fails at {elements[a]}, {elements[b]}",
                )
            if above(a, b):
                parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    B = FiniteBiorder(tuple(elements), frozenset((a, b) for a in range(n) for b in _bits(upE[a])),
                      tuple(tuple(g) for g in groups.values()))
    for a in range(n):
        for b in range(a + 1, n):
            if not above(a, b):
                continue
            for name, op in (("meet", B.glb), ("join", B.lub)):
                r = op(a, b)
                if r is None:
                    raise BistableError("not-a-bistable-order", f"no {name} of {elements[a]}, {elements[b]}")
                # r must be the bound in the bistable order too
                if name == "meet" and not (leB(r, a) and leB(r, b)):
                    raise BistableError("not-a-bistable-order", f"meet of {elements[a]}, {elements[b]} not a ≤B bound")
                if name == "join" and not (leB(a, r) and leB(b, r)):
                    raise BistableError("not-a-bistable-order", f"join of {elements[a]}, {elements[b]} not a ≤B bound")
    diags = [d for d in validate(B) if d.startswith("distributivity")]
    if diags:
        raise BistableError("not-a-bistable-order", diags[0])
    return B


# ---------------------------------------------------------------- isomorphism


def isomorphism(A: FiniteBiorder, B: FiniteBiorder) -> Optional[list[int]]:
    """An order-and-coherence isomorphism A -> B as an index map, or None."""
    n = A.size
    if n != B.size or len(A.leq) != len(B.leq):
        return None
    if sorted(len(c) for c in A.classes) != sorted(len(c) for c in B.classes):
        return None

    def sig(X, i):
        return (bin(X.up_mask(i)).count("1"), bin(X.down_mask(i)).count("1"), len(X.classes[X.class_of(i)]))

    sa = [sig(A, i) for i in range(n)]
    sb = [sig(B, i) for i in range(n)]
    order = A.topological_order()
    image = [-1] * n
    used = [False] * n

    def ok(i, j):
        for k in range(n):
            if image[k] == -1:
                continue
            if A.le(i, k) != B.le(j, image[k]) or A.le(k, i) != B.le(image[k], j):
                return False
            if A.coherent(i, k) != B.coherent(j, image[k]):
                return False
        return True

    def go(p):
        if p == n:
            return True
        i = order[p]
        for j in range(n):
            if not used[j] and sa[i] == sb[j] and ok(i, j):
                image[i], used[j] = j, True
                if go(p + 1):
                    return True
                image[i], used[j] = -1, False
        return False

    return list(image) if go(0) else None


def isomorphic(A: FiniteBiorder, B: FiniteBiorder) -> bool:
    return isomorphism(A, B) is not None
