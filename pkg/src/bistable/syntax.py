"""Abstract syntax and S-expression reader/printer for all term dialects.

Three dialects share one set of node classes:

* ``lambda``: Σ, products, arrows; variables, abstraction, application,
  tuples, 1-based projections, ``top`` and ``bot``.
* ``spcf``: adds ``nat``, ``0``/decimal numerals, ``succ``, ``pred``,
  ``if0``, ``Y`` and ``catch``.
* ``omega``: adds the data type ``N`` with numerals, ``eq``, ``pair``,
  ``fst``, ``snd``, ``phi`` and the three-argument ``if0n``, plus ``Y``.

Parsing is dialect-aware so that each calculus rejects foreign forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import BistableError

# ------------------------------------------------------------------- types


@dataclass(frozen=True)
class Sigma:
    def __str__(self):
        return "S"


@dataclass(frozen=True)
class Nat:
    """SPCF natural numbers (interpreted as the bilifted flat naturals)."""

    def __str__(self):
        return "nat"


@dataclass(frozen=True)
class NumT:
    """The data type of numerals in the CPS target calculus."""

    def __str__(self):
        return "N"


@dataclass(frozen=True)
class Prod:
    items: tuple

    def __init__(self, items=()):
        object.__setattr__(self, "items", tuple(items))

    def __str__(self):
        return "(*" + "".join(" " + str(t) for t in self.items) + ")"


@dataclass(frozen=True)
class Arrow:
    dom: "Type"
    cod: "Type"

    def __str__(self):
        return f"(-> {self.dom} {self.cod})"


Type = Union[Sigma, Nat, NumT, Prod, Arrow]


def arrows(*ts: Type) -> Type:
    """Right-nested arrow type T1 -> T2 -> ... -> Tn."""
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Arrow(t, out)
    return out


def sigma_power(n: int) -> Type:
    """Σⁿ, with Σ¹ = Σ and Σ⁰ the unit type."""
    return Sigma() if n == 1 else Prod((Sigma(),) * n)


def power_type(t: Type, n: int) -> Type:
    return t if n == 1 else Prod((t,) * n)


# ------------------------------------------------------------------- terms


class Term:
    def __str__(self):
        return show(self)


@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Lam(Term):
    var: str
    ty: Type
    body: Term

    def __repr__(self):
        return f"Lam({self.var!r}, {self.ty}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class App(Term):
    fun: Term
    arg: Term

    def __repr__(self):
        return f"App({self.fun!r}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class Tuple(Term):
    items: tuple

    def __init__(self, items=()):
        object.__setattr__(self, "items", tuple(items))

    def __repr__(self):
        return f"Tuple({list(self.items)!r})"


@dataclass(frozen=True, repr=False)
class Proj(Term):
    index: int  # 1-based
    term: Term

    def __repr__(self):
        return f"Proj({self.index}, {self.term!r})"


@dataclass(frozen=True, repr=False)
class Top(Term):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Bot(Term):
    def __repr__(self):
        return "Bot()"


# SPCF


@dataclass(frozen=True, repr=False)
class Zero(Term):
    def __repr__(self):
        return "Zero()"


@dataclass(frozen=True, repr=False)
class Succ(Term):
    term: Term

    def __repr__(self):
        return f"Succ({self.term!r})"


@dataclass(frozen=True, repr=False)
class Pred(Term):
    term: Term

    def __repr__(self):
        return f"Pred({self.term!r})"


@dataclass(frozen=True, repr=False)
class If0(Term):
    """``IF0 M``: a function from pairs to their first or second component."""

    term: Term

    def __repr__(self):
        return f"If0({self.term!r})"


@dataclass(frozen=True, repr=False)
class Y(Term):
    term: Term

    def __repr__(self):
        return f"Y({self.term!r})"


@dataclass(frozen=True, repr=False)
class Catch(Term):
    arity: int
    term: Term

    def __repr__(self):
        return f"Catch({self.arity}, {self.term!r})"


# omega


@dataclass(frozen=True, repr=False)
class Num(Term):
    value: int

    def __repr__(self):
        return f"Num({self.value})"


@dataclass(frozen=True, repr=False)
class Eq(Term):
    left: Term
    right: Term

    def __repr__(self):
        return f"Eq({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Pair(Term):
    left: Term
    right: Term

    def __repr__(self):
        return f"Pair({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Fst(Term):
    term: Term

    def __repr__(self):
        return f"Fst({self.term!r})"


@dataclass(frozen=True, repr=False)
class Snd(Term):
    term: Term

    def __repr__(self):
        return f"Snd({self.term!r})"


@dataclass(frozen=True, repr=False)
class Phi(Term):
    name: str
    term: Term

    def __repr__(self):
        return f"Phi({self.name!r}, {self.term!r})"


@dataclass(frozen=True, repr=False)
class If0n(Term):
    """Zero test on data: selects ``then`` when the numeral is 0."""

    test: Term
    then: Term
    other: Term

    def __repr__(self):
        return f"If0n({self.test!r}, {self.then!r}, {self.other!r})"


# ----------------------------------------------------------------- helpers


def apps(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def numeral(k: int) -> Term:
    """SPCF numeral succ^k 0."""
    t: Term = Zero()
    for _ in range(k):
        t = Succ(t)
    return t


def numeral_value(t: Term):
    """k if t is succ^k 0, else None."""
    k = 0
    while isinstance(t, Succ):
        t, k = t.term, k + 1
    return k if isinstance(t, Zero) else None


def component(x: Term, i: int, n: int) -> Term:
    """i-th component (1-based) of a term of type Σⁿ, honouring Σ¹ = Σ."""
    return x if n == 1 else Proj(i, x)


def tuple_of(items) -> Term:
    items = list(items)
    return items[0] if len(items) == 1 else Tuple(items)


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    return frozenset().union(*[free_vars(c) for c in children(t)])


def children(t: Term) -> list[Term]:
    if isinstance(t, Lam):
        return [t.body]
    if isinstance(t, App):
        return [t.fun, t.arg]
    if isinstance(t, Tuple):
        return list(t.items)
    if isinstance(t, (Proj, Succ, Pred, If0, Y, Catch, Fst, Snd, Phi)):
        return [t.term]
    if isinstance(t, (Eq, Pair)):
        return [t.left, t.right]
    if isinstance(t, If0n):
        return [t.test, t.then, t.other]
    return []


def rebuild(t: Term, kids: list[Term]) -> Term:
    """Same node as t with its children replaced."""
    if isinstance(t, Lam):
        return Lam(t.var, t.ty, kids[0])
    if isinstance(t, App):
        return App(kids[0], kids[1])
    if isinstance(t, Tuple):
        return Tuple(kids)
    if isinstance(t, Proj):
        return Proj(t.index, kids[0])
    if isinstance(t, Catch):
        return Catch(t.arity, kids[0])
    if isinstance(t, Phi):
        return Phi(t.name, kids[0])
    if isinstance(t, (Succ, Pred, If0, Y, Fst, Snd)):
        return type(t)(kids[0])
    if isinstance(t, (Eq, Pair)):
        return type(t)(kids[0], kids[1])
    if isinstance(t, If0n):
        return If0n(*kids)
    return t


def fresh(base: str, avoid) -> str:
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def subst(t: Term, name: str, value: Term) -> Term:
    """Capture-avoiding substitution t[value/name]."""
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, Lam):
        if t.var == name:
            return t
        fv = free_vars(value)
        if t.var in fv:
            new = fresh(t.var.rstrip("0123456789") or "v", fv | free_vars(t.body) | {name})
            body = subst(t.body, t.var, Var(new))
            return Lam(new, t.ty, subst(body, name, value))
        return Lam(t.var, t.ty, subst(t.body, name, value))
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, [subst(k, name, value) for k in kids])


def size(t: Term) -> int:
    return 1 + sum(size(c) for c in children(t))


# ----------------------------------------------------------------- printer


def show_type(t: Type) -> str:
    return str(t)


def show(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Lam):
        return f"(lam ({t.var} {t.ty}) {show(t.body)})"
    if isinstance(t, App):
        return f"({show(t.fun)} {show(t.arg)})"
    if isinstance(t, Tuple):
        return "(tuple" + "".join(" " + show(i) for i in t.items) + ")"
    if isinstance(t, Proj):
        return f"(pi {t.index} {show(t.term)})"
    if isinstance(t, Top):
        return "top"
    if isinstance(t, Bot):
        return "bot"
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Succ):
        k = numeral_value(t)
        return str(k) if k is not None else f"(succ {show(t.term)})"
    if isinstance(t, Pred):
        return f"(pred {show(t.term)})"
    if isinstance(t, If0):
        return f"(if0 {show(t.term)})"
    if isinstance(t, Y):
        return f"(Y {show(t.term)})"
    if isinstance(t, Catch):
        return f"(catch {t.arity} {show(t.term)})"
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Eq):
        return f"(eq {show(t.left)} {show(t.right)})"
    if isinstance(t, Pair):
        return f"(pair {show(t.left)} {show(t.right)})"
    if isinstance(t, Fst):
        return f"(fst {show(t.term)})"
    if isinstance(t, Snd):
        return f"(snd {show(t.term)})"
    if isinstance(t, Phi):
        return f"(phi {t.name} {show(t.term)})"
    if isinstance(t, If0n):
        return f"(if0n {show(t.test)} {show(t.then)} {show(t.other)})"
    raise TypeError(f"not a term: {t!r}")


# ------------------------------------------------------------------ reader

_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|([()])|([^\s()]+))")

DIALECTS = ("lambda", "spcf", "omega")
_KEYWORDS = {"lam", "tuple", "pi", "top", "bot", "succ", "pred", "if0", "Y", "catch",
             "eq", "pair", "fst", "snd", "phi", "if0n"}


def read_sexp(text: str):
    """Parse one S-expression into nested lists of atom strings."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise BistableError("parse-error", f"unexpected character at {pos}")
        pos = m.end()
        if m.group(2):
            tokens.append(m.group(2))
        elif m.group(3):
            tokens.append(m.group(3))
    if not tokens:
        raise BistableError("parse-error", "empty input")
    stack: list[list] = [[]]
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise BistableError("parse-error", "unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise BistableError("parse-error", "unbalanced '('")
    if len(stack[0]) != 1:
        raise BistableError("parse-error", "expected exactly one expression")
    return stack[0][0]


def _type_from(s, dialect: str) -> Type:
    if isinstance(s, str):
        if s == "S":
            return Sigma()
        if s == "nat" and dialect == "spcf":
            return Nat()
        if s == "N" and dialect == "omega":
            return NumT()
        raise BistableError("parse-error", f"unknown base type {s!r} in {dialect}")
    if not s:
        raise BistableError("parse-error", "empty type")
    head = s[0]
    if head == "*":
        return Prod(tuple(_type_from(x, dialect) for x in s[1:]))
    if head == "->":
        if len(s) < 3:
            raise BistableError("parse-error", "arrow type needs two sides")
        return arrows(*[_type_from(x, dialect) for x in s[1:]])
    raise BistableError("parse-error", f"bad type {s!r}")


def parse_type(text: str, dialect: str = "lambda") -> Type:
    return _type_from(read_sexp(text), dialect)


def _int(s, what):
    try:
        return int(s)
    except (TypeError, ValueError):
        raise BistableError("parse-error", f"{what} must be an integer, got {s!r}") from None


def _term_from(s, dialect: str) -> Term:
    sp, om = dialect == "spcf", dialect == "omega"
    if isinstance(s, str):
        if s == "top":
            return Top()
        if s == "bot":
            return Bot()
        if s.isdigit():
            if sp:
                return numeral(int(s))
            if om:
                return Num(int(s))
            raise BistableError("parse-error", f"numerals are not part of {dialect}")
        if s in _KEYWORDS:
            raise BistableError("parse-error", f"keyword {s!r} used as a variable")
        return Var(s)
    if not s:
        raise BistableError("parse-error", "empty application")
    head, args = s[0], s[1:]
    rec = lambda x: _term_from(x, dialect)

    def arity(k):
        if len(args) != k:
            raise BistableError("parse-error", f"{head} takes {k} argument(s)")

    if head == "lam":
        arity(2)
        binder = args[0]
        if not (isinstance(binder, list) and len(binder) == 2 and isinstance(binder[0], str)):
            raise BistableError("parse-error", "lam binder must be (x T)")
        return Lam(binder[0], _type_from(binder[1], dialect), rec(args[1]))
    if head == "tuple":
        return Tuple(tuple(rec(a) for a in args))
    if head == "pi":
        arity(2)
        return Proj(_int(args[0], "projection index"), rec(args[1]))
    if sp and head in ("succ", "pred", "if0"):
        arity(1)
        return {"succ": Succ, "pred": Pred, "if0": If0}[head](rec(args[0]))
    if (sp or om) and head == "Y":
        arity(1)
        return Y(rec(args[0]))
    if sp and head == "catch":
        arity(2)
        n = _int(args[0], "catch arity")
        if n < 1:
            raise BistableError("parse-error", "catch arity must be at least 1")
        return Catch(n, rec(args[1]))
    if om and head in ("eq", "pair"):
        arity(2)
        return (Eq if head == "eq" else Pair)(rec(args[0]), rec(args[1]))
    if om and head in ("fst", "snd"):
        arity(1)
        return (Fst if head == "fst" else Snd)(rec(args[0]))
    if om and head == "phi":
        arity(2)
        if not isinstance(args[0], str):
            raise BistableError("parse-error", "phi needs a registry name")
        return Phi(args[0], rec(args[1]))
    if om and head == "if0n":
        arity(3)
        return If0n(rec(args[0]), rec(args[1]), rec(args[2]))
    if isinstance(head, str) and head in _KEYWORDS:
        raise BistableError("parse-error", f"form {head!r} is not part of {dialect}")
    if not args:
        raise BistableError("parse-error", "application needs an argument")
    out = rec(head)
    for a in args:
        out = App(out, rec(a))
    return out


def parse_term(text: str, dialect: str = "lambda") -> Term:
    if dialect not in DIALECTS:
        raise BistableError("bad-argument", f"unknown dialect {dialect!r}")
    return _term_from(read_sexp(text), dialect)
