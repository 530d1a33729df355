"""Λ⊤⊥: simply-typed λ-calculus over Σ with products, ⊤ and ⊥.

Typechecking, denotation into finite bistable biorders, first-order
definability, the chain of definable retractions into Σⁿ⇒Σᵐ, and the
universality engine built on them.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Any, Callable, Optional

from . import bifun
from .biorder import Element, FiniteBiorder, power, sigma
from .domain import Domain, sigma_domain
from .errors import BistableError
from .syntax import (App, Arrow, Bot, Lam, Prod, Proj, Sigma, Term, Top, Tuple, Type, Var, apps, component,
                     power_type, show, sigma_power, tuple_of)

S = Sigma()

# ------------------------------------------------------------- typechecking

Extension = Callable[[Term, dict, Callable], Optional[Type]]


def _type_error(M: Term, detail: str) -> BistableError:
    return BistableError("type-error", f"{detail} at {show(M)}", at=show(M))


def check_type(T: Type, bases: tuple = (Sigma,)) -> Type:
    """T itself, if it is built from the allowed base types."""
    if isinstance(T, Prod):
        for t in T.items:
            check_type(t, bases)
    elif isinstance(T, Arrow):
        check_type(T.dom, bases)
        check_type(T.cod, bases)
    elif not isinstance(T, bases):
        raise BistableError("type-error", f"base type {T} is not available here")
    return T


def check(M: Term, env: dict, ext: Optional[Extension] = None, bases: tuple = (Sigma,)) -> Type:
    """Core typing rules; ``ext`` handles nodes of richer dialects."""

    def go(M: Term, env: dict) -> Type:
        if ext is not None:
            t = ext(M, env, go)
            if t is not None:
                return t
        if isinstance(M, Var):
            if M.name not in env:
                raise _type_error(M, f"unbound variable {M.name}")
            return env[M.name]
        if isinstance(M, Lam):
            check_type(M.ty, bases)
            return Arrow(M.ty, go(M.body, {**env, M.var: M.ty}))
        if isinstance(M, App):
            f = go(M.fun, env)
            a = go(M.arg, env)
            if not isinstance(f, Arrow):
                raise _type_error(M, f"applying a term of non-function type {f}")
            if f.dom != a:
                raise _type_error(M, f"argument has type {a}, expected {f.dom}")
            return f.cod
        if isinstance(M, Tuple):
            return Prod([go(x, env) for x in M.items])
        if isinstance(M, Proj):
            t = go(M.term, env)
            if not isinstance(t, Prod):
                raise _type_error(M, f"projection from non-product type {t}")
            if not 1 <= M.index <= len(t.items):
                raise _type_error(M, f"projection {M.index} out of range for arity {len(t.items)}")
            return t.items[M.index - 1]
        if isinstance(M, (Top, Bot)):
            return S
        raise _type_error(M, f"{type(M).__name__} is not part of this calculus")

    return go(M, env)


def typecheck(env: Optional[dict], M: Term) -> Type:
    return check(M, dict(env or {}))


# ---------------------------------------------------------------- semantics


class Semantics:
    """Interprets types as domains and terms as Python values.

    Function-typed terms evaluate to closures; canonical tables are only
    built when a value is compared, indexed or stored.
    """

    def __init__(self, budget: int = bifun.DEFAULT_BUDGET):
        self.budget = budget
        self._domains: dict[Type, Domain] = {}
        self._lock = threading.Lock()

    def base_domain(self, T: Type) -> Domain:
        if isinstance(T, Sigma):
            return sigma_domain()
        raise BistableError("type-error", f"no interpretation for base type {T}")

    def domain(self, T: Type) -> Domain:
        with self._lock:
            d = self._domains.get(T)
        if d is not None:
            return d
        if isinstance(T, Prod):
            d = Domain.product([self.domain(t) for t in T.items])
        elif isinstance(T, Arrow):
            d = Domain.arrow(self.domain(T.dom), self.domain(T.cod), self.budget)
        else:
            d = self.base_domain(T)
        with self._lock:
            return self._domains.setdefault(T, d)

    def typeof(self, M: Term, env: dict) -> Type:
        return check(M, env)

    def apply(self, T: Arrow, f, x):
        if callable(f):
            return f(x)
        return f[self.domain(T.dom).index(x)]

    def compile(self, M: Term, tenv: dict) -> tuple[Type, Callable[[dict], Any]]:
        """Type of M and a closure computing its value from an environment."""
        c = self.compile_ext(M, tenv)
        if c is not None:
            return c
        if isinstance(M, Var):
            if M.name not in tenv:
                raise _type_error(M, f"unbound variable {M.name}")
            name = M.name
            return tenv[name], lambda env: env[name]
        if isinstance(M, Lam):
            x = M.var
            T, body = self.compile(M.body, {**tenv, x: M.ty})
            return Arrow(M.ty, T), lambda env: (lambda v: body({**env, x: v}))
        if isinstance(M, App):
            T, f = self.compile(M.fun, tenv)
            U, a = self.compile(M.arg, tenv)
            if not isinstance(T, Arrow) or T.dom != U:
                self.typeof(M, tenv)  # raises a located type error
            return T.cod, lambda env: self.apply(T, f(env), a(env))
        if isinstance(M, Tuple):
            parts = [self.compile(x, tenv) for x in M.items]
            items = [c for _, c in parts]
            return Prod([t for t, _ in parts]), lambda env: tuple(c(env) for c in items)
        if isinstance(M, Proj):
            T, t = self.compile(M.term, tenv)
            if not isinstance(T, Prod) or not 1 <= M.index <= len(T.items):
                self.typeof(M, tenv)
            i = M.index - 1
            return T.items[i], lambda env: t(env)[i]
        if isinstance(M, Top):
            top = self.domain(S).top()
            return S, lambda env: top
        if isinstance(M, Bot):
            bot = self.domain(S).bottom()
            return S, lambda env: bot
        raise _type_error(M, f"{type(M).__name__} has no interpretation here")

    def compile_ext(self, M: Term, tenv: dict):
        return None

    def value(self, M: Term, env: Optional[dict] = None):
        """Canonical value of M; env maps names to (type, value)."""
        env = env or {}
        tenv = {k: t for k, (t, _) in env.items()}
        T, run = self.compile(M, tenv)
        return self.domain(T).reify(run({k: v for k, (_, v) in env.items()}))

    def closed_value(self, M: Term):
        """Uncanonicalised value of a closed term (closures stay closures)."""
        return self.compile(M, {})[1]({})


_DEFAULT = Semantics()


def denote_type(T: Type, sem: Semantics = _DEFAULT) -> FiniteBiorder:
    return sem.domain(T).biorder


def evaluate(M: Term, env: Optional[dict] = None, sem: Semantics = _DEFAULT):
    """Canonical value of M (see :mod:`bistable.domain`)."""
    return sem.value(M, env)


def denote(M: Term, rho: Optional[dict] = None, sem: Semantics = _DEFAULT) -> Element:
    """⟦M⟧ρ as an element of the biorder of its type.

    ``rho`` maps free variables to pairs (type, element index).
    """
    rho = rho or {}
    env = {k: (t, sem.domain(t).values[i]) for k, (t, i) in rho.items()}
    tenv = {k: t for k, (t, _) in rho.items()}
    d = sem.domain(sem.typeof(M, tenv))
    return Element(d.biorder, d.index(sem.value(M, env)))


def theory_equal(M: Term, N: Term, sem: Semantics = _DEFAULT) -> bool:
    T, U = sem.typeof(M, {}), sem.typeof(N, {})
    if T != U:
        raise BistableError("type-error", f"cannot compare terms of types {T} and {U}")
    return sem.value(M) == sem.value(N)


# ------------------------------------------------------- first-order types


def fo_type(n: int, m: int) -> Type:
    return Arrow(sigma_power(n), sigma_power(m))


def fo_define(e, n: int, m: int, sem: Semantics = _DEFAULT) -> Term:
    """A closed term of type Σⁿ⇒Σᵐ denoting e.

    Each output component of a bistable first-order function is constant
    or a projection, so the term is read off component by component.
    """
    T = fo_type(n, m)
    d = sem.domain(T)
    table = d.values[e.index] if isinstance(e, Element) else d.reify(e)
    inputs = sem.domain(sigma_power(n)).values
    comps: list[Term] = []
    for j in range(1, m + 1):
        col = [component_value(out, j, m) for out in table]
        if all(c == 0 for c in col):
            comps.append(Bot())
        elif all(c == 1 for c in col):
            comps.append(Top())
        else:
            for i in range(1, n + 1):
                if all(c == component_value(x, i, n) for c, x in zip(col, inputs)):
                    comps.append(component(Var("x"), i, n))
                    break
            else:
                raise BistableError("internal", f"component {j} of {table} is neither constant nor a projection")
    return Lam("x", sigma_power(n), tuple_of(comps))


def component_value(v, i: int, n: int):
    return v if n == 1 else v[i - 1]


# -------------------------------------------------------------- retractions


@dataclass(frozen=True)
class Retract:
    """Closed terms inj: src⇒tgt and proj: tgt⇒src with inj;proj = id."""

    src: Type
    tgt: Type
    inj: Term
    proj: Term
    is_id: bool = False


@dataclass(frozen=True)
class RetractionPair:
    inj: Term
    proj: Term
    n: int
    m: int
    source: Type

    @property
    def target(self) -> Type:
        return fo_type(self.n, self.m)


def _lam(x: str, T: Type, body: Term) -> Term:
    return Lam(x, T, body)


def _comps(x: Term, n: int, lo: int = 1, hi: Optional[int] = None) -> list[Term]:
    hi = n if hi is None else hi
    return [component(x, i, n) for i in range(lo, hi + 1)]


def _let(x: str, T: Type, value: Term, body: Term) -> Term:
    """(λx:T.body) value, so value is computed once."""
    return App(Lam(x, T, body), value)


def _lets(bindings: list[tuple[str, Type, Term]], body: Term) -> Term:
    for x, T, value in reversed(bindings):
        body = _let(x, T, value, body)
    return body


def _ident(T: Type) -> Retract:
    i = _lam("x", T, Var("x"))
    return Retract(T, T, i, i, True)


def _then(r1: Retract, r2: Retract) -> Retract:
    if r1.tgt != r2.src:
        raise BistableError("internal", f"cannot chain {r1.src} ⊴ {r1.tgt} with {r2.src} ⊴ {r2.tgt}")
    if r1.is_id:
        return r2
    if r2.is_id:
        return r1
    inj = _lam("a", r1.src, App(r2.inj, App(r1.inj, Var("a"))))
    proj = _lam("c", r2.tgt, App(r1.proj, App(r2.proj, Var("c"))))
    return Retract(r1.src, r2.tgt, inj, proj)


def _chain(*rs: Retract) -> Retract:
    out = rs[0]
    for r in rs[1:]:
        out = _then(out, r)
    return out


def _arrow_cong(ra: Retract, rb: Retract) -> Retract:
    """A⇒B ⊴ A'⇒B' from A ⊴ A' and B ⊴ B'."""
    if ra.is_id and rb.is_id:
        return _ident(Arrow(ra.src, rb.src))
    src, tgt = Arrow(ra.src, rb.src), Arrow(ra.tgt, rb.tgt)
    inj = _lam("f", src, _lam("y", ra.tgt, App(rb.inj, App(Var("f"), App(ra.proj, Var("y"))))))
    proj = _lam("g", tgt, _lam("x", ra.src, App(rb.proj, App(Var("g"), App(ra.inj, Var("x"))))))
    return Retract(src, tgt, inj, proj)


def _prod_cong(rs: list[Retract]) -> Retract:
    """Componentwise retraction of a product; a single factor stands alone."""
    if len(rs) == 1:
        return rs[0]
    src, tgt = Prod([r.src for r in rs]), Prod([r.tgt for r in rs])
    if all(r.is_id for r in rs):
        return _ident(src)
    inj = _lam("p", src, Tuple([App(r.inj, Proj(i, Var("p"))) for i, r in enumerate(rs, 1)]))
    proj = _lam("q", tgt, Tuple([App(r.proj, Proj(i, Var("q"))) for i, r in enumerate(rs, 1)]))
    return Retract(src, tgt, inj, proj)


def _power_cong(r: Retract, d: int) -> Retract:
    if d == 1:
        return r
    return _prod_cong([r] * d) if d else _ident(Prod(()))


def _pad_args(n: int, m: int, N: int) -> Retract:
    """Σⁿ⇒Σᵐ ⊴ Σᴺ⇒Σᵐ by ignoring the extra arguments."""
    if N == n:
        return _ident(fo_type(n, m))
    src, tgt = fo_type(n, m), fo_type(N, m)
    x, y = Var("x"), Var("y")
    inj = _lam("f", src, _lam("x", sigma_power(N), App(Var("f"), tuple_of(_comps(x, N, 1, n)))))
    proj = _lam("g", tgt, _lam("y", sigma_power(n), App(Var("g"), tuple_of(_comps(y, n) + [Bot()] * (N - n)))))
    return Retract(src, tgt, inj, proj)


def _pad_results(n: int, m: int, M: int) -> Retract:
    """Σⁿ⇒Σᵐ ⊴ Σⁿ⇒Σᴹ by answering ⊥ on the extra results."""
    if M == m:
        return _ident(fo_type(n, m))
    src, tgt = fo_type(n, m), fo_type(n, M)
    fx = App(Var("f"), Var("x"))
    gx = App(Var("g"), Var("x"))
    r = Var("r")
    inj = _lam("f", src, _lam("x", sigma_power(n), _let("r", sigma_power(m), fx, tuple_of(_comps(r, m) + [Bot()] * (M - m)))))
    proj = _lam("g", tgt, _lam("x", sigma_power(n), _let("r", sigma_power(M), gx, tuple_of(_comps(r, M, 1, m)))))
    return Retract(src, tgt, inj, proj)


def _flatten(N: int, ms: list[int]) -> Retract:
    """Π_i (Σᴺ⇒Σ^{m_i}) ≅ Σᴺ⇒Σ^{Σ m_i}."""
    src = Prod([fo_type(N, m) for m in ms])
    M = sum(ms)
    tgt = fo_type(N, M)
    p, g, x = Var("p"), Var("g"), Var("x")
    outs: list[Term] = []
    lets = []
    for i, m in enumerate(ms, 1):
        lets.append((f"r{i}", sigma_power(m), App(Proj(i, p), x)))
        outs += _comps(Var(f"r{i}"), m)
    inj = _lam("p", src, _lam("x", sigma_power(N), _lets(lets, tuple_of(outs))))
    parts, off = [], 0
    r = Var("r")
    for m in ms:
        comps = tuple_of([component(r, off + j, M) for j in range(1, m + 1)])
        parts.append(_lam("x", sigma_power(N), _let("r", sigma_power(M), App(g, x), comps)))
        off += m
    proj = _lam("g", tgt, Tuple(parts))
    return Retract(src, tgt, inj, proj)


def _ret1(a: int) -> Retract:
    """(Σᵃ⇒Σ)⇒Σ ⊴ (Σ⇒Σ)×Σᵃ: f ↦ ⟨λx.f(λy.x), ⟨f πᵢ⟩⟩, p ↦ λg.(π₁p)(g(π₂p))."""
    src = Arrow(fo_type(a, 1), S)
    tgt = Prod((Arrow(S, S), sigma_power(a)))
    f, y, p, g = Var("f"), Var("y"), Var("p"), Var("g")
    probes = [App(f, _lam("y", sigma_power(a), c)) for c in _comps(y, a)]
    inj = _lam("f", src, Tuple([_lam("x", S, App(f, _lam("y", sigma_power(a), Var("x")))), tuple_of(probes)]))
    proj = _lam("p", tgt, _lam("g", fo_type(a, 1), App(Proj(1, p), App(g, Proj(2, p)))))
    return Retract(src, tgt, inj, proj)


def _ret1_embed(a: int) -> Retract:
    """(Σ⇒Σ)×Σᵃ ⊴ Σ^{a+1}⇒Σ^{2a}.

    The first a results copy h(w₁), the last a are the constant vector.
    """
    src = Prod((Arrow(S, S), sigma_power(a)))
    tgt = fo_type(a + 1, 2 * a)
    p, w, g = Var("p"), Var("w"), Var("g")
    outs = [Var("r")] * a + _comps(Proj(2, p), a)
    inj = _lam("p", src, _lam("w", sigma_power(a + 1), _let(
        "r", S, App(Proj(1, p), component(w, 1, a + 1)), tuple_of(outs))))
    probe = App(g, tuple_of([Var("x")] + [Bot()] * a))
    at_bot = App(g, tuple_of([Bot()] * (a + 1)))
    r = Var("r")
    proj = _lam("g", tgt, Tuple([_lam("x", S, component(probe, 1, 2 * a)), _let(
        "r", sigma_power(2 * a), at_bot, tuple_of([component(r, a + i, 2 * a) for i in range(1, a + 1)]))]))
    return Retract(src, tgt, inj, proj)


def ret3(a: int, b: int) -> Retract:
    """(Σᵃ⇒Σᵇ)⇒Σ ⊴ Σ^{a+b}⇒Σ^{(2a)^b}, for a, b ≥ 1."""
    if b == 1:
        return _then(_ret1(a), _ret1_embed(a))
    X, Y = fo_type(a, b - 1), fo_type(a, 1)
    Q = Arrow(fo_type(a, b), S)
    # curry away the last result component
    f, h, k, F, g, x = Var("f"), Var("h"), Var("k"), Var("F"), Var("g"), Var("x")
    r = Var("r")
    joined = _let("r", sigma_power(b - 1), App(h, x), tuple_of(_comps(r, b - 1) + [App(k, x)]))
    split_inj = _lam("f", Q, _lam("h", X, _lam("k", Y, App(f, _lam("x", sigma_power(a), joined)))))
    gx = App(g, x)
    front = _let("r", sigma_power(b), gx, tuple_of(_comps(r, b, 1, b - 1)))
    split_proj = _lam("F", Arrow(X, Arrow(Y, S)), _lam("g", fo_type(a, b), apps(
        F, _lam("x", sigma_power(a), front), _lam("x", sigma_power(a), component(gx, b, b)))))
    split = Retract(Q, Arrow(X, Arrow(Y, S)), split_inj, split_proj)
    inner = _arrow_cong(_ident(X), _ret1(a))
    # X ⇒ (Σ⇒Σ)×Σᵃ  ≅  (Σ ⇒ X ⇒ Σ) × (X⇒Σ)ᵃ
    XS = Arrow(X, S)
    dist_src = Arrow(X, Prod((Arrow(S, S), sigma_power(a))))
    dist_tgt = Prod([Arrow(S, XS)] + [XS] * a)
    P = Var("P")
    Fh = App(F, h)
    dist_inj = _lam("F", dist_src, Tuple(
        [_lam("s", S, _lam("h", X, App(Proj(1, Fh), Var("s"))))]
        + [_lam("h", X, c) for c in _comps(Proj(2, Fh), a)]))
    dist_proj = _lam("P", dist_tgt, _lam("h", X, Tuple([
        _lam("s", S, apps(Proj(1, P), Var("s"), h)),
        tuple_of([App(Proj(1 + i, P), h) for i in range(1, a + 1)])])))
    dist = Retract(dist_src, dist_tgt, dist_inj, dist_proj)
    sub = ret3(a, b - 1)
    L, K1 = a + b - 1, (2 * a) ** (b - 1)
    K = 2 * a * K1
    rec = _prod_cong([_arrow_cong(_ident(S), sub)] + [sub] * a)
    # (Σ ⇒ Σᴸ⇒Σ^{K1}) × (Σᴸ⇒Σ^{K1})ᵃ ⊴ Σ^{L+1}⇒Σ^{2a·K1}, the Σ argument last
    fz_src = Prod([Arrow(S, fo_type(L, K1))] + [fo_type(L, K1)] * a)
    fz_tgt = fo_type(L + 1, K)
    w, G, v = Var("w"), Var("G"), Var("v")
    wl = tuple_of(_comps(w, L + 1, 1, L))
    s = component(w, L + 1, L + 1)
    lets = [("r0", sigma_power(K1), apps(Proj(1, P), s, wl))]
    outs = _comps(Var("r0"), K1) * a
    for i in range(1, a + 1):
        lets.append((f"r{i}", sigma_power(K1), App(Proj(1 + i, P), wl)))
        outs += _comps(Var(f"r{i}"), K1)
    fz_inj = _lam("P", fz_src, _lam("w", sigma_power(L + 1), _lets(lets, tuple_of(outs))))
    Gs = App(G, tuple_of(_comps(v, L) + [Var("s")]))
    Gb = App(G, tuple_of(_comps(v, L) + [Bot()]))
    parts: list[Term] = [_lam("s", S, _lam("v", sigma_power(L), _let(
        "r", sigma_power(K), Gs, tuple_of([component(r, l, K) for l in range(1, K1 + 1)]))))]
    for i in range(1, a + 1):
        off = a * K1 + (i - 1) * K1
        parts.append(_lam("v", sigma_power(L), _let(
            "r", sigma_power(K), Gb, tuple_of([component(r, off + l, K) for l in range(1, K1 + 1)]))))
    fz_proj = _lam("G", fz_tgt, Tuple(parts))
    fused = Retract(fz_src, fz_tgt, fz_inj, fz_proj)
    return _chain(split, inner, dist, rec, fused)


def _as_fo(T: Type) -> Optional[tuple[int, int]]:
    """(n, m) if T is literally Σⁿ⇒Σᵐ."""

    def power(t):
        if isinstance(t, Sigma):
            return 1
        if isinstance(t, Prod) and len(t.items) != 1 and all(isinstance(x, Sigma) for x in t.items):
            return len(t.items)
        return None

    if isinstance(T, Arrow):
        n, m = power(T.dom), power(T.cod)
        if n is not None and m is not None:
            return n, m
    return None


def _retract(T: Type) -> tuple[Retract, int, int]:
    fo = _as_fo(T)
    if fo is not None:
        return _ident(T), fo[0], fo[1]
    if isinstance(T, Sigma):
        u = Prod(())
        inj = _lam("x", S, _lam("u", u, Var("x")))
        proj = _lam("f", fo_type(0, 1), App(Var("f"), Tuple(())))
        return Retract(S, fo_type(0, 1), inj, proj), 0, 1
    if isinstance(T, Prod):
        subs = [_retract(t) for t in T.items]
        N = max((n for _, n, _ in subs), default=0)
        ms = [m for _, _, m in subs]
        padded = [_then(r, _pad_args(n, m, N)) for r, n, m in subs]
        r = _then(_prod_cong(padded) if len(padded) != 1 else _prod_cong1(T, padded[0]), _flatten(N, ms))
        return r, N, sum(ms)
    if isinstance(T, Arrow):
        rs, a0, b0 = _retract(T.dom)
        rt, c, d = _retract(T.cod)
        a, b = max(a0, 1), max(b0, 1)
        rs = _chain(rs, _pad_args(a0, b0, a), _pad_results(a, b0, b))
        X = fo_type(a, b)
        Q = Arrow(X, S)
        cong = _arrow_cong(rs, rt)
        # X ⇒ (Σᶜ⇒Σᵈ) ≅ Σᶜ ⇒ (X⇒Σ)ᵈ
        F, G, g, z = Var("F"), Var("G"), Var("g"), Var("z")
        sw_src = Arrow(X, fo_type(c, d))
        sw_tgt = Arrow(sigma_power(c), power_type(Q, d) if d else Prod(()))
        sw_inj = _lam("F", sw_src, _lam("z", sigma_power(c), tuple_of(
            [_lam("g", X, component(apps(F, g, z), j, d)) for j in range(1, d + 1)])))
        q = Var("q")
        sw_proj = _lam("G", sw_tgt, _lam("g", X, _lam("z", sigma_power(c), _let("q", sw_tgt.cod, App(G, z), tuple_of(
            [App(component(q, j, d), g) for j in range(1, d + 1)])))))
        swap = Retract(sw_src, sw_tgt, sw_inj, sw_proj)
        r3 = ret3(a, b)
        K = (2 * a) ** b
        under = _arrow_cong(_ident(sigma_power(c)), _power_cong(r3, d))
        # Σᶜ ⇒ (Σ^{a+b}⇒Σᴷ)ᵈ ≅ Σ^{c+a+b} ⇒ Σ^{K·d}
        n, m = c + a + b, K * d
        fl_src = Arrow(sigma_power(c), power_type(fo_type(a + b, K), d) if d else Prod(()))
        w = Var("w")
        zw = tuple_of(_comps(w, n, 1, c))
        vw = tuple_of(_comps(w, n, c + 1, n))
        outs: list[Term] = []
        q = Var("q")
        lets = [("q", fl_src.cod, App(F, zw))]
        for j in range(1, d + 1):
            lets.append((f"r{j}", sigma_power(K), App(component(q, j, d), vw)))
            outs += _comps(Var(f"r{j}"), K)
        fl_inj = _lam("F", fl_src, _lam("w", sigma_power(n), _lets(lets, tuple_of(outs))))
        v, r = Var("v"), Var("r")
        Gzv = App(G, tuple_of(_comps(z, c) + _comps(v, a + b)))
        fl_proj = _lam("G", fo_type(n, m), _lam("z", sigma_power(c), tuple_of([
            _lam("v", sigma_power(a + b), _let(
                "r", sigma_power(m), Gzv, tuple_of([component(r, (j - 1) * K + l, m) for l in range(1, K + 1)])))
            for j in range(1, d + 1)])))
        flat = Retract(fl_src, fo_type(n, m), fl_inj, fl_proj)
        return _chain(cong, swap, under, flat), n, m
    raise BistableError("type-error", f"{T} is not a type of this calculus")


def _prod_cong1(T: Prod, r: Retract) -> Retract:
    """(T) ⊴ (T') for a one-component product."""
    src, tgt = T, Prod((r.tgt,))
    inj = _lam("p", src, Tuple([App(r.inj, Proj(1, Var("p")))]))
    proj = _lam("q", tgt, Tuple([App(r.proj, Proj(1, Var("q")))]))
    return Retract(src, tgt, inj, proj)


def retraction_terms(T: Type) -> RetractionPair:
    r, n, m = _retract(T)
    return RetractionPair(r.inj, r.proj, n, m, T)


def retraction_holds(T: Type, sem: Semantics = _DEFAULT) -> bool:
    """⟦inj⟧;⟦proj⟧ is the identity on ⟦T⟧."""
    rp = retraction_terms(T)
    inj, proj = sem.closed_value(rp.inj), sem.closed_value(rp.proj)
    d = sem.domain(T)
    return all(d.reify(proj(inj(v))) == v for v in d.values)


def define_element(e, T: Type, sem: Semantics = _DEFAULT) -> Term:
    """A closed term of type T denoting e (an Element or canonical value)."""
    d = sem.domain(T)
    v = d.values[e.index] if isinstance(e, Element) else d.reify(e)
    rp = retraction_terms(T)
    image = sem.domain(rp.target).reify(sem.closed_value(rp.inj)(v))
    return App(rp.proj, fo_define(image, rp.n, rp.m, sem))


# ------------------------------------------------- sequential evaluation laws


def axiom_term(n: int) -> Term:
    """λf.λh.f(λx.h⟨f π₁, …, f πₙ⟩) at type ((Σⁿ⇒Σ)⇒Σ)⇒((Σⁿ⇒Σ)⇒Σ)."""
    E = fo_type(n, 1)
    f, y = Var("f"), Var("y")
    probes = [App(f, _lam("y", sigma_power(n), c)) for c in _comps(y, n)]
    body = App(f, _lam("x", sigma_power(n), App(Var("h"), tuple_of(probes))))
    return _lam("f", Arrow(E, S), _lam("h", E, body))


def axiom_check(n: int, sem: Semantics = _DEFAULT) -> bool:
    T = Arrow(fo_type(n, 1), S)
    return sem.value(axiom_term(n)) == sem.value(_lam("f", T, Var("f")))


def probe_identity_check(n: int, budget: int = bifun.DEFAULT_BUDGET) -> bool:
    """f(e) = e⟨f π₁, …, f πₙ⟩ for every bistrict f: (Σⁿ⇒Σ)⇒Σ and every e."""
    sig, base = sigma(), power(sigma(), n)
    E = bifun.exponential(base, sig, budget)
    tuples = list(itertools.product(range(2), repeat=n))
    projections = [E.index_of([t[i] for t in tuples]) for i in range(n)]
    for f in bifun.hom_set(E.biorder, sig, budget):
        if not bifun.is_bistrict(f):
            continue
        probe = tuples.index(tuple(f(p) for p in projections))
        for e in range(E.biorder.size):
            if f(e) != E.tables[e][probe]:
                return False
    return True

