"""SPCF: PCF with ⊤ and the first-order control operator catch.

Small-step evaluation by evaluation contexts, a denotational semantics in
which ``nat`` is cut off at k numerals, the catch/case retractions, the
derived call-with-current-continuation operator, adequacy checking and a
CPS translation into the data/program calculus of :mod:`bistable.omega`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

from . import bifun, lam
from .biorder import Element, bilift, flat
from .domain import Domain
from .errors import BistableError
from .outcome import ConvergedTop, DivergedBot, EvalOutcome, FuelExhausted
from .syntax import (App, Arrow, Bot, Catch, If0, If0n, Lam, Nat, Num, NumT, Phi, Pred, Prod, Proj, Sigma, Succ,
                     Term, Top, Tuple, Type, Var, Y, Zero, children, free_vars, fresh, numeral, numeral_value,
                     show, sigma_power, subst, tuple_of)

S = Sigma()
NAT = Nat()


# ------------------------------------------------------------- typechecking


def _ext(M: Term, env: dict, go) -> Optional[Type]:
    if isinstance(M, Zero):
        return NAT
    if isinstance(M, (Succ, Pred)):
        t = go(M.term, env)
        if t != NAT:
            raise lam._type_error(M, f"{type(M).__name__.lower()} expects nat, got {t}")
        return NAT
    if isinstance(M, App) and isinstance(M.fun, If0):
        t = go(M.fun.term, env)
        if t != NAT:
            raise lam._type_error(M, f"if0 tests a nat, got {t}")
        p = go(M.arg, env)
        if not (isinstance(p, Prod) and len(p.items) == 2 and p.items[0] == p.items[1]
                and p.items[0] in (S, NAT)):
            raise lam._type_error(M, f"if0 branches must form a pair T×T with T in {{S, nat}}, got {p}")
        return p.items[0]
    if isinstance(M, If0):
        raise lam._type_error(M, "if0 must be applied to its pair of branches")
    if isinstance(M, Y):
        t = go(M.term, env)
        if not (isinstance(t, Arrow) and t.dom == t.cod):
            raise lam._type_error(M, f"Y needs a function T⇒T, got {t}")
        return t.dom
    if isinstance(M, Catch):
        if M.arity < 1:
            raise lam._type_error(M, "catch arity must be at least 1")
        want = Arrow(sigma_power(M.arity), S)
        t = go(M.term, env)
        if t != want:
            raise lam._type_error(M, f"catch {M.arity} expects {want}, got {t}")
        return NAT
    return None


def typecheck(env: Optional[dict], M: Term) -> Type:
    return lam.check(M, dict(env or {}), _ext, (Sigma, Nat))


# ------------------------------------------------------- evaluation contexts


@dataclass(frozen=True)
class AppFrame:
    arg: Term

    def wrap(self, t: Term) -> Term:
        return App(t, self.arg)


@dataclass(frozen=True)
class If0Frame:
    def wrap(self, t: Term) -> Term:
        return If0(t)


@dataclass(frozen=True)
class ProjFrame:
    index: int

    def wrap(self, t: Term) -> Term:
        return Proj(self.index, t)


@dataclass(frozen=True)
class SuccFrame:
    def wrap(self, t: Term) -> Term:
        return Succ(t)


@dataclass(frozen=True)
class PredFrame:
    def wrap(self, t: Term) -> Term:
        return Pred(t)


Frame = Union[AppFrame, If0Frame, ProjFrame, SuccFrame, PredFrame]


@dataclass(frozen=True)
class Context:
    """Frames listed from the outside in; the hole is innermost."""

    frames: tuple = ()

    def plug(self, t: Term) -> Term:
        for f in reversed(self.frames):
            t = f.wrap(t)
        return t

    def __str__(self):
        return show(self.plug(Var("[]")))


@dataclass(frozen=True)
class Redex:
    context: Context
    term: Term
    rule: str


@dataclass(frozen=True)
class Terminal:
    """No rule applies: ``kind`` is top, bot or stuck."""

    kind: str
    reason: str = ""


def check_program(M: Term) -> None:
    if free_vars(M):
        raise BistableError("ill-formed-program", f"free variables {sorted(free_vars(M))}")
    t = typecheck({}, M)
    if t != S:
        raise BistableError("ill-formed-program", f"a program has type S, this one has type {t}")


def decompose(M: Term) -> Union[Redex, Terminal]:
    """Split M uniquely as E[R] with R a redex, or report why none exists."""
    frames: list = []
    t = M
    while True:
        if isinstance(t, Top):
            return Terminal("top") if not frames else Redex(Context(tuple(frames)), t, "top")
        if isinstance(t, Bot):
            return Terminal("bot", "bot")
        if isinstance(t, App):
            f = t.fun
            if isinstance(f, Lam):
                return Redex(Context(tuple(frames)), t, "beta")
            if isinstance(f, If0):
                if numeral_value(f.term) is not None:
                    return Redex(Context(tuple(frames)), t, "if0")
                frames += [AppFrame(t.arg), If0Frame()]
                t = f.term
                continue
            frames.append(AppFrame(t.arg))
            t = f
            continue
        if isinstance(t, Proj):
            if isinstance(t.term, Tuple):
                if not 1 <= t.index <= len(t.term.items):
                    return Terminal("stuck", "projection out of range")
                return Redex(Context(tuple(frames)), t, "proj")
            frames.append(ProjFrame(t.index))
            t = t.term
            continue
        if isinstance(t, Pred):
            k = numeral_value(t.term)
            if k == 0:
                return Terminal("stuck", "pred 0")
            if k is not None:
                return Redex(Context(tuple(frames)), t, "pred")
            frames.append(PredFrame())
            t = t.term
            continue
        if isinstance(t, Succ) and numeral_value(t) is None:
            frames.append(SuccFrame())
            t = t.term
            continue
        if isinstance(t, Catch):
            return Redex(Context(tuple(frames)), t, "catch")
        if isinstance(t, Y):
            return Redex(Context(tuple(frames)), t, "Y")
        return Terminal("stuck", f"no rule for {type(t).__name__} in the hole")


@dataclass(frozen=True)
class Step:
    rule: str
    term: Term
    numeral: int = -1  # largest numeral inspected or produced by this step


def contract(r: Redex) -> Step:
    E, t = r.context, r.term
    if r.rule == "top":
        return Step("top", Top())
    if r.rule == "beta":
        f = t.fun
        return Step("beta", E.plug(subst(f.body, f.var, t.arg)))
    if r.rule == "proj":
        return Step("proj", E.plug(t.term.items[t.index - 1]))
    if r.rule == "pred":
        k = numeral_value(t.term)
        return Step("pred", E.plug(t.term.term), k)
    if r.rule == "if0":
        k = numeral_value(t.fun.term)
        return Step("if0", E.plug(Proj(1 if k == 0 else 2, t.arg)), k)
    if r.rule == "catch":
        n = t.arity
        return Step("catch", App(t.term, tuple_of([E.plug(numeral(i)) for i in range(n)])), n - 1)
    if r.rule == "Y":
        return Step("Y", E.plug(App(t.term, t)))
    raise BistableError("internal", f"unknown rule {r.rule}")


def step(M: Term) -> Union[Step, Terminal]:
    d = decompose(M)
    return contract(d) if isinstance(d, Redex) else d


@dataclass
class Run:
    outcome: EvalOutcome
    max_numeral: int = -1
    trace: list = field(default_factory=list)


def run(M: Term, fuel: int = 10 ** 5, trace: bool = False) -> Run:
    """Iterate ``step`` at most ``fuel`` times."""
    check_program(M)
    out = Run(FuelExhausted(fuel))
    t = M
    for n in range(fuel + 1):
        d = decompose(t)
        if isinstance(d, Terminal):
            out.outcome = ConvergedTop(n) if d.kind == "top" else DivergedBot(n, d.reason)
            return out
        if n == fuel:
            break
        s = contract(d)
        out.max_numeral = max(out.max_numeral, s.numeral)
        t = s.term
        if trace:
            out.trace.append(f"{s.rule} ; {show(t)}")
    return out


def evaluate(M: Term, fuel: int = 10 ** 5) -> EvalOutcome:
    return run(M, fuel).outcome


# ------------------------------------------------------ cutoff denotation


class CutoffSemantics(lam.Semantics):
    """⟦nat⟧ is the bilifted flat domain on 0 … k−1."""

    def __init__(self, k: int, budget: int = bifun.DEFAULT_BUDGET):
        if k < 1:
            raise BistableError("bad-argument", "cutoff k must be at least 1")
        super().__init__(budget)
        self.k = k

    def base_domain(self, T: Type) -> Domain:
        if isinstance(T, Nat):
            return Domain.base(bilift(flat(self.k)), ["bot", *range(self.k), "top"], name="nat")
        return super().base_domain(T)

    def typeof(self, M: Term, env: dict) -> Type:
        return lam.check(M, env, _ext, (Sigma, Nat))

    def _num(self, n: int):
        return n if 0 <= n < self.k else "bot"

    def compile_ext(self, M: Term, tenv: dict):
        k = self.k
        if isinstance(M, Zero):
            return NAT, lambda env: 0
        if isinstance(M, (Succ, Pred)):
            t, c = self.compile(M.term, tenv)
            if t != NAT:
                self.typeof(M, tenv)
            delta = 1 if isinstance(M, Succ) else -1

            def arith(env):
                v = c(env)
                return v if isinstance(v, str) else self._num(v + delta)

            return NAT, arith
        if isinstance(M, App) and isinstance(M.fun, If0):
            T = self.typeof(M, tenv)
            _, test = self.compile(M.fun.term, tenv)
            _, pair = self.compile(M.arg, tenv)
            d = self.domain(T)

            def cond(env):
                v = test(env)
                if v == "bot":
                    return d.bottom()
                if v == "top":
                    return d.top()
                return pair(env)[0 if v == 0 else 1]

            return T, cond
        if isinstance(M, If0):
            self.typeof(M, tenv)
        if isinstance(M, Y):
            F, f = self.compile(M.term, tenv)
            T = self.typeof(M, tenv)
            d = self.domain(T)

            def fix(env):
                g = f(env)
                x = d.bottom()
                while True:
                    y = d.reify(self.apply(F, g, x))
                    if y == x:
                        return x
                    x = y

            return T, fix
        if isinstance(M, Catch):
            self.typeof(M, tenv)
            n = M.arity
            _, c = self.compile(M.term, tenv)
            fn = self.domain(Arrow(sigma_power(n), S))
            inputs = self.domain(sigma_power(n)).values

            def catch(env):
                table = fn.reify(c(env))
                if all(v == 0 for v in table):
                    return "bot"
                if all(v == 1 for v in table):
                    return "top"
                for j in range(1, n + 1):
                    if all(v == lam.component_value(x, j, n) for v, x in zip(table, inputs)):
                        return self._num(j - 1)
                raise BistableError("internal", f"{table} is neither constant nor a projection")

            return NAT, catch
        return None


def denote_cutoff(M: Term, k: int, budget: int = bifun.DEFAULT_BUDGET) -> Element:
    sem = CutoffSemantics(k, budget)
    d = sem.domain(sem.typeof(M, {}))
    return Element(d.biorder, d.index(sem.value(M)))


def value_cutoff(M: Term, k: int, budget: int = bifun.DEFAULT_BUDGET):
    """Canonical value of M in the cutoff model (no carrier enumeration at M's type)."""
    return CutoffSemantics(k, budget).value(M)


# ---------------------------------------------------- retractions and macros


def case_term(n: int) -> Term:
    """caseₙ : nat ⇒ Σⁿ ⇒ Σ, sending i < n to π_{i+1} and i ≥ n to ⊥."""
    if n < 1:
        raise BistableError("bad-argument", "case needs n >= 1")
    x, y = Var("x"), Var("y")
    if n == 1:
        # the one-component projection of Σ¹ = Σ is the identity
        return Lam("x", NAT, Lam("y", S, App(If0(x), Tuple((y, Bot())))))
    rest = tuple_of([Proj(i, y) for i in range(2, n + 1)])
    body = App(If0(x), Tuple((Proj(1, y), App(App(case_term(n - 1), Pred(x)), rest))))
    return Lam("x", NAT, Lam("y", sigma_power(n), body))


def catch_term(n: int) -> Term:
    return Lam("f", Arrow(sigma_power(n), S), Catch(n, Var("f")))


def approximant_type(T: Type, i: int) -> Type:
    """T_i: Σ at Σ, Σⁱ⇒Σ at nat, congruent on × and ⇒."""
    if isinstance(T, Sigma):
        return S
    if isinstance(T, Nat):
        return Arrow(sigma_power(i), S)
    if isinstance(T, Prod):
        return Prod([approximant_type(t, i) for t in T.items])
    if isinstance(T, Arrow):
        return Arrow(approximant_type(T.dom, i), approximant_type(T.cod, i))
    raise BistableError("type-error", f"{T} is not an SPCF type")


def _snb(T: Type, i: int) -> lam.Retract:
    if isinstance(T, Sigma):
        return lam._ident(S)
    if isinstance(T, Nat):
        return lam.Retract(Arrow(sigma_power(i), S), NAT, catch_term(i), case_term(i))
    if isinstance(T, Prod):
        parts = [_snb(t, i) for t in T.items]
        if len(parts) == 1:
            return lam._prod_cong1(Prod((approximant_type(T.items[0], i),)), parts[0])
        return lam._prod_cong(parts)
    if isinstance(T, Arrow):
        return lam._arrow_cong(_snb(T.dom, i), _snb(T.cod, i))
    raise BistableError("type-error", f"{T} is not an SPCF type")


def snb_retraction(T: Type, i: int) -> tuple[Term, Term]:
    """(inj: T_i ⇒ T, proj: T ⇒ T_i), built from catchᵢ and caseᵢ."""
    if i < 1:
        raise BistableError("bad-argument", "approximation index must be at least 1")
    r = _snb(T, i)
    return r.inj, r.proj


def callcc_term() -> Term:
    """𝒞 : ((nat⇒Σ)⇒Σ)⇒nat, derived from catch₂ and recursion."""
    K = Arrow(NAT, S)
    G = Arrow(K, S)
    f, g, x, y, h, z = (Var(v) for v in "fgxyhz")
    probe = Catch(2, Lam("x", sigma_power(2), App(g, Lam("y", NAT, App(If0(y), x)))))
    again = App(f, Lam("h", K, App(g, Lam("z", NAT, App(h, Pred(z))))))
    body = App(If0(probe), Tuple((Zero(), Succ(again))))
    return Y(Lam("f", Arrow(G, NAT), Lam("g", G, body)))


# --------------------------------------------------------------- adequacy


class Verdict(enum.Enum):
    AGREE = "Agree"
    DISAGREE = "Disagree"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class AdequacyReport:
    verdict: Verdict
    outcome: EvalOutcome
    denotation: str
    max_numeral: int

    def line(self) -> str:
        return f"{self.verdict.value}: eval={self.outcome.kind} denotation={self.denotation}"


def adequacy_check(M: Term, k: int = 8, fuel: int = 10 ** 5) -> AdequacyReport:
    """Compare M⇓ with ⟦M⟧ₖ = ⊤."""
    r = run(M, fuel)
    v = value_cutoff(M, k)
    label = "⊤" if v == 1 else "⊥"
    if isinstance(r.outcome, FuelExhausted) or r.max_numeral >= k:
        verdict = Verdict.INCONCLUSIVE
    elif isinstance(r.outcome, ConvergedTop) == (v == 1):
        verdict = Verdict.AGREE
    else:
        verdict = Verdict.DISAGREE
    return AdequacyReport(verdict, r.outcome, label, r.max_numeral)


# ---------------------------------------------------------------------- CPS

NUM = NumT()
KONT = Arrow(NUM, S)
CPS_NAT = Arrow(KONT, S)


def cps_type(T: Type) -> Type:
    if isinstance(T, Sigma):
        return S
    if isinstance(T, Nat):
        return CPS_NAT
    if isinstance(T, Prod):
        return Prod([cps_type(t) for t in T.items])
    if isinstance(T, Arrow):
        return Arrow(cps_type(T.dom), cps_type(T.cod))
    raise BistableError("type-error", f"{T} is not an SPCF type")


def _names(M: Term) -> set:
    out = {M.var} if isinstance(M, Lam) else ({M.name} if isinstance(M, Var) else set())
    for c in children(M):
        out |= _names(c)
    return out


def cps(M: Term, env: Optional[dict] = None) -> Term:
    """Call-by-name CPS image of an SPCF term, with nat ↦ (N⇒Σ)⇒Σ."""
    env = dict(env or {})
    typecheck(env, M)
    taken = _names(M) | set(env)
    k, n, p = fresh("k", taken), fresh("n", taken), fresh("p", taken)

    def go(t: Term, tenv: dict) -> Term:
        v = numeral_value(t)
        if v is not None:
            return Lam(k, KONT, App(Var(k), Num(v)))
        if isinstance(t, Var):
            return t
        if isinstance(t, Lam):
            return Lam(t.var, cps_type(t.ty), go(t.body, {**tenv, t.var: t.ty}))
        if isinstance(t, App) and isinstance(t.fun, If0):
            T = typecheck(tenv, t)
            test, pair = go(t.fun.term, tenv), go(t.arg, tenv)
            P = Prod((cps_type(T), cps_type(T)))
            if T == S:
                sel = App(test, Lam(n, NUM, If0n(Var(n), Proj(1, Var(p)), Proj(2, Var(p)))))
            else:
                # η-expanded at nat so the data test stays at type Σ
                sel = Lam(k, KONT, App(test, Lam(n, NUM, If0n(
                    Var(n), App(Proj(1, Var(p)), Var(k)), App(Proj(2, Var(p)), Var(k))))))
            return App(Lam(p, P, sel), pair)
        if isinstance(t, App):
            return App(go(t.fun, tenv), go(t.arg, tenv))
        if isinstance(t, Tuple):
            return Tuple([go(x, tenv) for x in t.items])
        if isinstance(t, Proj):
            return Proj(t.index, go(t.term, tenv))
        if isinstance(t, (Top, Bot)):
            return t
        if isinstance(t, Succ):
            return Lam(k, KONT, App(go(t.term, tenv), Lam(n, NUM, App(Var(k), Phi("succ", Var(n))))))
        if isinstance(t, Pred):
            # pred 0 has no rule, so it diverges here too
            return Lam(k, KONT, App(go(t.term, tenv), Lam(n, NUM, If0n(
                Var(n), Bot(), App(Var(k), Phi("pred", Var(n)))))))
        if isinstance(t, Catch):
            body = tuple_of([App(Var(k), Num(i)) for i in range(t.arity)])
            return Lam(k, KONT, App(go(t.term, tenv), body))
        if isinstance(t, Y):
            return Y(go(t.term, tenv))
        raise BistableError("type-error", f"cannot translate {show(t)}")

    return go(M, env)
