"""The CPS target calculus: data type N, program type Σ, no N on the right of ⇒.

Programs run on a call-by-name Krivine machine; arguments of type N are
evaluated eagerly to numerals.  Also provides the universal type U, its
retraction combinators and the finite-table encoding of elements of U.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from .errors import BistableError
from .outcome import ConvergedTop, DivergedBot, EvalOutcome, FuelExhausted
from .syntax import (App, Arrow, Bot, Eq, Fst, If0n, Lam, Num, NumT, Pair, Phi, Prod, Proj, Sigma, Snd, Term, Top,
                     Tuple, Type, Var, Y, apps, show)

S = Sigma()
N = NumT()
KONT = Arrow(N, S)
CPS_NAT = Arrow(KONT, S)
U = Arrow(N, CPS_NAT)  # N ⇒ (N ⇒ Σ) ⇒ Σ


# ----------------------------------------------------------------- registry


def _pred(n: int) -> int:
    return n - 1 if n > 0 else 0


@dataclass
class PhiRegistry:
    """Named total functions on numerals, available as ``phi name``."""

    functions: dict = field(default_factory=dict)
    _counter: itertools.count = field(default_factory=itertools.count, repr=False)

    @classmethod
    def standard(cls) -> "PhiRegistry":
        return cls({"succ": lambda n: n + 1, "pred": _pred})

    def __contains__(self, name: str) -> bool:
        return name in self.functions

    def apply(self, name: str, n: int) -> int:
        try:
            f = self.functions[name]
        except KeyError:
            raise BistableError("unknown-phi", f"no function named {name!r} in the registry") from None
        v = f(n)
        if not isinstance(v, int) or v < 0:
            raise BistableError("unknown-phi", f"{name}({n}) = {v!r} is not a numeral")
        return v

    def register(self, f: Callable[[int], int], base: str = "f") -> str:
        name = f"{base}{next(self._counter)}"
        while name in self.functions:
            name = f"{base}{next(self._counter)}"
        self.functions[name] = f
        return name


# ------------------------------------------------------------- typechecking


def pointed(T: Type) -> bool:
    return not isinstance(T, NumT)


def check_type(T: Type) -> Type:
    if isinstance(T, (NumT, Sigma)):
        return T
    if isinstance(T, Prod):
        for t in T.items:
            check_type(t)
            if not pointed(t):
                raise BistableError("pointedness-violation", f"product component N in {T}")
        return T
    if isinstance(T, Arrow):
        check_type(T.dom)
        check_type(T.cod)
        if not pointed(T.cod):
            raise BistableError("pointedness-violation", f"N on the right of an arrow in {T}")
        return T
    raise BistableError("type-error", f"{T} is not a type of this calculus")


def _err(M: Term, detail: str) -> BistableError:
    return BistableError("type-error", f"{detail} at {show(M)}", at=show(M))


def typecheck(env: Optional[dict], M: Term) -> Type:
    env = dict(env or {})

    def want(t: Term, env: dict, T: Type) -> None:
        got = go(t, env)
        if got != T:
            raise _err(t, f"expected {T}, got {got}")

    def go(M: Term, env: dict) -> Type:
        if isinstance(M, Var):
            if M.name not in env:
                raise _err(M, f"unbound variable {M.name}")
            return env[M.name]
        if isinstance(M, Lam):
            check_type(M.ty)
            return check_type(Arrow(M.ty, go(M.body, {**env, M.var: M.ty})))
        if isinstance(M, App):
            f = go(M.fun, env)
            if not isinstance(f, Arrow):
                raise _err(M, f"applying a term of non-function type {f}")
            want(M.arg, env, f.dom)
            return f.cod
        if isinstance(M, Tuple):
            return check_type(Prod([go(x, env) for x in M.items]))
        if isinstance(M, Proj):
            t = go(M.term, env)
            if not isinstance(t, Prod) or not 1 <= M.index <= len(t.items):
                raise _err(M, f"bad projection {M.index} from {t}")
            return t.items[M.index - 1]
        if isinstance(M, (Top, Bot)):
            return S
        if isinstance(M, Num):
            if M.value < 0:
                raise _err(M, "numerals are non-negative")
            return N
        if isinstance(M, (Eq, Pair)):
            want(M.left, env, N)
            want(M.right, env, N)
            return N
        if isinstance(M, (Fst, Snd, Phi)):
            want(M.term, env, N)
            return N
        if isinstance(M, If0n):
            want(M.test, env, N)
            want(M.then, env, S)
            want(M.other, env, S)
            return S
        if isinstance(M, Y):
            t = go(M.term, env)
            if not (isinstance(t, Arrow) and t.dom == t.cod and pointed(t.dom)):
                raise _err(M, f"Y needs P⇒P with P pointed, got {t}")
            return t.dom
        raise _err(M, f"{type(M).__name__} is not part of this calculus")

    return go(M, env)


# --------------------------------------------------------------- arithmetic


def pair_code(n: int, m: int) -> int:
    """Injective pairing 2ⁿ(2m+1), always positive."""
    return (1 << n) * (2 * m + 1)


def unpair(p: int) -> tuple[int, int]:
    if p <= 0:
        return 0, 0
    n = (p & -p).bit_length() - 1
    return n, (p >> n) // 2


def eval_data(M: Term, env: Optional[Mapping] = None, registry: Optional[PhiRegistry] = None) -> int:
    """Strict evaluation of an N-typed term to a numeral."""
    env = {} if env is None else env
    reg = registry or PhiRegistry.standard()

    def go(t: Term) -> int:
        if isinstance(t, Num):
            return t.value
        if isinstance(t, Var):
            if t.name not in env:
                raise BistableError("open-term", f"unbound variable {t.name}")
            v = env[t.name]
            if not isinstance(v, int):
                raise BistableError("type-error", f"{t.name} is not bound to a numeral")
            return v
        if isinstance(t, Eq):
            return 0 if go(t.left) == go(t.right) else 1
        if isinstance(t, Pair):
            return pair_code(go(t.left), go(t.right))
        if isinstance(t, Fst):
            return unpair(go(t.term))[0]
        if isinstance(t, Snd):
            return unpair(go(t.term))[1]
        if isinstance(t, Phi):
            return reg.apply(t.name, go(t.term))
        raise BistableError("type-error", f"{show(t)} is not a data term")

    return go(M)


# ------------------------------------------------------------------ machine


@dataclass(frozen=True)
class Closure:
    term: Term
    env: dict


@dataclass(frozen=True)
class _ProjArg:
    index: int


def _lookup(env: dict, name: str):
    try:
        return env[name]
    except KeyError:
        raise BistableError("open-term", f"unbound variable {name}") from None


def eval_prog(M: Term, fuel: int = 10 ** 5, registry: Optional[PhiRegistry] = None,
              check: bool = True) -> EvalOutcome:
    """Weak-head call-by-name evaluation of a closed program of type Σ."""
    if check:
        t = typecheck({}, M)
        if t != S:
            raise BistableError("ill-formed-program", f"a program has type S, this one has type {t}")
    reg = registry or PhiRegistry.standard()
    term, env, stack = M, {}, []
    for steps in range(fuel + 1):
        if isinstance(term, Top):
            return ConvergedTop(steps)
        if isinstance(term, Bot):
            return DivergedBot(steps)
        if steps == fuel:
            break
        if isinstance(term, Var):
            c = _lookup(env, term.name)
            term, env = c.term, c.env
        elif isinstance(term, App):
            stack.append(Closure(term.arg, env))
            term = term.fun
        elif isinstance(term, Lam):
            if not stack or isinstance(stack[-1], _ProjArg):
                raise BistableError("internal", "abstraction without an argument")
            arg = stack.pop()
            if isinstance(term.ty, NumT):
                v = Num(eval_data(arg.term, _data_env(arg.env, reg), reg))
                arg = Closure(v, {})
            env = {**env, term.var: arg}
            term = term.body
        elif isinstance(term, Proj):
            stack.append(_ProjArg(term.index))
            term = term.term
        elif isinstance(term, Tuple):
            if not stack or not isinstance(stack[-1], _ProjArg):
                raise BistableError("internal", "tuple without a projection")
            term = term.items[stack.pop().index - 1]
        elif isinstance(term, If0n):
            n = eval_data(term.test, _data_env(env, reg), reg)
            term = term.then if n == 0 else term.other
        elif isinstance(term, Y):
            term = App(term.term, term)
        else:
            raise BistableError("internal", f"no machine rule for {show(term)}")
    return FuelExhausted(fuel)


class _data_env:
    """Numeral view of a machine environment (data variables hold Num closures)."""

    def __init__(self, env: dict, reg: PhiRegistry):
        self._env, self._reg = env, reg

    def __contains__(self, name):
        return name in self._env

    def __getitem__(self, name):
        c = self._env[name]
        return eval_data(c.term, _data_env(c.env, self._reg), self._reg)


# -------------------------------------------------------- universal type U


def _upd(k: Term, a: Term, val: Term, z: str = "z", p: str = "p") -> Term:
    """k[λp.p val]_a, η-expanded: λz.λp. IF0 (z = a) (p val) (k z p)."""
    return Lam(z, N, Lam(p, KONT, If0n(Eq(Var(z), a), App(Var(p), val), apps(k, Var(z), Var(p)))))


def universal_retraction() -> tuple[Term, Term]:
    """inj : (U⇒Σ)⇒U and proj : U⇒(U⇒Σ) with proj∘inj = id on finite support.

    inj f answers at index x: 0 asks f which argument it is strict in; a
    code v*w fixes that argument to the numeral v and continues at w.
    """
    F, f, x, y, a, b, k = (Var(v) for v in ("F", "f", "x", "y", "a", "b", "k"))
    fixed = Lam("k", U, App(f, _upd(k, a, Fst(x))))
    again = apps(App(F, fixed), Snd(x), y)
    h = Lam("a", N, Lam("b", KONT, If0n(x, App(y, a), again)))
    inj = Y(Lam("F", Arrow(Arrow(U, S), U), Lam("f", Arrow(U, S), Lam("x", N, Lam("y", KONT, App(f, h))))))
    G, g, u, v, w = (Var(n) for n in ("G", "g", "u", "v", "w"))
    hh = Var("h")
    cont = Lam("v", N, apps(App(G, Lam("w", N, App(g, Pair(v, w)))), hh))
    body = App(App(g, Num(0)), Lam("u", N, App(App(hh, u), cont)))
    proj = Y(Lam("G", Arrow(U, Arrow(U, S)), Lam("g", U, Lam("h", U, body))))
    return inj, proj


def encode_fo(table: Mapping[int, object], registry: PhiRegistry) -> Term:
    """A term of type U for the finite map n ↦ ⊥ | ⊤ | m (⊥ elsewhere).

    The map is registered as φ with codes 0 for ⊥, 1 for ⊤ and m+2 for m.
    """
    codes = {}
    for n, val in table.items():
        if val in ("bot", None):
            codes[int(n)] = 0
        elif val == "top":
            codes[int(n)] = 1
        elif isinstance(val, int) and val >= 0:
            codes[int(n)] = val + 2
        else:
            raise BistableError("bad-argument", f"table value {val!r} is not bot, top or a numeral")
    name = registry.register(lambda n, c=dict(codes): c.get(n, 0), "fhat")
    x, y = Var("x"), Var("y")
    code = Phi(name, x)
    body = If0n(code, Bot(), If0n(Phi("pred", code), Top(), App(y, Phi("pred", Phi("pred", code)))))
    return Lam("x", N, Lam("y", KONT, body))


# -------------------------------------------------------- embedding types


@dataclass(frozen=True)
class ORetract:
    src: Type
    tgt: Type
    inj: Term
    proj: Term
    is_id: bool = False


def _id(T: Type) -> ORetract:
    i = Lam("x", T, Var("x"))
    return ORetract(T, T, i, i, True)


def _then(r1: ORetract, r2: ORetract) -> ORetract:
    if r1.tgt != r2.src:
        raise BistableError("internal", f"cannot chain {r1.tgt} with {r2.src}")
    if r1.is_id:
        return r2
    if r2.is_id:
        return r1
    return ORetract(r1.src, r2.tgt, Lam("a", r1.src, App(r2.inj, App(r1.inj, Var("a")))),
                    Lam("c", r2.tgt, App(r1.proj, App(r2.proj, Var("c")))))


def _chain(*rs: ORetract) -> ORetract:
    out = rs[0]
    for r in rs[1:]:
        out = _then(out, r)
    return out


def _under(A: Type, r: ORetract) -> ORetract:
    """A⇒B ⊴ A⇒B' from B ⊴ B' (A may be N)."""
    if r.is_id:
        return _id(Arrow(A, r.src))
    src, tgt = Arrow(A, r.src), Arrow(A, r.tgt)
    inj = Lam("f", src, Lam("x", A, App(r.inj, App(Var("f"), Var("x")))))
    proj = Lam("g", tgt, Lam("x", A, App(r.proj, App(Var("g"), Var("x")))))
    return ORetract(src, tgt, inj, proj)


def _over(r: ORetract, B: Type) -> ORetract:
    """A⇒B ⊴ A'⇒B from A ⊴ A'."""
    if r.is_id:
        return _id(Arrow(r.src, B))
    src, tgt = Arrow(r.src, B), Arrow(r.tgt, B)
    inj = Lam("f", src, Lam("y", r.tgt, App(Var("f"), App(r.proj, Var("y")))))
    proj = Lam("g", tgt, Lam("x", r.src, App(Var("g"), App(r.inj, Var("x")))))
    return ORetract(src, tgt, inj, proj)


def _swap(A: Type, B: Type, C: Type) -> ORetract:
    """A⇒B⇒C ≅ B⇒A⇒C."""
    src, tgt = Arrow(A, Arrow(B, C)), Arrow(B, Arrow(A, C))
    f, g, x, y = Var("f"), Var("g"), Var("x"), Var("y")
    return ORetract(src, tgt, Lam("f", src, Lam("y", B, Lam("x", A, apps(f, x, y)))),
                    Lam("g", tgt, Lam("x", A, Lam("y", B, apps(g, y, x)))))


def nat_pairing_retraction() -> ORetract:
    """N⇒N⇒Σ ⊴ N⇒Σ through the pairing x*y."""
    src = Arrow(N, KONT)
    f, g, x, y = Var("f"), Var("g"), Var("x"), Var("y")
    inj = Lam("f", src, Lam("x", N, apps(f, Fst(x), Snd(x))))
    proj = Lam("g", KONT, Lam("x", N, Lam("y", N, App(g, Pair(x, y)))))
    return ORetract(src, KONT, inj, proj)


def kont_pairing_retraction() -> ORetract:
    """(N⇒Σ)⇒(N⇒Σ)⇒Σ ⊴ (N⇒Σ)⇒Σ, tagging the two continuations by snd."""
    src = Arrow(KONT, Arrow(KONT, S))
    f, g, x, y, z = Var("f"), Var("g"), Var("x"), Var("y"), Var("z")
    left = Lam("z", N, App(x, Pair(z, Num(0))))
    right = Lam("z", N, App(x, Pair(z, Num(1))))
    inj = Lam("f", src, Lam("x", KONT, apps(f, left, right)))
    pick = Lam("z", N, If0n(Snd(z), App(x, Fst(z)), App(y, Fst(z))))
    proj = Lam("g", CPS_NAT, Lam("x", KONT, Lam("y", KONT, App(g, pick))))
    return ORetract(src, CPS_NAT, inj, proj)


def _function_space() -> ORetract:
    """U⇒U ⊴ U."""
    inj, proj = universal_retraction()
    u_to_sigma = ORetract(Arrow(U, S), U, inj, proj)
    # U⇒U = U⇒N⇒(N⇒Σ)⇒Σ ≅ N⇒(N⇒Σ)⇒U⇒Σ
    s1 = _swap(U, N, CPS_NAT)
    s2 = _under(N, _swap(U, KONT, S))
    # … ⊴ N⇒(N⇒Σ)⇒U = N⇒(N⇒Σ)⇒N⇒(N⇒Σ)⇒Σ
    r1 = _under(N, _under(KONT, u_to_sigma))
    # ≅ N⇒N⇒(N⇒Σ)⇒(N⇒Σ)⇒Σ
    s3 = _under(N, _swap(KONT, N, CPS_NAT))
    # ⊴ N⇒N⇒(N⇒Σ)⇒Σ
    r2 = _under(N, _under(N, kont_pairing_retraction()))
    # ≅ (N⇒Σ)⇒N⇒N⇒Σ  ⊴ (N⇒Σ)⇒N⇒Σ ≅ U
    s4 = _chain(_under(N, _swap(N, KONT, S)), _swap(N, KONT, Arrow(N, S)))
    r3 = _under(KONT, nat_pairing_retraction())
    s5 = _swap(KONT, N, S)
    return _chain(s1, s2, r1, s3, r2, s4, r3, s5)


def _embed(T: Type) -> ORetract:
    if T == U:
        return _id(U)
    if isinstance(T, Sigma):
        inj = Lam("s", S, Lam("x", N, Lam("y", KONT, Var("s"))))
        proj = Lam("u", U, apps(Var("u"), Num(0), Lam("n", N, Bot())))
        return ORetract(S, U, inj, proj)
    if isinstance(T, Prod):
        parts = [_embed(t) for t in T.items]
        x, y, p, u = Var("x"), Var("y"), Var("p"), Var("u")
        body: Term = Bot()
        for i in reversed(range(len(parts))):
            branch = apps(App(parts[i].inj, Proj(i + 1, p)), Snd(x), y)
            body = If0n(Eq(Fst(x), Num(i)), branch, body)
        inj = Lam("p", T, Lam("x", N, Lam("y", KONT, body)))
        proj = Lam("u", U, Tuple([App(r.proj, Lam("x", N, Lam("y", KONT, apps(u, Pair(Num(i), x), y))))
                                  for i, r in enumerate(parts)]))
        return ORetract(T, U, inj, proj)
    if isinstance(T, Arrow):
        cod = _embed(T.cod)
        if isinstance(T.dom, NumT):
            # N⇒P ⊴ N⇒U = N⇒N⇒(N⇒Σ)⇒Σ ≅ N⇒(N⇒Σ)⇒N⇒Σ ⊴ … ≅ U
            return _chain(_under(N, cod), _under(N, _swap(N, KONT, S)), _swap(N, KONT, Arrow(N, S)),
                          _under(KONT, nat_pairing_retraction()), _swap(KONT, N, S))
        dom = _embed(T.dom)
        return _chain(_under(T.dom, cod), _over(dom, U), _function_space())
    raise BistableError("pointedness-violation", f"{T} is not a pointed type")


def embed_type(T: Type) -> tuple[Term, Term]:
    """Closed (inj: T⇒U, proj: U⇒T) for a pointed type T."""
    check_type(T)
    if not pointed(T):
        raise BistableError("pointedness-violation", "N is not pointed")
    r = _embed(T)
    return r.inj, r.proj


# ------------------------------------------------------------- observation


def observe(M: Term, T: Type, probes: Mapping[Type, list], fuel: int = 10 ** 5,
            registry: Optional[PhiRegistry] = None) -> tuple:
    """Outcomes of M applied to every combination of probe arguments.

    ``probes`` gives the argument terms to use at each argument type.
    """
    out = []

    def go(t: Term, T: Type):
        if isinstance(T, Sigma):
            out.append(eval_prog(t, fuel, registry, check=False).kind)
        elif isinstance(T, Prod):
            for i, c in enumerate(T.items, 1):
                go(Proj(i, t), c)
        elif isinstance(T, Arrow):
            for a in probes[T.dom]:
                go(App(t, a), T.cod)
        else:
            raise BistableError("type-error", f"cannot observe at {T}")

    go(M, T)
    return tuple(out)
