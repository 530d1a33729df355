import random

import pytest

from bistable import bifun, biorder, lam
from bistable.errors import BistableError
from bistable.syntax import (App, Arrow, Bot, Lam, Prod, Proj, Sigma, Top, Tuple, Var, parse_term, parse_type,
                             show, subst)

S = Sigma()


def T(src):
    return parse_type(src)


def M(src):
    return parse_term(src)


def test_typecheck_examples():
    assert lam.typecheck({}, M("(lam (x S) x)")) == Arrow(S, S)
    assert lam.typecheck({}, M("top")) == S
    with pytest.raises(BistableError) as exc:
        lam.typecheck({}, M("(pi 3 (tuple top bot))"))
    assert exc.value.code == "type-error"
    with pytest.raises(BistableError):
        lam.typecheck({}, M("(top bot)"))
    with pytest.raises(BistableError):
        lam.typecheck({}, M("y"))


def test_denote_type_sizes():
    assert lam.denote_type(T("(-> S S)")).size == 3
    P = lam.denote_type(T("(* S S)"))
    assert P.size == 4 and len(P.classes) == 1
    assert lam.denote_type(T("(*)")).size == 1


def test_denote_examples():
    assert lam.denote(M("((lam (x S) x) top)")).label == "⊤"
    e = lam.denote(M("(lam (x (* S S)) (pi 1 x))"))
    assert e.biorder.elements[e.index] == "[⊥,⊥,⊤,⊤]"
    E = lam.denote_type(T("(-> S S)"))
    ident = E.index("[⊥,⊤]")
    r = lam.denote(M("((lam (f (-> S S)) (f bot)) g)"), {"g": (T("(-> S S)"), ident)})
    assert r.label == "⊥"


def test_fo_define_examples():
    assert show(lam.fo_define((0, 1, 0, 1), 2, 1)) == "(lam (x (* S S)) (pi 2 x))"
    assert show(lam.fo_define((1, 1, 1, 1), 2, 1)) == "(lam (x (* S S)) top)"
    pair = ((0, 0), (0, 0), (1, 0), (1, 0))
    assert show(lam.fo_define(pair, 2, 2)) == "(lam (x (* S S)) (tuple (pi 1 x) bot))"


def test_retraction_targets():
    assert lam.retraction_terms(T("(-> (-> (* S S) S) S)")).target == T("(-> (* S S S) (* S S S S))")
    rp = lam.retraction_terms(S)
    assert (rp.n, rp.m) == (0, 1)


@pytest.mark.parametrize("src", ["S", "(-> S S)", "(-> (* S S) S)", "(-> (-> S S) S)",
                                 "(-> (-> (* S S) S) S)", "(-> S (-> S S))", "(* S (-> S S))",
                                 "(-> (-> S S) (* S S))", "(*)", "(-> (*) S)"])
def test_retraction_law(src):
    assert lam.retraction_holds(T(src))


@pytest.mark.parametrize("src", ["S", "(-> S S)", "(-> (* S S) S)", "(-> (-> S S) S)",
                                 "(-> (-> (* S S) S) S)", "(-> S (-> S S))"])
def test_define_element_is_exact(src):
    ty = T(src)
    B = lam.denote_type(ty)
    for i in range(B.size):
        term = lam.define_element(biorder.Element(B, i), ty)
        assert lam.typecheck({}, term) == ty
        assert lam.denote(term).index == i


def test_define_bottom_denotes_least():
    ty = T("(-> (-> S S) S)")
    B = lam.denote_type(ty)
    assert lam.denote(lam.define_element(biorder.Element(B, B.bottom()), ty)).index == B.bottom()


def test_theory_equal():
    assert lam.theory_equal(M("((lam (x S) x) top)"), M("top"))
    assert not lam.theory_equal(M("(lam (x S) top)"), M("(lam (x S) x)"))
    with pytest.raises(BistableError):
        lam.theory_equal(M("top"), M("(lam (x S) x)"))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_axiom_identity(n):
    assert lam.axiom_check(n)
    assert lam.probe_identity_check(n)


def test_parser_printer_round_trip():
    for src in ["(lam (f (-> (* S S) S)) (f (tuple top (pi 1 (tuple bot top)))))", "(lam (x (*)) x)"]:
        assert show(M(src)) == src
        assert M(show(M(src))) == M(src)


# ---- βηπ soundness on random terms

TYPES = [S, Arrow(S, S), Prod((S, S)), Arrow(Prod((S, S)), S), Arrow(Arrow(S, S), S)]


def gen(rng, ty, env, depth):
    """A random term of type ty over the variables in env."""
    choices = []
    vars_ = [x for x, t in env.items() if t == ty]
    if vars_:
        choices.append(lambda: Var(rng.choice(vars_)))
    if ty == S:
        choices += [Top, Bot]
    if depth > 0:
        if isinstance(ty, Arrow):
            def lam_():
                x = f"v{len(env)}"
                return Lam(x, ty.dom, gen(rng, ty.cod, {**env, x: ty.dom}, depth - 1))
            choices.append(lam_)
        if isinstance(ty, Prod):
            choices.append(lambda: Tuple(tuple(gen(rng, t, env, depth - 1) for t in ty.items)))
        fun = Arrow(S, ty)
        choices.append(lambda: App(gen(rng, fun, env, depth - 1), gen(rng, S, env, depth - 1)))
        choices.append(lambda: Proj(1, gen(rng, Prod((ty, S)), env, depth - 1)))
    if not choices:
        x = f"v{len(env)}"
        return Lam(x, ty.dom, gen(rng, ty.cod, {**env, x: ty.dom}, 0)) if isinstance(ty, Arrow) else \
            Tuple(tuple(gen(rng, t, env, 0) for t in ty.items))
    return rng.choice(choices)()


def test_beta_eta_pi_soundness():
    rng = random.Random(7)
    for _ in range(150):
        a, b = rng.choice(TYPES), rng.choice(TYPES)
        body = gen(rng, b, {"z": a}, 3)
        arg = gen(rng, a, {}, 2)
        redex = App(Lam("z", a, body), arg)
        assert lam.theory_equal(redex, subst(body, "z", arg))
        f = gen(rng, Arrow(a, b), {}, 3)
        assert lam.theory_equal(Lam("w", a, App(f, Var("w"))), f)
        p, q = gen(rng, a, {}, 2), gen(rng, b, {}, 2)
        assert lam.theory_equal(Proj(2, Tuple((p, q))), q)
