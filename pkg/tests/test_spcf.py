import pytest

from bistable import corpus, lam, omega, spcf
from bistable.errors import BistableError
from bistable.outcome import ConvergedTop, DivergedBot, FuelExhausted
from bistable.syntax import App, Arrow, Lam, Nat, Sigma, Var, parse_term, show, sigma_power

S, NAT = Sigma(), Nat()
CATCH2 = "((if0 (catch 2 (lam (p (* S S)) (pi 2 p)))) (tuple top bot))"


def P(src):
    return corpus.expand(parse_term(src, "spcf"))


def test_typecheck_examples():
    assert spcf.typecheck({}, P("(catch 2 (lam (p (* S S)) (pi 2 p)))")) == NAT
    assert spcf.typecheck({}, P("(Y (lam (x S) x))")) == S
    with pytest.raises(BistableError) as exc:
        spcf.typecheck({}, P("((if0 0) (tuple (lam (x S) x) (lam (x S) x)))"))
    assert exc.value.code == "type-error"
    with pytest.raises(BistableError):
        spcf.typecheck({}, P("(if0 0)"))


def test_decompose_examples():
    assert isinstance(spcf.decompose(P("top")), spcf.Terminal)
    r = spcf.decompose(P("((lam (x S) x) top)"))
    assert r.rule == "beta" and str(r.context) == "[]"
    r = spcf.decompose(P(CATCH2))
    assert r.rule == "catch"
    assert str(r.context) == "((if0 []) (tuple top bot))"
    assert show(r.term) == "(catch 2 (lam (p (* S S)) (pi 2 p)))"


def test_catch2_trace():
    run = spcf.run(P(CATCH2), 100, trace=True)
    rules = [line.split(" ;")[0] for line in run.trace]
    assert rules == ["catch", "beta", "proj", "if0", "proj"]
    assert run.trace[0].endswith("((lam (p (* S S)) (pi 2 p)) (tuple ((if0 0) (tuple top bot)) ((if0 1) (tuple top bot))))")
    assert isinstance(run.outcome, DivergedBot)


def test_step_rule_instances():
    s = spcf.step(P("((if0 (pred (succ 3))) (tuple top bot))"))
    assert show(s.term) == "((if0 3) (tuple top bot))"
    s = spcf.step(P("(Y (lam (x S) x))"))
    assert s.rule == "Y"
    assert show(s.term) == "((lam (x S) x) (Y (lam (x S) x)))"


def test_evaluate_examples():
    assert isinstance(spcf.evaluate(P("top"), 0), ConvergedTop)
    assert isinstance(spcf.evaluate(P("(Y (lam (x S) x))"), 100), FuelExhausted)
    assert isinstance(spcf.evaluate(P(CATCH2)), DivergedBot)
    with pytest.raises(BistableError) as exc:
        spcf.evaluate(P("(succ 0)"))
    assert exc.value.code == "ill-formed-program"


def test_denote_cutoff_examples():
    assert spcf.denote_cutoff(P("(catch 2 (lam (p (* S S)) (pi 1 p)))"), 8).label == "0"
    assert spcf.denote_cutoff(P("(Y (lam (x S) x))"), 8).label == "⊥"
    assert spcf.denote_cutoff(P("(succ 0)"), 8).label == "1"
    assert spcf.denote_cutoff(P("(succ 7)"), 8).label == "⊥"


@pytest.mark.parametrize("n,k", [(1, 1), (2, 3), (3, 3), (3, 5)])
def test_case_term_semantics(n, k):
    sem = spcf.CutoffSemantics(k)
    table = sem.closed_value(spcf.case_term(n))
    dom = sem.domain(NAT)
    fo = sem.domain(Arrow(sigma_power(n), S))
    for i in range(k):
        got = fo.reify(sem.apply(Arrow(NAT, Arrow(sigma_power(n), S)), table, dom.reify(i)))
        if i < n:
            expect = fo.reify(sem.closed_value(parse_term(f"(lam (x {show_sigma(n)}) {proj(i + 1, n)})", "spcf")))
        else:
            expect = fo.bottom()
        assert got == expect


def show_sigma(n):
    return "S" if n == 1 else "(*" + " S" * n + ")"


def proj(i, n):
    return "x" if n == 1 else f"(pi {i} x)"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_case_after_catch_is_identity(n):
    sem = spcf.CutoffSemantics(max(n, 4))
    ty = Arrow(sigma_power(n), S)
    f = parse_term("f", "spcf")
    rt = Lam("f", ty, App(spcf.case_term(n), App(spcf.catch_term(n), f)))
    assert lam.theory_equal(rt, Lam("f", ty, f), sem)


def test_snb_retraction_on_nat():
    inj, proj_ = spcf.snb_retraction(NAT, 2)
    sem = spcf.CutoffSemantics(4)
    ty = Arrow(sigma_power(2), S)
    rt = Lam("e", ty, App(proj_, App(inj, Var("e"))))
    assert lam.theory_equal(rt, Lam("e", ty, Var("e")), sem)


def test_callcc():
    C = spcf.callcc_term()
    G = Arrow(Arrow(NAT, S), S)
    assert spcf.typecheck({}, C) == Arrow(G, NAT)
    prog = P("((if0 (callcc (lam (k (-> nat S)) (k 2)))) (tuple bot top))")
    r = spcf.adequacy_check(prog)
    assert r.verdict is spcf.Verdict.AGREE and r.outcome.kind == "top"
    forced = P("((if0 (callcc (lam (k (-> nat S)) top))) (tuple bot bot))")
    assert isinstance(spcf.evaluate(forced), ConvergedTop)


def test_adequacy_examples():
    assert spcf.adequacy_check(P("top")).verdict is spcf.Verdict.AGREE
    assert spcf.adequacy_check(P(CATCH2)).verdict is spcf.Verdict.AGREE
    assert spcf.adequacy_check(P("(Y (lam (x S) x))"), fuel=50).verdict is spcf.Verdict.INCONCLUSIVE


def test_large_numerals_make_adequacy_inconclusive():
    r = spcf.adequacy_check(P("((if0 (pred 9)) (tuple top bot))"), k=8)
    assert r.verdict is spcf.Verdict.INCONCLUSIVE


def test_cps_examples():
    assert show(spcf.cps(P("0"))) == "(lam (k1 (-> N S)) (k1 0))"
    c = spcf.cps(P("(catch 2 (lam (p (* S S)) (pi 2 p)))"))
    assert show(c) == "(lam (k1 (-> N S)) ((lam (p (* S S)) (pi 2 p)) (tuple (k1 0) (k1 1))))"
    assert omega.typecheck({}, spcf.cps(P(CATCH2))) == S
    assert spcf.cps_type(NAT) == Arrow(Arrow(omega.N, S), S)


def test_cps_agrees_on_catch2_example():
    assert omega.eval_prog(spcf.cps(P(CATCH2))).kind == spcf.evaluate(P(CATCH2)).kind


def test_corpus_is_large_enough():
    progs = corpus.programs()
    assert len(progs) >= 30
    assert len({n for n, _ in progs}) == len(progs)
    for _, M in progs:
        assert spcf.typecheck({}, M) == S
