import pytest

from bistable import omega
from bistable.errors import BistableError
from bistable.omega import KONT, N, S, U
from bistable.outcome import ConvergedTop, DivergedBot, FuelExhausted
from bistable.suites import omega_functionals
from bistable.syntax import App, Arrow, Bot, Num, Prod, Top, parse_term


def P(src):
    return parse_term(src, "omega")


@pytest.fixture
def reg():
    return omega.PhiRegistry.standard()


def test_typecheck_examples():
    with pytest.raises(BistableError) as exc:
        omega.typecheck({}, P("(lam (x N) x)"))
    assert exc.value.code == "pointedness-violation"
    assert omega.check_type(U) == U
    assert omega.typecheck({}, P("(if0n 0 top bot)")) == S


def test_eval_data(reg):
    assert omega.eval_data(P("(fst (pair 3 5))")) == 3
    assert omega.eval_data(P("(snd (pair 3 5))")) == 5
    assert omega.eval_data(P("(pair 0 0)")) == 1
    assert omega.eval_data(P("(phi succ 4)"), registry=reg) == 5
    assert omega.eval_data(P("(eq 2 2)")) == 0 and omega.eval_data(P("(eq 2 3)")) == 1
    with pytest.raises(BistableError) as exc:
        omega.eval_data(P("(phi nope 1)"), registry=reg)
    assert exc.value.code == "unknown-phi"
    with pytest.raises(BistableError) as exc:
        omega.eval_data(P("x"))
    assert exc.value.code == "open-term"


@pytest.mark.parametrize("n,m", [(0, 0), (1, 0), (0, 1), (3, 5), (7, 2)])
def test_pairing_inverts(n, m):
    assert omega.unpair(omega.pair_code(n, m)) == (n, m)
    assert omega.pair_code(n, m) > 0


def test_eval_prog_examples():
    assert isinstance(omega.eval_prog(P("(if0n 0 top bot)")), ConvergedTop)
    assert isinstance(omega.eval_prog(P("(if0n 1 top bot)")), DivergedBot)
    assert isinstance(omega.eval_prog(P("(Y (lam (x S) x))"), 200), FuelExhausted)


def test_universal_retraction_types():
    inj, proj = omega.universal_retraction()
    assert omega.typecheck({}, inj) == Arrow(Arrow(U, S), U)
    assert omega.typecheck({}, proj) == Arrow(U, Arrow(U, S))


def test_encode_fo(reg):
    k3 = P("(lam (n N) (if0n (eq n 3) top bot))")
    bot = omega.encode_fo({}, reg)
    for i in range(4):
        assert omega.eval_prog(App(App(bot, Num(i)), k3), registry=reg).kind == "bot"
    t = omega.encode_fo({0: "top", 1: 3}, reg)
    assert omega.eval_prog(App(App(t, Num(0)), P("(lam (n N) bot)")), registry=reg).kind == "top"
    assert omega.eval_prog(App(App(t, Num(1)), k3), registry=reg).kind == "top"
    assert omega.eval_prog(App(App(t, Num(1)), P("(lam (n N) (if0n (eq n 2) top bot))")), registry=reg).kind == "bot"
    with pytest.raises(BistableError):
        omega.encode_fo({0: "maybe"}, reg)


def test_universal_round_trip_on_probes(reg):
    inj, proj = omega.universal_retraction()
    tables = [{0: "top"}, {1: 2, 3: 0}, {}, {0: 1, 1: 1, 2: "top"}, {4: 0, 0: "bot", 2: 3},
              {0: 0, 1: 0, 2: 0, 3: 0, 4: 0}, {3: "top", 1: 1}, {2: 2}, {0: 3, 4: "top"}, {1: 0}]
    probes = [omega.encode_fo(t, reg) for t in tables]
    for f in omega_functionals():
        for a in probes:
            want = omega.eval_prog(App(f, a), registry=reg, check=False).kind
            got = omega.eval_prog(App(App(proj, App(inj, f)), a), registry=reg, check=False).kind
            assert want == got


def _probes(reg):
    return {S: [Top(), Bot()], N: [Num(i) for i in range(6)],
            KONT: [P("(lam (n N) (if0n (eq n 3) top bot))"), P("(lam (n N) top)"), P("(lam (n N) bot)"),
                   P("(lam (n N) (if0n n bot top))")],
            U: [omega.encode_fo({0: "top", 1: 2, 2: "bot", 3: 0}, reg), omega.encode_fo({1: "top"}, reg),
                omega.encode_fo({}, reg)]}


SAMPLES = {
    S: ["top", "bot"],
    Arrow(N, S): ["(lam (x N) (if0n x top bot))", "(lam (x N) (if0n (eq x 4) bot top))", "(lam (x N) bot)"],
    Arrow(S, S): ["(lam (s S) s)", "(lam (s S) top)", "(lam (s S) bot)"],
    Arrow(KONT, S): ["(lam (k (-> N S)) (k 3))", "(lam (k (-> N S)) (k 0))", "(lam (k (-> N S)) top)"],
    Prod((S, S)): ["(tuple top bot)", "(tuple bot top)"],
    Arrow(S, Arrow(S, S)): ["(lam (a S) (lam (b S) a))", "(lam (a S) (lam (b S) b))"],
}


@pytest.mark.parametrize("T", list(SAMPLES) + [U], ids=str)
def test_embed_type_round_trip(T, reg):
    probes = _probes(reg)
    inj, proj = omega.embed_type(T)
    assert omega.typecheck({}, inj) == Arrow(T, U)
    assert omega.typecheck({}, proj) == Arrow(U, T)
    terms = probes[U] if T == U else [P(s) for s in SAMPLES[T]]
    for t in terms:
        a = omega.observe(t, T, probes, registry=reg)
        b = omega.observe(App(proj, App(inj, t)), T, probes, registry=reg)
        assert a == b


def test_registry_names_are_fresh(reg):
    a = reg.register(lambda n: n, "g")
    b = reg.register(lambda n: n, "g")
    assert a != b and a in reg and b in reg
