import itertools

import pytest

from bistable import bifun, biorder, games as G
from bistable.errors import BistableError

R = G.regression_games()
o, oo, o_to_o = R["o"], R["o⊸o"], R["o⇒o"]
b, a = G.Tag("r", "o"), G.Tag("l", "o")  # the two moves of o⊸o
SPACES = {n: G.strat_biorder(g) for n, g in R.items()}
PAIRS = list(itertools.product(R, R))


def strat(game, *plays):
    return G.Strategy(game, frozenset([()] + [tuple(p) for p in plays]))


def test_o_game_and_strategies():
    assert G.validate_game(o) == []
    assert G.validate_strategy(strat(o, ["o"])) == []
    assert G.validate_strategy(G.Strategy(o, frozenset([("o",)])))  # missing ε
    # two odd answers below one even play
    bad = G.Strategy(oo, frozenset([(), (b,), (b, a)]))
    assert any("even-branching" in d for d in G.validate_strategy(bad))


def test_invalid_games_are_reported():
    g = G.base([("x", "P")], [["x"]])
    assert G.validate_game(g)
    g = G.base([("x", "O"), ("y", "P")], [["x", "y"]])
    assert any("prefix" in d for d in G.validate_game(g))


def test_strategy_counts():
    assert len(G.enumerate_strategies(o)) == 2
    assert [s.plays for s in G.enumerate_strategies(o)] == [frozenset([()]), frozenset([(), ("o",)])]
    assert len(G.enumerate_strategies(G.empty_game())) == 1
    assert len(G.enumerate_strategies(oo)) == 3


def test_enumeration_budget():
    big = G.with_game(R["qa&qa"], R["qa&qa"])
    with pytest.raises(BistableError):
        G.enumerate_strategies(G.arrow(big, big), budget=100)


def test_play_order():
    assert G.play_leq((), ("o",))
    assert G.play_leq((b, a), (b,))  # an error dominates its extensions
    assert not G.play_leq((b,), (b, a))
    assert G.strat_leq(strat(o), strat(o, ["o"]))


@pytest.mark.parametrize("name", list(R))
def test_strat_order_is_antisymmetric(name):
    ss = SPACES[name].strategies
    for s, t in itertools.product(ss, ss):
        if G.strat_leq(s, t) and G.strat_leq(t, s):
            assert s == t


@pytest.mark.parametrize("name", list(R))
def test_strat_biorder_valid_and_pointed(name):
    sp = SPACES[name]
    B = sp.biorder
    assert biorder.validate(B) == []
    assert sp[B.bottom()] == G.bottom(sp.game)
    assert sp[B.top()] == G.top(sp.game)
    assert sp[B.top()].plays == frozenset(s for s in sp.game.plays if len(s) <= 1)


@pytest.mark.parametrize("name", list(R))
def test_class_meets_and_joins_are_intersections_and_unions(name):
    sp = SPACES[name]
    B = sp.biorder
    for c in B.classes:
        for i, j in itertools.combinations(c, 2):
            assert sp[B.meet(i, j)].plays == sp[i].plays & sp[j].plays
            assert sp[B.join(i, j)].plays == sp[i].plays | sp[j].plays


def test_small_spaces_match_sigma_biorders():
    assert biorder.isomorphic(SPACES["o"].biorder, biorder.sigma())
    assert biorder.isomorphic(SPACES["o⊸o"].biorder, bifun.exponential(biorder.sigma(), biorder.sigma()).biorder)


def test_affine_application():
    copycat = strat(oo, [b, a])
    assert G.affine_apply(copycat, strat(o, ["o"])) == strat(o, ["o"])
    assert G.affine_apply(copycat, strat(o)) == strat(o)
    odd = strat(oo, [b])
    for tau in SPACES["o"].strategies:
        assert G.affine_apply(odd, tau) == G.top(o)


def test_bang_and_promotion():
    bo = G.bang(o)
    assert [m for m, _ in bo.moves] == [G.Bundle(("o",))]
    assert bo.plays == {(), (G.Bundle(("o",)),)}
    assert G.promote(strat(o, ["o"])).plays == {(), (G.Bundle(("o",)),)}
    assert G.promote(strat(o)).plays == {()}


def test_ebar_takes_even_positions_and_the_last_move():
    s = (G.Bundle(("q",)), G.Bundle(("q", "a")), G.Bundle(("x",)))
    assert G.ebar(s) == {(), ("q", "a"), ("x",)}
    assert G.ebar(s[:2]) == {(), ("q", "a")}


@pytest.mark.parametrize("name", list(R))
def test_promotion_commutes_with_even_part(name):
    sp = SPACES[name]
    bA = G.bang(sp.game)
    for s in sp.strategies:
        assert G.promote(s.even(), bA) == G.promote(s, bA).even()
        assert G.validate_strategy(G.promote(s, bA)) == []


def test_player_answers_the_last_question_in_bang():
    # in !(qa & o) an answer to q cannot follow the question o
    g = G.bang(R["qa&o"])
    q, qa, x = (G.Bundle(tuple(G.Tag(t, m) for t, m in p)) for p in
                ([("1", "q")], [("1", "q"), ("1", "a")], [("2", "o")]))
    assert (q, qa) in g.plays and (q, qa, x) in g.plays
    assert (x, qa) not in g.plays


def test_application_examples():
    strict = strat(o_to_o, [b, G.Tag("l", G.Bundle(("o",)))])
    assert G.apply(strict, G.top(o)) == G.top(o)
    assert G.apply(strict, G.bottom(o)) == G.bottom(o)


@pytest.mark.parametrize("pair", PAIRS, ids="⇒".join)
def test_apply_agrees_with_direct_formula_and_is_bistable(pair):
    A, B = (R[n] for n in pair)
    src, tgt = SPACES[pair[0]], SPACES[pair[1]]
    for s in G.enumerate_strategies(G.arrow(A, B)):
        for tau in src.strategies:
            r = G.apply(s, tau)
            assert r == G.apply_direct(s, tau)
            assert G.validate_strategy(r) == []
        f = G.realized(s, src, tgt).bifun
        assert bifun.is_monotone(f) and bifun.is_bistable(f)


def test_realized_examples():
    so = SPACES["o"]
    assert G.realized(G.bottom(o_to_o), so, so).table == (0, 0)
    copycat = strat(o_to_o, [b, G.Tag("l", G.Bundle(("o",)))])
    assert G.realized(copycat, so, so).table == (0, 1)
    tables = {G.realized(s, so, so).table for s in G.enumerate_strategies(o_to_o)}
    assert tables == {f.table for f in bifun.hom_set(so.biorder, so.biorder)}


def _fun(src, tgt, table):
    return G.StratFunction(SPACES[src], SPACES[tgt], tuple(table))


def test_trace_examples():
    ident, bot, top = _fun("o", "o", (0, 1)), _fun("o", "o", (0, 0)), _fun("o", "o", (1, 1))
    assert G.trace(ident) == {(0, ()), (1, ("o",))}
    assert G.trace(bot) == {(0, ())}
    assert (0, ("o",)) in G.trace(top)
    not_bistable = G.StratFunction(SPACES["o"], SPACES["o"], (1, 0))
    with pytest.raises(BistableError) as exc:
        G.trace(not_bistable)
    assert exc.value.code == "not-bistable"


def test_sequentialize_examples():
    ident = _fun("o", "o", (0, 1))
    copycat = strat(o_to_o, [b, G.Tag("l", G.Bundle(("o",)))])
    assert G.sequentialize(ident) == copycat
    assert G.sequentialize(_fun("o", "o", (0, 0))).plays == {()}


@pytest.mark.parametrize("pair", PAIRS, ids="⇒".join)
def test_full_embedding_and_stability_on_regression_pairs(pair):
    src, tgt = SPACES[pair[0]], SPACES[pair[1]]
    for f in G.hom(src, tgt):
        s = G.sequentialize(f)
        assert G.validate_strategy(s) == []
        assert G.realized(s, src, tgt).table == f.table
        assert G.is_inclusion_stable(f)
        for i, t in G.trace(f):
            p = G.lightning(src[i], t, f)
            assert p in s.plays
            assert G.ebar(G.restrict(p, "l")) == src[i].plays
            assert G.restrict(p, "r") == t


def test_extensional_bound_reading_breaks_the_round_trip():
    src, tgt = SPACES["o⊸o"], SPACES["o"]
    broken = [f for f in G.hom(src, tgt)
              if G.realized(G.sequentialize(f, bound="extensional"), src, tgt).table != f.table]
    assert broken


@pytest.mark.parametrize("pair", PAIRS, ids="⇒".join)
def test_realized_is_injective(pair):
    src, tgt = SPACES[pair[0]], SPACES[pair[1]]
    strategies = G.enumerate_strategies(G.arrow(src.game, tgt.game))
    tables = {G.realized(s, src, tgt).table for s in strategies}
    assert len(tables) == len(strategies)


def test_sequentiality_index():
    ident = _fun("o", "o", (0, 1))
    so = SPACES["o"]
    assert G.seq_index(ident, so[1], ("o",), so[0]) == ("o",)
    with pytest.raises(BistableError) as exc:
        G.seq_index(ident, so[0], ("o",), so[0])
    assert exc.value.code == "hypotheses-unmet"


def test_lightning_examples():
    ident = _fun("o", "o", (0, 1))
    so = SPACES["o"]
    assert G.lightning(so[1], ("o",), ident) == (b, G.Tag("l", G.Bundle(("o",))))
    assert G.lightning(so[0], (), ident) == ()
    with pytest.raises(BistableError):
        G.lightning(so[0], ("o",), ident)


def test_json_round_trips():
    for g in R.values():
        data = g.to_json()
        again = G.Game.from_json(data)
        assert again.to_json() == data
        assert G.validate_game(again) == []
        assert len(G.enumerate_strategies(again)) == len(SPACES[next(n for n in R if R[n] is g)])
    s = strat(oo, [b, a])
    back = G.Strategy.from_json(s.to_json())
    assert back.to_json() == s.to_json()
    with pytest.raises(BistableError):
        G.Game.from_json({"moves": 3})
