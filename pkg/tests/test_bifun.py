import itertools

import pytest

from bistable import bifun, biorder
from bistable.bifun import BiFunction
from bistable.errors import BistableError, BudgetExceeded

S = biorder.sigma()
S2 = biorder.power(S, 2)


def test_identity_is_monotone_and_bistable():
    f = bifun.identity(S)
    assert bifun.is_monotone(f) and bifun.is_bistable(f)


def test_and_is_monotone_but_not_bistable():
    f = BiFunction(S2, S, tuple(int(a and b) for a, b in itertools.product((0, 1), repeat=2)))
    assert bifun.is_monotone(f)
    assert not bifun.is_bistable(f)


def test_swap_is_not_monotone():
    assert not bifun.is_monotone(BiFunction(S, S, (1, 0)))


def test_coherence_examples():
    bot, ident, top = BiFunction(S, S, (0, 0)), BiFunction(S, S, (0, 1)), BiFunction(S, S, (1, 1))
    assert bifun.coherent(ident, ident)
    assert bifun.coherent(bot, top)
    assert not bifun.coherent(bot, ident)


@pytest.mark.parametrize("n,count", [(1, 3), (2, 4), (3, 5), (4, 6)])
def test_hom_counts_match_brute_force(n, count):
    A = biorder.power(S, n)
    fast = {f.table for f in bifun.hom_set(A, S)}
    assert len(fast) == count
    if n <= 3:
        assert fast == {f.table for f in bifun.hom_set_bruteforce(A, S)}


def test_hom_from_unit():
    B = biorder.bilift(biorder.flat(3))
    assert len(bifun.hom_set(biorder.unit(), B)) == B.size


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        bifun.hom_set_bruteforce(biorder.power(S, 3), S, budget=10)


def test_exponential_classes():
    E = bifun.exponential(S, S).biorder
    assert E.size == 3
    assert sorted(len(c) for c in E.classes) == [1, 2]
    E2 = bifun.exponential(S2, S).biorder
    assert E2.size == 4 and sorted(len(c) for c in E2.classes) == [1, 1, 2]
    assert biorder.isomorphic(bifun.exponential(biorder.unit(), S).biorder, S)
    assert biorder.validate(E2) == []


def test_composition_laws():
    fs = bifun.hom_set(S, S)
    for f, g in itertools.product(fs, fs):
        assert bifun.compose(bifun.identity(S), f) == f
        assert bifun.compose(f, g) in fs
    f, g = fs[1], fs[2]
    assert bifun.compose(bifun.pair(f, g), bifun.proj([S, S], 1)) == f
    assert bifun.compose(bifun.pair(f, g), bifun.proj([S, S], 2)) == g
    with pytest.raises(BistableError):
        bifun.compose(bifun.identity(S2), f)


def test_curry_uncurry():
    for f in bifun.hom_set(S2, S):
        assert bifun.uncurry(bifun.curry(f, S, S), S, S) == f
    pi2 = bifun.proj([S, S], 2)
    E = bifun.exponential(S, S)
    c = bifun.curry(pi2, S, S)
    assert c.table == (E.index_of((0, 1)),) * 2


def test_evaluation_is_bistable():
    ev = bifun.evaluation(S, S)
    assert bifun.is_morphism(ev)
    swap = bifun.pair(bifun.proj([S, bifun.exponential(S, S).biorder], 2), bifun.proj([S, bifun.exponential(S, S).biorder], 1))
    g = bifun.curry(bifun.compose(swap, ev), S, bifun.exponential(S, S).biorder)
    assert bifun.is_morphism(g)


def test_bistrict_and_strictness():
    ident, top = BiFunction(S, S, (0, 1)), BiFunction(S, S, (1, 1))
    assert bifun.is_bistrict(ident) and not bifun.is_bistrict(top)
    assert bifun.strictness_indices(bifun.proj([S, S], 1), [S, S]) == {1}
    assert bifun.strictness_indices(bifun.constant(S2, S, 1), [S, S]) == set()
    for f in bifun.hom_set(biorder.power(S, 3), S):
        if bifun.is_bistrict(f):
            assert len(bifun.strictness_indices(f, [S] * 3)) == 1


def test_bad_table_rejected():
    with pytest.raises(BistableError):
        BiFunction(S, S, (0, 2))


def test_function_json_round_trip():
    f = bifun.hom_set(S2, S)[1]
    assert BiFunction.from_json(f.to_json()) == f
