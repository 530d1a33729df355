import itertools

import pytest

from bistable import bifun, biorder
from bistable.biorder import FiniteBiorder, validate
from bistable.errors import BistableError


def test_sigma_is_valid_two_point_lattice():
    S = biorder.sigma()
    assert validate(S) == []
    assert S.size == 2 and len(S.classes) == 1
    assert S == biorder.bilift(biorder.empty())


def test_incomparable_pair_in_one_class_is_invalid():
    B = FiniteBiorder(("x", "y"), frozenset(), ((0, 1),))
    assert validate(B)


def test_bilift_unit():
    B = biorder.bilift(biorder.unit())
    assert validate(B) == []
    assert B.size == 3
    bot, top = B.bottom(), B.top()
    assert sorted(map(sorted, B.classes)) == sorted([sorted([bot, top]), [1]])


def test_bilift_flat3_classes():
    B = biorder.bilift(biorder.flat(3))
    assert B.size == 5
    assert sorted(len(c) for c in B.classes) == [1, 1, 1, 2]


@pytest.mark.parametrize("k", range(17))
def test_bilift_flat_pointed_and_valid(k):
    B = biorder.bilift(biorder.flat(k))
    assert B.is_pointed() and validate(B) == []


def test_flat_edge_cases():
    assert biorder.flat(0) == biorder.empty()
    assert biorder.isomorphic(biorder.flat(1), biorder.unit())
    with pytest.raises(BistableError):
        biorder.flat(-1)


def test_products_and_coproducts():
    S = biorder.sigma()
    P = biorder.product(S, S)
    assert P.size == 4 and len(P.classes) == 1
    assert biorder.isomorphic(biorder.product(S, biorder.unit()), S)
    C = biorder.coproduct(S, S)
    assert C.size == 4 and len(C.classes) == 2
    assert validate(P) == [] and validate(C) == []


def test_meet_and_join():
    S = biorder.sigma()
    assert biorder.meet(S, 0, 1).label == "⊥"
    assert biorder.join(S, 0, 1).label == "⊤"
    P = biorder.product(S, S)
    a, b = P.index("(⊥,⊤)"), P.index("(⊤,⊥)")
    assert biorder.meet(P, a, b).label == "(⊥,⊥)"
    for x in range(P.size):
        assert biorder.meet(P, x, x).index == x


def test_meet_of_incoherent_pair_is_an_error():
    C = biorder.coproduct(biorder.sigma(), biorder.sigma())
    with pytest.raises(BistableError):
        biorder.meet(C, 0, 2)


def test_bistable_order_presentations():
    S = biorder.sigma()
    assert biorder.to_bistable_order(S) == S.leq
    E = bifun.exponential(S, S).biorder
    ident = E.index("[⊥,⊤]")
    leqB = biorder.to_bistable_order(E)
    assert {p for p in leqB if ident in p} == {(ident, ident)}


@pytest.mark.parametrize("B", [
    biorder.sigma(), biorder.unit(), biorder.flat(3), biorder.bilift(biorder.flat(4)),
    biorder.power(biorder.sigma(), 3), biorder.coproduct(biorder.sigma(), biorder.unit()),
    bifun.exponential(biorder.power(biorder.sigma(), 2), biorder.sigma()).biorder,
])
def test_round_trip_presentations(B):
    back = biorder.from_bistable_order(B.elements, B.leq, biorder.to_bistable_order(B))
    assert back.leq == B.leq and back.classes == B.classes


def test_from_bistable_order_rejects_bad_input():
    with pytest.raises(BistableError):
        biorder.from_bistable_order(["a", "b"], [(0, 1)], [(1, 0)])


def test_json_round_trip():
    B = biorder.bilift(biorder.product(biorder.sigma(), biorder.flat(2)))
    again = FiniteBiorder.from_json(B.to_json())
    assert again == B
    with pytest.raises(BistableError):
        FiniteBiorder.from_json({"elements": []})


def test_validate_reports_non_distributive_class():
    # the pentagon N5 as a single class
    els = ("0", "a", "b", "c", "1")
    leq = {(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)}
    B = FiniteBiorder(els, frozenset(leq), (tuple(range(5)),))
    assert any("distributiv" in d for d in validate(B))


def test_isomorphism_is_a_bijection():
    S = biorder.sigma()
    A = biorder.product(S, biorder.flat(2))
    B = biorder.product(biorder.flat(2), S)
    m = biorder.isomorphism(A, B)
    assert m is not None and sorted(m) == list(range(A.size))
    for a, b in itertools.product(range(A.size), repeat=2):
        assert A.le(a, b) == B.le(m[a], m[b])
