"""Sequential data structures as games, and strategies on them.

A game lists moves with an O/P polarity and an explicit prefix-closed set of
plays.  Strategies are sets of plays; odd-length members record an error
answer, a missing answer records divergence.  Strategies on a game form a
bistable biorder (``strat_biorder``), strategies on ``A ⇒ B`` act on
strategies of ``A`` by application, and every bistable function between
such biorders is realized by the strategy ``sequentialize(f)``.

Moves of base games are strings.  Composite games use :class:`Tag` (a move
of one component of ``⊸`` or ``&``) and :class:`Bundle` (a move of ``!A``,
which is a non-empty play of ``A``).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, NamedTuple, Optional, Sequence

from . import bifun
from .biorder import FiniteBiorder
from .errors import BistableError, BudgetExceeded

Move = Hashable
Play = tuple
O, P = "O", "P"

DEFAULT_BUDGET = 2 ** 16


class Tag(NamedTuple):
    side: str
    move: Any


class Bundle(NamedTuple):
    play: tuple


def move_label(m: Move) -> str:
    if isinstance(m, Tag):
        return f"{m.side}.{move_label(m.move)}"
    if isinstance(m, Bundle):
        return "⟨" + " ".join(move_label(x) for x in m.play) + "⟩"
    return str(m)


def play_label(s: Play) -> str:
    return " ".join(move_label(m) for m in s) if s else "ε"


def flip(p: str) -> str:
    return P if p == O else O


# ---------------------------------------------------------------- plays


def is_prefix(s: Play, t: Play) -> bool:
    return len(s) <= len(t) and t[:len(s)] == s


def even_prefix(s: Play, t: Play) -> bool:
    """s ⊑ᴱ t: s is an even-length prefix of t, or s = t."""
    return s == t or (len(s) % 2 == 0 and is_prefix(s, t))


def common_prefix(s: Play, t: Play) -> Play:
    n = 0
    for a, b in zip(s, t):
        if a != b:
            break
        n += 1
    return s[:n]


def play_leq(s: Play, t: Play) -> bool:
    """Extensional order on plays: an error dominates all its extensions."""
    return (len(s) % 2 == 0 and is_prefix(s, t)) or (len(t) % 2 == 1 and is_prefix(t, s))


def ebar(s: Play) -> frozenset:
    """|s|^E for a play of ``!A``: the A-plays at even positions, plus the last one, plus ε."""
    out = {()}
    for i, m in enumerate(s):
        if i % 2 == 1 or i == len(s) - 1:
            out.add(m.play)
    return frozenset(out)


# ---------------------------------------------------------------- games


@dataclass(frozen=True, eq=False)
class Game:
    moves: tuple[tuple[Move, str], ...]
    plays: frozenset
    # how the game was built: ("base",), ("lin", A, B), ("bang", A), ("with", A, B)
    shape: tuple = field(default=("base",), repr=False)
    name: str = ""

    @cached_property
    def polarity(self) -> dict:
        return dict(self.moves)

    @cached_property
    def ordered_plays(self) -> tuple[Play, ...]:
        rank = {m: i for i, (m, _) in enumerate(self.moves)}
        return tuple(sorted(self.plays, key=lambda s: (len(s), [rank[m] for m in s])))

    @cached_property
    def children(self) -> dict:
        out: dict = {s: [] for s in self.ordered_plays}
        for s in self.ordered_plays:
            if s:
                out[s[:-1]].append(s)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Game) and self.moves == other.moves and self.plays == other.plays

    def __hash__(self) -> int:
        return hash((self.moves, self.plays))

    def __str__(self) -> str:
        return self.name or f"game[{len(self.moves)} moves, {len(self.plays)} plays]"

    def to_json(self) -> dict:
        return {"moves": [[move_label(m), p] for m, p in self.moves],
                "plays": [[move_label(m) for m in s] for s in self.ordered_plays if s]}

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> "Game":
        try:
            moves = tuple((str(m), str(p)) for m, p in data["moves"])
            plays = frozenset([()] + [tuple(str(m) for m in s) for s in data["plays"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise BistableError("bad-json", f"game JSON malformed: {exc}") from None
        return cls(moves, plays, name=name)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False)


def alternating(s: Play, pol: dict) -> bool:
    """Strict O/P alternation starting with O, no repeated move."""
    if len(set(s)) != len(s):
        return False
    return all(m in pol and pol[m] == (O if i % 2 == 0 else P) for i, m in enumerate(s))


def legal_play(A: Game, s: Play) -> bool:
    return tuple(s) in A.plays


def validate_game(A: Game) -> list[str]:
    out = []
    names = [m for m, _ in A.moves]
    if len(set(names)) != len(names):
        out.append("duplicate move ids")
    for m, p in A.moves:
        if p not in (O, P):
            out.append(f"move {move_label(m)} has polarity {p!r}")
    if () not in A.plays:
        out.append("ε is not a play")
    for s in A.plays:
        if not alternating(s, A.polarity):
            out.append(f"play {play_label(s)} is not alternating and repetition-free")
        if s and s[:-1] not in A.plays:
            out.append(f"play {play_label(s)} has a missing prefix")
    return out


def _grow(moves: Sequence[tuple[Move, str]], ok: Callable[[Play], bool]) -> frozenset:
    """All alternating repetition-free sequences every prefix of which passes ``ok``."""
    pol = dict(moves)
    found = {()}
    stack = [()]
    while stack:
        s = stack.pop()
        want = O if len(s) % 2 == 0 else P
        used = set(s)
        for m, _ in moves:
            if m in used or pol[m] != want:
                continue
            t = s + (m,)
            if ok(t):
                found.add(t)
                stack.append(t)
    return frozenset(found)


def base(moves: Sequence[tuple[str, str]], plays: Iterable[Sequence[str]], name: str = "") -> Game:
    return Game(tuple(moves), frozenset([()] + [tuple(s) for s in plays]), name=name)


def empty_game() -> Game:
    return Game((), frozenset([()]), name="1")


def o_game() -> Game:
    """The game with a single Opponent move."""
    return base([("o", O)], [["o"]], name="o")


def question_answer() -> Game:
    """One question followed by one answer."""
    return base([("q", O), ("a", P)], [["q"], ["q", "a"]], name="qa")


def restrict(s: Play, side: str) -> Play:
    return tuple(m.move for m in s if m.side == side)


def affine_arrow(A: Game, B: Game) -> Game:
    moves = tuple((Tag("l", m), flip(p)) for m, p in A.moves) + tuple((Tag("r", m), p) for m, p in B.moves)

    def ok(t: Play) -> bool:
        return restrict(t, "l") in A.plays and restrict(t, "r") in B.plays

    return Game(moves, _grow(moves, ok), ("lin", A, B), f"({A}⊸{B})")


def with_game(A: Game, B: Game) -> Game:
    """Product of games: a play is a play of either component."""
    moves = tuple((Tag("1", m), p) for m, p in A.moves) + tuple((Tag("2", m), p) for m, p in B.moves)
    plays = frozenset(tuple(Tag("1", m) for m in s) for s in A.plays) | \
        frozenset(tuple(Tag("2", m) for m in s) for s in B.plays)
    return Game(moves, plays, ("with", A, B), f"({A}&{B})")


def bang(A: Game) -> Game:
    moves = tuple((Bundle(s), A.polarity[s[-1]]) for s in A.ordered_plays if s)

    def ok(t: Play) -> bool:
        # a Player move answers the Opponent move just before it
        if len(t) % 2 == 0 and t[-1].play[:-1] != t[-2].play:
            return False
        return not strategy_problems(A, ebar(t))

    return Game(moves, _grow(moves, ok), ("bang", A), f"!{A}")


def arrow(A: Game, B: Game) -> Game:
    G = affine_arrow(bang(A), B)
    return Game(G.moves, G.plays, G.shape, f"({A}⇒{B})")


# ---------------------------------------------------------------- strategies


@dataclass(frozen=True)
class Strategy:
    game: Game = field(compare=False, repr=False)
    plays: frozenset

    def __post_init__(self):
        object.__setattr__(self, "plays", frozenset(tuple(s) for s in self.plays))

    def even(self) -> "Strategy":
        return Strategy(self.game, frozenset(s for s in self.plays if len(s) % 2 == 0))

    def sorted_plays(self) -> list[Play]:
        rank = {s: i for i, s in enumerate(self.game.ordered_plays)}
        return sorted(self.plays, key=lambda s: rank.get(s, len(rank)))

    def label(self) -> str:
        return "{" + ", ".join(play_label(s) for s in self.sorted_plays()) + "}"

    def __contains__(self, s) -> bool:
        return tuple(s) in self.plays

    def to_json(self) -> dict:
        return {"game": self.game.to_json(),
                "plays": [[move_label(m) for m in s] for s in self.sorted_plays() if s]}

    @classmethod
    def from_json(cls, data: dict) -> "Strategy":
        try:
            G = Game.from_json(data["game"])
            plays = [()] + [tuple(str(m) for m in s) for s in data["plays"]]
        except (KeyError, TypeError) as exc:
            raise BistableError("bad-json", f"strategy JSON malformed: {exc}") from None
        return cls(G, frozenset(plays))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False)


def strategy_problems(A: Game, plays: frozenset) -> list[str]:
    out = []
    if () not in plays:
        out.append("missing ε")
    for s in plays:
        if s not in A.plays:
            out.append(f"{play_label(s)} is not a play")
            continue
        for k in range(0, len(s), 2):
            if s[:k] not in plays:
                out.append(f"{play_label(s)} lacks even prefix {play_label(s[:k])}")
                break
    for s, t in itertools.combinations(plays, 2):
        c = common_prefix(s, t)
        if not (even_prefix(c, s) and even_prefix(c, t)):
            out.append(f"even-branching fails for {play_label(s)} and {play_label(t)}")
    return out


def validate_strategy(sigma: Strategy) -> list[str]:
    return strategy_problems(sigma.game, sigma.plays)


def enumerate_strategies(A: Game, budget: int = DEFAULT_BUDGET) -> list[Strategy]:
    """Every strategy on A, ⊥ first, in a canonical order."""
    kids = A.children

    def below(s: Play) -> list[frozenset]:
        # strategies restricted to strict extensions of the even play s
        per_move = []
        for sa in kids[s]:
            opts = [frozenset(), frozenset([sa])]
            for sab in kids[sa]:
                opts.extend(rest | {sab} for rest in below(sab))
            per_move.append(opts)
        size = 1
        for opts in per_move:
            size *= len(opts)
        if size > budget:
            raise BudgetExceeded(size, budget, f"strategies on {A}")
        out = []
        for combo in itertools.product(*per_move):
            out.append(frozenset().union(*combo))
        return out

    rank = {s: i for i, s in enumerate(A.ordered_plays)}
    found = [frozenset([()]) | x for x in below(())]
    found.sort(key=lambda x: (len(x), sorted(rank[s] for s in x)))
    return [Strategy(A, x) for x in found]


def strat_leq(sigma: Strategy, tau: Strategy) -> bool:
    return all(any(play_leq(s, t) for t in tau.plays) for s in sigma.plays)


def bottom(A: Game) -> Strategy:
    return Strategy(A, frozenset([()]))


def top(A: Game) -> Strategy:
    return Strategy(A, frozenset(s for s in A.plays if len(s) <= 1))


@dataclass
class StratSpace:
    """The strategies on a game together with their biorder."""

    game: Game
    strategies: list[Strategy]
    biorder: FiniteBiorder

    @cached_property
    def _pos(self) -> dict:
        return {s.plays: i for i, s in enumerate(self.strategies)}

    def index(self, sigma: Strategy | frozenset) -> int:
        key = sigma.plays if isinstance(sigma, Strategy) else frozenset(sigma)
        try:
            return self._pos[key]
        except KeyError:
            raise BistableError("not-a-strategy", f"{sorted(map(play_label, key))} is not a strategy on {self.game}") from None

    def __getitem__(self, i: int) -> Strategy:
        return self.strategies[i]

    def __len__(self) -> int:
        return len(self.strategies)


def strat_biorder(A: Game, budget: int = DEFAULT_BUDGET) -> StratSpace:
    strats = enumerate_strategies(A, budget)
    n = len(strats)
    leq = [(i, j) for i in range(n) for j in range(n) if strat_leq(strats[i], strats[j])]
    groups: dict = {}
    for i, s in enumerate(strats):
        groups.setdefault(s.even().plays, []).append(i)
    B = FiniteBiorder(tuple(s.label() for s in strats), frozenset(leq), tuple(tuple(c) for c in groups.values()))
    return StratSpace(A, strats, B)


# ---------------------------------------------------------------- application


def _parts(G: Game, kind: str) -> tuple:
    if G.shape[0] != kind:
        raise BistableError("wrong-game", f"{G} is not built by {kind}")
    return G.shape[1:]


def affine_apply(sigma: Strategy, tau: Strategy) -> Strategy:
    """τ;σ for σ on A ⊸ B and τ on A."""
    _, B = _parts(sigma.game, "lin")
    return Strategy(B, frozenset(restrict(t, "r") for t in sigma.plays if restrict(t, "l") in tau.plays))


def promote(sigma: Strategy, bang_game: Optional[Game] = None) -> Strategy:
    G = bang_game or bang(sigma.game)
    return Strategy(G, frozenset(s for s in G.plays if ebar(s) <= sigma.plays))


def apply(sigma: Strategy, tau: Strategy) -> Strategy:
    """σ·τ = τ†;σ for σ on A ⇒ B and τ on A."""
    bA, _ = _parts(sigma.game, "lin")
    return affine_apply(sigma, promote(tau, bA))


def apply_direct(sigma: Strategy, tau: Strategy) -> Strategy:
    _, B = _parts(sigma.game, "lin")
    return Strategy(B, frozenset(restrict(s, "r") for s in sigma.plays if ebar(restrict(s, "l")) <= tau.plays))


@dataclass(frozen=True)
class StratFunction:
    """A map between strategy spaces, as a table over their canonical orders."""

    src: StratSpace = field(compare=False, repr=False)
    tgt: StratSpace = field(compare=False, repr=False)
    table: tuple[int, ...]

    @property
    def bifun(self) -> bifun.BiFunction:
        return bifun.BiFunction(self.src.biorder, self.tgt.biorder, self.table)

    def __call__(self, sigma: Strategy) -> Strategy:
        return self.tgt[self.table[self.src.index(sigma)]]


def realized(sigma: Strategy, src: StratSpace, tgt: StratSpace) -> StratFunction:
    return StratFunction(src, tgt, tuple(tgt.index(apply(sigma, tau)) for tau in src.strategies))


def hom(src: StratSpace, tgt: StratSpace) -> list[StratFunction]:
    return [StratFunction(src, tgt, f.table) for f in bifun.hom_set(src.biorder, tgt.biorder)]


# ---------------------------------------------------------------- traces


def inclusion_bounded(space: StratSpace) -> Callable[[int, int], bool]:
    """σ ↑ τ: some strategy contains both."""
    sets = [s.plays for s in space.strategies]
    ok = set()
    for rho in sets:
        subs = [i for i, s in enumerate(sets) if s <= rho]
        ok.update(itertools.product(subs, subs))
    return lambda i, j: (i, j) in ok


def trace(f: StratFunction, bound: str = "inclusion") -> frozenset:
    """Minimal (strategy, output play) witnesses of f, as (index, play) pairs.

    ``bound`` picks the reading of σ ↑ τ: ``"inclusion"`` (a common strategy
    contains both) or ``"extensional"`` (a common ≤E upper bound, which in a
    pointed space is every pair).
    """
    if not bifun.is_morphism(f.bifun):
        raise BistableError("not-bistable", f"table {f.table} is not monotone and bistable")
    space = f.src
    n = len(space)
    if bound == "inclusion":
        up = inclusion_bounded(space)
    elif bound == "extensional":
        def up(i, j):
            return True
    else:
        raise BistableError("bad-option", f"unknown bound reading {bound!r}")
    outs = [f.tgt[f.table[i]].plays for i in range(n)]
    sets = [s.plays for s in space.strategies]
    out = set()
    for i in range(n):
        for t in outs[i]:
            if all(sets[i] <= sets[j] for j in range(n) if t in outs[j] and up(i, j)):
                out.add((i, t))
    return frozenset(out)


def sequentialize(f: StratFunction, bound: str = "inclusion") -> Strategy:
    """σ_f: the plays of A ⇒ B whose every even prefix projects into the trace."""
    G = arrow(f.src.game, f.tgt.game)
    tr = trace(f, bound)
    pos = f.src._pos

    def in_trace(t: Play) -> bool:
        i = pos.get(ebar(restrict(t, "l")))
        return i is not None and (i, restrict(t, "r")) in tr

    keep = frozenset(s for s in G.plays
                     if all(in_trace(s[:k]) for k in range(0, len(s) + 1) if even_prefix(s[:k], s)))
    return Strategy(G, keep)


# ---------------------------------------------------------------- sequentiality index and ↯


def _unmet(why: str) -> BistableError:
    return BistableError("hypotheses-unmet", why)


def _evens(x: frozenset) -> frozenset:
    return frozenset(s for s in x if len(s) % 2 == 0)


def seq_index(f: StratFunction, tau: Strategy, t: Play, sigma: Strategy) -> Play:
    """The play of τ − σ at which f, having produced t's even prefix on σ, next looks.

    For a trace pair (τ, t) with t = t'a or t'ab and σ ⊆ E(τ) a strategy
    below τ with t' ∈ f(σ), returns the unique q ∈ τ − σ whose strict even
    prefix lies in σ and whose first move c makes t'a ∈ f(σ ∪ {pc}).
    """
    t = tuple(t)
    tr = trace(f)
    i = f.src.index(tau)
    if (i, t) not in tr:
        raise _unmet(f"({tau.label()}, {play_label(t)}) is not in the trace")
    if not t:
        raise _unmet("the output play is empty")
    t0 = t[:len(t) - 2] if len(t) % 2 == 0 else t[:-1]
    ta = t0 + t[len(t0):len(t0) + 1]
    if not sigma.plays <= _evens(tau.plays) or sigma.plays == tau.plays:
        raise _unmet(f"{sigma.label()} is not a proper even part of {tau.label()}")
    if t0 not in f(sigma).plays:
        raise _unmet(f"{play_label(t0)} is not produced on {sigma.label()}")
    found = []
    for q in tau.plays - sigma.plays:
        p = q[:len(q) - 2] if len(q) % 2 == 0 else q[:-1]
        if p not in sigma.plays:
            continue
        trial = sigma.plays | {p + q[len(p):len(p) + 1]}
        if strategy_problems(f.src.game, trial) or trial not in f.src._pos:
            continue
        if ta in f(Strategy(f.src.game, trial)).plays:
            found.append(q)
    if len(found) != 1:
        raise _unmet(f"{len(found)} candidate indices")
    return found[0]


def lightning(tau: Strategy, t: Play, f: StratFunction) -> Play:
    """A play of sequentialize(f) whose argument part is τ and whose result part is t."""
    tr = trace(f)
    pos = f.src._pos

    def in_tr(x: frozenset, u: Play) -> bool:
        i = pos.get(x)
        return i is not None and (i, u) in tr

    def swaps(x: frozenset, u: Play):
        # maximal even plays pcd of x whose replacement by pc keeps (·, u) in the trace
        for q in x:
            if len(q) >= 2 and len(q) % 2 == 0 and not any(len(r) > len(q) and is_prefix(q, r) for r in x):
                rho = (x - {q}) | {q[:-1]}
                if in_tr(rho, u):
                    yield q, rho

    def go(x: frozenset, u: Play) -> Play:
        if not in_tr(x, u):
            raise _unmet(f"({sorted(map(play_label, x))}, {play_label(u)}) is not in the trace")
        if not u:
            return ()
        ev = _evens(x)
        odd = sorted(x - ev, key=len)
        if len(u) % 2 == 0:
            u0, a, b = u[:-2], u[-2], u[-1]
            if odd:
                raise _unmet("an even output with an erroneous argument")
            if in_tr(x, u0):
                return go(x, u0) + (Tag("r", a), Tag("r", b))
            for q, rho in swaps(x, u0 + (a,)):
                return go(rho, u0 + (a,)) + (Tag("l", Bundle(q)), Tag("r", b))
            raise _unmet(f"no step towards {play_label(u)}")
        u0, a = u[:-1], u[-1]
        if not odd:
            if in_tr(x, u0):
                return go(x, u0) + (Tag("r", a),)
            for q, rho in swaps(x, u):
                return go(rho, u) + (Tag("l", Bundle(q)),)
            raise _unmet(f"no step towards {play_label(u)}")
        if len(odd) != 1:
            raise _unmet("more than one erroneous argument play")
        q = odd[0]
        if in_tr(ev, u0):
            return go(ev, u0) + (Tag("r", a), Tag("l", Bundle(q)))
        for r, rho in swaps(ev, u):
            return go(rho, u) + (Tag("l", Bundle(r)), Tag("l", Bundle(q)))
        raise _unmet(f"no step towards {play_label(u)}")

    return go(frozenset(tau.plays), tuple(t))


# ---------------------------------------------------------------- stability


def is_inclusion_stable(f: StratFunction) -> bool:
    """⊆-monotone and f(σ∩σ') = f(σ)∩f(σ') whenever σ, σ' sit inside one strategy."""
    space = f.src
    sets = [s.plays for s in space.strategies]
    outs = [f.tgt[j].plays for j in f.table]
    up = inclusion_bounded(space)
    n = len(sets)
    for i in range(n):
        for j in range(n):
            if sets[i] <= sets[j] and not outs[i] <= outs[j]:
                return False
            if up(i, j):
                k = space._pos.get(sets[i] & sets[j])
                if k is None or outs[k] != outs[i] & outs[j]:
                    return False
    return True


# ---------------------------------------------------------------- regression set


def regression_games() -> dict[str, Game]:
    o, qa = o_game(), question_answer()
    return {
        "1": empty_game(),
        "o": o,
        "o⊸o": affine_arrow(o, o),
        "o⇒o": arrow(o, o),
        "qa": qa,
        "o&o": with_game(o, o),
        "qa&o": with_game(qa, o),
        "qa&qa": with_game(qa, qa),
    }
