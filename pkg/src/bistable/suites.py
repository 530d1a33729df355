"""Named verification suites.

Each suite returns a :class:`SuiteResult`; the command line ``verify``
subcommand and the acceptance tests both run them from :data:`SUITES`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from . import bifun, biorder, corpus, games, lam, omega, spcf
from .errors import BistableError, BudgetExceeded
from .syntax import App, Arrow, Bot, Eq, If0n, Lam, Num, Phi, Prod, Sigma, Term, Top, Var, parse_type, sigma_power

DEFAULT_SEED = 20061

S = Sigma()


@dataclass
class SuiteResult:
    name: str
    passed: bool
    summary: str
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.summary}"

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "summary": self.summary, "failures": self.failures}


def _result(name: str, failures: list[str], summary: str) -> SuiteResult:
    return SuiteResult(name, not failures, summary, failures[:20])


# ------------------------------------------------------------------ biorders


def generate_biorders(seed: int = DEFAULT_SEED, count: int = 120, max_size: int = 64) -> list[tuple[str, biorder.FiniteBiorder]]:
    """Biorders from the construction grammar, each with at most ``max_size`` elements."""
    rng = random.Random(seed)
    pool: list[tuple[str, biorder.FiniteBiorder]] = [
        ("Σ", biorder.sigma()), ("1", biorder.unit()), ("∅", biorder.empty()),
    ] + [(f"flat{k}", biorder.flat(k)) for k in range(1, 9)]
    out = list(pool)
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        op = rng.choice(["prod", "coprod", "bilift", "exp", "exp"])
        (na, A), (nb, B) = rng.choice(out), rng.choice(out)
        try:
            if op == "prod":
                name, C = f"({na}×{nb})", biorder.product(A, B)
            elif op == "coprod":
                name, C = f"({na}+{nb})", biorder.coproduct(A, B)
            elif op == "bilift":
                name, C = f"L{na}", biorder.bilift(A)
            else:
                if A.size > 6 or B.size > 8:
                    continue
                name, C = f"({na}⇒{nb})", bifun.exponential(A, B, 2 ** 14).biorder
        except BudgetExceeded:
            continue
        if C.size <= max_size and name not in {n for n, _ in out}:
            out.append((name, C))
    return out


def biorder_axioms(seed: int = DEFAULT_SEED, **_) -> SuiteResult:
    fails = []
    gen = generate_biorders(seed)
    for name, B in gen:
        diags = biorder.validate(B)
        if diags:
            fails.append(f"{name}: {diags[0]}")
            continue
        back = biorder.from_bistable_order(B.elements, B.leq, biorder.to_bistable_order(B))
        if back.leq != B.leq or back.classes != B.classes:
            fails.append(f"{name}: presentations do not round-trip")
    return _result("biorder-axioms", fails, f"{len(gen)} generated biorders (carrier ≤ 64) validated and round-tripped")


def hom_counts(**_) -> SuiteResult:
    fails = []
    counts = []
    for n, want in ((1, 3), (2, 4), (3, 5)):
        A = biorder.power(biorder.sigma(), n)
        fast = {f.table for f in bifun.hom_set(A, biorder.sigma())}
        slow = {f.table for f in bifun.hom_set_bruteforce(A, biorder.sigma())}
        counts.append(len(fast))
        if fast != slow or len(fast) != want:
            fails.append(f"Σ^{n}⇒Σ: search {len(fast)}, brute force {len(slow)}, expected {want}")
    return _result("hom-counts", fails, f"|hom(Σⁿ,Σ)| = {counts} for n = 1, 2, 3")


def seq_lemma(n: int | None = None, **_) -> SuiteResult:
    """Bistrict first-order functions are projections with one strictness index."""
    fails = []
    ns = [n] if n else [2, 3, 4]
    seen = 0
    for k in ns:
        factors = [biorder.sigma()] * k
        for f in bifun.hom_set(biorder.product_of(factors), biorder.sigma()):
            if not bifun.is_bistrict(f):
                continue
            seen += 1
            idx = bifun.strictness_indices(f, factors)
            if len(idx) != 1:
                fails.append(f"n={k} {f.label()}: strictness indices {sorted(idx)}")
            elif f.table != bifun.proj(factors, next(iter(idx))).table:
                fails.append(f"n={k} {f.label()}: not the projection it is strict in")
    return _result("seq-lemma", fails, f"{seen} bistrict functions for n ∈ {ns}")


def regression_biorders() -> list[tuple[str, biorder.FiniteBiorder]]:
    sig = biorder.sigma()
    return [
        ("Σ", sig), ("1", biorder.unit()), ("flat2", biorder.flat(2)), ("Σ²", biorder.power(sig, 2)),
        ("L(flat2)", biorder.bilift(biorder.flat(2))), ("Σ⇒Σ", bifun.exponential(sig, sig).biorder),
        ("Σ+Σ", biorder.coproduct(sig, sig)),
    ]


def ccc_laws(seed: int = DEFAULT_SEED, trials: int = 200, **_) -> SuiteResult:
    rng = random.Random(seed)
    objs = regression_biorders()
    homs: dict = {}

    def pick(A, B):
        key = (id(A), id(B))
        if key not in homs:
            homs[key] = bifun.hom_set(A, B)
        fs = homs[key]
        return rng.choice(fs) if fs else None

    fails = []
    done = 0
    while done < trials:
        (na, A), (nb, B), (nc, C), (nd, D) = (rng.choice(objs) for _ in range(4))
        f, g, h = pick(A, B), pick(B, C), pick(C, D)
        if f is None or g is None or h is None:
            continue
        done += 1
        tag = f"{na}→{nb}→{nc}→{nd}"
        if bifun.compose(bifun.compose(f, g), h) != bifun.compose(f, bifun.compose(g, h)):
            fails.append(f"{tag}: associativity")
        if bifun.compose(bifun.identity(A), f) != f or bifun.compose(f, bifun.identity(B)) != f:
            fails.append(f"{tag}: identity")
        k = pick(biorder.product(A, B), C)
        if k is not None and bifun.uncurry(bifun.curry(k, A, B), B, C) != k:
            fails.append(f"{na}×{nb}→{nc}: uncurry∘curry")
        E = bifun.exponential(B, C).biorder
        m = pick(A, E)
        if m is not None and bifun.curry(bifun.uncurry(m, B, C), A, B) != m:
            fails.append(f"{na}→({nb}⇒{nc}): curry∘uncurry")
    return _result("ccc-laws", fails, f"{trials} seeded triples: associativity, identities, curry/uncurry")


# ------------------------------------------------------------------ λ-calculus

UNIVERSALITY_TYPES = ["S", "(-> S S)", "(-> (* S S) S)", "(-> (-> S S) S)", "(-> (-> (* S S) S) S)", "(-> S (-> S S))"]


def universality(**_) -> SuiteResult:
    fails = []
    total = 0
    for src in UNIVERSALITY_TYPES:
        T = parse_type(src)
        B = lam.denote_type(T)
        for i in range(B.size):
            total += 1
            try:
                M = lam.define_element(biorder.Element(B, i), T)
                got = lam.denote(M).index
            except BistableError as exc:
                fails.append(f"{src} #{i}: {exc}")
                continue
            if got != i:
                fails.append(f"{src}: {B.elements[i]} defined as {B.elements[got]}")
    return _result("universality", fails, f"{total} elements over {len(UNIVERSALITY_TYPES)} types defined exactly")


def retraction(**_) -> SuiteResult:
    fails = [f"{src}: inj;proj is not the identity" for src in UNIVERSALITY_TYPES
             if not lam.retraction_holds(parse_type(src))]
    fails += [f"axiom identity fails at n={n}" for n in (1, 2, 3) if not lam.axiom_check(n)]
    return _result("retraction", fails, f"{len(UNIVERSALITY_TYPES)} retractions and axiom identity for n ≤ 3")


# ------------------------------------------------------------------ SPCF


def adequacy(k: int = 8, fuel: int = 10 ** 5, **_) -> SuiteResult:
    tally = {v: 0 for v in spcf.Verdict}
    fails = []
    progs = corpus.programs()
    for name, M in progs:
        r = spcf.adequacy_check(M, k, fuel)
        tally[r.verdict] += 1
        if r.verdict is spcf.Verdict.DISAGREE:
            fails.append(f"{name}: {r.line()}")
    agree = tally[spcf.Verdict.AGREE]
    if len(progs) < 30:
        fails.append(f"corpus has only {len(progs)} programs")
    if agree < 25:
        fails.append(f"only {agree} Agree verdicts")
    counts = ", ".join(f"{v.value}={c}" for v, c in tally.items())
    return _result("adequacy", fails, f"{len(progs)} programs at k={k}: {counts}")


def catch_case(k: int = 8, **_) -> SuiteResult:
    fails = []
    for n in (1, 2, 3):
        for cutoff in sorted({n, max(k, n)}):
            sem = spcf.CutoffSemantics(cutoff)
            T = Arrow(sigma_power(n), S)
            f = Var("f")
            round_trip = Lam("f", T, App(spcf.case_term(n), App(spcf.catch_term(n), f)))
            if sem.closed_value(round_trip) is None or not lam.theory_equal(round_trip, Lam("f", T, f), sem):
                fails.append(f"case∘catch ≠ id at n={n}, k={cutoff}")
    return _result("catch-case", fails, "case∘catch = id on Σⁿ⇒Σ for n ≤ 3")


def cps_diff(fuel: int = 10 ** 5, **_) -> SuiteResult:
    fails = []
    progs = corpus.programs()
    for name, M in progs:
        direct = spcf.evaluate(M, fuel).kind
        via = omega.eval_prog(spcf.cps(M), 10 * fuel).kind
        if direct != via:
            fails.append(f"{name}: direct {direct}, CPS {via}")
    if len(progs) < 20:
        fails.append(f"only {len(progs)} programs")
    return _result("cps-diff", fails, f"{len(progs)} programs classified alike directly and through CPS")


# ------------------------------------------------------------------ ω


def _ask(i: int, k: Term) -> Term:
    return App(App(Var("h"), Num(i)), k)


def omega_functionals() -> list[Term]:
    """Finite-support functionals U ⇒ Σ that inspect their argument at a few points."""
    U, N, h = omega.U, omega.N, "h"
    v, w = Var("v"), Var("w")
    return [
        Lam(h, U, Top()),
        Lam(h, U, Bot()),
        Lam(h, U, _ask(2, Lam("v", N, Top()))),
        Lam(h, U, _ask(0, Lam("v", N, If0n(v, Top(), Bot())))),
        Lam(h, U, _ask(1, Lam("v", N, _ask(3, Lam("w", N, If0n(Eq(v, w), Top(), Bot())))))),
        Lam(h, U, _ask(4, Lam("v", N, If0n(v, _ask(0, Lam("w", N, Top())),
                                           _ask(2, Lam("w", N, If0n(Phi("pred", w), Top(), Bot()))))))),
    ]


def omega_roundtrip(seed: int = DEFAULT_SEED, probes: int = 12, fuel: int = 10 ** 5, **_) -> SuiteResult:
    rng = random.Random(seed)
    reg = omega.PhiRegistry.standard()
    inj, proj = omega.universal_retraction()
    args = [omega.encode_fo({n: rng.choice(["bot", "top", 0, 1, 2, 3]) for n in range(5)}, reg)
            for _ in range(probes)]
    fails = []
    fs = omega_functionals()
    for i, f in enumerate(fs):
        for j, a in enumerate(args):
            want = omega.eval_prog(App(f, a), fuel, reg, check=False).kind
            got = omega.eval_prog(App(App(proj, App(inj, f)), a), fuel, reg, check=False).kind
            if want != got:
                fails.append(f"functional {i} on probe {j}: {want} vs {got}")
    return _result("omega-roundtrip", fails, f"{len(fs)} functionals × {len(args)} probes through proj∘inj")


# ------------------------------------------------------------------ games


def games_structure(**_) -> SuiteResult:
    fails = []
    R = games.regression_games()
    for name, g in R.items():
        diags = games.validate_game(g)
        space = games.strat_biorder(g)
        diags += biorder.validate(space.biorder)
        if not space.biorder.is_pointed():
            diags.append("not pointed")
        diags += [f"{s.label()}: {d}" for s in space.strategies for d in games.validate_strategy(s)]
        fails += [f"{name}: {d}" for d in diags]
    o, oo = R["o"], R["o⊸o"]
    n = len(games.enumerate_strategies(o))
    if n != 2:
        fails.append(f"|strategies(o)| = {n}")
    if not biorder.isomorphic(games.strat_biorder(o).biorder, biorder.sigma()):
        fails.append("strat(o) is not Σ")
    if not biorder.isomorphic(games.strat_biorder(oo).biorder, lam.denote_type(Arrow(S, S))):
        fails.append("strat(o⊸o) is not Σ⇒Σ")
    return _result("games-structure", fails, f"{len(R)} regression games; strat(o) ≅ Σ, strat(o⊸o) ≅ Σ⇒Σ")


def realization(**_) -> SuiteResult:
    fails = []
    R = games.regression_games()
    spaces = {n: games.strat_biorder(g) for n, g in R.items()}
    count = 0
    for (na, A), (nb, B) in itertools.product(R.items(), R.items()):
        for s in games.enumerate_strategies(games.arrow(A, B)):
            count += 1
            f = games.realized(s, spaces[na], spaces[nb]).bifun
            if not bifun.is_monotone(f) or not bifun.is_bistable(f):
                fails.append(f"{na}⇒{nb} {s.label()}")
    return _result("realization", fails, f"{count} strategies over {len(R) ** 2} game pairs realize bistable maps")


EMBEDDING_GAMES = ("o", "o⊸o")


def _embedding_pairs(names=EMBEDDING_GAMES):
    R = games.regression_games()
    spaces = {n: games.strat_biorder(R[n]) for n in names}
    for a, b in itertools.product(names, names):
        yield a, b, games.hom(spaces[a], spaces[b])


def full_embedding(**_) -> SuiteResult:
    fails = []
    count = 0
    for a, b, fs in _embedding_pairs():
        for f in fs:
            count += 1
            s = games.sequentialize(f)
            diags = games.validate_strategy(s)
            if diags:
                fails.append(f"{a}⇒{b} {f.table}: {diags[0]}")
            elif games.realized(s, f.src, f.tgt).table != f.table:
                fails.append(f"{a}⇒{b} {f.table}: realized(sequentialize f) ≠ f")
    return _result("full-embedding", fails, f"{count} bistable maps between {EMBEDDING_GAMES} round-tripped")


def stability(**_) -> SuiteResult:
    fails = []
    count = 0
    for a, b, fs in _embedding_pairs():
        for f in fs:
            count += 1
            if not games.is_inclusion_stable(f):
                fails.append(f"{a}⇒{b} {f.table}")
    return _result("stability", fails, f"{count} maps are ⊆-stable")


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "biorder-axioms": biorder_axioms,
    "hom-counts": hom_counts,
    "seq-lemma": seq_lemma,
    "ccc-laws": ccc_laws,
    "universality": universality,
    "retraction": retraction,
    "adequacy": adequacy,
    "catch-case": catch_case,
    "cps-diff": cps_diff,
    "omega-roundtrip": omega_roundtrip,
    "games-structure": games_structure,
    "realization": realization,
    "full-embedding": full_embedding,
    "stability": stability,
}


def run_suite(name: str, **opts) -> SuiteResult:
    try:
        fn = SUITES[name]
    except KeyError:
        raise BistableError("unknown-suite", f"{name!r}; known: {', '.join(SUITES)}") from None
    return fn(**{k: v for k, v in opts.items() if v is not None})
