"""Committed SPCF programs used for adequacy and CPS differential testing.

Sources may mention ``callcc`` and ``case1`` … ``case3`` as free names;
:func:`programs` substitutes the corresponding closed macros.
"""

from __future__ import annotations

from . import spcf
from .syntax import Term, parse_term, subst

SOURCES: list[tuple[str, str]] = [
    # β and tuples
    ("top", "top"),
    ("bot", "bot"),
    ("beta-id", "((lam (x S) x) top)"),
    ("beta-const", "((lam (x S) bot) top)"),
    ("pi-1", "(pi 1 (tuple top bot))"),
    ("pi-2", "(pi 2 (tuple top bot))"),
    ("pair-arg", "((lam (p (* S S)) (pi 2 p)) (tuple bot top))"),
    ("twice", "((lam (f (-> S S)) (f (f top))) (lam (x S) x))"),
    ("curried", "((lam (f (-> S (-> S S))) ((f bot) top)) (lam (a S) (lam (b S) b)))"),
    ("curried-2", "(((lam (x S) (lam (y S) y)) bot) top)"),
    ("top-in-context", "((pi 1 (tuple (lam (x S) x) (lam (x S) bot))) top)"),
    # arithmetic below the cutoff
    ("if0-zero", "((if0 0) (tuple top bot))"),
    ("if0-three", "((if0 3) (tuple top bot))"),
    ("pred-one", "((if0 (pred 1)) (tuple top bot))"),
    ("pred-succ", "((if0 (pred (succ (succ 0)))) (tuple bot top))"),
    ("pred-zero", "((if0 (pred 0)) (tuple top top))"),
    ("if0-nat", "((if0 ((if0 2) (tuple 0 5))) (tuple bot top))"),
    ("if0-nat-2", "((if0 ((if0 0) (tuple (succ 0) 0))) (tuple bot top))"),
    ("succ-test", "((if0 (succ (succ 0))) (tuple bot (pi 1 (tuple top bot))))"),
    # catch
    ("catch1-top", "((if0 (catch 1 (lam (x S) top))) (tuple bot bot))"),
    ("catch1-id", "((if0 (catch 1 (lam (x S) x))) (tuple top bot))"),
    ("catch2-second", "((if0 (catch 2 (lam (p (* S S)) (pi 2 p)))) (tuple top bot))"),
    ("catch2-pred", "((if0 (pred (catch 2 (lam (p (* S S)) (pi 2 p))))) (tuple top bot))"),
    ("catch2-lazy", "((if0 (catch 2 (lam (p (* S S)) ((lam (x S) (pi 1 p)) (pi 2 p))))) (tuple top bot))"),
    ("catch3-third", "((if0 (pred (pred (catch 3 (lam (p (* S S S)) (pi 3 p)))))) (tuple top bot))"),
    ("catch3-bot", "((if0 (catch 3 (lam (p (* S S S)) bot))) (tuple top top))"),
    ("case2-catch2", "((case2 (catch 2 (lam (p (* S S)) (pi 2 p)))) (tuple bot top))"),
    ("case3-catch3", "((case3 (catch 3 (lam (p (* S S S)) (pi 1 p)))) (tuple top bot bot))"),
    # bounded recursion
    ("Y-countdown", "((Y (lam (f (-> nat S)) (lam (n nat) ((if0 n) (tuple top (f (pred n))))))) 3)"),
    ("Y-countdown-bot", "((Y (lam (f (-> nat S)) (lam (n nat) ((if0 n) (tuple bot (f (pred n))))))) 2)"),
    ("Y-add",
     "((if0 (pred (pred (pred (pred (((Y (lam (add (-> nat (-> nat nat))) (lam (m nat) (lam (n nat) "
     "((if0 m) (tuple n (succ ((add (pred m)) n)))))))) 2) 2)))))) (tuple top bot))"),
    # the derived control operator
    ("callcc-2", "((if0 (callcc (lam (k (-> nat S)) (k 2)))) (tuple bot top))"),
    ("callcc-0", "((if0 (callcc (lam (k (-> nat S)) (k 0)))) (tuple top bot))"),
    ("callcc-top", "((if0 (callcc (lam (k (-> nat S)) top))) (tuple bot bot))"),
    ("callcc-bot", "((if0 (callcc (lam (k (-> nat S)) bot))) (tuple top top))"),
    ("callcc-1", "((if0 (pred (callcc (lam (k (-> nat S)) (k 1))))) (tuple top bot))"),
    # unbounded recursion
    ("Y-loop", "(Y (lam (x S) x))"),
    ("Y-loop-fun", "((Y (lam (f (-> S S)) (lam (x S) (f x)))) top)"),
]


def macros() -> dict[str, Term]:
    out = {"callcc": spcf.callcc_term()}
    for n in (1, 2, 3):
        out[f"case{n}"] = spcf.case_term(n)
    return out


def expand(t: Term) -> Term:
    for name, m in macros().items():
        t = subst(t, name, m)
    return t


def programs() -> list[tuple[str, Term]]:
    return [(name, expand(parse_term(src, "spcf"))) for name, src in SOURCES]
