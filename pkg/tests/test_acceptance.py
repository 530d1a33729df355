"""The fourteen acceptance criteria, one test each.

Each test runs the matching verification suite (the same code behind
``bistable verify``) and prints a single PASS/FAIL line.  Run this file
directly for the report without pytest.
"""

import sys

import pytest

from bistable.suites import run_suite

CRITERIA = [
    (1, "biorder-axioms", "biorder axioms and presentation round trip"),
    (2, "hom-counts", "hom-set counts against brute force"),
    (3, "seq-lemma", "bistrict maps are projections"),
    (4, "ccc-laws", "cartesian closed laws"),
    (5, "universality", "every element is definable"),
    (6, "retraction", "retraction laws"),
    (7, "adequacy", "SPCF operational and denotational agreement"),
    (8, "catch-case", "case after catch is the identity"),
    (9, "cps-diff", "CPS differential test"),
    (10, "omega-roundtrip", "universal type round trip"),
    (11, "games-structure", "strategy biorders of the regression games"),
    (12, "realization", "realized strategies are bistable"),
    (13, "full-embedding", "sequentialize then realize is the identity"),
    (14, "stability", "inclusion stability"),
]


def report(k, title, result) -> str:
    status = "PASS" if result.passed else "FAIL"
    return f"{status} criterion {k}: {title} ({result.summary})"


@pytest.mark.parametrize("k,suite,title", CRITERIA, ids=[s for _, s, _ in CRITERIA])
def test_criterion(k, suite, title, capsys):
    result = run_suite(suite)
    with capsys.disabled():
        print("\n" + report(k, title, result))
    assert result.passed, "\n".join(result.failures[:20])


if __name__ == "__main__":
    ok = True
    for k, suite, title in CRITERIA:
        r = run_suite(suite)
        ok &= r.passed
        print(report(k, title, r))
    sys.exit(0 if ok else 1)
