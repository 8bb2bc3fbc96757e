"""Acceptance battery, one test per criterion. PIVOTAL_LONG=1 adds E6/E7/E8.

Run directly (``python tests/test_acceptance.py``) for the PASS/FAIL lines alone."""
import os
import sys

import pytest

from pivotal.battery import CRITERIA, Options, run_battery

TITLES = {
    1: "simplex greatest-improvement coherent count",
    2: "cube greatest-improvement pivot polytope is a permutahedron",
    3: "simplex max-slope count is Catalan and equals non-crossing",
    4: "prism over a triangle gives 6 max-slope vertices",
    5: "cube and cross-polytope neighbotope counts",
    6: "sweep enumeration equals LP-filtered enumeration",
    7: "weak summand and normal equivalence checks",
    8: "greedy branching counts, energy and recovery",
    9: "root pair classifier, witnesses and walk counts",
    10: "Coxeter neighbotope is normally equivalent to the sweep polytope",
    11: "upper bounds on coherent and neighbotope counts",
}


def _options():
    return Options(long=os.environ.get("PIVOTAL_LONG") == "1")


def _report(k, rows):
    ok = all(r.passed for r in rows)
    head = f"criterion {k:>2} {'PASS' if ok else 'FAIL'}: {TITLES[k]} ({sum(r.passed for r in rows)}/{len(rows)} rows)"
    lines = [head]
    for r in rows:
        if not r.passed:
            lines.append(f"    failed: {r.claim}: expected {r.expected}, computed {r.computed}")
    return ok, "\n".join(lines)


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    rows = run_battery([k], _options())
    ok, text = _report(k, rows)
    with capsys.disabled():
        print("\n" + text)
    assert rows
    assert ok, text


if __name__ == "__main__":
    failed = 0
    for k in sorted(CRITERIA):
        ok, text = _report(k, run_battery([k], _options()))
        print(text, flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
