"""One test per acceptance criterion, each under its wall-clock limit.

Prints one PASS/FAIL line per criterion; the lines are repeated in the
terminal summary.
"""
import pytest

from artifact import acceptance

from conftest import ACCEPTANCE_LINES

SEED = 0


@pytest.mark.parametrize("number", [c[0] for c in acceptance.CRITERIA],
                         ids=[f"c{c[0]:02d}-{c[1].replace(' ', '-')}" for c in acceptance.CRITERIA])
def test_criterion(number):
    rec = acceptance.run_one(number, SEED)
    line = (f"criterion {rec['criterion']:2d} {rec['title']}: {'PASS' if rec['passed'] else 'FAIL'} "
            f"({rec['wall_time']:.2f} s / {rec['limit']:.0f} s)")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert rec["passed"], rec
