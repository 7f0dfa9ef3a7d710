"""Acceptance gate: every evidence suite at its full stated bounds, one
pass/fail line per criterion.

Run with `pytest tests/test_acceptance.py -v` for the per-criterion lines;
add -s to stream each suite's checked/elapsed summary as it finishes.
"""

import pytest

from ccspi.suites import SUITES, run_suite

CRITERIA = [
    ("01", "nf-oracle-agreement"),
    ("02", "replication-ladder"),
    ("03", "confluence-termination"),
    ("04", "cancellation"),
    ("05", "contribution-invariance"),
    ("06", "no-md-sumfree"),
    ("07", "md-with-sums"),
    ("08", "dsim-canonical"),
    ("09", "dsim-separation"),
    ("10", "erasure-random"),
    ("11", "pi-congruence"),
    ("12", "open-normalization"),
    ("13", "pi-subst-cases"),
]


def test_every_suite_is_covered():
    assert [name for _, name in CRITERIA] == list(SUITES)
    assert len(CRITERIA) == 13


@pytest.mark.parametrize(
    "num,suite", CRITERIA, ids=[f"criterion-{num}-{name}" for num, name in CRITERIA]
)
def test_criterion(num, suite):
    report = run_suite(suite)
    print(report.summary())
    assert report.passed, "\n".join([report.summary()] + list(report.failures))
