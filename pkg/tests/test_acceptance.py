"""Every acceptance criterion at its stated tolerance, one pass/fail line each.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
"""

import sys

import pytest

from steiner_lab.acceptance import CRITERIA, AcceptanceConfig, run_acceptance, select

RESULTS = []


@pytest.mark.parametrize("cid,name", [(c[0], c[1]) for c in CRITERIA], ids=[f"{c[0]:02d}-{c[1].replace(' ', '-')}" for c in CRITERIA])
def test_criterion(cid, name):
    (res,) = run_acceptance(str(cid), AcceptanceConfig())
    RESULTS.append(res)
    print(res.line())
    assert res.passed, res.line()


def test_filter_selects_by_id_name_and_tag():
    assert [c[0] for c in select("3")] == [3]
    assert [c[0] for c in select("ulam")] == [9]
    assert {c[0] for c in select("coloring")} == {1, 11}
    assert len(select(None)) == len(CRITERIA) == 11


def test_forced_bad_theta_fails():
    (res,) = run_acceptance("4", AcceptanceConfig(theta=0.6))
    assert not res.passed and res.line().startswith("[FAIL]")


if __name__ == "__main__":
    results = run_acceptance(None, AcceptanceConfig())
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
