"""Acceptance battery. Each criterion is one test; a summary line per
criterion is printed at the end of the run (see ``conftest.py``)."""

import pytest

from hyperturan import verify as vf
from hyperturan.cli import main

CRITERIA = {
    1: vf.c1_triangle_free_graphs,
    2: vf.c2_cfamily,
    3: vf.c3_edge_bound,
    4: lambda: vf.c4_lagrangian("paper"),
    5: lambda: vf.c5_structure("paper", restarts=50),
    6: lambda: vf.c6_entropy("paper", instances=100),
    7: lambda: vf.c7_alpha("paper"),
    8: lambda: vf.c8_product_sweep("paper"),
    9: lambda: vf.c9_oracle(6),
    10: lambda: vf.c10_gradient("paper", instances=100),
    11: lambda: vf.c11_scenarios("paper", eps=0.05),
}

RESULTS: list = []


@pytest.mark.parametrize("cid", sorted(CRITERIA))
def test_criterion(cid):
    res = CRITERIA[cid]()
    RESULTS.append(res)
    print(res.line())
    assert res.passed, res.detail


def test_quick_suite_via_cli(capsys):
    code = main(["verify", "--suite", "quick"])
    out = capsys.readouterr().out
    assert code == 0, out
    assert out.count("[PASS]") == 12 and out.rstrip().endswith("result: PASS")
