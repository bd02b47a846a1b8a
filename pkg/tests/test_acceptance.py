"""Acceptance criteria, one test each. Every test prints a single PASS/FAIL line
with the worst deviation, its tolerance and the wall time against the budget."""
import time

import pytest

from eisenkron.cli import RunConfig, SuiteOptions, run_suite

CRITERIA = [
    # (number, suite, budget in seconds, summary)
    (1, "borcherds-eta", 10, "Borcherds products of theta^{w_c} equal eta(cz) eta(Nz/c) to q^50"),
    (2, "character-sum", 1, "sum_{c|N} mu((c,d)) c closed form, squarefree N <= 210"),
    (3, "lift-identity", 300, "lattice sum vs Eisenstein average at s = 1.3"),
    (4, "poincare-fourier", 300, "Fourier reconstruction of P at tau = i, s = 1.25, N = 1"),
    (5, "kloosterman-explicit", 600, "Kloosterman zeta vs L-function closed form, s = 1.5"),
    (6, "klf-constants", 1, "hyperbolic constants at N = 6 and their vanishing cases"),
    (7, "vq", 30, "V_q on theta and on Poincare special values"),
    (8, "hurwitz", 60, "Hurwitz class numbers and the reduced-form oracle"),
    (9, "weil-relations", 60, "Weil representation relations and unitarity"),
    (10, "laplacian", 120, "Laplace eigen-equation residual at tau = i, s = 1.5"),
    (11, "klf-invariance", None, "Gamma_0(N) invariance of the three evaluators"),
    (12, "cusp-order", 60, "cusp order of the genus-0 product vs -H/sigma_0"),
]


def _report(number, summary, checks, seconds, budget):
    failed = [c for c in checks if not c.passed]
    worst = max(checks, key=lambda c: c.deviation / c.tolerance if c.tolerance else c.deviation)
    in_time = budget is None or seconds <= budget
    status = "PASS" if checks and not failed and in_time else "FAIL"
    budget_text = "none" if budget is None else f"{budget}s"
    line = (
        f"{status} criterion {number:2d} [{summary}]: {len(checks) - len(failed)}/{len(checks)} checks, "
        f"worst {worst.id} deviation {worst.deviation:.3g} vs tolerance {worst.tolerance:.3g}, "
        f"{seconds:.1f}s (budget {budget_text})"
    )
    return status, line, failed


@pytest.mark.acceptance
@pytest.mark.parametrize("number, suite, budget, summary", CRITERIA, ids=[f"criterion-{c[0]:02d}-{c[1]}" for c in CRITERIA])
def test_criterion(number, suite, budget, summary, capsys):
    start = time.perf_counter()
    checks = run_suite(suite, SuiteOptions(), RunConfig())
    seconds = time.perf_counter() - start
    status, line, failed = _report(number, summary, checks, seconds, budget)
    with capsys.disabled():
        print("\n" + line)
        for c in failed:
            print(f"    failed {c.id}: deviation {c.deviation:.3g} > {c.tolerance:.3g}; {c.detail}")
    assert status == "PASS", line
