"""Acceptance criteria, one check each.

Every check prints a single ``[PASS]`` or ``[FAIL]`` line (also under pytest's
output capture). Run ``python tests/test_acceptance.py`` for the bare summary.
"""

import itertools
import sys
import time

import numpy as np
import pytest

from qplasma import (
    PlasmaFieldConfig,
    QuantumNumbers,
    first_order_energy,
    first_order_energy_quadrature,
    second_order_energy,
    second_order_energy_quadrature,
    sigma_index,
    total_energy,
)
from qplasma.oracle import oracle_spectrum
from qplasma.reports import FIGURES, cell_tolerance, delta_e_analysis, figure_data, reproduce_table
from qplasma.susy import norm_quadrature

QN = QuantumNumbers


def _table(tid):
    start = time.perf_counter()
    report = reproduce_table(tid)
    elapsed = time.perf_counter() - start
    return report, elapsed


def check_1():
    report, elapsed = _table(1)
    ok = report.passed and len(report.cells) == 60 and elapsed < 1.0
    return ok, f"table I {report.n_pass}/60 within max(2e-6 rel, 1e-5 abs), {elapsed:.3f} s"


def check_2():
    report, elapsed = _table(2)
    anchor = next(c for c in report.cells if (c.m, c.n, c.column) == (0, 0, 1))
    ok = report.passed and len(report.cells) == 60 and elapsed < 1.0 and anchor.reference == -1.9506173
    return ok, f"table II {report.n_pass}/60, anchor {anchor.computed:.8f}, {elapsed:.3f} s"


def check_3():
    report, _ = _table(1)
    got = {(c.m, c.n, c.column): c.computed for c in report.cells}
    identical = all(
        got[1, 0, col] == got[-1, 2, col] and got[1, 1, col] == got[-1, 3, col] for col in (1, 4)
    )
    printed = [(-0.17269097, got[1, 0, 1]), (-0.03390625, got[1, 1, 1])]
    close = all(abs(v - ref) <= cell_tolerance(ref) for ref, v in printed)
    return identical and close, f"pairs bit-identical={identical}, printed pairs within tolerance={close}"


def check_4():
    rng = np.random.default_rng(20240601)
    exact = 0
    quad_ok = 0
    n_quad = 0
    for _ in range(200):
        n, m, xi = int(rng.integers(0, 6)), int(rng.integers(-3, 5)), int(rng.integers(0, 6))
        if n + m + xi + 0.5 == 0:
            m += 1
        cfg = PlasmaFieldConfig(g=1, F=0.0, lambda_D=float(rng.uniform(2, 1e3)), B=float(rng.uniform(0, 10)), xi=xi)
        qn = QN(n, m)
        exact += total_energy(qn, cfg).e1 == 0.0
        if sigma_index(qn, cfg).sigma_0 > 0:
            n_quad += 1
            quad_ok += abs(first_order_energy_quadrature(qn, cfg)) <= 1e-12
    ok = exact == 200 and quad_ok == n_quad
    return ok, f"e1 == 0 in {exact}/200 configs; quadrature |e1| <= 1e-12 in {quad_ok}/{n_quad} (sigma_0 > 0)"


def check_5():
    worst = 0.0
    count = 0
    for n, m, xi, g, lam, F, B in itertools.product(
        range(4), (0, 1, 2), (0, 1, 5), (0, 1), (20.0, 40.0), (0.0, 0.1, 5.0), (0.0, 1.0, 5.0)
    ):
        qn, cfg = QN(n, m), PlasmaFieldConfig(g=g, lambda_D=lam, F=F, B=B, xi=xi)
        if sigma_index(qn, cfg).sigma_0 <= 0:
            continue
        count += 1
        for closed, quad in (
            (first_order_energy(qn, cfg), first_order_energy_quadrature(qn, cfg)),
            (second_order_energy(qn, cfg), second_order_energy_quadrature(qn, cfg)),
        ):
            if closed == 0.0:
                worst = max(worst, abs(quad))
            else:
                worst = max(worst, abs(quad - closed) / abs(closed))
    return worst <= 1e-8, f"{count} states, worst relative gap {worst:.2e} (limit 1e-8)"


def check_6():
    start = time.perf_counter()
    cfg = PlasmaFieldConfig(g=1, lambda_D=1e6)
    worst = 0.0
    for m in range(-2, 3):
        spec = oracle_spectrum(m, cfg, k=3)
        exact = np.array([-0.5 / (n + abs(m) + 0.5) ** 2 for n in range(3)])
        worst = max(worst, float(np.max(np.abs(spec.eigenvalues - exact))))
    screened = oracle_spectrum(0, PlasmaFieldConfig(g=1, lambda_D=20.0), k=1).eigenvalues[0]
    elapsed = time.perf_counter() - start
    gap = abs(screened - (-1.95001560))
    ok = worst <= 1e-5 and gap <= 5e-4 and elapsed < 30
    return ok, f"Coulomb worst error {worst:.1e}, screened gap {gap:.1e}, {elapsed:.1f} s"


def check_7():
    rows = {r.xi: r for r in delta_e_analysis(xis=(1, 2, 4), F=1.2)}
    d1 = rows[1].delta
    flagged = rows[2].discrepancy and rows[4].discrepancy and not rows[1].discrepancy
    ok = 37 <= d1 <= 39 and flagged
    return ok, (
        f"dE(xi=1)={d1:.4f}; xi=2 {rows[2].delta:.2f} vs 160 and xi=4 {rows[4].delta:.2f} vs 2500 flagged={flagged}"
    )


def check_8():
    worst = 0.0
    count = 0
    cfg = PlasmaFieldConfig()
    for n in range(6):
        for nu in range(0, 7):
            worst = max(worst, abs(norm_quadrature(QN(n, nu), cfg) - 1.0))
            count += 1
    return worst <= 1e-8, f"{count} states, worst |norm - 1| = {worst:.1e}"


def check_9():
    fig1 = figure_data("1a")
    monotone = bool(np.all(np.diff(np.array(list(fig1.columns.values())), axis=0) > 0))
    fig2 = figure_data("2a")
    errs = [
        float(np.max(np.abs(fig2.columns[f"exact:lambda_D={lam}"] - fig2.columns[f"series:lambda_D={lam}"])))
        for lam in (2, 5, 10, 40)
    ]
    decreasing = all(a > b for a, b in zip(errs, errs[1:]))
    stable = all(figure_data(fid).to_csv().encode() == figure_data(fid).to_csv().encode() for fid in FIGURES)
    ok = monotone and decreasing and stable
    return ok, f"1a monotone in B={monotone}, 2a error decreasing={decreasing}, CSV byte-stable={stable}"


CRITERIA = {
    1: ("Table I regression", check_1),
    2: ("Table II regression", check_2),
    3: ("degeneracy identity", check_3),
    4: ("first-order vanishing", check_4),
    5: ("closed form vs quadrature", check_5),
    6: ("oracle validity", check_6),
    7: ("delta-E dominance anchor", check_7),
    8: ("normalization suite", check_8),
    9: ("figure qualitative checks", check_9),
}


def _line(number, ok, detail):
    name = CRITERIA[number][0]
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number} {name}: {detail}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, detail = CRITERIA[number][1]()
    with capsys.disabled():
        print("\n" + _line(number, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for number, (_, check) in CRITERIA.items():
        ok, detail = check()
        failures += not ok
        print(_line(number, ok, detail))
    sys.exit(1 if failures else 0)
