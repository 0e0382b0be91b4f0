"""Exit criteria. Each test records one PASS/FAIL line shown in the summary."""
import time

import numpy as np
import pytest

from mca.integrator import extract_random_part, integrate_full, integrate_split, uniformity_report
from mca.linear_approx import build
from mca.reference import compare, euler, example1_closed_forms, example1_small_t
from mca.systems import DEFAULT_Y0, builtin, example1, lorenz, van_der_pol
from mca.tau_series import TauSeries, normalize, value

BUILTINS = {
    "example1": example1(),
    "vanderpol": van_der_pol(1.0),
    "lorenz": lorenz(3.0, 15.0, 1.0),
}
EQUIV_TAUS = (2.0 ** -8, 2.0 ** -10)
EQUIV_STEPS = 10_000


@pytest.fixture(scope="module")
def equivalence_runs():
    start = time.perf_counter()
    runs = {}
    for name, sys in BUILTINS.items():
        for tau in EQUIV_TAUS:
            y0 = DEFAULT_Y0[name]
            ref = euler(sys, y0, tau, EQUIV_STEPS)
            runs[name, tau, "full"] = (integrate_full(sys, y0, tau, EQUIV_STEPS), ref)
            if name == "lorenz":
                runs[name, tau, "split"] = (integrate_split(sys, y0, tau, EQUIV_STEPS), ref)
    return runs, time.perf_counter() - start


def test_c1_digit_shifting_worked_example(record):
    out = normalize(TauSeries(0.1, [5, 2, 15]))
    ok = out.coeffs == (5.0, 3.0, 5.0) and abs(value(out) - 5.35) <= 1e-12
    record("C1", ok, f"normalize(0.1, [5,2,15]) -> {list(out.coeffs)}, value {value(out):.15g}")
    assert ok


def test_c2_oracle_equivalence(equivalence_runs, record):
    runs, elapsed = equivalence_runs
    worst = {key: compare(traj, ref).max_abs for key, (traj, ref) in runs.items()}
    top = max(worst.values())
    ok = top <= 1e-9 and elapsed < 10.0
    record("C2", ok, f"max |series - Euler| = {top:.3g} over {len(runs)} runs (<= 1e-9); {elapsed:.1f}s (< 10s)")
    assert top <= 1e-9, worst
    assert elapsed < 10.0


def test_c3_coefficient_bound(equivalence_runs, record):
    runs, _ = equivalence_runs
    ratios = []
    for (name, tau, kind), (traj, _) in runs.items():
        if kind == "full":
            assert traj.series_steps.tolist() == list(range(EQUIV_STEPS + 1))
            ratios.append(np.max(np.abs(traj.series_states[:, :, 1:])) * tau)
        else:
            beta = traj.split_states[:, 1, :]
            ratios.append(np.max(np.abs(beta)) * tau ** (traj.p - traj.q))
    top = max(ratios)
    ok = top <= 1.0
    record("C3", ok, f"max |a_m| * tau over every step and index >= 1: {top:.6f} (<= 1)")
    assert ok


def test_c4_van_der_pol_table_rows(record):
    details, ok = [], True
    for tau in (0.01, 2.0 ** -8):
        sol = build(van_der_pol(1.0), (0, 1), tau, 1.5)
        bp = sol.breakpoints
        slopes_ok = sol.slopes.tolist() == [[1.0, 1.0], [2.0, -1.0]]
        bp_ok = len(bp) == 3 and np.all(np.abs(bp - [0.0, 1.0, 1.5]) <= tau)
        s1, s2 = sol.segments
        expr_ok = (np.allclose(s1.intercept, (0.0, 1.0), atol=1e-12)
                   and np.allclose(s2.intercept, (-1.0, 3.0), atol=1e-12))
        ok &= bool(slopes_ok and bp_ok and expr_ok)
        details.append(f"tau={tau:g}: breaks {np.round(bp, 6).tolist()}")
    record("C4", ok, "(t, 1+t) on [0,1], (2t-1, -t+3) on [1,1.5]; " + "; ".join(details))
    assert ok


def test_c5_lorenz_table_rows(record):
    tau = 0.01
    sol = build(lorenz(3.0, 15.0, 1.0), (3, 2, 15), tau, 0.24)
    first, second = sol.segments[:2]
    first_ok = first.slope == (-3.0, -2.0, -9.0) and abs(first.t_end - 1 / 9) <= tau
    second_ok = second.slope == (-3.0, -2.0, -8.0)
    ok = first_ok and second_ok
    record("C5", ok, f"segment 1 slopes {first.slope} ending {first.t_end:.4f}; "
                     f"segment 2 slopes {second.slope} (required (-3, -2, -8))")
    assert first_ok
    assert second_ok


def _sign_changes(x):
    x = x[x != 0]
    return int(np.count_nonzero(np.diff(np.sign(x)) != 0))


def test_c6_linear_orbits_bounded(record):
    tau = 0.01
    _, vdp = build(van_der_pol(1.0), (0, 1), tau, 50.0).sample()
    _, lz = build(lorenz(3.0, 15.0, 1.0), (3, 2, 15), tau, 10.0).sample()
    vdp_ok = (np.max(np.abs(vdp[:, 0])) <= 4 and np.max(np.abs(vdp[:, 1])) <= 8
              and _sign_changes(vdp[:, 0]) >= 6)
    lz_ok = (np.max(np.abs(lz[:, :2])) <= 30 and lz[:, 2].min() >= 0 and lz[:, 2].max() <= 40
             and _sign_changes(lz[:, 0] - lz[:, 1]) >= 2)
    ok = vdp_ok and lz_ok
    record("C6", ok, (
        f"VdP max|u|={np.max(np.abs(vdp[:, 0])):.3g} max|v|={np.max(np.abs(vdp[:, 1])):.3g} "
        f"u sign changes={_sign_changes(vdp[:, 0])}; Lorenz max|x|,|y|={np.max(np.abs(lz[:, :2])):.3g} "
        f"z in [{lz[:, 2].min():.3g}, {lz[:, 2].max():.3g}] x-y sign changes={_sign_changes(lz[:, 0] - lz[:, 1])}"
    ))
    assert ok


def test_c7_example1_closed_forms(record):
    tau = 0.01
    ref = euler(example1(), (1, 0), tau, 100)
    closed_err = np.zeros(2)
    a = 0
    while True:
        u, v, t = example1_closed_forms(a, tau)
        if t > 0.5:
            break
        ev = [np.interp(t, ref.times, ref.states[:, i]) for i in (0, 1)]
        closed_err = np.maximum(closed_err, np.abs(np.array([u, v]) - ev))
        a += 1
    n_closed = a

    table = np.array([example1_closed_forms(k, tau) for k in range(n_closed + 5)])
    small_err = np.zeros(2)
    a = 0
    while True:
        u, v, t = example1_small_t(a, tau)
        if t > 0.2:
            break
        cf = [np.interp(t, table[:, 2], table[:, i]) for i in (0, 1)]
        small_err = np.maximum(small_err, np.abs(np.array([u, v]) - cf))
        a += 1

    ok = bool(np.all(closed_err <= 0.05) and np.all(small_err <= 0.02))
    record("C7", ok, f"closed vs Euler max err {closed_err.max():.4f} (<= 0.05, {n_closed} points); "
                     f"small-t vs closed {small_err.max():.4f} (<= 0.02)")
    assert ok


def test_c8_quasi_randomness(record):
    tau = 2.0 ** -10
    traj = integrate_full(lorenz(3.0, 15.0, 1.0), (3, 2, 15), tau, 10_000)
    reports = {comp: uniformity_report(extract_random_part(traj, traj.p, comp), bins=16)
               for comp in (None, 0, 1, 2)}
    ok = all(r["chi2_pvalue"] > 0.001 and r["ks"] < 0.05 and not r["degenerate"] for r in reports.values())
    pooled = reports[None]
    record("C8", ok, (
        f"a_{traj.p} pooled: chi2 p={pooled['chi2_pvalue']:.3g} (> 0.001), KS={pooled['ks']:.4f} (< 0.05); "
        f"worst component p={min(r['chi2_pvalue'] for r in reports.values()):.3g}, "
        f"KS={max(r['ks'] for r in reports.values()):.4f}"
    ))
    assert ok


SKELETON_CASES = [
    ("vanderpol", (0, 1), 11.67),
    ("lorenz", (3, 2, 15), 1.01),
]


def test_c9_skeleton_tau_robust(record):
    worst_shift = 0.0
    slopes_ok = True
    notes = []
    for name, y0, t_max in SKELETON_CASES:
        sys = builtin(name)
        for k in (7, 8, 9):
            coarse_tau = 2.0 ** -k
            coarse = build(sys, y0, coarse_tau, t_max)
            fine = build(sys, y0, coarse_tau / 2, t_max)
            # An event near t_max may land on either side of the cut, so only
            # the common prefix of events is paired.
            cb = coarse.breakpoints[coarse.breakpoints < t_max - coarse_tau]
            fb = fine.breakpoints[fine.breakpoints < t_max - coarse_tau]
            n = min(len(cb), len(fb))
            assert abs(len(cb) - len(fb)) <= 1
            same_slopes = np.array_equal(coarse.slopes[:n], fine.slopes[:n])
            slopes_ok &= bool(same_slopes)
            shift = np.max(np.abs(cb[:n] - fb[:n])) / coarse_tau
            worst_shift = max(worst_shift, shift)
            notes.append(f"{name} 2^-{k}: {shift:.2f} tau")
    ok = slopes_ok and worst_shift <= 1.0
    record("C9", ok, f"max breakpoint move {worst_shift:.2f} coarse tau (<= 1), slopes equal: {slopes_ok}; "
                     + ", ".join(notes))
    assert slopes_ok
    assert worst_shift <= 1.0
