"""Acceptance criteria 1-9, each at its stated tolerance and time budget.

Run with ``pytest tests/test_acceptance.py``; one PASS/FAIL line per
criterion is printed in the terminal summary.
"""

import json
import math
import time

import numpy as np
import pytest

from pulsefisher import (
    Angles,
    EstimableParameter,
    NonPhysicalState,
    PropagatorMode,
    PulseConfig,
    appendix_intermediates,
    binary_entropy,
    d_initial_bloch,
    encoded_information,
    initial_bloch,
    propagator_exact,
    propagator_paper_literal,
    qfi_bloch,
    qfi_spectral_oracle,
)
from pulsefisher.cli import main
from pulsefisher.output import CSV_HEADER, read_csv
from pulsefisher.propagator import matvec, rk4_bloch
from pulsefisher.sweep import Observable, evaluate_cell

THETA, PHI = EstimableParameter.THETA, EstimableParameter.PHI
MODES = {"exact": PropagatorMode.EXACT, "paper": PropagatorMode.PAPER_LITERAL}


def random_cfg(rng):
    t = rng.uniform(0.0, 2.0)
    return PulseConfig(rng.uniform(0.05, 2.0), rng.uniform(0.0, 2.0), t), t


def test_c1_exact_orthogonality(criterion):
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst_o = worst_d = 0.0
    for _ in range(1000):
        d, tau = rng.uniform(0, 10), rng.uniform(0, 20)
        a = propagator_exact(PulseConfig(1.0, d, tau), tau).a
        worst_o = max(worst_o, np.max(np.abs(a.T @ a - np.eye(3))))
        worst_d = max(worst_d, abs(np.linalg.det(a) - 1.0))
    elapsed = time.perf_counter() - start
    ok = worst_o < 1e-10 and worst_d < 1e-10 and elapsed < 1.0
    criterion(1, ok, f"max|A^T A-I|={worst_o:.2e} max|detA-1|={worst_d:.2e} in {elapsed:.2f}s")
    assert ok


def test_c2_ode_agreement(criterion):
    start = time.perf_counter()
    om, de, th = (g.ravel() for g in np.meshgrid(np.linspace(0.05, 1.0, 10), np.linspace(0.0, 1.0, 10),
                                                  np.linspace(0.0, math.pi, 8), indexing="ij"))
    s0 = np.stack([np.sin(th) * np.cos(math.pi), np.sin(th) * np.sin(math.pi), -np.cos(th)], axis=1)
    ode = rk4_bloch(om, de, s0, 1.0, 1e-4)
    exact = np.array([matvec(propagator_exact(PulseConfig(o, d, 1.0), 1.0).rows, s) for o, d, s in zip(om, de, s0)])
    err = float(np.max(np.abs(ode - exact)))
    elapsed = time.perf_counter() - start
    ok = err < 1e-7 and elapsed < 10.0
    criterion(2, ok, f"max Bloch component error {err:.2e} on 800 points in {elapsed:.2f}s")
    assert ok


def test_c3_qfi_oracle_equivalence(criterion):
    rng = np.random.default_rng(303)
    start = time.perf_counter()
    summary = {}
    ok = True
    for name, mode in MODES.items():
        worst, used, skipped = 0.0, 0, 0
        for _ in range(200):
            cfg, t = random_cfg(rng)
            a = Angles(rng.uniform(1e-4, math.pi - 1e-4), rng.uniform(1e-4, 2 * math.pi - 1e-4))
            param = THETA if rng.random() < 0.5 else PHI
            try:
                f = qfi_bloch(cfg, t, a, param, mode)
                g = qfi_spectral_oracle(cfg, t, a, param, mode, 1e-5)
            except NonPhysicalState:
                skipped += 1
                continue
            used += 1
            worst = max(worst, abs(f.value - g) / max(1.0, f.value))
        summary[name] = (worst, used, skipped)
        ok = ok and worst < 1e-6 and used > 0
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 5.0
    detail = "; ".join(f"{k}: max diff {w:.2e} on {u} ({s} non-physical skipped)" for k, (w, u, s) in summary.items())
    criterion(3, ok, f"{detail}; {elapsed:.2f}s")
    assert ok


def test_c4_exact_mode_freezing(criterion):
    rng = np.random.default_rng(404)
    start = time.perf_counter()
    wt = wp = wi = 0.0
    for _ in range(500):
        cfg, t = random_cfg(rng)
        a = Angles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        wt = max(wt, abs(qfi_bloch(cfg, t, a, THETA).value - 1.0))
        wp = max(wp, abs(qfi_bloch(cfg, t, a, PHI).value - math.sin(a.theta) ** 2))
        wi = max(wi, encoded_information(cfg, t, a).value)
    elapsed = time.perf_counter() - start
    ok = wt < 1e-10 and wp < 1e-10 and wi < 1e-10 and elapsed < 2.0
    criterion(4, ok, f"|F_theta-1|<={wt:.1e} |F_phi-sin^2|<={wp:.1e} I_cod<={wi:.1e} in {elapsed:.2f}s")
    assert ok


def test_c5_derivative_check(criterion):
    rng = np.random.default_rng(505)
    h = 1e-6
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        cfg, t = random_cfg(rng)
        a = Angles(rng.uniform(0.1, math.pi - 0.1), rng.uniform(0.1, 2 * math.pi - 0.1))
        rows = propagator_exact(cfg, t).rows
        for param in (THETA, PHI):
            analytic = np.array(matvec(rows, d_initial_bloch(a, param).as_tuple()))
            if param is THETA:
                plus, minus = Angles(a.theta + h, a.phi), Angles(a.theta - h, a.phi)
            else:
                plus, minus = Angles(a.theta, a.phi + h), Angles(a.theta, a.phi - h)
            fd = (np.array(matvec(rows, initial_bloch(plus).as_tuple()))
                  - np.array(matvec(rows, initial_bloch(minus).as_tuple()))) / (2 * h)
            worst = max(worst, np.linalg.norm(analytic - fd) / np.linalg.norm(analytic))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-6 and elapsed < 1.0
    criterion(5, ok, f"max relative error {worst:.2e} over 100 samples x 2 parameters in {elapsed:.2f}s")
    assert ok


def test_c6_entropy_identities(criterion):
    rng = np.random.default_rng(606)
    start = time.perf_counter()
    sym = max(abs(binary_entropy(p) - binary_entropy(1 - p)) for p in rng.uniform(0, 1, 1000))
    ends = max(binary_entropy(0.0), binary_entropy(1.0))
    peak = abs(binary_entropy(0.5) - 1.0)
    grid = [binary_entropy(k * 1e-3) for k in range(501)]
    mono = all(a < b for a, b in zip(grid, grid[1:]))
    elapsed = time.perf_counter() - start
    ok = sym < 1e-12 and ends < 1e-12 and peak < 1e-12 and mono and elapsed < 1.0
    criterion(6, ok, f"symmetry {sym:.1e}, endpoints {ends:.1e}, |H(1/2)-1| {peak:.1e}, monotone={mono}")
    assert ok


def test_c7_appendix_transcription(criterion):
    rng = np.random.default_rng(707)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        cfg, t = random_cfg(rng)
        iv = appendix_intermediates(cfg, t)
        d, eta, tau = cfg.delta_ratio, cfg.eta, cfg.tau(t)
        c = math.cos(tau * math.sqrt(eta))
        lam1 = math.sin(tau * math.sqrt(eta)) / math.sqrt(eta)
        worst = max(worst, abs(iv.c - c), abs(iv.lambda1 - lam1), abs(iv.lambda2 - (d * d + c)),
                    abs(iv.lambda3 - 0.5 * eta * lam1 ** 2), abs(iv.lambda4 - (1 + (eta + d * d) * c)))
    a32 = propagator_paper_literal(PulseConfig(1.0, 0.2, 1.0), 1.0).a[2, 1]
    a32_err = abs(a32 - math.sin(math.sqrt(1.04)) / math.sqrt(1.04))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and a32_err < 1e-12 and elapsed < 1.0
    criterion(7, ok, f"identity residual {worst:.1e}, a32={a32:.12f} (err {a32_err:.1e})")
    assert ok


def run_figures(out_dir, jobs):
    start = time.perf_counter()
    code = main(["figures", "--mode", "both", "--resolution", "200", "--out-dir", str(out_dir), "--jobs", str(jobs)])
    return code, time.perf_counter() - start


@pytest.fixture(scope="module")
def figure_runs(tmp_path_factory):
    a = tmp_path_factory.mktemp("figs_jobs1")
    b = tmp_path_factory.mktemp("figs_jobs2")
    return {"a": (a, *run_figures(a, 1)), "b": (b, *run_figures(b, 2))}


def check_csv(path, fig, mode, rng):
    rows = read_csv(path)
    with open(path, encoding="utf-8", newline="") as fh:
        header = fh.readline()
    assert header == ",".join(CSV_HEADER) + "\n"
    assert len(rows) == 200 * 200
    assert {r["status"] for r in rows} <= {"ok", "nonphysical"}
    meta = json.loads(path.with_name(path.stem + ".meta.json").read_text())
    fixed = meta["fixed"]
    for k in rng.choice(len(rows), 20, replace=False):
        r = rows[k]
        p = dict(fixed)
        p[r["x_name"]] = float(r["x"])
        p[r["y_name"]] = float(r["y"])
        s_norm, ok, vals = evaluate_cell(p["omega0"], p["delta"], p["time"], p["theta"], p["phi"], MODES[mode],
                                         (Observable(r["observable"]),))
        assert float(r["s_norm"]) == s_norm
        assert r["status"] == ("ok" if ok else "nonphysical")
        assert (float(r["value"]) == vals[0]) if ok else r["value"] == ""


def test_c8_figure_suite(figure_runs, criterion):
    out_dir, code, elapsed = figure_runs["a"]
    rng = np.random.default_rng(808)
    csvs = sorted(out_dir.glob("*.csv"))
    assert code == 0
    assert len(csvs) == 18
    for path in csvs:
        fig, mode = path.stem.split("_")
        check_csv(path, fig, mode, rng)
    report = json.loads((out_dir / "report.json").read_text())
    exact_ok = report["exact_freezing_confirmed"]
    for fig in ("fig1", "fig3", "fig5"):
        exact_ok = exact_ok and report["figures"][fig]["exact"]["freezing"]["max_abs_dev_qfi_theta_from_1"] < 1e-10
    for fig in ("fig2", "fig4", "fig6", "fig8", "fig9"):
        exact_ok = exact_ok and report["figures"][fig]["exact"]["freezing"]["max_abs_dev_i_cod_from_0"] < 1e-10
    qual = report["qualitative_paper_mode"]
    ok = code == 0 and len(csvs) == 18 and exact_ok and elapsed < 60.0
    criterion(8, ok, f"18 CSVs in {elapsed:.1f}s, exact freezing confirmed={exact_ok}; "
                     f"paper-mode fig1 claim: {qual['fig1']['result']}, fig2 claim: {qual['fig2']['result']}")
    assert ok


def test_c9_determinism(figure_runs, criterion):
    dir_a, code_a, _ = figure_runs["a"]
    dir_b, code_b, elapsed_b = figure_runs["b"]
    names = sorted(p.name for p in dir_a.iterdir())
    assert names == sorted(p.name for p in dir_b.iterdir())
    differing = [n for n in names if (dir_a / n).read_bytes() != (dir_b / n).read_bytes()]
    ok = code_a == code_b == 0 and not differing and len(names) == 37
    criterion(9, ok, f"{len(names)} files byte-identical between --jobs 1 and --jobs 2 runs; differing={differing}")
    assert ok
