"""Acceptance suite: one test per exit criterion, asserted at the stated
tolerance, with a pass/fail line per criterion in the terminal summary.

Two sub-assertions are known to be unattainable at these tolerances (the
four-quantity swap thresholds on the plain crossing, and the rotation
residual bound, whose higher-level coupling floor sits at 1-2e-2 for a
20-state instance); they are asserted as stated and fail with the
measured values in the message.
"""

import filecmp
import time
from pathlib import Path

import numpy as np
from click.testing import CliRunner

from mingap.cli import main as cli_main

from mingap.basis import enumerate_basis
from mingap.clique import brute_force, random_instance, toy_example_1
from mingap.hamiltonian import build_clique_target, clique_pair
from mingap.spectral import (
    decompose_interpolated,
    eigenvalue_derivative,
    eigenvalue_second_derivative,
    eigenvector_derivative,
    energy_identity_residual,
    gap_identity_residual,
)
from mingap.anticrossing import (
    build_report,
    gap_decomposition_residual,
    measure_choi,
    measure_solution_swap,
    rotation_residuals,
    solution_derivative_residuals,
)

from conftest import record_criterion

# choi-satisfied random instances, frozen from a seed scan:
# (seed, n, k, edge probability, alpha), weights uniform in [0.5, 1.5]
CHOI_PASSING_INSTANCES = (
    (6, 5, 2, 0.4, 0.2),
    (19, 6, 2, 0.5, 0.2),
    (21, 5, 3, 0.4, 0.3),
    (22, 6, 3, 0.5, 0.4),
    (24, 5, 2, 0.4, 0.2),
    (26, 7, 2, 0.6, 0.3),
    (37, 6, 2, 0.5, 0.2),
    (56, 7, 2, 0.6, 0.3),
    (59, 7, 3, 0.6, 0.4),
    (67, 6, 2, 0.5, 0.2),
)


def test_criterion_1_encoding_correctness():
    start = time.perf_counter()
    basis = enumerate_basis(6, 3)
    formula_ok = True
    for alpha in (0.0, 0.5, 2 / 3):
        h1 = build_clique_target(toy_example_1(alpha).graph, basis)
        formula_ok &= h1[basis.index_of("111000")] == -3 * alpha
        formula_ok &= h1[basis.index_of("000111")] == 1 - 4.5 * alpha

    mismatches = 0
    for seed in range(50):
        n = 5 + seed % 4
        k = 2 + (seed // 4) % 2
        p = (0.3, 0.5, 0.7)[seed % 3]
        alpha = (0.0, 0.25, 0.5, 0.8)[seed % 4]
        inst = random_instance(n, k, p, 0.5, 2.0, seed=seed, alpha=alpha)
        b = enumerate_basis(n, k)
        h1 = build_clique_target(inst.graph, b)
        table = brute_force(inst).table
        if not np.array_equal(np.sort(h1), np.sort([e for _, e in table])):
            mismatches += 1
            continue
        for subset, energy in table:
            bits = "".join("1" if i + 1 in subset else "0" for i in range(n))
            if h1[b.index_of(bits)] != energy:
                mismatches += 1
                break

    elapsed = time.perf_counter() - start
    ok = formula_ok and mismatches == 0 and elapsed < 5.0
    record_criterion(
        1, ok,
        f"clique energies bit-exact vs formulas and solver on 50 instances ({elapsed:.1f}s)",
    )
    assert formula_ok
    assert mismatches == 0
    assert elapsed < 5.0


def test_criterion_2_projection_identities(bundles):
    start = time.perf_counter()
    worst = 0.0
    for name, alpha in (("toy1", 0.0), ("toy1", 0.5), ("toy2", 0.0), ("toy2", 0.5)):
        pair = bundles(name, alpha).pair
        for s in np.linspace(0.0, 1.0, 21):
            dec = decompose_interpolated(pair, s)
            w = dec[0]
            delta = float(w[1] - w[0])
            for k in range(pair.dim):
                for i in range(pair.dim):
                    r = energy_identity_residual(pair, s, i, k, decomposition=dec)
                    if r is not None:
                        worst = max(worst, abs(r) / (1.0 + abs(w[k])))
            for i in range(pair.dim):
                r = gap_identity_residual(pair, s, i, decomposition=dec)
                if r is not None:
                    worst = max(worst, abs(r) / (1.0 + delta))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 10.0
    record_criterion(
        2, ok,
        f"eigenvalue/gap projection identities, max relative residual {worst:.2e} "
        f"<= 1e-08 ({elapsed:.1f}s)",
    )
    assert worst <= 1e-8
    assert elapsed < 10.0


def test_criterion_3_derivatives_vs_finite_differences(bundles):
    start = time.perf_counter()
    b = bundles("toy1", 0.5)
    pair = b.pair
    points = [s for s in np.linspace(0.04, 0.96, 24) if abs(s - b.mg.s_star) > 0.03][:20]
    assert len(points) == 20
    worst1 = worst2 = worstv = 0.0
    for s in points:
        h = 1e-5
        wp = decompose_interpolated(pair, s + h)[0]
        wm = decompose_interpolated(pair, s - h)[0]
        worst1 = max(worst1, abs(eigenvalue_derivative(pair, s, 0) - (wp[0] - wm[0]) / (2 * h)))

        h2 = 1e-4
        wp2 = decompose_interpolated(pair, s + h2)[0]
        wm2 = decompose_interpolated(pair, s - h2)[0]
        w0 = decompose_interpolated(pair, s)[0]
        worst2 = max(
            worst2,
            abs(eigenvalue_second_derivative(pair, s, 0) - (wp2[0] + wm2[0] - 2 * w0[0]) / h2**2),
        )

        v0 = decompose_interpolated(pair, s)[1][:, 0]
        vp = decompose_interpolated(pair, s + h)[1][:, 0]
        vm = decompose_interpolated(pair, s - h)[1][:, 0]
        vp = vp if vp @ v0 >= 0 else -vp
        vm = vm if vm @ v0 >= 0 else -vm
        worstv = max(
            worstv,
            float(np.linalg.norm(eigenvector_derivative(pair, s, 0) - (vp - vm) / (2 * h))),
        )
    elapsed = time.perf_counter() - start
    ok = worst1 <= 1e-6 and worst2 <= 1e-5 and worstv <= 1e-6 and elapsed < 10.0
    record_criterion(
        3, ok,
        f"derivatives vs central differences: {worst1:.1e}/{worst2:.1e}/{worstv:.1e} "
        f"<= 1e-06/1e-05/1e-06 ({elapsed:.1f}s)",
    )
    assert worst1 <= 1e-6
    assert worst2 <= 1e-5
    assert worstv <= 1e-6
    assert elapsed < 10.0


def test_criterion_4_gap_decomposition(bundles):
    start = time.perf_counter()
    worst_rel = 0.0
    cases = [("toy1", a) for a in (0.0, 0.2, 0.5, 0.6, 0.66)] + [("toy2", 0.2)]
    for name, alpha in cases:
        b = bundles(name, alpha)
        residual = gap_decomposition_residual(b.sweep, b.partition, b.mg.s_star)
        worst_rel = max(worst_rel, residual / (1.0 + b.mg.delta_min))
    elapsed = time.perf_counter() - start
    ok = worst_rel <= 1e-6 and elapsed < 30.0
    record_criterion(
        4, ok,
        f"min-gap level decomposition, worst residual {worst_rel:.2e} <= 1e-06 "
        f"({elapsed:.1f}s)",
    )
    assert worst_rel <= 1e-6
    assert elapsed < 30.0


def test_criterion_5_definition_behavior(bundles):
    start = time.perf_counter()
    plain = bundles("toy1", 0.0)
    shifted = bundles("toy1", 0.5)

    choi_plain = measure_choi(plain.series, plain.mg.s_star)
    relaxed_plain = measure_solution_swap(
        plain.series, plain.mg.s_star, window=choi_plain.window
    )
    choi_shifted = measure_choi(shifted.series, shifted.mg.s_star)
    relaxed_shifted = measure_solution_swap(shifted.series, shifted.mg.s_star)

    structure_ok = (
        choi_plain.satisfied
        and not choi_shifted.satisfied
        and relaxed_shifted.satisfied
        and relaxed_shifted.gamma <= 0.1
        and relaxed_shifted.epsilon <= 0.1
        and relaxed_plain.satisfied
        and relaxed_plain.gamma <= choi_plain.gamma
        and relaxed_plain.epsilon <= choi_plain.epsilon + 1e-9
    )
    thresholds_ok = choi_plain.gamma <= 0.1 and choi_plain.epsilon <= 0.1
    elapsed = time.perf_counter() - start
    ok = structure_ok and thresholds_ok and elapsed < 30.0
    record_criterion(
        5, ok,
        "definition behavior: structure reproduced; four-quantity parameters on the "
        f"plain crossing measure ({choi_plain.gamma:.3f}, {choi_plain.epsilon:.3f}) "
        f"vs threshold 0.1 ({elapsed:.1f}s)",
    )
    assert choi_plain.satisfied
    assert not choi_shifted.satisfied
    assert relaxed_shifted.satisfied
    assert relaxed_shifted.gamma <= 0.1 and relaxed_shifted.epsilon <= 0.1
    assert relaxed_plain.satisfied
    assert relaxed_plain.gamma <= choi_plain.gamma
    assert relaxed_plain.epsilon <= choi_plain.epsilon + 1e-9
    assert elapsed < 30.0
    assert thresholds_ok, (
        "four-quantity swap parameters on the plain crossing measure "
        f"gamma={choi_plain.gamma:.3f}, epsilon={choi_plain.epsilon:.3f}; the stated "
        "0.1 threshold is unattainable for this instance under the definition-faithful "
        "measurement (third-level leakage of ~0.15 at the crossing keeps gamma above 0.15 "
        "for every window)"
    )


def test_criterion_6_epsilon_bound_margins(bundles):
    start = time.perf_counter()
    failures = []

    b = bundles("toy1", 0.0)
    report, _, _ = build_report(b.pair, precomputed_sweep=b.sweep)
    if not (report.choi.satisfied and report.epsilon_bound_margin >= 0):
        failures.append(("toy1", 0.0, report.epsilon_bound_margin))

    for seed, n, k, p, alpha in CHOI_PASSING_INSTANCES:
        inst = random_instance(n, k, p, 0.5, 1.5, seed=seed, alpha=alpha)
        pair = clique_pair(inst.graph)
        report, _, _ = build_report(pair, grid_points=501)
        if report.choi is None or not report.choi.satisfied:
            failures.append((seed, "not satisfied"))
        elif report.epsilon_bound_margin is None or report.epsilon_bound_margin < 0:
            failures.append((seed, report.epsilon_bound_margin))

    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60.0
    record_criterion(
        6, ok,
        f"epsilon bound margin nonnegative on 11 satisfied instances ({elapsed:.1f}s)",
    )
    assert not failures, failures
    assert elapsed < 60.0


def test_criterion_7_rotation_and_solution_derivatives(bundles):
    start = time.perf_counter()
    alphas = (0.6, 0.63, 0.66)
    rows = []
    for alpha in alphas:
        b = bundles("toy1", alpha)
        rot = rotation_residuals(b.sweep, b.mg.s_star)
        sd = solution_derivative_residuals(b.series, b.mg.s_star)
        rows.append((alpha, b.mg.delta_min, rot, sd))

    signs_ok = all(sd.g0_prime > 0 and sd.g1_prime < 0 for _, _, _, sd in rows)
    deltas = [delta for _, delta, _, _ in rows]
    slopes = [abs(sd.g0_prime) for _, _, _, sd in rows]
    trend_ok = all(d1 > d2 for d1, d2 in zip(deltas, deltas[1:])) and all(
        s1 < s2 for s1, s2 in zip(slopes, slopes[1:])
    )
    solution_ok = all(
        sd.sum_residual <= 1e-2 and sd.diff_residual <= 1e-2 for _, _, _, sd in rows
    )
    rotation_worst = max(
        max(rot.residual_ground, rot.residual_excited) for _, _, rot, _ in rows
    )
    rotation_ok = rotation_worst <= 1e-2

    elapsed = time.perf_counter() - start
    ok = signs_ok and trend_ok and solution_ok and rotation_ok and elapsed < 60.0
    record_criterion(
        7, ok,
        "rotation/solution derivatives: signs and 1/gap trend hold, solution residuals "
        f"<= 1e-02, rotation residual max {rotation_worst:.2e} vs 1e-02 ({elapsed:.1f}s)",
    )
    assert signs_ok
    assert trend_ok, (deltas, slopes)
    assert solution_ok, [(a, sd.sum_residual, sd.diff_residual) for a, _, _, sd in rows]
    assert elapsed < 60.0
    assert rotation_ok, (
        "rotation residuals "
        + ", ".join(
            f"alpha={a}: ({rot.residual_ground:.2e}, {rot.residual_excited:.2e})"
            for a, _, rot, _ in rows
        )
        + "; the coupling of the two lowest vectors to higher levels leaves a floor of "
        "1-2e-2 at this instance size (verified against the exact perturbation sum), "
        "so the stated 1e-02 bound is unattainable"
    )


def test_criterion_8_multi_level_dominance(bundles):
    start = time.perf_counter()
    b = bundles("toy2", 0.2)
    grid = b.series.grid
    intervals = []
    for level in (2, 1, 0):
        dominant = grid[b.series.solution[:, level] > 0.5]
        intervals.append((float(dominant[0]), float(dominant[-1])) if len(dominant) else None)
    present = all(iv is not None for iv in intervals)
    ordered = present and intervals[0][1] < intervals[1][0] < intervals[1][1] < intervals[2][0]
    elapsed = time.perf_counter() - start
    ok = present and ordered and elapsed < 10.0
    record_criterion(
        8, ok,
        f"solution weight dominance passes through levels 2 -> 1 -> 0 at {intervals} "
        f"({elapsed:.1f}s)",
    )
    assert present
    assert ordered, intervals
    assert elapsed < 10.0


def test_criterion_9_deterministic_outputs(tmp_path):
    start = time.perf_counter()
    runner = CliRunner()
    dirs = []
    for tag in ("one", "two"):
        workdir = tmp_path / tag
        workdir.mkdir()
        with runner.isolated_filesystem(temp_dir=workdir):
            result = runner.invoke(
                cli_main,
                ["scan", "--fixture", "toy1", "--alpha", "0,0.5", "--grid", "201",
                 "--out", "run"],
            )
            assert result.exit_code == 0, result.output
            dirs.append(Path.cwd() / "run")

    differing = []
    for sub in sorted(p.relative_to(dirs[0]) for p in dirs[0].rglob("*") if p.is_file()):
        if not filecmp.cmp(dirs[0] / sub, dirs[1] / sub, shallow=False):
            differing.append(str(sub))
    elapsed = time.perf_counter() - start
    ok = not differing and elapsed < 60.0
    record_criterion(
        9, ok, f"repeated scans byte-identical across all emitted files ({elapsed:.1f}s)"
    )
    assert not differing, differing
    assert elapsed < 60.0

