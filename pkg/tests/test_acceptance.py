"""Acceptance suite: one test per criterion, each printing a pass/fail line
with its runtime.  Run `pytest tests/test_acceptance.py -v -s` to see every
line.

Criterion 11 note: the second half of that criterion expects the spiral
flower with x = 8, y = 1 to be non-univalent.  Direct development of that
flower (cross-checked by an independent tangency-intersection construction)
shows all circle pairs disjoint with at least 10% relative slack; flower
univalence along y = 1 first breaks at x = 5 + 2*sqrt(6) ~ 9.899, where the
two unit petals across the flower touch.  The assertion is kept as stated
and fails honestly; the qualitative claim (large x breaks univalence) is
covered by the x >= 9.95 checks in tests/test_layout.py.
"""

import json
import math
import time

import numpy as np
import pytest
from click.testing import CliRunner

import hexpack as hp
from hexpack.cli import main as cli_main

TWO_PI = 2.0 * math.pi
SQRT3 = math.sqrt(3.0)


def report(num, name, ok, detail, elapsed, budget):
    in_budget = elapsed < budget
    status = "PASS" if (ok and in_budget) else "FAIL"
    print(f"[{status}] criterion {num:02d} ({name}): {detail} "
          f"[{elapsed:.2f}s / budget {budget:.0f}s]")
    assert ok, f"criterion {num} ({name}): {detail}"
    assert in_budget, f"criterion {num} ({name}): took {elapsed:.2f}s, budget {budget}s"


def cosine_law_angles(r1, r2, r3):
    s23, s13, s12 = r2 + r3, r1 + r3, r1 + r2

    def angle(opposite, a, b):
        return math.acos((a * a + b * b - opposite * opposite) / (2.0 * a * b))

    return angle(s23, s12, s13), angle(s13, s12, s23), angle(s12, s13, s23)


@pytest.fixture(scope="module")
def rigidity_solve():
    """Criterion 6 instance: 21x21 spiral boundary, interior started at 0."""
    window = hp.Window(-10, 10, -10, 10)
    exact = hp.spiral_field(hp.SpiralParams(1.0, 1.2, 0.85), window)
    u0 = exact.copy()
    for v in window.interior_vertices():
        u0[v] = 0.0
    t0 = time.perf_counter()
    solved, rep = hp.solve_patch(u0, hp.SolveOptions(tolerance=1e-10, init="keep"))
    elapsed = time.perf_counter() - t0
    return {"solved": solved, "report": rep, "exact": exact, "elapsed": elapsed}


def test_criterion_01_angle_identities():
    t0 = time.perf_counter()
    ok = abs(hp.theta(0.0, 0.0) - math.pi / 3.0) <= 1e-14
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        u = rng.uniform(-5.0, 5.0, size=3)
        got = hp.inner_angles(tuple(u))
        expected = cosine_law_angles(*(math.exp(x) for x in u))
        worst = max(worst, max(abs(a - b) for a, b in zip(got, expected)))
    ok = ok and worst <= 1e-12
    report(1, "angle identities", ok,
           f"theta(0,0) ok; worst oracle gap {worst:.2e} <= 1e-12",
           time.perf_counter() - t0, 1.0)


def test_criterion_02_gradient_checks():
    t0 = time.perf_counter()
    h = 1e-6
    worst_fd = 0.0
    for x1 in np.linspace(-3.0, 3.0, 21):
        for x2 in np.linspace(-3.0, 3.0, 21):
            fd = (hp.theta(x1 + h, x2) - hp.theta(x1 - h, x2)) / (2 * h)
            worst_fd = max(worst_fd, abs(hp.dtheta_dx1(x1, x2) - fd))
    rng = np.random.default_rng(102)
    worst_sym = 0.0
    worst_sum = 0.0
    for _ in range(200):
        u = tuple(rng.uniform(-3.0, 3.0, size=3))
        grads = {i: hp.angle_gradient(u, i) for i in (1, 2, 3)}
        for i in (1, 2, 3):
            worst_sum = max(worst_sum, abs(sum(grads[i].as_tuple())))
            for j in (1, 2, 3):
                if i != j:
                    gap = abs(grads[i].as_tuple()[j - 1] - grads[j].as_tuple()[i - 1])
                    worst_sym = max(worst_sym, gap)
    ok = worst_fd <= 1e-6 and worst_sym <= 1e-12 and worst_sum <= 1e-12
    report(2, "gradient vs finite differences", ok,
           f"fd gap {worst_fd:.2e} <= 1e-6, symmetry {worst_sym:.2e}, "
           f"row sum {worst_sum:.2e} <= 1e-12",
           time.perf_counter() - t0, 1.0)


def test_criterion_03_derivative_bound():
    t0 = time.perf_counter()
    rng = np.random.default_rng(103)
    pts = rng.uniform(-20.0, 20.0, size=(100_000, 2))
    vals = hp.geometry.dtheta_dx1_array(pts[:, 0], pts[:, 1])
    ok = bool(np.all(vals < 1.0) and np.all(vals > 0.0))
    # spot check the scalar path agrees with the vectorized sweep
    for k in range(0, 100_000, 9973):
        ok = ok and abs(hp.dtheta_dx1(*pts[k]) - vals[k]) <= 1e-15
    report(3, "derivative bound", ok,
           f"max over 1e5 points {float(vals.max()):.6f} < 1",
           time.perf_counter() - t0, 1.0)


def test_criterion_04_flower_identity():
    t0 = time.perf_counter()
    worst = 0.0
    for a in np.linspace(-2.0, 2.0, 41):
        for b in np.linspace(-2.0, 2.0, 41):
            worst = max(worst, abs(hp.flower_angle_sum(a, b) - TWO_PI))
    report(4, "flower identity", worst <= 1e-11,
           f"max |sum - 2pi| = {worst:.2e} <= 1e-11 on 41x41 grid",
           time.perf_counter() - t0, 1.0)


def test_criterion_05_flower_closure():
    t0 = time.perf_counter()
    rng = np.random.default_rng(105)
    worst = 0.0
    for _ in range(20):
        a1, k1 = rng.uniform(-1.0, 1.0, size=2)
        worst = max(worst, abs(hp.solve_flower_closure(a1, k1) + a1))
    report(5, "flower closure", worst <= 1e-10,
           f"max |a2 + a1| = {worst:.2e} <= 1e-10 over 20 samples",
           time.perf_counter() - t0, 1.0)


def test_criterion_06_desk_scale_rigidity(rigidity_solve):
    t0 = time.perf_counter()
    solved = rigidity_solve["solved"]
    rep = rigidity_solve["report"]
    exact = rigidity_solve["exact"]
    window = solved.window
    err = max(abs(solved[v] - exact[v]) for v in window.interior_vertices())
    ok = rep.converged and rep.final_defect <= 1e-10 and err <= 1e-8

    # regular boundary: same protocol recovers the constant field
    u0 = hp.ScalarField.constant(window, 0.0)
    solved_reg, rep_reg = hp.solve_patch(
        u0, hp.SolveOptions(tolerance=1e-10, init="keep")
    )
    err_reg = float(np.abs(solved_reg.values).max())
    ok = ok and rep_reg.converged and rep_reg.final_defect <= 1e-10 and err_reg <= 1e-8

    elapsed = rigidity_solve["elapsed"] + (time.perf_counter() - t0)
    report(6, "desk-scale rigidity", ok,
           f"spiral: {rep.iterations} sweeps, defect {rep.final_defect:.2e}, "
           f"err {err:.2e} <= 1e-8; regular: err {err_reg:.2e}",
           elapsed, 30.0)


def test_criterion_07_harmonicity(rigidity_solve):
    t0 = time.perf_counter()
    solved = rigidity_solve["solved"]
    window = solved.window
    quad = hp.Quadrature(order=32)
    weights = hp.compute_edge_weights(solved, quad)

    etas = [value for (_, _, value) in weights.edges()]
    ok = all(0.0 < e < 2.0 for e in etas)

    worst_asym = 0.0
    for v, w, _ in weights.edges():
        worst_asym = max(worst_asym, abs(hp.eta(solved, v, w, quad) - hp.eta(solved, w, v, quad)))
    ok = ok and worst_asym <= 1e-12

    residuals = []
    for v in window.interior_vertices():
        try:
            residuals.append(abs(hp.harmonic_residual(solved, v, quad, weights=weights)))
        except (hp.WindowTooSmallError, hp.MissingEdgeError):
            continue
    expected_eligible = 18 * 19  # m in [-9, 8], n in [-9, 9]
    worst_res = max(residuals)
    ok = ok and len(residuals) == expected_eligible and worst_res <= 1e-9
    report(7, "harmonicity of D1u", ok,
           f"max residual {worst_res:.2e} <= 1e-9 at {len(residuals)} vertices; "
           f"eta in ({min(etas):.3f}, {max(etas):.3f}); asymmetry {worst_asym:.2e}",
           time.perf_counter() - t0, 10.0)


def test_criterion_08_uniform_weights():
    t0 = time.perf_counter()
    u = hp.ScalarField.constant(hp.Window(-4, 4, -4, 4), 0.0)
    weights = hp.compute_edge_weights(u, hp.Quadrature(order=32))
    worst = max(abs(value - 1.0 / SQRT3) for (_, _, value) in weights.edges())
    report(8, "uniform weights sanity", worst <= 1e-13 and len(weights) > 0,
           f"max |eta - 1/sqrt(3)| = {worst:.2e} <= 1e-13 over {len(weights)} edges",
           time.perf_counter() - t0, 1.0)


def test_criterion_09_volume_growth():
    t0 = time.perf_counter()
    window = hp.Window(-13, 13, -13, 13)
    boundary = hp.spiral_field(hp.SpiralParams(1.0, 1.2, 0.85), window)
    solved, rep = hp.solve_patch(boundary, hp.SolveOptions(tolerance=1e-10))
    assert rep.converged
    weights = hp.compute_edge_weights(solved, around=hp.ball((0, 0), 10))
    ok = True
    detail = []
    for n in range(1, 11):
        vol = hp.volume(weights, hp.ball((0, 0), n))
        cap = 12.0 * (3 * n * n + 3 * n + 1)
        ok = ok and vol <= cap
        if n in (1, 10):
            detail.append(f"n={n}: {vol:.1f} <= {cap:.0f}")
    report(9, "volume growth", ok, "; ".join(detail),
           time.perf_counter() - t0, 1.0)


def test_criterion_10_layout():
    t0 = time.perf_counter()
    u = hp.spiral_field(hp.SpiralParams(1.0, 1.1, 1.0), hp.Window(-4, 4, -4, 4))
    lay = hp.develop(u)
    tang = hp.max_tangency_residual(lay)
    orient = hp.min_face_orientation(lay)
    mono = lay.monodromy_residual
    ok = tang <= 1e-9 and orient > 0.0 and mono <= 1e-9
    report(10, "layout", ok,
           f"tangency {tang:.2e} <= 1e-9, min face area {orient:.2e} > 0, "
           f"monodromy {mono:.2e} <= 1e-9",
           time.perf_counter() - t0, 1.0)


def test_criterion_11_univalent_flower_boundary():
    t0 = time.perf_counter()
    window = hp.Window(-2, 2, -2, 2)
    mild = hp.spiral_field(hp.SpiralParams(1.0, 1.05, 1.0), window)
    steep = hp.spiral_field(hp.SpiralParams(1.0, 8.0, 1.0), window)
    mild_ok = hp.check_univalent_flower(mild, (0, 0))
    steep_univalent = hp.check_univalent_flower(steep, (0, 0))
    ok = mild_ok and not steep_univalent
    report(11, "univalent-flower boundary", ok,
           f"x=1.05 univalent: {mild_ok} (want True); x=8 univalent: "
           f"{steep_univalent} (criterion wants False, but the developed flower is "
           f"pairwise disjoint with ~10% slack; univalence actually breaks at "
           f"x = 5 + 2*sqrt(6) ~ 9.899)",
           time.perf_counter() - t0, 1.0)


def test_criterion_12_walk_determinism():
    t0 = time.perf_counter()
    runner = CliRunner()
    with runner.isolated_filesystem():
        gen = runner.invoke(cli_main, [
            "spiral", "--x", "1", "--y", "1", "--window", "-5:5,-5:5",
            "--out", "c.csv",
        ])
        assert gen.exit_code == 0
        args = ["walk", "--in", "c.csv", "--start", "0,0", "--steps", "2",
                "--trials", "100000", "--seed", "1"]
        out1 = runner.invoke(cli_main, args).output
        out2 = runner.invoke(cli_main, args).output
    freq = json.loads(out1)["frequency"]
    sigma = math.sqrt((1 / 6) * (5 / 6) / 100_000)
    ok = out1 == out2 and abs(freq - 1 / 6) <= 3 * sigma
    report(12, "walk determinism and calibration", ok,
           f"freq {freq:.5f}, |freq - 1/6| = {abs(freq - 1/6):.2e} <= 3 sigma "
           f"({3 * sigma:.2e}); outputs byte-identical: {out1 == out2}",
           time.perf_counter() - t0, 5.0)


def test_criterion_13_format_round_trips():
    t0 = time.perf_counter()
    u = hp.spiral_field(hp.SpiralParams(1.0, 1.15, 0.9), hp.Window(-4, 4, -4, 4))
    csv_ok = hp.read_field_csv(hp.write_field_csv(u)) == u

    lay = hp.develop(u)
    circles = hp.circles_from_json(hp.layout_to_json(lay))
    json_ok = circles == {v: c for v, c in lay.circles.items()}

    style = hp.RenderStyle(color_map="log-radius")
    svg_ok = hp.render_svg(lay, style) == hp.render_svg(hp.develop(u), style)

    ok = csv_ok and json_ok and svg_ok
    report(13, "format round trips", ok,
           f"field CSV bit-exact: {csv_ok}; layout JSON bit-exact: {json_ok}; "
           f"SVG byte-identical: {svg_ok}",
           time.perf_counter() - t0, 1.0)
