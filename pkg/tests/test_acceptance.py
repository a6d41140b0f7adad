"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
The heavy Monte Carlo run (criteria 2 and 9) is shared through a module fixture.
"""

import math

import numpy as np
import pytest
from conftest import CORONA, record_criterion

from alphaperim.alpha_shape import (
    alpha_edges_bruteforce,
    alpha_edges_fast,
    build_alpha_shape,
    classify_sidedness,
    hull_perimeter,
    isolated_points,
    shape_perimeter,
)
from alphaperim.diagnostics import polygon_structure, sandwich_check
from alphaperim.domains import Annulus, Disk
from alphaperim.experiment import ExperimentConfig, fit_loglog_slope, ols_loglog, run_experiment, write_raw_csv
from alphaperim.geom import EPS_GEOM, cap_area, cap_area_lower_bound, disk_centers

pytestmark = pytest.mark.slow

CORONA_SPEC = "annulus:0.25,1.0"
CONVERGENCE = dict(domain=CORONA_SPEC, alphas=[0.2], sample_sizes=[1000, 3000, 10000, 30000], replicates=100, master_seed=2013)


@pytest.fixture(scope="module")
def convergence_run():
    return run_experiment(ExperimentConfig(**CONVERGENCE))


def test_criterion_1_fast_equals_bruteforce():
    alphas = [0.05, 0.1, 0.2, 0.4, 1.0]
    domains = [Disk(1.0), Annulus(0.25, 1.0)]
    mismatches = 0
    for k in range(100):
        rng = np.random.default_rng([31, k])
        n = int(rng.integers(3, 201))
        alpha = alphas[k % len(alphas)]
        pts = domains[(k // len(alphas)) % 2].sample_uniform(n, rng)
        fast = {e.pair for e in alpha_edges_fast(pts, alpha)}
        brute = {e.pair for e in alpha_edges_bruteforce(pts, alpha)}
        mismatches += fast != brute
    assert record_criterion(1, mismatches == 0, f"mismatches={mismatches} over 100 instances")


def test_criterion_2_convergence_slope(convergence_run):
    fit = fit_loglog_slope(convergence_run, 0.2)
    ok = -0.80 <= fit.slope <= -0.55 and fit.r_squared > 0.95
    detail = f"slope={fit.slope:.4f} ci=({fit.ci_low:.3f}, {fit.ci_high:.3f}) R2={fit.r_squared:.4f}"
    assert record_criterion(2, ok, detail)


def test_criterion_3_inconsistent_at_rolling_radius():
    res = run_experiment(ExperimentConfig(CORONA_SPEC, [0.25], [30000], 20, master_seed=3))
    e = res.cells[0].error
    assert record_criterion(3, e > 0.10, f"e(alpha=0.25, n=30000)={e:.4f}")


def test_criterion_4_near_critical_degradation():
    res = run_experiment(ExperimentConfig(CORONA_SPEC, [0.2, 0.24], [30000], 50, master_seed=4))
    ratio = res.cell(30000, 0.24).error / res.cell(30000, 0.2).error
    assert record_criterion(4, ratio > 2, f"e_0.24/e_0.2={ratio:.3f}")


def test_criterion_5_disk_consistency():
    pts = Disk(1.0).sample_uniform(20000, np.random.default_rng(5))
    dev = abs(shape_perimeter(build_alpha_shape(pts, 0.5)) / (2 * math.pi) - 1)
    assert record_criterion(5, dev < 0.02, f"|ratio-1|={dev:.5f}")


def test_criterion_6_structure_suite(corona_shapes_10k):
    failures = []
    for seed, shape in enumerate(corona_shapes_10k):
        poly = polygon_structure(shape, CORONA)
        checks = {
            "isolated": len(isolated_points(shape.points, shape.alpha)) == 0,
            "one_sided": all(classify_sidedness(e).one_sided for e in shape.edges),
            "degree_two": poly.all_degree_two,
            "two_cycles": poly.cycle_count == 2,
            "sandwich": sandwich_check(shape, CORONA).holds is True,
        }
        failures += [f"seed {seed}: {name}" for name, ok in checks.items() if not ok]
    assert record_criterion(6, not failures, f"failures={failures or 0} over 20 seeds")


def test_criterion_7_hull_shape_relation(corona_shapes_10k):
    worst_excess, violations = 0.0, 0
    for shape in corona_shapes_10k:
        sp, hp = shape_perimeter(shape), hull_perimeter(shape)
        ell = shape.edge_lengths()
        excess = hp / sp - 1
        cubic = float(np.sum(ell**3)) / (16 * shape.alpha**2) / sp
        bound = float(ell.max()) ** 2 / (8 * shape.alpha**2)
        violations += not (hp >= sp and excess <= cubic and excess <= bound)
        worst_excess = max(worst_excess, excess)
    ok = violations == 0 and worst_excess < 1e-3
    detail = f"bound violations={violations}; max(hull/shape-1)={worst_excess:.2e} (needs < 1e-3)"
    assert record_criterion(7, ok, detail)


def test_criterion_8_geometric_units():
    from scipy import integrate

    worst_residual = 0.0
    rng = np.random.default_rng(8)
    for _ in range(200):
        a, b = rng.uniform(-5, 5, 2), rng.uniform(-5, 5, 2)
        alpha = float(np.hypot(*(b - a))) / (2 * rng.uniform(0.05, 1.0))
        c = disk_centers(a, b, alpha)
        for z in (c.plus, c.minus):
            worst_residual = max(worst_residual, abs(math.dist(z, a) - alpha), abs(math.dist(z, b) - alpha))

    worst_quad, bound_ok = 0.0, True
    for alpha in np.linspace(0.1, 1.0, 5):
        for h in np.linspace(alpha / 10, alpha, 10):
            upper = math.acos(1 - h / alpha)
            quad = 2 * alpha**2 * integrate.quad(lambda t: math.sin(t) ** 2, 0, upper, epsabs=1e-14)[0]
            worst_quad = max(worst_quad, abs(cap_area(alpha, h) - quad))
            bound_ok &= 2 * cap_area(alpha, h) >= cap_area_lower_bound(alpha, h)

    worst_ols = 0.0
    ns = [1000, 3000, 10000, 30000, 100000]
    for p in (-1.0, -2 / 3, -0.5, 0.25):
        fit = ols_loglog(ns, [3.0 * n**p for n in ns])
        worst_ols = max(worst_ols, abs(fit.slope - p) / abs(p))

    ok = worst_residual < EPS_GEOM and worst_quad < 1e-8 and bound_ok and worst_ols < 1e-12
    detail = f"residual={worst_residual:.1e} quad={worst_quad:.1e} cap_bound={bound_ok} ols_rel={worst_ols:.1e}"
    assert record_criterion(8, ok, detail)


def test_criterion_9_byte_identical_raw_csv(convergence_run, tmp_path):
    write_raw_csv(convergence_run, tmp_path / "first.csv")
    write_raw_csv(run_experiment(ExperimentConfig(**CONVERGENCE)), tmp_path / "second.csv")
    same = (tmp_path / "first.csv").read_bytes() == (tmp_path / "second.csv").read_bytes()
    assert record_criterion(9, same, f"raw CSV identical={same}")
