"""Acceptance suite: every criterion at its stated size and tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.  The heavy grids assume the compiled kernels (the default);
expect the whole module to finish in well under five minutes.
"""

import cmath
import math
import time

import numpy as np
import pytest

import kernelscope as ks
from kernelscope import INF, DichotomyVerdict, GridSpec, Verdict
from kernelscope.families import cubic_fixed_point, mu_n

from conftest import random_disk


def report(num: int, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {num} [{'PASS' if ok else 'FAIL'}] {detail}")
    assert ok, f"criterion {num}: {detail}"


# -- 1: convergence dichotomy, case (i), cubic family ---------------------------

def test_criterion_1_cubic_limit_nowhere_hyperbolic():
    t0 = time.time()
    grid = GridSpec(complex(-0.9, -0.9), 1.8, 1.8, 200, 200)
    rep = ks.convergence_report("cubic_example", [4, 16, 64], grid, 0j,
                                threshold=0.05)
    centers = grid.centers()
    disk9 = np.abs(centers) <= 0.9
    disk8 = np.abs(centers) <= 0.8
    ok = rep.dichotomy_verdict is DichotomyVerdict.LIMIT_NOWHERE_HYPERBOLIC
    ok &= rep.limit_hyperbolic_cells == 0
    ok &= rep.kernel.has_kernel and rep.kernel.mask.count > 0
    fractions = []
    for n in (4, 16, 64):
        scan_n = ks.scan("cubic_example", n, grid)
        hyper = scan_n.verdicts == 2
        escape = scan_n.verdicts == 0
        fractions.append((hyper & disk9).sum() / disk9.sum())
        ok &= fractions[-1] >= 0.99
        ok &= not (escape & disk8).any()
    elapsed = time.time() - t0
    ok &= elapsed <= 180
    report(1, ok, f"verdict={rep.dichotomy_verdict.value}, limit NH cells="
                  f"{rep.limit_hyperbolic_cells}, disk NH fractions="
                  f"{[round(f, 5) for f in fractions]}, {elapsed:.0f}s")


# -- 2: convergence dichotomy, case (ii), exponential family ---------------------

def test_criterion_2_exp_kernel_matches_limit_component():
    t0 = time.time()
    grid = GridSpec(complex(-1.2, -0.9), 1.8, 1.8, 300, 300)
    rep = ks.convergence_report("exp_poly", [8, 32, 128], grid, 0.25 + 0j,
                                threshold=0.05)
    symdiffs = [e.symdiff for e in rep.entries]
    ok = rep.dichotomy_verdict is DichotomyVerdict.MATCHES_LIMIT_COMPONENT
    ok &= all(a > b for a, b in zip(symdiffs, symdiffs[1:]))
    ok &= symdiffs[-1] < 0.05

    # independent oracle: classifying exactly-real parameters at the grid's
    # column centers reproduces (-e, 1/e) on the window within 2 cells at
    # each endpoint (solve z e^{-z} = lambda with |z| < 1; real slice)
    hyper = []
    for i in range(grid.nx):
        x = grid.center(i, 0).real
        cls = ks.classify_parameter("exp_poly", INF, complex(x, 0.0))
        hyper.append(cls.verdict is Verdict.NONESCAPING_HYPERBOLIC)
    idx = np.nonzero(hyper)[0]
    h = grid.cell_width
    contiguous = bool(np.all(np.diff(idx) == 1))
    left = grid.center(int(idx.min()), 0).real
    right = grid.center(int(idx.max()), 0).real
    expected_left = max(-math.e, -1.2)
    expected_right = 1 / math.e
    ok &= contiguous
    ok &= abs(left - expected_left) <= 2 * h
    ok &= abs(right - expected_right) <= 2 * h
    elapsed = time.time() - t0
    ok &= elapsed <= 480
    report(2, ok, f"verdict={rep.dichotomy_verdict.value}, symdiffs="
                  f"{[round(s, 5) for s in symdiffs]}, real slice="
                  f"[{left:.4f}, {right:.4f}] vs ({expected_left:.4f}, "
                  f"{expected_right:.4f}), {elapsed:.0f}s")


# -- 3: multiplier identities -----------------------------------------------------

def test_criterion_3_multiplier_identities(rng):
    t0 = time.time()
    ns = rng.integers(1, 101, 200)
    lams = random_disk(rng, 200, 0.9)
    worst = 0.0
    for n, lam in zip(ns, lams):
        n, lam = int(n), complex(lam)
        rec0 = ks.refine_cycle("cubic_example", n, lam, 0j, 1)
        rec1 = ks.refine_cycle("cubic_example", n, lam, cubic_fixed_point(n, lam), 1)
        assert rec0 is not None and rec1 is not None
        worst = max(worst, abs(rec0.multiplier - lam),
                    abs(rec1.multiplier - mu_n(n)))
    ok = worst <= 1e-8
    worst_limit = 0.0
    for lam in random_disk(rng, 50, 0.9):
        lam = complex(lam)
        mult = ks.derivative("cubic_example", INF, lam, cmath.sqrt(lam - 1.0))
        worst_limit = max(worst_limit, abs(mult - 1.0))
    ok &= worst_limit <= 1e-10
    report(3, ok, f"200 refinements: worst error {worst:.2e} (tol 1e-8); "
                  f"50 parabolic multipliers: worst {worst_limit:.2e} "
                  f"(tol 1e-10), {time.time() - t0:.0f}s")


# -- 4: metric separation and non-openness witness ---------------------------------

def test_criterion_4_metric_separation_and_non_openness():
    t0 = time.time()
    luc, _bound = ks.chi_luc(("gauss_exp", INF, 0.01), ("gauss_exp", INF, 0.0), 6)
    rep = ks.chi_dyn(("gauss_exp", INF, 0.01), ("gauss_exp", INF, 0.0), 6)
    ok = luc <= 0.2 and rep.hausdorff_singular >= 1.9

    base = ks.classify_parameter("quad_exp", INF, 0.0)
    pert = ks.classify_parameter("quad_exp", INF, 0.05)
    ok &= base.verdict is Verdict.NONESCAPING_HYPERBOLIC
    ok &= pert.verdict is Verdict.SINGULAR_ESCAPE
    report(4, ok, f"chi_luc={luc:.4f} (<=0.2), hausdorff={rep.hausdorff_singular:.4f} "
                  f"(>=1.9); quad_exp verdicts {base.verdict.value} / "
                  f"{pert.verdict.value}, {time.time() - t0:.0f}s")


# -- 5: synthetic kernel corpus ------------------------------------------------------

def test_criterion_5_kernel_corpus():
    from test_setgeom import (alternating_disk_masks, chamber_masks,
                              slit_plane_masks)
    t0 = time.time()

    _grid, masks = chamber_masks()
    kernels = [ks.kernel_estimate(masks, mark, 3).mask
               for mark in (1 + 3j, 3 + 3j, 5 + 3j)]
    distinct = all(not np.array_equal(kernels[a].cells, kernels[b].cells)
                   for a in range(3) for b in range(a + 1, 3))
    ok = distinct and all(k.count > 0 for k in kernels)

    grid, masks = alternating_disk_masks()
    est = ks.kernel_estimate(masks, 0j, 3)
    ok &= est.has_kernel
    ok &= np.array_equal(est.mask.cells, ks.disk_mask(grid, 0j, 1.0).cells)

    grid, masks = slit_plane_masks()
    est = ks.kernel_estimate(masks, -1 + 0j, 3)
    left = ks.rasterize(grid, lambda z: z.real < 0)
    dist = ks.mask_hausdorff(est.mask, left)
    ok &= est.has_kernel and dist <= 2 * grid.cell_diagonal
    report(5, ok, f"three distinct chamber kernels; alternating disks give "
                  f"the unit disk; slit-plane kernel within {dist:.4f} "
                  f"(<= {2 * grid.cell_diagonal:.4f}) of the left half-plane, "
                  f"{time.time() - t0:.0f}s")


# -- 6: openness probes ----------------------------------------------------------------

def test_criterion_6_openness_probes():
    t0 = time.time()
    grid = GridSpec(complex(-0.9, -0.9), 1.8, 1.8, 200, 200)
    scan16 = ks.scan("cubic_example", 16, grid)
    region = ks.GridMask(grid, scan16.hyperbolic_mask().cells
                         & (np.abs(grid.centers()) <= 0.8))
    probe_cubic = ks.openness_probe("cubic_example", 16, 50, grid.cell_width,
                                    scan16.budget, region)
    ok = probe_cubic.tested == 50 and not probe_cubic.violations

    egrid = GridSpec(complex(-1.2, -0.9), 1.8, 1.8, 300, 300)
    escan = ks.scan("exp_poly", INF, egrid)
    centers = egrid.centers()
    _i, j = egrid.cell_of(complex(0.2, 0.0))
    band = np.zeros_like(escan.verdicts, dtype=bool)
    band[j] = True
    interval = band & (centers.real > 0.1) & (centers.real < 0.3)
    region = ks.GridMask(egrid, escan.hyperbolic_mask().cells & interval)
    probe_exp = ks.openness_probe("exp_poly", INF, 50, egrid.cell_width,
                                  escan.budget, region)
    ok &= not probe_exp.violations
    elapsed = time.time() - t0
    ok &= elapsed <= 60
    report(6, ok, f"cubic: {probe_cubic.tested} tested, "
                  f"{len(probe_cubic.violations)} violations; exp: "
                  f"{probe_exp.tested} tested, {len(probe_exp.violations)} "
                  f"violations, {elapsed:.0f}s")


# -- 7: determinism and metric-axiom suites ----------------------------------------------

def test_criterion_7_determinism_and_axioms(rng):
    t0 = time.time()
    grid = GridSpec(complex(-0.9, -0.9), 1.8, 1.8, 120, 120)
    r1 = ks.scan("cubic_example", 8, grid, workers=1)
    r4 = ks.scan("cubic_example", 8, grid, workers=4)
    ok = (np.array_equal(r1.verdicts, r4.verdicts)
          and np.array_equal(r1.iterations, r4.iterations)
          and np.array_equal(r1.periods, r4.periods))

    def random_set():
        return [complex(z) for z in random_disk(rng, int(rng.integers(1, 6)), 5.0)]
    for _ in range(200):
        a, b, c = random_set(), random_set(), random_set()
        ok &= ks.hausdorff_distance(a, b) == ks.hausdorff_distance(b, a)
        ok &= (ks.hausdorff_distance(a, b)
               <= ks.hausdorff_distance(a, c) + ks.hausdorff_distance(c, b))
    for _ in range(200):
        x, y = complex(random_disk(rng, 1, 30)[0]), complex(random_disk(rng, 1, 30)[0])
        ok &= ks.chordal_distance(x, y) == ks.chordal_distance(y, x)
        ok &= (ks.chordal_distance(x, y) == 0) == (x == y)

    h = 1e-6
    worst = 0.0
    for family, n, lam in [("exp_poly", 32, 0.7 + 0.2j),
                           ("cubic_example", 8, 0.3 - 0.4j),
                           ("quad_exp", INF, 0.5 + 0.1j),
                           ("gauss_exp", INF, 0.8 - 0.3j),
                           ("cheb_sine", 12, 0j)]:
        for z in random_disk(rng, 100, 3.0):
            z = complex(z)
            d = ks.derivative(family, n, lam, z)
            fd = (ks.evaluate(family, n, lam, z + h)
                  - ks.evaluate(family, n, lam, z - h)) / (2 * h)
            rel = abs(d - fd) / (1 + abs(d))
            worst = max(worst, rel)
            ok &= rel <= 1e-4
    elapsed = time.time() - t0
    ok &= elapsed <= 60
    report(7, ok, f"parallel scans bit-identical; 200 Hausdorff + 200 chordal "
                  f"axiom checks exact; derivative FD worst rel err "
                  f"{worst:.2e} (tol 1e-4), {elapsed:.0f}s")
