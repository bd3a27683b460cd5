"""Parameter-plane sweeps and the kernel-convergence pipeline.

``scan`` classifies every cell center of a grid independently, so scans are
embarrassingly parallel: the grid is split into row chunks, each processed
by the (nogil) classification kernel on a worker thread, writing into
disjoint slices of preallocated arrays.  Results are bit-identical for any
worker count.

``convergence_report`` realizes the convergence dichotomy empirically: the
hyperbolic component of a seed parameter is extracted for each finite index,
the kernel of that mask sequence is estimated, and the limit family's scan
decides between a matching limit component and a limit that is nowhere
hyperbolic inside the kernel.
"""

from __future__ import annotations

import csv
import enum
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels as _k
from . import families
from .errors import SeedNotHyperbolic
from .families import INF, FamilySpec, get_family
from .orbits import OrbitBudget, Verdict, classify_parameter
from .setgeom import (GridMask, GridSpec, KernelEstimate, component_of,
                      empty_mask, kernel_estimate, mask_hausdorff,
                      symmetric_difference_fraction)

_VERDICT_BY_CODE = {
    _k.V_ESCAPE: Verdict.SINGULAR_ESCAPE,
    _k.V_UNRESOLVED: Verdict.UNRESOLVED,
    _k.V_HYPERBOLIC: Verdict.NONESCAPING_HYPERBOLIC,
}

#: PGM gray levels per verdict code (escape, unresolved, hyperbolic)
PGM_LEVELS = (0, 128, 255)

_ROW_CHUNK = 16


class DichotomyVerdict(enum.Enum):
    MATCHES_LIMIT_COMPONENT = "MatchesLimitComponent"
    LIMIT_NOWHERE_HYPERBOLIC = "LimitNowhereHyperbolic"
    INCONCLUSIVE = "Inconclusive"


def default_workers() -> int:
    """Worker-thread cap: KERNELSCOPE_THREADS if set, else the machine default."""
    env = os.environ.get("KERNELSCOPE_THREADS")
    if env:
        value = int(env)
        if value < 1:
            raise ValueError("KERNELSCOPE_THREADS must be a positive integer")
        return value
    return os.cpu_count() or 1


@dataclass
class ScanResult:
    """Per-cell classification of one (family, n) over a grid."""

    family: FamilySpec
    n: object
    grid: GridSpec
    budget: OrbitBudget
    verdicts: np.ndarray      # uint8 codes (ny, nx)
    iterations: np.ndarray    # int64, summed over singular values
    periods: np.ndarray       # int32 (ny, nx, MAX_SV), sorted, 0-padded
    domain_invalid: np.ndarray  # bool; Unresolved cells with a domain flag

    def verdict_at(self, i: int, j: int) -> Verdict:
        return _VERDICT_BY_CODE[int(self.verdicts[j, i])]

    def period_signature(self, i: int, j: int) -> tuple[int, ...]:
        """Multiset of attracting-cycle periods; empty unless hyperbolic."""
        sig = self.periods[j, i]
        return tuple(int(p) for p in sig if p > 0)

    def hyperbolic_mask(self) -> GridMask:
        return GridMask(self.grid, self.verdicts == _k.V_HYPERBOLIC)

    def counts(self) -> dict[str, int]:
        return {v.value: int((self.verdicts == c).sum())
                for c, v in _VERDICT_BY_CODE.items()}

    def render_pgm(self) -> str:
        """P2 verdict image: 0 escape, 128 unresolved, 255 hyperbolic."""
        g = self.grid
        lines = ["P2",
                 f"# gridspec {g.origin.real!r} {g.origin.imag!r} "
                 f"{g.width!r} {g.height!r} {g.nx} {g.ny}",
                 f"{g.nx} {g.ny}", "255"]
        levels = np.asarray(PGM_LEVELS, dtype=np.int32)[self.verdicts]
        for j in range(g.ny):
            lines.append(" ".join(str(v) for v in levels[j]))
        return "\n".join(lines) + "\n"

    def render_csv(self) -> str:
        g = self.grid
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["i", "j", "lambda_re", "lambda_im",
                         "verdict", "periods", "iterations"])
        for j in range(g.ny):
            for i in range(g.nx):
                lam = g.center(i, j)
                sig = self.period_signature(i, j)
                writer.writerow([
                    i, j, repr(lam.real), repr(lam.imag),
                    self.verdict_at(i, j).value,
                    "+".join(str(p) for p in sig),
                    int(self.iterations[j, i]),
                ])
        return buf.getvalue()

    def to_pgm(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.render_pgm())

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="ascii") as fh:
            fh.write(self.render_csv())


def scan(family: FamilySpec | str, n, grid: GridSpec,
         budget: OrbitBudget | None = None,
         workers: int | None = None) -> ScanResult:
    """Classify every cell center of the grid for f_{n, lambda}.

    Domain-invalid cells (e.g. the cubic family's excluded segment) are
    recorded Unresolved with ``domain_invalid`` set instead of erroring.
    """
    spec = get_family(family)
    budget = budget or OrbitBudget()
    nk = families._coerce_index(spec, n)
    if workers is None:
        workers = default_workers()

    if spec.code == _k.FAM_CHEB_SINE:
        const = np.asarray(families.singular_values(spec, n, 0j), np.complex128)
    else:
        const = np.empty(0, np.complex128)

    verdicts = np.zeros((grid.ny, grid.nx), dtype=np.uint8)
    iterations = np.zeros((grid.ny, grid.nx), dtype=np.int64)
    periods = np.zeros((grid.ny, grid.nx, _k.MAX_SV), dtype=np.int32)
    invalid = np.zeros((grid.ny, grid.nx), dtype=bool)

    def run_chunk(j0: int, j1: int) -> None:
        _k._scan_rows(spec.code, nk, const, const.size,
                      grid.origin.real, grid.origin.imag,
                      grid.cell_width, grid.cell_height, grid.nx, j0, j1,
                      budget.max_iterations, budget.escape_radius,
                      budget.cycle_tolerance, budget.attracting_margin,
                      budget.max_period,
                      verdicts, iterations, periods, invalid)

    chunks = [(j0, min(j0 + _ROW_CHUNK, grid.ny))
              for j0 in range(0, grid.ny, _ROW_CHUNK)]
    if workers <= 1 or len(chunks) == 1:
        for j0, j1 in chunks:
            run_chunk(j0, j1)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda c: run_chunk(*c), chunks))

    return ScanResult(spec, n, grid, budget, verdicts, iterations, periods,
                      invalid)


def hyperbolic_component(result: ScanResult, seed: complex) -> GridMask:
    """Connected hyperbolic component of the seed's cell in a scan."""
    i, j = result.grid.cell_of(seed)
    if int(result.verdicts[j, i]) != _k.V_HYPERBOLIC:
        raise SeedNotHyperbolic(
            f"seed {seed} is {result.verdict_at(i, j).value} for "
            f"{result.family.family_id} at n={result.n}")
    return component_of(result.hyperbolic_mask(), seed)


@dataclass(frozen=True)
class ConvergenceEntry:
    n: int
    cells: int
    hausdorff: float | None
    symdiff: float


@dataclass
class ConvergenceReport:
    """Per-index component measurements against the limit component."""

    family: FamilySpec
    n_list: tuple[int, ...]
    seed: complex
    threshold: float
    tail_length: int
    entries: tuple[ConvergenceEntry, ...]
    kernel: KernelEstimate
    limit_component: GridMask
    limit_hyperbolic_cells: int
    dichotomy_verdict: DichotomyVerdict
    components: tuple[GridMask, ...] = field(repr=False, default=())

    def to_json_dict(self) -> dict:
        g = self.limit_component.grid
        return {
            "entries": [
                {"n": e.n, "cells": e.cells, "hausdorff": e.hausdorff,
                 "symdiff": e.symdiff}
                for e in self.entries
            ],
            "dichotomy_verdict": self.dichotomy_verdict.value,
            "window": {
                "origin": [g.origin.real, g.origin.imag],
                "width": g.width, "height": g.height,
                "nx": g.nx, "ny": g.ny,
            },
            "family": self.family.family_id,
            "n_list": list(self.n_list),
            "seed": [self.seed.real, self.seed.imag],
            "threshold": self.threshold,
            "tail_length": self.tail_length,
            "limit_hyperbolic_cells": self.limit_hyperbolic_cells,
        }


def convergence_report(family: FamilySpec | str, n_list: Sequence[int],
                       grid: GridSpec, seed: complex,
                       budget: OrbitBudget | None = None,
                       threshold: float = 0.05, tail_length: int = 3,
                       workers: int | None = None) -> ConvergenceReport:
    """Scan each index, extract seed components, estimate their kernel, and
    compare against the limit family's scan.

    Verdict rules: LimitNowhereHyperbolic when the kernel exists but the
    limit scan has no hyperbolic cell inside it; MatchesLimitComponent when
    the limit component at the seed exists and the final index's symmetric
    difference against it is below the threshold; Inconclusive otherwise.
    """
    spec = get_family(family)
    budget = budget or OrbitBudget()
    n_list = tuple(int(n) for n in n_list)
    if len(n_list) < 2 or list(n_list) != sorted(set(n_list)):
        raise ValueError("n_list must hold >= 2 ascending, duplicate-free indices")
    seed = complex(seed)

    comps: list[GridMask] = []
    for n in n_list:
        result = scan(spec, n, grid, budget, workers)
        comps.append(hyperbolic_component(result, seed))

    kern = kernel_estimate(comps, seed, min(tail_length, len(comps)))

    limit_scan = scan(spec, INF, grid, budget, workers)
    limit_mask = limit_scan.hyperbolic_mask()
    limit_cells_in_kernel = int((limit_mask.cells & kern.mask.cells).sum())

    i, j = grid.cell_of(seed)
    if bool(limit_mask.cells[j, i]):
        limit_comp = component_of(limit_mask, seed)
    else:
        limit_comp = empty_mask(grid)

    entries = []
    for n, comp in zip(n_list, comps):
        if comp.is_empty or limit_comp.is_empty:
            hd = None
        else:
            hd = mask_hausdorff(comp, limit_comp)
        entries.append(ConvergenceEntry(
            n=n, cells=comp.count, hausdorff=hd,
            symdiff=symmetric_difference_fraction(comp, limit_comp)))

    if kern.has_kernel and limit_cells_in_kernel == 0:
        verdict = DichotomyVerdict.LIMIT_NOWHERE_HYPERBOLIC
    elif not limit_comp.is_empty and entries[-1].symdiff < threshold:
        verdict = DichotomyVerdict.MATCHES_LIMIT_COMPONENT
    else:
        verdict = DichotomyVerdict.INCONCLUSIVE

    return ConvergenceReport(
        family=spec, n_list=n_list, seed=seed, threshold=threshold,
        tail_length=tail_length, entries=tuple(entries), kernel=kern,
        limit_component=limit_comp,
        limit_hyperbolic_cells=int(limit_mask.cells.sum()),
        dichotomy_verdict=verdict, components=tuple(comps))


@dataclass(frozen=True)
class ProbeViolation:
    lam: complex
    perturbed: complex
    verdict: Verdict


@dataclass
class ProbeReport:
    tested: int
    violations: tuple[ProbeViolation, ...]
    unresolved: int

    def to_json_dict(self) -> dict:
        return {
            "tested": self.tested,
            "violations": [
                {"lambda": [v.lam.real, v.lam.imag],
                 "perturbed": [v.perturbed.real, v.perturbed.imag],
                 "verdict": v.verdict.value}
                for v in self.violations
            ],
            "unresolved": self.unresolved,
        }


def openness_probe(family: FamilySpec | str, n, samples: int, delta: float,
                   budget: OrbitBudget | None = None,
                   seed_region: GridMask | None = None,
                   rng_seed: int = 0) -> ProbeReport:
    """Perturb hyperbolic parameters by +-delta and +-i*delta and reclassify.

    A violation is any perturbed verdict of SingularEscape; Unresolved
    perturbations are counted separately (they are budget artifacts, not
    openness failures).  Cells are drawn from ``seed_region``, whose cells
    the caller asserts to be NonescapingHyperbolic, with a seeded generator
    so probes are reproducible.
    """
    spec = get_family(family)
    budget = budget or OrbitBudget()
    if seed_region is None or seed_region.is_empty:
        raise ValueError("openness_probe needs a nonempty seed_region mask")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    rng = np.random.default_rng(rng_seed)
    js, is_ = np.nonzero(seed_region.cells)
    order = np.arange(js.size)
    picked = rng.choice(order, size=min(samples, js.size), replace=False)

    violations: list[ProbeViolation] = []
    unresolved = 0
    tested = 0
    for idx in picked:
        lam = seed_region.grid.center(int(is_[idx]), int(js[idx]))
        tested += 1
        for offset in (delta, -delta, delta * 1j, -delta * 1j):
            perturbed = lam + offset
            try:
                cls = classify_parameter(spec, n, perturbed, budget)
            except Exception:
                unresolved += 1
                continue
            if cls.verdict is Verdict.SINGULAR_ESCAPE:
                violations.append(ProbeViolation(lam, perturbed, cls.verdict))
            elif cls.verdict is Verdict.UNRESOLVED:
                unresolved += 1
    return ProbeReport(tested=tested, violations=tuple(violations),
                       unresolved=unresolved)


def period_stability_map(result: ScanResult) -> dict[tuple[int, ...], GridMask]:
    """Partition hyperbolic cells by their cycle-period multiset signature."""
    out: dict[tuple[int, ...], np.ndarray] = {}
    js, is_ = np.nonzero(result.verdicts == _k.V_HYPERBOLIC)
    for j, i in zip(js, is_):
        sig = result.period_signature(int(i), int(j))
        if sig not in out:
            out[sig] = np.zeros(result.verdicts.shape, dtype=bool)
        out[sig][j, i] = True
    return {sig: GridMask(result.grid, cells) for sig, cells in out.items()}
