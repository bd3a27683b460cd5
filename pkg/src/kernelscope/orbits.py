"""Classification of a single parameter by iterating its singular orbits.

A parameter is NonescapingHyperbolic when every singular value is captured
by an attracting cycle, SingularEscape when some singular orbit leaves the
escape radius (or overflows), and Unresolved otherwise.  Unresolved is a
first-class outcome: a finite budget cannot split "not yet converged" from
"converging to an indifferent cycle", and cycles with multiplier within
``attracting_margin`` of the unit circle are deliberately not recorded.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import _kernels as _k
from . import families
from .families import FamilySpec, get_family


class Verdict(enum.Enum):
    NONESCAPING_HYPERBOLIC = "NonescapingHyperbolic"
    SINGULAR_ESCAPE = "SingularEscape"
    UNRESOLVED = "Unresolved"


_VERDICT_BY_CODE = {
    _k.V_ESCAPE: Verdict.SINGULAR_ESCAPE,
    _k.V_UNRESOLVED: Verdict.UNRESOLVED,
    _k.V_HYPERBOLIC: Verdict.NONESCAPING_HYPERBOLIC,
}

_OUTCOME_BY_CODE = {
    _k.OUT_CAPTURED: "captured",
    _k.OUT_ESCAPED: "escaped",
    _k.OUT_UNRESOLVED: "unresolved",
}


@dataclass(frozen=True)
class OrbitBudget:
    """Iteration and tolerance budget for orbit classification."""

    max_iterations: int = 2000
    escape_radius: float = 1e10
    cycle_tolerance: float = 1e-9
    attracting_margin: float = 1e-6
    max_period: int = 64

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.max_period < 1:
            raise ValueError("max_period must be >= 1")
        if not self.escape_radius > 1.0:
            raise ValueError("escape_radius must exceed 1")
        if not (0.0 < self.cycle_tolerance < self.attracting_margin < 1.0):
            raise ValueError("need 0 < cycle_tolerance < attracting_margin < 1")


class SingularOutcome(NamedTuple):
    value: complex
    outcome: str  # "captured" | "escaped" | "unresolved"
    iterations: int


@dataclass(frozen=True)
class CycleRecord:
    """A detected attracting cycle."""

    points: tuple[complex, ...]
    period: int
    multiplier: complex


@dataclass(frozen=True)
class ParameterClassification:
    verdict: Verdict
    cycles: tuple[CycleRecord, ...]
    per_singular_value: tuple[SingularOutcome, ...]
    family: FamilySpec = field(repr=False, default=None)
    n: object = field(repr=False, default=None)
    lam: complex = field(repr=False, default=None)


def _cycle_points(code: int, nk: int, lam: complex, root: complex,
                  period: int) -> tuple[complex, ...]:
    aux, _ok = _k._family_aux(code, nk, lam)
    pts = []
    w = root
    for _ in range(period):
        pts.append(complex(w))
        w = _k._eval_map(code, nk, lam, aux, w)
    return tuple(pts)


def classify_parameter(family: FamilySpec | str, n, lam: complex,
                       budget: OrbitBudget | None = None) -> ParameterClassification:
    """Iterate every singular value of f_{n,lambda} and classify the parameter."""
    spec = get_family(family)
    budget = budget or OrbitBudget()
    lam = complex(lam)
    nk = families._coerce_index(spec, n)
    families._validate_parameter(spec, nk, lam)
    svs = families.singular_values(spec, n, lam)

    sv_arr = np.empty(max(_k.MAX_SV, len(svs)), np.complex128)
    for i, s in enumerate(svs):
        sv_arr[i] = s
    nsv = len(svs)
    tail = np.empty(4 * budget.max_period, np.complex128)
    outcomes = np.empty(nsv, np.int64)
    iters = np.empty(nsv, np.int64)
    periods = np.empty(nsv, np.int64)
    roots = np.empty(nsv, np.complex128)
    mults = np.empty(nsv, np.complex128)
    keep = np.empty(nsv, np.bool_)
    buf_a = np.empty(budget.max_period, np.complex128)
    buf_b = np.empty(budget.max_period, np.complex128)

    aux, _ok = _k._family_aux(spec.code, nk, lam)
    code = _k._classify_cell(
        spec.code, nk, lam, aux, sv_arr, nsv,
        budget.max_iterations, budget.escape_radius, budget.cycle_tolerance,
        budget.attracting_margin, budget.max_period,
        tail, outcomes, iters, periods, roots, mults, keep, buf_a, buf_b)

    per_sv = tuple(
        SingularOutcome(svs[i], _OUTCOME_BY_CODE[int(outcomes[i])], int(iters[i]))
        for i in range(nsv))
    verdict = _VERDICT_BY_CODE[int(code)]
    # cycles are reported only for hyperbolic parameters, even when some
    # singular value was captured before another escaped
    if verdict is Verdict.NONESCAPING_HYPERBOLIC:
        cycles = tuple(
            CycleRecord(_cycle_points(spec.code, nk, lam, complex(roots[i]),
                                      int(periods[i])),
                        int(periods[i]), complex(mults[i]))
            for i in range(nsv) if keep[i])
    else:
        cycles = ()
    return ParameterClassification(
        verdict=verdict, cycles=cycles, per_singular_value=per_sv,
        family=spec, n=n, lam=lam)


def detect_cycle(orbit_tail: Sequence[complex],
                 budget: OrbitBudget | None = None) -> Optional[tuple[complex, int]]:
    """Near-periodicity test on the most recent orbit points.

    Returns ``(candidate, period)`` for the smallest period ``p`` whose last
    three lag-p steps each close within ``cycle_tolerance * (1 + |point|)``,
    the candidate being the most recent point; ``None`` when no period
    qualifies.  A period ``p`` needs at least ``3p + 1`` trailing points, so
    the intended tail length is ``4 * max_period``.
    """
    budget = budget or OrbitBudget()
    tail = np.asarray([complex(z) for z in orbit_tail], np.complex128)
    if tail.size == 0:
        return None
    p = _k._detect_in_ring(tail, tail.size, budget.max_period,
                           budget.cycle_tolerance)
    if p == 0:
        return None
    return complex(tail[-1]), int(p)


def refine_cycle(family: FamilySpec | str, n, lam: complex, candidate: complex,
                 period: int, budget: OrbitBudget | None = None) -> Optional[CycleRecord]:
    """Newton-refine a near-periodic candidate into an attracting CycleRecord.

    Newton iteration runs on g(z) = f^period(z) - z with the chain-rule
    derivative along the orbit, at most 50 steps.  The period is minimized
    over proper divisors afterwards.  Returns ``None`` unless the iteration
    converges to a cycle with |multiplier| <= 1 - attracting_margin.
    """
    spec = get_family(family)
    budget = budget or OrbitBudget()
    lam = complex(lam)
    nk = families._coerce_index(spec, n)
    families._validate_parameter(spec, nk, lam)
    if period < 1:
        raise ValueError("period must be >= 1")
    aux, _ok = _k._family_aux(spec.code, nk, lam)
    ok, root, p, mult = _k._refine_cycle_impl(
        spec.code, nk, lam, aux, complex(candidate), int(period),
        budget.cycle_tolerance, budget.attracting_margin)
    if not ok:
        return None
    return CycleRecord(_cycle_points(spec.code, nk, lam, complex(root), int(p)),
                       int(p), complex(mult))


def orbit(family: FamilySpec | str, n, lam: complex, z0: complex,
          steps: int, budget: OrbitBudget | None = None) -> list[complex]:
    """Forward orbit of z0, truncated at escape/overflow; diagnostic helper."""
    spec = get_family(family)
    budget = budget or OrbitBudget()
    lam = complex(lam)
    nk = families._coerce_index(spec, n)
    families._validate_parameter(spec, nk, lam)
    aux, _ok = _k._family_aux(spec.code, nk, lam)
    out = [complex(z0)]
    z = complex(z0)
    for _ in range(steps):
        z = _k._eval_map(spec.code, nk, lam, aux, z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            break
        out.append(complex(z))
        if abs(z) > budget.escape_radius:
            break
    return out
