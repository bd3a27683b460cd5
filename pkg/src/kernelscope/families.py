"""Registry of built-in entire-function families.

Each family provides closed-form evaluation, complex derivative and the
finite list of singular values for every valid ``(n, lambda)``, where the
index ``n`` is a positive integer or ``INF`` (the limit member).  The five
builtins:

``exp_poly``      lam * e^z, approximated by lam * (1 + z/n)^n
``cubic_example`` z^3 - B(n, lam) z^2 + lam z with B chosen so that 0 and
                  a_n = sqrt(mu_n + lam - 2) are fixed points of multipliers
                  lam and mu_n = n/(n+1); limit B = 2 sqrt(lam - 1)
``quad_exp``      z^2 * e^(lam z)                 (no finite-index sequence)
``gauss_exp``     e^(-lam z^2 + z - 2)            (no finite-index sequence)
``cheb_sine``     T_n(1 - z^2 / (2 n^2)) -> cos z, T_n the degree-n
                  Chebyshev polynomial

All square roots and logarithms take the principal branch.  The cubic family
excludes the real segment [1, 5], which contains every degeneracy of its
closed form.

The registry (``FamilySpec`` plus ``get_family``/``list_families``) is the
extension surface, but only builtins ship: the classification machinery
needs closed-form singular values, which arbitrary user maps cannot supply.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels as _k
from .errors import DegenerateParameter, OverflowSignal

INF = float("inf")

FAMILY_IDS = ("exp_poly", "cubic_example", "quad_exp", "gauss_exp", "cheb_sine")


@dataclass(frozen=True)
class FamilySpec:
    """Identity and metadata of one builtin family."""

    family_id: str
    display_name: str
    domain_note: str
    code: int
    has_finite_indices: bool


_REGISTRY = {
    "exp_poly": FamilySpec(
        "exp_poly",
        "scaled exponential with polynomial approximants",
        "all lambda; n >= 1 or INF",
        _k.FAM_EXP_POLY,
        True,
    ),
    "cubic_example": FamilySpec(
        "cubic_example",
        "cubic with fixed points of multipliers lambda and n/(n+1)",
        "lambda in C minus the real segment [1, 5]; n >= 1 or INF",
        _k.FAM_CUBIC,
        True,
    ),
    "quad_exp": FamilySpec(
        "quad_exp",
        "z^2 exp(lambda z)",
        "all lambda; index INF only",
        _k.FAM_QUAD_EXP,
        False,
    ),
    "gauss_exp": FamilySpec(
        "gauss_exp",
        "exp(-lambda z^2 + z - 2)",
        "all lambda; index INF only",
        _k.FAM_GAUSS_EXP,
        False,
    ),
    "cheb_sine": FamilySpec(
        "cheb_sine",
        "Chebyshev approximants of cos z",
        "lambda ignored; n >= 1 or INF",
        _k.FAM_CHEB_SINE,
        True,
    ),
}


def list_families() -> tuple[FamilySpec, ...]:
    return tuple(_REGISTRY[f] for f in FAMILY_IDS)


def get_family(family: FamilySpec | str) -> FamilySpec:
    if isinstance(family, FamilySpec):
        return family
    try:
        return _REGISTRY[family]
    except KeyError:
        raise ValueError(f"unknown family id {family!r}; known: {FAMILY_IDS}") from None


def _coerce_index(spec: FamilySpec, n) -> int:
    """Map a public index (positive int or INF) to the kernel sentinel form."""
    if n == INF:
        return _k.N_INF
    if isinstance(n, float):
        if not n.is_integer():
            raise ValueError(f"family index must be a positive integer or INF, got {n!r}")
        n = int(n)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"family index must be a positive integer or INF, got {n!r}")
    if not spec.has_finite_indices:
        raise ValueError(f"family {spec.family_id!r} has no finite-index sequence")
    return n


def _validate_parameter(spec: FamilySpec, nk: int, lam: complex) -> None:
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise ValueError(f"lambda must be finite, got {lam!r}")
    if spec.code == _k.FAM_CUBIC and _k._cubic_invalid(nk, lam):
        raise DegenerateParameter(
            f"cubic_example is undefined at lambda={lam}: excluded segment [1, 5] "
            "or vanishing square root")


def mu_n(n) -> float:
    """Second fixed-point multiplier of the cubic family, n/(n+1); 1 at INF."""
    if n == INF:
        return 1.0
    return n / (n + 1.0)


def evaluate(family: FamilySpec | str, n, lam: complex, z: complex) -> complex:
    """Evaluate f_{n,lambda}(z).  Raises OverflowSignal past double range."""
    spec = get_family(family)
    nk = _coerce_index(spec, n)
    lam = complex(lam)
    z = complex(z)
    _validate_parameter(spec, nk, lam)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"z must be finite, got {z!r}")
    aux, _ok = _k._family_aux(spec.code, nk, lam)
    w = _k._eval_map(spec.code, nk, lam, aux, z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise OverflowSignal(
            f"{spec.family_id} value at n={n}, lambda={lam}, z={z} exceeds double range")
    return w


def derivative(family: FamilySpec | str, n, lam: complex, z: complex) -> complex:
    """Closed-form derivative f'_{n,lambda}(z); never finite differences."""
    spec = get_family(family)
    nk = _coerce_index(spec, n)
    lam = complex(lam)
    z = complex(z)
    _validate_parameter(spec, nk, lam)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"z must be finite, got {z!r}")
    aux, _ok = _k._family_aux(spec.code, nk, lam)
    w = _k._eval_deriv(spec.code, nk, lam, aux, z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise OverflowSignal(
            f"{spec.family_id} derivative at n={n}, lambda={lam}, z={z} exceeds double range")
    return w


def singular_values(family: FamilySpec | str, n, lam: complex) -> list[complex]:
    """Finite, duplicate-free list of singular values of f_{n,lambda}.

    Candidates closer than chordal distance 1e-9 are merged.  The list order
    is deterministic (sorted by real part, then imaginary part).
    """
    spec = get_family(family)
    nk = _coerce_index(spec, n)
    lam = complex(lam)
    _validate_parameter(spec, nk, lam)
    if spec.code == _k.FAM_CHEB_SINE:
        if nk == _k.N_INF:
            values = [complex(-1.0, 0.0), complex(1.0, 0.0)]
        else:
            values = _cheb_sine_singular_values(nk)
    else:
        out = np.empty(_k.MAX_SV, np.complex128)
        count = _k._singular_values_impl(spec.code, nk, lam, out)
        if count <= 0:
            raise DegenerateParameter(
                f"{spec.family_id} singular values degenerate at n={n}, lambda={lam}")
        values = [complex(out[i]) for i in range(count)]
        for v in values:
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise OverflowSignal(
                    f"{spec.family_id} singular value at lambda={lam} exceeds double range")
    return sorted(values, key=lambda v: (v.real, v.imag))


def _cheb_t_dt_d2t_vec(n: int, u: np.ndarray):
    """Vectorized T_n, T_n', T_n'' over a complex array, by recurrence."""
    t_km = np.ones_like(u)
    d_km = np.zeros_like(u)
    s_km = np.zeros_like(u)
    if n == 0:
        return t_km, d_km, s_km
    t_k = u.copy()
    d_k = np.ones_like(u)
    s_k = np.zeros_like(u)
    for _ in range(n - 1):
        t_kp = 2.0 * u * t_k - t_km
        d_kp = 2.0 * t_k + 2.0 * u * d_k - d_km
        s_kp = 4.0 * d_k + 2.0 * u * s_k - s_km
        t_km, t_k = t_k, t_kp
        d_km, d_k = d_k, d_kp
        s_km, s_k = s_k, s_kp
    return t_k, d_k, s_k


@lru_cache(maxsize=64)
def _cheb_sine_singular_values(n: int) -> list[complex]:
    """Critical values of T_n(1 - z^2/(2n^2)), located numerically.

    Newton's method on the derivative, seeded at 64n points on eight rings
    filling the search disk |z| <= n*pi; converged critical points are mapped
    through the function and deduplicated at chordal distance 1e-9.
    """
    radius = n * math.pi
    seeds = []
    per_ring = 8 * n
    for ring in range(8):
        r = radius * (ring + 1) / 8.0
        t = 2.0 * np.pi * np.arange(per_ring) / per_ring
        seeds.append(r * np.exp(1j * t))
    z = np.concatenate(seeds)
    inv_n2 = 1.0 / (n * n)
    with np.errstate(all="ignore"):
        for _ in range(50):
            u = 1.0 - 0.5 * z * z * inv_n2
            _t, dt, d2t = _cheb_t_dt_d2t_vec(n, u)
            fp = dt * (-z * inv_n2)
            fpp = d2t * (z * inv_n2) ** 2 + dt * (-inv_n2)
            step = np.where(fpp != 0, fp / fpp, 0.0)
            z = z - step
        u = 1.0 - 0.5 * z * z * inv_n2
        t, dt, _ = _cheb_t_dt_d2t_vec(n, u)
        fp = dt * (-z * inv_n2)
    ok = np.isfinite(z) & (np.abs(z) <= radius) & np.isfinite(fp)
    ok &= np.abs(fp) <= 1e-9 * n
    candidates = t[ok]
    # z = 0 is always critical (u'(0) = 0) and may be missed by ring seeds
    candidates = np.append(candidates, _k._cheb_t_dt(n, complex(1.0, 0.0))[0])
    values: list[complex] = []
    for v in candidates:
        v = complex(v)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            continue
        if all(_k._chordal_dist(v, w) > _k.DEDUP_SV_TOL for w in values):
            values.append(v)
    return values


def principal_sqrt(w: complex) -> complex:
    """Principal square root (cut along the negative real axis)."""
    return cmath.sqrt(w)


def cubic_fixed_point(n, lam: complex) -> complex:
    """The second fixed point a_n = sqrt(mu_n + lam - 2) of the cubic family."""
    return cmath.sqrt(mu_n(n) + complex(lam) - 2.0)
