"""Scalar numeric kernels: map evaluation, orbit iteration, grid labeling.

Everything here must run both compiled (numba @njit, the default) and as
plain Python (KERNELSCOPE_NUMBA=0).  Only scalars and preallocated numpy
arrays cross these call boundaries; no Python objects, no exceptions.
Overflow is communicated through non-finite sentinel values: callers treat
any non-finite orbit value as "the orbit left every bounded set".
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ._jit import maybe_njit

# family codes shared with `families`
FAM_EXP_POLY = 0
FAM_CUBIC = 1
FAM_QUAD_EXP = 2
FAM_GAUSS_EXP = 3
FAM_CHEB_SINE = 4

N_INF = -1  # kernel-side sentinel for the family index infinity

# singular-value outcome codes
OUT_CAPTURED = 0
OUT_ESCAPED = 1
OUT_UNRESOLVED = 2

# per-cell verdict codes
V_ESCAPE = 0
V_UNRESOLVED = 1
V_HYPERBOLIC = 2

MAX_SV = 4  # builtin families have at most 2 singular values; slack for safety

# cmath.exp overflows (and CPython raises) past this real part
_EXP_RE_MAX = 709.0

# two singular-value candidates coincide below this chordal distance
DEDUP_SV_TOL = 1e-9

# two refined cycles are the same cycle when points agree this closely,
# relative to cycle_tolerance (Newton leaves ~tol/(1-|mu|) scatter)
CYCLE_DEDUP_FACTOR = 100.0


@maybe_njit
def _cexp(w):
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        return complex(math.nan, math.nan)
    if w.real > _EXP_RE_MAX:
        return complex(math.inf, 0.0)
    return cmath.exp(w)


@maybe_njit
def _ipow(z, k):
    # exact integer power by repeated squaring, k >= 0
    r = complex(1.0, 0.0)
    b = z
    while k > 0:
        if k & 1:
            r = r * b
        b = b * b
        k >>= 1
    return r


@maybe_njit
def _cubic_b(n, lam):
    """Quadratic coefficient of the cubic family; flag False on degeneracy."""
    if n == N_INF:
        return 2.0 * cmath.sqrt(lam - 1.0), True
    mu = float(n) / (float(n) + 1.0)
    w = lam + (mu - 2.0)
    if w.real == 0.0 and w.imag == 0.0:
        return complex(0.0, 0.0), False
    s = cmath.sqrt(w)
    return (lam - 1.0) / s + s, True


@maybe_njit
def _cubic_invalid(n, lam):
    # excluded real segment [1, 5], plus the square-root degeneracy
    if lam.imag == 0.0 and 1.0 <= lam.real <= 5.0:
        return True
    if n != N_INF:
        mu = float(n) / (float(n) + 1.0)
        w = lam + (mu - 2.0)
        if w.real == 0.0 and w.imag == 0.0:
            return True
    return False


@maybe_njit
def _family_aux(code, n, lam):
    """Per-parameter constant reused across orbit steps (cubic's B), with an
    ok flag that is False exactly on the cubic square-root degeneracy."""
    if code == FAM_CUBIC:
        return _cubic_b(n, lam)
    return complex(0.0, 0.0), True


@maybe_njit
def _cheb_t_dt(n, u):
    """T_n(u) and T_n'(u) by the coupled three-term recurrence."""
    if n == 0:
        return complex(1.0, 0.0), complex(0.0, 0.0)
    t_km = complex(1.0, 0.0)
    t_k = u
    d_km = complex(0.0, 0.0)
    d_k = complex(1.0, 0.0)
    for _ in range(n - 1):
        t_kp = 2.0 * u * t_k - t_km
        d_kp = 2.0 * t_k + 2.0 * u * d_k - d_km
        t_km = t_k
        t_k = t_kp
        d_km = d_k
        d_k = d_kp
    return t_k, d_k


@maybe_njit
def _eval_map(code, n, lam, aux, z):
    if code == FAM_EXP_POLY:
        if n == N_INF:
            return lam * _cexp(z)
        w = 1.0 + z / float(n)
        if n <= 64:
            return lam * _ipow(w, n)
        if w.real == 0.0 and w.imag == 0.0:
            return complex(0.0, 0.0)
        return lam * _cexp(float(n) * cmath.log(w))
    if code == FAM_CUBIC:
        return ((z - aux) * z + lam) * z
    if code == FAM_QUAD_EXP:
        return z * z * _cexp(lam * z)
    if code == FAM_GAUSS_EXP:
        return _cexp(-lam * z * z + z - 2.0)
    # FAM_CHEB_SINE
    if n == N_INF:
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return complex(math.nan, math.nan)
        if abs(z.imag) > _EXP_RE_MAX:
            return complex(math.inf, 0.0)
        return cmath.cos(z)
    fn = float(n)
    u = 1.0 - z * z / (2.0 * fn * fn)
    t, _dt = _cheb_t_dt(n, u)
    return t


@maybe_njit
def _eval_deriv(code, n, lam, aux, z):
    if code == FAM_EXP_POLY:
        if n == N_INF:
            return lam * _cexp(z)
        w = 1.0 + z / float(n)
        if n <= 64:
            return lam * _ipow(w, n - 1)
        if w.real == 0.0 and w.imag == 0.0:
            return complex(0.0, 0.0)
        return lam * _cexp(float(n - 1) * cmath.log(w))
    if code == FAM_CUBIC:
        return (3.0 * z - 2.0 * aux) * z + lam
    if code == FAM_QUAD_EXP:
        return (2.0 + lam * z) * z * _cexp(lam * z)
    if code == FAM_GAUSS_EXP:
        return (1.0 - 2.0 * lam * z) * _cexp(-lam * z * z + z - 2.0)
    if n == N_INF:
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return complex(math.nan, math.nan)
        if abs(z.imag) > _EXP_RE_MAX:
            return complex(math.inf, 0.0)
        return -cmath.sin(z)
    fn = float(n)
    u = 1.0 - z * z / (2.0 * fn * fn)
    _t, dt = _cheb_t_dt(n, u)
    return dt * (-z / (fn * fn))


@maybe_njit
def _chordal_dist(a, b):
    """Chordal distance on the Riemann sphere; non-finite values mean infinity."""
    a_inf = not (math.isfinite(a.real) and math.isfinite(a.imag))
    b_inf = not (math.isfinite(b.real) and math.isfinite(b.imag))
    if a_inf and b_inf:
        return 0.0
    if a_inf:
        return 2.0 / math.hypot(1.0, abs(b))
    if b_inf:
        return 2.0 / math.hypot(1.0, abs(a))
    d = 2.0 * abs(a - b) / (math.hypot(1.0, abs(a)) * math.hypot(1.0, abs(b)))
    if d > 2.0:
        return 2.0
    return d


@maybe_njit
def _singular_values_impl(code, n, lam, out):
    """Closed-form singular values into `out`; returns the count, 0 on degeneracy.

    ChebSine is not handled here (its values are located numerically once per
    index and passed to the scan as constants).
    """
    if code == FAM_EXP_POLY:
        out[0] = complex(0.0, 0.0)
        return 1
    if code == FAM_CUBIC:
        b, ok = _cubic_b(n, lam)
        if not ok:
            return 0
        disc = cmath.sqrt(b * b - 3.0 * lam)
        c1 = (b + disc) / 3.0
        c2 = (b - disc) / 3.0
        v1 = _eval_map(code, n, lam, b, c1)
        v2 = _eval_map(code, n, lam, b, c2)
        out[0] = v1
        if _chordal_dist(v1, v2) <= DEDUP_SV_TOL:
            return 1
        out[1] = v2
        return 2
    if code == FAM_QUAD_EXP:
        out[0] = complex(0.0, 0.0)
        if lam.real == 0.0 and lam.imag == 0.0:
            return 1
        v = complex(4.0 * math.exp(-2.0), 0.0) / (lam * lam)
        if _chordal_dist(out[0], v) <= DEDUP_SV_TOL:
            return 1
        out[1] = v
        return 2
    if code == FAM_GAUSS_EXP:
        out[0] = complex(0.0, 0.0)
        if lam.real == 0.0 and lam.imag == 0.0:
            return 1
        v = _cexp(complex(1.0, 0.0) / (4.0 * lam) - 2.0)
        if _chordal_dist(out[0], v) <= DEDUP_SV_TOL:
            return 1
        out[1] = v
        return 2
    return 0


@maybe_njit
def _detect_in_ring(tail, count, max_period, ctol):
    """Smallest period p whose last three lag-p steps all close, 0 if none.

    A lag-p step "closes" when |z_{t} - z_{t-p}| <= ctol * (1 + |z_{t-p}|).
    `tail` is a ring buffer of the orbit; `count` is the number of points
    pushed so far.  Period p needs 3p+1 points (four lag-p points, three
    consecutive differences).  The buffer length 4*max_period guarantees the
    required points are still present for every p <= max_period.
    """
    size = tail.shape[0]
    last = count - 1
    last_idx = last % size
    pmax = last // 3
    if pmax > max_period:
        pmax = max_period
    lim = ctol * ctol
    for p in range(1, pmax + 1):
        ok = True
        ia = last_idx
        for _ in range(3):
            ib = ia - p
            if ib < 0:
                ib += size
            a = tail[ia]
            b = tail[ib]
            dr = a.real - b.real
            di = a.imag - b.imag
            d2 = dr * dr + di * di
            q = b.real * b.real + b.imag * b.imag
            # cheap reject first: (1 + |b|)^2 <= 2 (1 + |b|^2) by AM-GM
            if d2 > lim * 2.0 * (1.0 + q):
                ok = False
                break
            m = 1.0 + math.sqrt(q)
            if d2 > lim * m * m:
                ok = False
                break
            ia = ib
        if ok:
            return p
    return 0


@maybe_njit
def _refine_cycle_impl(code, n, lam, aux, z0, p, ctol, margin):
    """Newton refinement of f^p(z) = z; returns (ok, point, period, multiplier).

    Converges when |f^p(z) - z| <= ctol within 50 Newton steps; the period is
    minimized over proper divisors afterwards.  Only attracting cycles
    (|multiplier| <= 1 - margin) are accepted.
    """
    fail = (False, complex(0.0, 0.0), 0, complex(0.0, 0.0))
    z = z0
    best_z = z0
    best_g = math.inf
    # aim well below ctol: |g| <= ctol only bounds |z - root| by
    # ctol / |(f^p)' - 1|, which can defeat the divisor minimization when
    # lam^p is close to 1; Newton converges fast enough that the tighter
    # target costs at most a couple of extra steps
    target = ctol * 1e-4
    for attempt in range(51):
        w = z
        dp = complex(1.0, 0.0)
        bad = False
        for _ in range(p):
            d = _eval_deriv(code, n, lam, aux, w)
            dp = dp * d
            w = _eval_map(code, n, lam, aux, w)
            if not (math.isfinite(w.real) and math.isfinite(w.imag)):
                bad = True
                break
        if bad or not (math.isfinite(dp.real) and math.isfinite(dp.imag)):
            break
        g = abs(w - z)
        if g < best_g:
            best_g = g
            best_z = z
        if g <= target or attempt == 50:
            break
        gp = dp - 1.0
        if abs(gp) < 1e-14:
            break
        z = z - (w - z) / gp
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            break
    if best_g > ctol:
        return fail
    z = best_z
    period = p
    for d in range(1, p):
        if p % d != 0:
            continue
        w = z
        ok = True
        for _ in range(d):
            w = _eval_map(code, n, lam, aux, w)
            if not (math.isfinite(w.real) and math.isfinite(w.imag)):
                ok = False
                break
        if ok and abs(w - z) <= ctol * (1.0 + abs(z)):
            period = d
            break
    mult = complex(1.0, 0.0)
    w = z
    for _ in range(period):
        mult = mult * _eval_deriv(code, n, lam, aux, w)
        w = _eval_map(code, n, lam, aux, w)
    if not (math.isfinite(mult.real) and math.isfinite(mult.imag)):
        return fail
    if abs(mult) > 1.0 - margin:
        return fail
    return True, z, period, mult


@maybe_njit
def _iterate_singular_value(code, n, lam, aux, s, max_iter, esc_r, ctol,
                            margin, max_period, tail):
    """Iterate one singular value; (outcome, iterations, period, point, mult).

    Near-periodicity is probed every fourth iteration (the detector needs a
    stable window anyway, and this keeps the scan's inner loop cheap).
    """
    none = complex(0.0, 0.0)
    z = s
    if not (math.isfinite(z.real) and math.isfinite(z.imag)) or abs(z) > esc_r:
        return OUT_ESCAPED, 0, 0, none, none
    tail[0] = z
    count = 1
    backoff = 0
    for it in range(1, max_iter + 1):
        z = _eval_map(code, n, lam, aux, z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)) or abs(z) > esc_r:
            return OUT_ESCAPED, it, 0, none, none
        tail[count % tail.shape[0]] = z
        count += 1
        if it >= backoff and (it & 3) == 0:
            p = _detect_in_ring(tail, count, max_period, ctol)
            if p > 0:
                ok, root, period, mult = _refine_cycle_impl(
                    code, n, lam, aux, z, p, ctol, margin)
                if ok:
                    return OUT_CAPTURED, it, period, root, mult
                # near-indifferent rejection: do not re-run Newton every probe
                backoff = it + max_period
    return OUT_UNRESOLVED, max_iter, 0, none, none


@maybe_njit
def _same_cycle(code, n, lam, aux, ra, pa, rb, pb, ctol, buf_a, buf_b):
    wa = ra
    for k in range(pa):
        buf_a[k] = wa
        wa = _eval_map(code, n, lam, aux, wa)
    wb = rb
    for k in range(pb):
        buf_b[k] = wb
        wb = _eval_map(code, n, lam, aux, wb)
    for i in range(pa):
        for j in range(pb):
            if abs(buf_a[i] - buf_b[j]) <= CYCLE_DEDUP_FACTOR * ctol * (1.0 + abs(buf_a[i])):
                return True
    return False


@maybe_njit
def _classify_cell(code, n, lam, aux, svs, nsv, max_iter, esc_r, ctol, margin,
                   max_period, tail, outcomes, iters, periods, roots, mults,
                   keep, buf_a, buf_b):
    """Classify one parameter given its singular values; fills the out arrays.

    Returns the verdict code.  `keep[i]` marks the captured cycles that
    survive deduplication (first representative wins).
    """
    any_escape = False
    all_captured = nsv > 0
    for i in range(nsv):
        o, it, p, root, mult = _iterate_singular_value(
            code, n, lam, aux, svs[i], max_iter, esc_r, ctol, margin,
            max_period, tail)
        outcomes[i] = o
        iters[i] = it
        periods[i] = p
        roots[i] = root
        mults[i] = mult
        if o == OUT_ESCAPED:
            any_escape = True
        if o != OUT_CAPTURED:
            all_captured = False
    if any_escape:
        verdict = V_ESCAPE
    elif all_captured:
        verdict = V_HYPERBOLIC
    else:
        verdict = V_UNRESOLVED
    for i in range(nsv):
        keep[i] = False
    for i in range(nsv):
        if outcomes[i] != OUT_CAPTURED:
            continue
        dup = False
        for j in range(i):
            if keep[j] and _same_cycle(code, n, lam, aux, roots[i], periods[i],
                                       roots[j], periods[j], ctol, buf_a, buf_b):
                dup = True
                break
        keep[i] = not dup
    return verdict


@maybe_njit
def _scan_rows(code, n, const_svs, n_const, ox, oy, hx, hy, nx, j0, j1,
               max_iter, esc_r, ctol, margin, max_period,
               verdicts, iterations, period_sig, invalid):
    """Classify the cells of rows [j0, j1); writes into the output arrays.

    Rows are independent, so disjoint row ranges may run on parallel threads
    and still produce bit-identical results.
    """
    tail = np.empty(4 * max_period, np.complex128)
    svs = np.empty(MAX_SV, np.complex128)
    outcomes = np.empty(MAX_SV, np.int64)
    iters = np.empty(MAX_SV, np.int64)
    periods = np.empty(MAX_SV, np.int64)
    roots = np.empty(MAX_SV, np.complex128)
    mults = np.empty(MAX_SV, np.complex128)
    keep = np.empty(MAX_SV, np.bool_)
    buf_a = np.empty(max_period, np.complex128)
    buf_b = np.empty(max_period, np.complex128)
    for j in range(j0, j1):
        for i in range(nx):
            lam = complex(ox + (i + 0.5) * hx, oy + (j + 0.5) * hy)
            if code == FAM_CUBIC and _cubic_invalid(n, lam):
                verdicts[j, i] = V_UNRESOLVED
                invalid[j, i] = True
                iterations[j, i] = 0
                continue
            aux, ok = _family_aux(code, n, lam)
            if not ok:
                verdicts[j, i] = V_UNRESOLVED
                invalid[j, i] = True
                iterations[j, i] = 0
                continue
            if n_const > 0:
                nsv = n_const
                for k in range(n_const):
                    svs[k] = const_svs[k]
            else:
                nsv = _singular_values_impl(code, n, lam, svs)
                if nsv <= 0:
                    verdicts[j, i] = V_UNRESOLVED
                    invalid[j, i] = True
                    iterations[j, i] = 0
                    continue
            v = _classify_cell(code, n, lam, aux, svs, nsv, max_iter, esc_r,
                               ctol, margin, max_period, tail, outcomes,
                               iters, periods, roots, mults, keep, buf_a,
                               buf_b)
            verdicts[j, i] = v
            total = 0
            for k in range(nsv):
                total += iters[k]
            iterations[j, i] = total
            if v == V_HYPERBOLIC:
                m = 0
                for k in range(nsv):
                    if keep[k]:
                        period_sig[j, i, m] = periods[k]
                        m += 1
                for a in range(1, m):
                    key = period_sig[j, i, a]
                    b = a - 1
                    while b >= 0 and period_sig[j, i, b] > key:
                        period_sig[j, i, b + 1] = period_sig[j, i, b]
                        b -= 1
                    period_sig[j, i, b + 1] = key


@maybe_njit
def _label_components(cells, labels, stack):
    """4-connectivity labeling; ids 1..count in first-encounter row-major order."""
    ny, nx = cells.shape
    count = 0
    for j in range(ny):
        for i in range(nx):
            if cells[j, i] and labels[j, i] == 0:
                count += 1
                top = 0
                stack[top] = j * nx + i
                top = 1
                labels[j, i] = count
                while top > 0:
                    top -= 1
                    e = stack[top]
                    cj = e // nx
                    ci = e - cj * nx
                    if ci > 0 and cells[cj, ci - 1] and labels[cj, ci - 1] == 0:
                        labels[cj, ci - 1] = count
                        stack[top] = cj * nx + ci - 1
                        top += 1
                    if ci + 1 < nx and cells[cj, ci + 1] and labels[cj, ci + 1] == 0:
                        labels[cj, ci + 1] = count
                        stack[top] = cj * nx + ci + 1
                        top += 1
                    if cj > 0 and cells[cj - 1, ci] and labels[cj - 1, ci] == 0:
                        labels[cj - 1, ci] = count
                        stack[top] = (cj - 1) * nx + ci
                        top += 1
                    if cj + 1 < ny and cells[cj + 1, ci] and labels[cj + 1, ci] == 0:
                        labels[cj + 1, ci] = count
                        stack[top] = (cj + 1) * nx + ci
                        top += 1
    return count


@maybe_njit
def _hausdorff_brute(ax, ay, bx, by):
    """Exact two-directional max-min Euclidean Hausdorff between point sets."""
    h = 0.0
    for i in range(ax.shape[0]):
        best = math.inf
        for j in range(bx.shape[0]):
            dx = ax[i] - bx[j]
            dy = ay[i] - by[j]
            d = dx * dx + dy * dy
            if d < best:
                best = d
        if best > h:
            h = best
    for j in range(bx.shape[0]):
        best = math.inf
        for i in range(ax.shape[0]):
            dx = ax[i] - bx[j]
            dy = ay[i] - by[j]
            d = dx * dx + dy * dy
            if d < best:
                best = d
        if best > h:
            h = best
    return math.sqrt(h)
