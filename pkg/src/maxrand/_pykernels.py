"""Pure-Python numeric kernels.

Fallback implementations of the hot inner loops: cyclic Jacobi
eigensolvers, PSD cone projections, the splitting-solver iteration, the
Born-rule amplitude contraction and a Nelder-Mead simplex minimizer.
The compiled module ``maxrand._ckernels`` implements the same routines
with the same algorithms; ``maxrand.backend`` picks whichever is
available at import time.  Keep the two in sync.
"""

import math

import numpy as np

compiled = False

_SQRT2 = math.sqrt(2.0)
_JACOBI_TOL = 1e-13
_MAX_SWEEPS = 100


# ---------------------------------------------------------------------------
# Jacobi eigensolvers
# ---------------------------------------------------------------------------

def eigh_sym(a):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Returns (w, V) with eigenvalues sorted descending and eigenvectors
    as columns of V.
    """
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    v = np.eye(n)
    if n > 1:
        thresh = _JACOBI_TOL * max(1.0, math.sqrt(float(np.sum(a * a))))
        for _ in range(_MAX_SWEEPS):
            off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
            if off <= thresh:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    theta = 0.5 * math.atan2(2.0 * apq, a[p, p] - a[q, q])
                    c = math.cos(theta)
                    s = math.sin(theta)
                    app = a[p, p]
                    aqq = a[q, q]
                    colp = c * a[:, p] + s * a[:, q]
                    colq = -s * a[:, p] + c * a[:, q]
                    a[:, p] = colp
                    a[:, q] = colq
                    a[p, :] = colp
                    a[q, :] = colq
                    a[p, p] = c * c * app + 2.0 * c * s * apq + s * s * aqq
                    a[q, q] = s * s * app - 2.0 * c * s * apq + c * c * aqq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    vp = c * v[:, p] + s * v[:, q]
                    vq = -s * v[:, p] + c * v[:, q]
                    v[:, p] = vp
                    v[:, q] = vq
    w = np.diagonal(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])


def eigh_herm(re, im):
    """Eigendecomposition of a complex Hermitian matrix given as (re, im).

    Cyclic Jacobi with complex plane rotations.  Returns
    (w, Vre, Vim) with eigenvalues sorted descending.
    """
    ar = np.array(re, dtype=np.float64)
    ai = np.array(im, dtype=np.float64)
    n = ar.shape[0]
    vr = np.eye(n)
    vi = np.zeros((n, n))
    if n > 1:
        thresh = _JACOBI_TOL * max(1.0, math.sqrt(float(np.sum(ar * ar) + np.sum(ai * ai))))
        for _ in range(_MAX_SWEEPS):
            off2 = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    off2 += ar[p, q] ** 2 + ai[p, q] ** 2
            if math.sqrt(2.0 * off2) <= thresh:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    alpha = ar[p, q]
                    beta = ai[p, q]
                    r = math.sqrt(alpha * alpha + beta * beta)
                    if r == 0.0:
                        continue
                    cph = alpha / r
                    sph = beta / r
                    theta = 0.5 * math.atan2(2.0 * r, ar[p, p] - ar[q, q])
                    c = math.cos(theta)
                    s = math.sin(theta)
                    app = ar[p, p]
                    aqq = ar[q, q]
                    # column updates; e^{-i phi} = cph - i sph
                    cpr = c * ar[:, p] + s * (cph * ar[:, q] + sph * ai[:, q])
                    cpi = c * ai[:, p] + s * (cph * ai[:, q] - sph * ar[:, q])
                    cqr = c * ar[:, q] - s * (cph * ar[:, p] - sph * ai[:, p])
                    cqi = c * ai[:, q] - s * (cph * ai[:, p] + sph * ar[:, p])
                    ar[:, p] = cpr
                    ai[:, p] = cpi
                    ar[:, q] = cqr
                    ai[:, q] = cqi
                    ar[p, :] = cpr
                    ai[p, :] = -cpi
                    ar[q, :] = cqr
                    ai[q, :] = -cqi
                    ar[p, p] = c * c * app + 2.0 * c * s * r + s * s * aqq
                    ar[q, q] = s * s * app - 2.0 * c * s * r + c * c * aqq
                    ai[p, p] = 0.0
                    ai[q, q] = 0.0
                    ar[p, q] = 0.0
                    ai[p, q] = 0.0
                    ar[q, p] = 0.0
                    ai[q, p] = 0.0
                    wpr = c * vr[:, p] + s * (cph * vr[:, q] + sph * vi[:, q])
                    wpi = c * vi[:, p] + s * (cph * vi[:, q] - sph * vr[:, q])
                    wqr = c * vr[:, q] - s * (cph * vr[:, p] - sph * vi[:, p])
                    wqi = c * vi[:, q] - s * (cph * vi[:, p] + sph * vr[:, p])
                    vr[:, p] = wpr
                    vi[:, p] = wpi
                    vr[:, q] = wqr
                    vi[:, q] = wqi
    w = np.diagonal(ar).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], np.ascontiguousarray(vr[:, order]), np.ascontiguousarray(vi[:, order])


def psd_project_sym(a):
    """Frobenius-nearest positive semidefinite matrix (real symmetric input)."""
    w, v = eigh_sym(a)
    w = np.maximum(w, 0.0)
    return (v * w) @ v.T


def psd_project_herm(re, im):
    """Frobenius-nearest PSD matrix for a complex Hermitian (re, im) pair."""
    w, vr, vi = eigh_herm(re, im)
    w = np.maximum(w, 0.0)
    pre = (vr * w) @ vr.T + (vi * w) @ vi.T
    pim = (vi * w) @ vr.T - (vr * w) @ vi.T
    return pre, pim


# ---------------------------------------------------------------------------
# Splitting-solver inner loop (scaled ADMM / Douglas-Rachford step)
# ---------------------------------------------------------------------------

def _project_blocks(w, out, bkind, bdim, boff):
    for k in range(len(bdim)):
        d = int(bdim[k])
        off = int(boff[k])
        if bkind[k] == 0:
            m = np.empty((d, d))
            idx = off + d
            for i in range(d):
                m[i, i] = w[off + i]
            for i in range(d):
                for j in range(i + 1, d):
                    m[i, j] = m[j, i] = w[idx] / _SQRT2
                    idx += 1
            m = psd_project_sym(m)
            idx = off + d
            for i in range(d):
                out[off + i] = m[i, i]
            for i in range(d):
                for j in range(i + 1, d):
                    out[idx] = m[i, j] * _SQRT2
                    idx += 1
        else:
            no = d * (d - 1) // 2
            mr = np.empty((d, d))
            mi = np.zeros((d, d))
            for i in range(d):
                mr[i, i] = w[off + i]
            idx = off + d
            for i in range(d):
                for j in range(i + 1, d):
                    mr[i, j] = mr[j, i] = w[idx] / _SQRT2
                    mi[i, j] = w[idx + no] / _SQRT2
                    mi[j, i] = -mi[i, j]
                    idx += 1
            mr, mi = psd_project_herm(mr, mi)
            for i in range(d):
                out[off + i] = mr[i, i]
            idx = off + d
            for i in range(d):
                for j in range(i + 1, d):
                    out[idx] = mr[i, j] * _SQRT2
                    out[idx + no] = mi[i, j] * _SQRT2
                    idx += 1


def admm_chunk(P, q, shift, x, z, u, bkind, bdim, boff, iters, alpha):
    """Run `iters` scaled-ADMM iterations in place.

    x is the affine-set iterate, z the PSD-cone iterate, u the scaled
    dual.  P and q define the affine projection v -> P v + q; `shift`
    is objective/rho.  Returns (||x - z||_2, ||z - z_prev||_2) from the
    final iteration.
    """
    zprev = z.copy()
    for _ in range(iters):
        t = z - u - shift
        x[:] = P @ t + q
        xr = alpha * x + (1.0 - alpha) * z
        w = xr + u
        zprev[:] = z
        _project_blocks(w, z, bkind, bdim, boff)
        u += xr - z
    gap = float(np.linalg.norm(x - z))
    dz = float(np.linalg.norm(z - zprev))
    return gap, dz


# ---------------------------------------------------------------------------
# Born-rule contraction and the constrained-realization simplex search
# ---------------------------------------------------------------------------

def born_probability(state, vecs):
    """P(outcome tuple) = |<v_1 x ... x v_p | state>|^2 for projector kets."""
    p = len(vecs)
    amp = 0.0 + 0.0j
    for idx in range(1 << p):
        coef = 1.0 + 0.0j
        for party in range(p):
            bit = (idx >> (p - 1 - party)) & 1
            coef *= np.conj(vecs[party][bit])
        amp += coef * state[idx]
    return float(abs(amp) ** 2)


def _decode_params(params, p, m, schmidt_mode):
    if schmidt_mode:
        a = min(max(params[0], 0.0), 1.0)
        state = np.zeros(1 << p, dtype=np.complex128)
        state[0] = a
        state[-1] = math.sqrt(1.0 - a * a)
        k = 1
    else:
        dim = 1 << p
        raw = params[: 2 * dim]
        state = raw[:dim] + 1j * raw[dim:]
        nrm = np.linalg.norm(state)
        if nrm < 1e-8:
            return None, None
        state = state / nrm
        k = 2 * dim
    kets = np.empty((p, m, 2), dtype=np.complex128)
    for party in range(p):
        for inp in range(m):
            th = params[k]
            ph = params[k + 1]
            k += 2
            kets[party, inp, 0] = math.cos(0.5 * th)
            kets[party, inp, 1] = math.sin(0.5 * th) * (math.cos(ph) + 1j * math.sin(ph))
    return state, kets


def _outcome_vec(ket, outcome):
    if outcome == 0:
        return ket
    return np.array([-np.conj(ket[1]), np.conj(ket[0])])


def family_objective(params, p, m, schmidt_mode, cons_in, cons_out, cons_val,
                     obj_in, obj_out, kappa):
    """Penalized objective: target probability + kappa * sum of squared
    constraint residuals."""
    state, kets = _decode_params(params, p, m, schmidt_mode)
    if state is None:
        return 1e6
    pen = 0.0
    for k in range(len(cons_val)):
        vecs = [_outcome_vec(kets[party, cons_in[k, party]], cons_out[k, party])
                for party in range(p)]
        r = born_probability(state, vecs) - cons_val[k]
        pen += r * r
    vecs = [_outcome_vec(kets[party, obj_in[party]], obj_out[party])
            for party in range(p)]
    return born_probability(state, vecs) + kappa * pen


def nm_family_minimize(p, m, schmidt_mode, cons_in, cons_out, cons_val,
                       obj_in, obj_out, kappa, x0, step, maxfev, xatol, fatol):
    """Nelder-Mead with adaptive coefficients on the penalized objective.

    `step` > 0 uses an absolute initial simplex spread (polish phase);
    `step` == 0 uses the usual relative spread.  Returns
    (best_params, best_value, nfev).
    """

    def fun(v):
        return family_objective(v, p, m, schmidt_mode, cons_in, cons_out,
                                cons_val, obj_in, obj_out, kappa)

    return _nelder_mead(fun, np.asarray(x0, dtype=np.float64), step, maxfev,
                        xatol, fatol)


def _nelder_mead(fun, x0, step, maxfev, xatol, fatol):
    n = x0.size
    ralpha = 1.0
    rbeta = 1.0 + 2.0 / n
    rgamma = 0.75 - 0.5 / n
    rdelta = 1.0 - 1.0 / n

    sim = np.empty((n + 1, n))
    sim[0] = x0
    for i in range(n):
        y = x0.copy()
        if step > 0.0:
            y[i] += step
        elif y[i] != 0.0:
            y[i] *= 1.05
        else:
            y[i] = 0.00025
        sim[i + 1] = y
    fsim = np.array([fun(sim[i]) for i in range(n + 1)])
    nfev = n + 1

    while nfev < maxfev:
        order = np.argsort(fsim, kind="stable")
        sim = sim[order]
        fsim = fsim[order]
        if (np.max(np.abs(sim[1:] - sim[0])) <= xatol
                and np.max(np.abs(fsim[1:] - fsim[0])) <= fatol):
            break
        centroid = np.mean(sim[:-1], axis=0)
        xr = centroid + ralpha * (centroid - sim[-1])
        fr = fun(xr)
        nfev += 1
        if fr < fsim[0]:
            xe = centroid + rbeta * (xr - centroid)
            fe = fun(xe)
            nfev += 1
            if fe < fr:
                sim[-1] = xe
                fsim[-1] = fe
            else:
                sim[-1] = xr
                fsim[-1] = fr
        elif fr < fsim[-2]:
            sim[-1] = xr
            fsim[-1] = fr
        else:
            if fr < fsim[-1]:
                xc = centroid + rgamma * (xr - centroid)
                fc = fun(xc)
                nfev += 1
                if fc <= fr:
                    sim[-1] = xc
                    fsim[-1] = fc
                else:
                    sim, fsim, nfev = _shrink(fun, sim, fsim, rdelta, nfev)
            else:
                xc = centroid - rgamma * (centroid - sim[-1])
                fc = fun(xc)
                nfev += 1
                if fc < fsim[-1]:
                    sim[-1] = xc
                    fsim[-1] = fc
                else:
                    sim, fsim, nfev = _shrink(fun, sim, fsim, rdelta, nfev)
    best = int(np.argmin(fsim))
    return sim[best].copy(), float(fsim[best]), nfev


def _shrink(fun, sim, fsim, rdelta, nfev):
    for i in range(1, sim.shape[0]):
        sim[i] = sim[0] + rdelta * (sim[i] - sim[0])
        fsim[i] = fun(sim[i])
        nfev += 1
    return sim, fsim, nfev
