# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numeric kernels.

Same routines and algorithms as maxrand._pykernels (cyclic Jacobi
eigensolvers, PSD projections, splitting-solver iteration, Born-rule
contraction, Nelder-Mead); this is the fast backend selected by
maxrand.backend when the extension was built.  Keep the two in sync.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, cos, fabs, sin, sqrt
from scipy.linalg.cython_blas cimport dgemv

cnp.import_array()

compiled = True

cdef double _SQRT2 = sqrt(2.0)
cdef double _JACOBI_TOL = 1e-13
cdef int _MAX_SWEEPS = 100


# ---------------------------------------------------------------------------
# Jacobi eigensolvers (row-major pointer cores shared by all entry points)
# ---------------------------------------------------------------------------

cdef void _jacobi_sym(double* a, double* v, int n) noexcept nogil:
    cdef int p, q, k, sweep
    cdef double apq, app, aqq, theta, c, s, off2, thresh, tp, tq, fro
    fro = 0.0
    for p in range(n * n):
        fro += a[p] * a[p]
    thresh = _JACOBI_TOL * (1.0 if fro < 1.0 else sqrt(fro))
    for sweep in range(_MAX_SWEEPS):
        off2 = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off2 += a[p * n + q] * a[p * n + q]
        if sqrt(2.0 * off2) <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p * n + q]
                if apq == 0.0:
                    continue
                theta = 0.5 * atan2(2.0 * apq, a[p * n + p] - a[q * n + q])
                c = cos(theta)
                s = sin(theta)
                app = a[p * n + p]
                aqq = a[q * n + q]
                for k in range(n):
                    tp = c * a[k * n + p] + s * a[k * n + q]
                    tq = -s * a[k * n + p] + c * a[k * n + q]
                    a[k * n + p] = tp
                    a[k * n + q] = tq
                for k in range(n):
                    a[p * n + k] = a[k * n + p]
                    a[q * n + k] = a[k * n + q]
                a[p * n + p] = c * c * app + 2.0 * c * s * apq + s * s * aqq
                a[q * n + q] = s * s * app - 2.0 * c * s * apq + c * c * aqq
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                for k in range(n):
                    tp = c * v[k * n + p] + s * v[k * n + q]
                    tq = -s * v[k * n + p] + c * v[k * n + q]
                    v[k * n + p] = tp
                    v[k * n + q] = tq


cdef void _jacobi_herm(double* ar, double* ai, double* vr, double* vi,
                       int n) noexcept nogil:
    cdef int p, q, k, sweep
    cdef double alpha, beta, r, cph, sph, theta, c, s, app, aqq
    cdef double off2, thresh, fro
    cdef double pr, pi, qr, qi
    fro = 0.0
    for p in range(n * n):
        fro += ar[p] * ar[p] + ai[p] * ai[p]
    thresh = _JACOBI_TOL * (1.0 if fro < 1.0 else sqrt(fro))
    for sweep in range(_MAX_SWEEPS):
        off2 = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off2 += ar[p * n + q] * ar[p * n + q] + ai[p * n + q] * ai[p * n + q]
        if sqrt(2.0 * off2) <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = ar[p * n + q]
                beta = ai[p * n + q]
                r = sqrt(alpha * alpha + beta * beta)
                if r == 0.0:
                    continue
                cph = alpha / r
                sph = beta / r
                theta = 0.5 * atan2(2.0 * r, ar[p * n + p] - ar[q * n + q])
                c = cos(theta)
                s = sin(theta)
                app = ar[p * n + p]
                aqq = ar[q * n + q]
                for k in range(n):
                    pr = c * ar[k * n + p] + s * (cph * ar[k * n + q] + sph * ai[k * n + q])
                    pi = c * ai[k * n + p] + s * (cph * ai[k * n + q] - sph * ar[k * n + q])
                    qr = c * ar[k * n + q] - s * (cph * ar[k * n + p] - sph * ai[k * n + p])
                    qi = c * ai[k * n + q] - s * (cph * ai[k * n + p] + sph * ar[k * n + p])
                    ar[k * n + p] = pr
                    ai[k * n + p] = pi
                    ar[k * n + q] = qr
                    ai[k * n + q] = qi
                for k in range(n):
                    ar[p * n + k] = ar[k * n + p]
                    ai[p * n + k] = -ai[k * n + p]
                    ar[q * n + k] = ar[k * n + q]
                    ai[q * n + k] = -ai[k * n + q]
                ar[p * n + p] = c * c * app + 2.0 * c * s * r + s * s * aqq
                ar[q * n + q] = s * s * app - 2.0 * c * s * r + c * c * aqq
                ai[p * n + p] = 0.0
                ai[q * n + q] = 0.0
                ar[p * n + q] = 0.0
                ai[p * n + q] = 0.0
                ar[q * n + p] = 0.0
                ai[q * n + p] = 0.0
                for k in range(n):
                    pr = c * vr[k * n + p] + s * (cph * vr[k * n + q] + sph * vi[k * n + q])
                    pi = c * vi[k * n + p] + s * (cph * vi[k * n + q] - sph * vr[k * n + q])
                    qr = c * vr[k * n + q] - s * (cph * vr[k * n + p] - sph * vi[k * n + p])
                    qi = c * vi[k * n + q] - s * (cph * vi[k * n + p] + sph * vr[k * n + p])
                    vr[k * n + p] = pr
                    vi[k * n + p] = pi
                    vr[k * n + q] = qr
                    vi[k * n + q] = qi


def eigh_sym(a):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Returns (w, V) with eigenvalues sorted descending and eigenvectors
    as columns of V.
    """
    cdef cnp.ndarray[double, ndim=2] aa = np.array(a, dtype=np.float64, order="C")
    cdef int n = aa.shape[0]
    cdef cnp.ndarray[double, ndim=2] v = np.eye(n)
    if n > 1:
        _jacobi_sym(&aa[0, 0], &v[0, 0], n)
    w = np.diagonal(aa).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])


def eigh_herm(re, im):
    """Eigendecomposition of a complex Hermitian matrix given as (re, im).

    Cyclic Jacobi with complex plane rotations.  Returns
    (w, Vre, Vim) with eigenvalues sorted descending.
    """
    cdef cnp.ndarray[double, ndim=2] ar = np.array(re, dtype=np.float64, order="C")
    cdef cnp.ndarray[double, ndim=2] ai = np.array(im, dtype=np.float64, order="C")
    cdef int n = ar.shape[0]
    cdef cnp.ndarray[double, ndim=2] vr = np.eye(n)
    cdef cnp.ndarray[double, ndim=2] vi = np.zeros((n, n))
    if n > 1:
        _jacobi_herm(&ar[0, 0], &ai[0, 0], &vr[0, 0], &vi[0, 0], n)
    w = np.diagonal(ar).copy()
    order = np.argsort(-w, kind="stable")
    return (w[order], np.ascontiguousarray(vr[:, order]),
            np.ascontiguousarray(vi[:, order]))


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

cdef void _psd_block_sym(double* w, double* out, int d, double* mbuf,
                         double* vbuf, double* wbuf) noexcept nogil:
    cdef int i, j, k, idx
    cdef double acc
    for i in range(d):
        mbuf[i * d + i] = w[i]
    idx = d
    for i in range(d):
        for j in range(i + 1, d):
            mbuf[i * d + j] = w[idx] / _SQRT2
            mbuf[j * d + i] = mbuf[i * d + j]
            idx += 1
    for i in range(d):
        for j in range(d):
            vbuf[i * d + j] = 1.0 if i == j else 0.0
    _jacobi_sym(mbuf, vbuf, d)
    for i in range(d):
        wbuf[i] = mbuf[i * d + i]
        if wbuf[i] < 0.0:
            wbuf[i] = 0.0
    # reconstruct V diag(w+) V^T into mbuf
    for i in range(d):
        for j in range(i, d):
            acc = 0.0
            for k in range(d):
                acc += vbuf[i * d + k] * wbuf[k] * vbuf[j * d + k]
            mbuf[i * d + j] = acc
            mbuf[j * d + i] = acc
    for i in range(d):
        out[i] = mbuf[i * d + i]
    idx = d
    for i in range(d):
        for j in range(i + 1, d):
            out[idx] = mbuf[i * d + j] * _SQRT2
            idx += 1


cdef void _psd_block_herm(double* w, double* out, int d, double* mbuf,
                          double* vbuf, double* wbuf) noexcept nogil:
    cdef int i, j, k, idx, no
    cdef double accr, acci
    cdef double* mr = mbuf
    cdef double* mi = mbuf + d * d
    cdef double* vr = vbuf
    cdef double* vi = vbuf + d * d
    no = d * (d - 1) / 2
    for i in range(d):
        mr[i * d + i] = w[i]
        mi[i * d + i] = 0.0
    idx = d
    for i in range(d):
        for j in range(i + 1, d):
            mr[i * d + j] = w[idx] / _SQRT2
            mr[j * d + i] = mr[i * d + j]
            mi[i * d + j] = w[idx + no] / _SQRT2
            mi[j * d + i] = -mi[i * d + j]
            idx += 1
    for i in range(d):
        for j in range(d):
            vr[i * d + j] = 1.0 if i == j else 0.0
            vi[i * d + j] = 0.0
    _jacobi_herm(mr, mi, vr, vi, d)
    for i in range(d):
        wbuf[i] = mr[i * d + i]
        if wbuf[i] < 0.0:
            wbuf[i] = 0.0
    # reconstruct V diag(w+) V^dagger: re in mr, im in mi
    for i in range(d):
        for j in range(i, d):
            accr = 0.0
            acci = 0.0
            for k in range(d):
                accr += wbuf[k] * (vr[i * d + k] * vr[j * d + k] + vi[i * d + k] * vi[j * d + k])
                acci += wbuf[k] * (vi[i * d + k] * vr[j * d + k] - vr[i * d + k] * vi[j * d + k])
            mr[i * d + j] = accr
            mi[i * d + j] = acci
    for i in range(d):
        out[i] = mr[i * d + i]
    idx = d
    for i in range(d):
        for j in range(i + 1, d):
            out[idx] = mr[i * d + j] * _SQRT2
            out[idx + no] = mi[i * d + j] * _SQRT2
            idx += 1


def admm_chunk(double[:, ::1] P, double[::1] q, double[::1] shift,
               double[::1] x, double[::1] z, double[::1] u,
               int[::1] bkind, int[::1] bdim, int[::1] boff,
               int iters, double alpha):
    """Run `iters` scaled-ADMM iterations in place; see _pykernels.admm_chunk."""
    cdef int n = x.shape[0]
    cdef int nb = bdim.shape[0]
    cdef int it, i, k, dmax
    cdef double gap, dz, diff
    cdef cnp.ndarray[double, ndim=1] tbuf = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] wbuf = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] zprev = np.empty(n)
    cdef double[::1] t = tbuf
    cdef double[::1] wv = wbuf
    cdef double[::1] zp = zprev
    dmax = 1
    for k in range(nb):
        if bdim[k] > dmax:
            dmax = bdim[k]
    cdef cnp.ndarray[double, ndim=1] mb = np.empty(2 * dmax * dmax)
    cdef cnp.ndarray[double, ndim=1] vb = np.empty(2 * dmax * dmax)
    cdef cnp.ndarray[double, ndim=1] eb = np.empty(dmax)
    cdef double* mbuf = &mb[0]
    cdef double* vbuf = &vb[0]
    cdef double* ebuf = &eb[0]
    cdef double one = 1.0
    cdef double zero = 0.0
    cdef int ione = 1
    cdef char trans = b"N"
    with nogil:
        for it in range(iters):
            for i in range(n):
                t[i] = z[i] - u[i] - shift[i]
            # x = P t + q   (P symmetric, so layout order is immaterial)
            dgemv(&trans, &n, &n, &one, &P[0, 0], &n, &t[0], &ione, &zero, &x[0], &ione)
            for i in range(n):
                x[i] += q[i]
                t[i] = alpha * x[i] + (1.0 - alpha) * z[i]  # over-relaxed point
                wv[i] = t[i] + u[i]
                zp[i] = z[i]
            for k in range(nb):
                if bkind[k] == 0:
                    _psd_block_sym(&wv[0] + boff[k], &z[0] + boff[k], bdim[k],
                                   mbuf, vbuf, ebuf)
                else:
                    _psd_block_herm(&wv[0] + boff[k], &z[0] + boff[k], bdim[k],
                                    mbuf, vbuf, ebuf)
            for i in range(n):
                u[i] += t[i] - z[i]
        gap = 0.0
        dz = 0.0
        for i in range(n):
            diff = x[i] - z[i]
            gap += diff * diff
            diff = z[i] - zp[i]
            dz += diff * diff
    return sqrt(gap), sqrt(dz)


# ---------------------------------------------------------------------------
# Born-rule contraction and the constrained-realization simplex search
# ---------------------------------------------------------------------------

def born_probability(state, vecs):
    """P(outcome tuple) = |<v_1 x ... x v_p | state>|^2 for projector kets."""
    cdef cnp.ndarray[complex, ndim=1] st = np.ascontiguousarray(state, dtype=np.complex128)
    cdef cnp.ndarray[complex, ndim=2] vv = np.ascontiguousarray(vecs, dtype=np.complex128)
    cdef int p = vv.shape[0]
    return _born_prob(&st[0], &vv[0, 0], p)


cdef double _born_prob(double complex* state, double complex* vecs,
                       int p) noexcept nogil:
    cdef int idx, party, bit
    cdef double complex amp = 0.0
    cdef double complex coef, v
    for idx in range(1 << p):
        coef = 1.0
        for party in range(p):
            bit = (idx >> (p - 1 - party)) & 1
            v = vecs[2 * party + bit]
            coef *= v.real - 1j * v.imag
        amp += coef * state[idx]
    return amp.real * amp.real + amp.imag * amp.imag


cdef double _family_objective(double* params, int p, int m, int schmidt_mode,
                              int* cons_in, int* cons_out, double* cons_val,
                              int ncons, int* obj_in, int* obj_out,
                              double kappa, double complex* state,
                              double complex* kets,
                              double complex* sel) noexcept nogil:
    cdef int dim = 1 << p
    cdef int i, k, party, inp, kk
    cdef double a, nrm, th, ph, r, pen
    cdef double complex h0, h1
    if schmidt_mode:
        a = params[0]
        if a < 0.0:
            a = 0.0
        if a > 1.0:
            a = 1.0
        for i in range(dim):
            state[i] = 0.0
        state[0] = a
        state[dim - 1] = sqrt(1.0 - a * a)
        kk = 1
    else:
        nrm = 0.0
        for i in range(dim):
            state[i] = params[i] + 1j * params[dim + i]
            nrm += params[i] * params[i] + params[dim + i] * params[dim + i]
        if nrm < 1e-16:
            return 1e6
        nrm = sqrt(nrm)
        for i in range(dim):
            state[i] = state[i] / nrm
        kk = 2 * dim
    for party in range(p):
        for inp in range(m):
            th = params[kk]
            ph = params[kk + 1]
            kk += 2
            kets[(party * m + inp) * 2] = cos(0.5 * th)
            kets[(party * m + inp) * 2 + 1] = sin(0.5 * th) * (cos(ph) + 1j * sin(ph))
    pen = 0.0
    for k in range(ncons):
        for party in range(p):
            h0 = kets[(party * m + cons_in[k * p + party]) * 2]
            h1 = kets[(party * m + cons_in[k * p + party]) * 2 + 1]
            if cons_out[k * p + party] == 0:
                sel[2 * party] = h0
                sel[2 * party + 1] = h1
            else:
                sel[2 * party] = -(h1.real - 1j * h1.imag)
                sel[2 * party + 1] = h0.real - 1j * h0.imag
        r = _born_prob(state, sel, p) - cons_val[k]
        pen += r * r
    for party in range(p):
        h0 = kets[(party * m + obj_in[party]) * 2]
        h1 = kets[(party * m + obj_in[party]) * 2 + 1]
        if obj_out[party] == 0:
            sel[2 * party] = h0
            sel[2 * party + 1] = h1
        else:
            sel[2 * party] = -(h1.real - 1j * h1.imag)
            sel[2 * party + 1] = h0.real - 1j * h0.imag
    return _born_prob(state, sel, p) + kappa * pen


def family_objective(params, int p, int m, int schmidt_mode, cons_in, cons_out,
                     cons_val, obj_in, obj_out, double kappa):
    """Penalized objective: target probability + kappa * sum of squared
    constraint residuals."""
    cdef cnp.ndarray[double, ndim=1] pv = np.ascontiguousarray(params, dtype=np.float64)
    cdef cnp.ndarray[int, ndim=2] ci = np.ascontiguousarray(cons_in, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=2] co = np.ascontiguousarray(cons_out, dtype=np.intc)
    cdef cnp.ndarray[double, ndim=1] cv = np.ascontiguousarray(cons_val, dtype=np.float64)
    cdef cnp.ndarray[int, ndim=1] oi = np.ascontiguousarray(obj_in, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1] oo = np.ascontiguousarray(obj_out, dtype=np.intc)
    cdef cnp.ndarray[complex, ndim=1] state = np.empty(1 << p, dtype=np.complex128)
    cdef cnp.ndarray[complex, ndim=1] kets = np.empty(2 * p * m, dtype=np.complex128)
    cdef cnp.ndarray[complex, ndim=1] sel = np.empty(2 * p, dtype=np.complex128)
    return _family_objective(&pv[0], p, m, schmidt_mode, &ci[0, 0], &co[0, 0],
                             &cv[0], cv.shape[0], &oi[0], &oo[0], kappa,
                             &state[0], &kets[0], &sel[0])


def nm_family_minimize(int p, int m, int schmidt_mode, cons_in, cons_out, cons_val,
                       obj_in, obj_out, double kappa, x0, double step,
                       int maxfev, double xatol, double fatol):
    """Nelder-Mead with adaptive coefficients on the penalized objective.

    Mirrors _pykernels.nm_family_minimize; returns
    (best_params, best_value, nfev).
    """
    cdef cnp.ndarray[int, ndim=2] ci = np.ascontiguousarray(cons_in, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=2] co = np.ascontiguousarray(cons_out, dtype=np.intc)
    cdef cnp.ndarray[double, ndim=1] cv = np.ascontiguousarray(cons_val, dtype=np.float64)
    cdef cnp.ndarray[int, ndim=1] oi = np.ascontiguousarray(obj_in, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1] oo = np.ascontiguousarray(obj_out, dtype=np.intc)
    cdef cnp.ndarray[double, ndim=1] start = np.array(x0, dtype=np.float64)
    cdef int n = start.shape[0]
    cdef int ncons = cv.shape[0]
    cdef cnp.ndarray[complex, ndim=1] state = np.empty(1 << p, dtype=np.complex128)
    cdef cnp.ndarray[complex, ndim=1] kets = np.empty(2 * p * m, dtype=np.complex128)
    cdef cnp.ndarray[complex, ndim=1] sel = np.empty(2 * p, dtype=np.complex128)

    cdef double ralpha = 1.0
    cdef double rbeta = 1.0 + 2.0 / n
    cdef double rgamma = 0.75 - 0.5 / n
    cdef double rdelta = 1.0 - 1.0 / n

    cdef cnp.ndarray[double, ndim=2] simbuf = np.empty((n + 1, n))
    cdef cnp.ndarray[double, ndim=1] fsimbuf = np.empty(n + 1)
    cdef double[:, ::1] sim = simbuf
    cdef double[::1] fsim = fsimbuf
    cdef cnp.ndarray[double, ndim=1] centroid = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] xr = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] xe = np.empty(n)
    cdef double[::1] cen = centroid
    cdef double[::1] xrv = xr
    cdef double[::1] xev = xe
    cdef int i, j, nfev, besti
    cdef double fr, fe, fc, sx, sf, d

    for j in range(n):
        sim[0, j] = start[j]
    for i in range(n):
        for j in range(n):
            sim[i + 1, j] = start[j]
        if step > 0.0:
            sim[i + 1, i] += step
        elif sim[i + 1, i] != 0.0:
            sim[i + 1, i] *= 1.05
        else:
            sim[i + 1, i] = 0.00025
    for i in range(n + 1):
        fsim[i] = _family_objective(&sim[i, 0], p, m, schmidt_mode, &ci[0, 0],
                                    &co[0, 0], &cv[0], ncons, &oi[0], &oo[0],
                                    kappa, &state[0], &kets[0], &sel[0])
    nfev = n + 1

    while nfev < maxfev:
        order = np.argsort(fsimbuf, kind="stable")
        simbuf = np.ascontiguousarray(simbuf[order])
        fsimbuf = np.ascontiguousarray(fsimbuf[order])
        sim = simbuf
        fsim = fsimbuf
        sx = 0.0
        sf = 0.0
        for i in range(1, n + 1):
            for j in range(n):
                d = fabs(sim[i, j] - sim[0, j])
                if d > sx:
                    sx = d
            d = fabs(fsim[i] - fsim[0])
            if d > sf:
                sf = d
        if sx <= xatol and sf <= fatol:
            break
        for j in range(n):
            d = 0.0
            for i in range(n):
                d += sim[i, j]
            cen[j] = d / n
        for j in range(n):
            xrv[j] = cen[j] + ralpha * (cen[j] - sim[n, j])
        fr = _family_objective(&xrv[0], p, m, schmidt_mode, &ci[0, 0], &co[0, 0],
                               &cv[0], ncons, &oi[0], &oo[0], kappa,
                               &state[0], &kets[0], &sel[0])
        nfev += 1
        if fr < fsim[0]:
            for j in range(n):
                xev[j] = cen[j] + rbeta * (xrv[j] - cen[j])
            fe = _family_objective(&xev[0], p, m, schmidt_mode, &ci[0, 0],
                                   &co[0, 0], &cv[0], ncons, &oi[0], &oo[0],
                                   kappa, &state[0], &kets[0], &sel[0])
            nfev += 1
            if fe < fr:
                for j in range(n):
                    sim[n, j] = xev[j]
                fsim[n] = fe
            else:
                for j in range(n):
                    sim[n, j] = xrv[j]
                fsim[n] = fr
        elif fr < fsim[n - 1]:
            for j in range(n):
                sim[n, j] = xrv[j]
            fsim[n] = fr
        else:
            if fr < fsim[n]:
                for j in range(n):
                    xev[j] = cen[j] + rgamma * (xrv[j] - cen[j])
                fc = _family_objective(&xev[0], p, m, schmidt_mode, &ci[0, 0],
                                       &co[0, 0], &cv[0], ncons, &oi[0], &oo[0],
                                       kappa, &state[0], &kets[0], &sel[0])
                nfev += 1
                if fc <= fr:
                    for j in range(n):
                        sim[n, j] = xev[j]
                    fsim[n] = fc
                else:
                    nfev = _nm_shrink(sim, fsim, rdelta, n, nfev, p, m,
                                      schmidt_mode, &ci[0, 0], &co[0, 0], &cv[0],
                                      ncons, &oi[0], &oo[0], kappa, &state[0],
                                      &kets[0], &sel[0])
            else:
                for j in range(n):
                    xev[j] = cen[j] - rgamma * (cen[j] - sim[n, j])
                fc = _family_objective(&xev[0], p, m, schmidt_mode, &ci[0, 0],
                                       &co[0, 0], &cv[0], ncons, &oi[0], &oo[0],
                                       kappa, &state[0], &kets[0], &sel[0])
                nfev += 1
                if fc < fsim[n]:
                    for j in range(n):
                        sim[n, j] = xev[j]
                    fsim[n] = fc
                else:
                    nfev = _nm_shrink(sim, fsim, rdelta, n, nfev, p, m,
                                      schmidt_mode, &ci[0, 0], &co[0, 0], &cv[0],
                                      ncons, &oi[0], &oo[0], kappa, &state[0],
                                      &kets[0], &sel[0])
    besti = int(np.argmin(fsimbuf))
    return simbuf[besti].copy(), float(fsimbuf[besti]), nfev


cdef int _nm_shrink(double[:, ::1] sim, double[::1] fsim, double rdelta, int n,
                    int nfev, int p, int m, int schmidt_mode, int* ci, int* co,
                    double* cv, int ncons, int* oi, int* oo, double kappa,
                    double complex* state, double complex* kets,
                    double complex* sel):
    cdef int i, j
    for i in range(1, n + 1):
        for j in range(n):
            sim[i, j] = sim[0, j] + rdelta * (sim[i, j] - sim[0, j])
        fsim[i] = _family_objective(&sim[i, 0], p, m, schmidt_mode, ci, co, cv,
                                    ncons, oi, oo, kappa, state, kets, sel)
        nfev += 1
    return nfev
