"""Small self-contained semidefinite-program engine.

Minimizes a real linear objective over Hermitian PSD variable blocks
subject to affine equality constraints.  Blocks whose data are purely
real are handled as real symmetric matrices; genuinely complex blocks
keep explicit (re, im) storage at the interface.

Two solution paths share one problem representation:

* ``interior-point`` (default): infeasible-start primal-dual
  predictor-corrector with the symmetrized HRVW/KSH direction.  On the
  degenerate moment problems posed here, first-order splitting shows a
  sublinear tail (empirically ~1/sqrt(k)), so the interior-point path
  is what production callers get.
* ``splitting``: scaled ADMM alternating a least-squares projection
  onto the affine set (objective folded in as a shifted projection
  point, consensus multiplier updated by dual ascent) and PSD-cone
  projections of every block via the Jacobi kernels.  Kept as an
  independent cross-check of the interior-point path and exercised by
  the regression suite.

The affine projector of the splitting path is formed once per problem
from a factorization of the constraint Gram matrix and reused across
all iterations.  Feasibility questions go through ``check_feasibility``,
which maximizes the smallest eigenvalue over the affine slice; that
stays numerically meaningful for sets with empty interior, where plain
alternating projections stall.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from maxrand.backend import kernels
from maxrand.matkernel import ComplexMatrix

_SQRT2 = math.sqrt(2.0)

#: Residual floor above which the affine system is declared inconsistent.
AFFINE_INCONSISTENCY_FLOOR = 1e-9
#: Maximal-slack value below which check_feasibility reports infeasible.
FEASIBILITY_BAND = 1e-7


@dataclass(frozen=True)
class SdpOptions:
    method: str = "interior-point"  # interior-point | splitting
    tol: float = 1e-9
    max_iter: int = 200000          # splitting iteration cap
    ipm_max_iter: int = 200
    rho: float = 1.0
    over_relax: float = 1.7
    check_every: int = 200
    #: consecutive stalled checks before declaring primal infeasibility
    stall_checks: int = 8


def _coeff_pair(coeff):
    a = np.asarray(coeff)
    if np.iscomplexobj(a):
        re, im = a.real.astype(np.float64), a.imag.astype(np.float64)
    else:
        re, im = a.astype(np.float64), np.zeros_like(a, dtype=np.float64)
    # only the Hermitian part of a coefficient can matter
    return (re + re.T) / 2.0, (im - im.T) / 2.0


class SdpProblem:
    """Block-PSD variables, linear objective, affine equality constraints.

    Coefficients are given per block as square arrays (real or
    complex); functionals evaluate as sum_k Re tr(H_k X_k).
    """

    def __init__(self, block_dims):
        self.block_dims = [int(d) for d in block_dims]
        if any(d < 1 for d in self.block_dims):
            raise ValueError("block dimensions must be positive")
        self.objective = {}
        self.constraints = []

    def set_objective(self, coeffs: dict) -> None:
        self.objective = {int(k): _coeff_pair(v) for k, v in coeffs.items()}
        self._check_blocks(self.objective)

    def add_constraint(self, coeffs: dict, rhs: float) -> None:
        pairs = {int(k): _coeff_pair(v) for k, v in coeffs.items()}
        self._check_blocks(pairs)
        self.constraints.append((pairs, float(rhs)))

    def _check_blocks(self, pairs):
        for k, (re, _) in pairs.items():
            if not 0 <= k < len(self.block_dims):
                raise ValueError(f"block index {k} out of range")
            d = self.block_dims[k]
            if re.shape != (d, d):
                raise ValueError(f"coefficient for block {k} has shape "
                                 f"{re.shape}, expected ({d}, {d})")


@dataclass(frozen=True)
class SdpSolution:
    status: str  # optimal | infeasible | indeterminate
    objective_value: float
    blocks: list = field(repr=False)
    equality_residual: float
    min_eigenvalue: float
    iterations: int

    def block_matrix(self, k: int) -> ComplexMatrix:
        re, im = self.blocks[k]
        return ComplexMatrix(re, im)


@dataclass(frozen=True)
class FeasibilityResult:
    status: str  # feasible | infeasible | indeterminate
    slack: float  # maximal common smallest eigenvalue over the affine slice
    blocks: list = field(repr=False)  # certificate point when feasible
    solver: SdpSolution = field(repr=False)


class _Vectorizer:
    """Isometric real coordinates for a list of Hermitian blocks.

    Real blocks use [diag, sqrt2 * upper-re]; complex blocks append
    [sqrt2 * upper-im].  Frobenius inner products become dot products.
    """

    def __init__(self, block_dims, complex_flags):
        self.dims = list(block_dims)
        self.kinds = [1 if c else 0 for c in complex_flags]
        self.offsets = []
        n = 0
        for d, kind in zip(self.dims, self.kinds):
            self.offsets.append(n)
            n += d * d if kind else d * (d + 1) // 2
        self.size = n

    def coeff_row(self, pairs: dict) -> np.ndarray:
        row = np.zeros(self.size)
        for k, (re, im) in pairs.items():
            d = self.dims[k]
            off = self.offsets[k]
            iu = np.triu_indices(d, 1)
            row[off:off + d] = np.diagonal(re)
            no = d * (d - 1) // 2
            row[off + d:off + d + no] = _SQRT2 * re[iu]
            if self.kinds[k]:
                row[off + d + no:off + d + 2 * no] = _SQRT2 * im[iu]
            elif np.any(im[iu] != 0.0):
                raise ValueError("complex coefficient on a block detected as real")
        return row

    def unvec(self, v: np.ndarray, k: int):
        d = self.dims[k]
        off = self.offsets[k]
        no = d * (d - 1) // 2
        re = np.zeros((d, d))
        im = np.zeros((d, d))
        re[np.diag_indices(d)] = v[off:off + d]
        iu = np.triu_indices(d, 1)
        upper = v[off + d:off + d + no] / _SQRT2
        re[iu] = upper
        re.T[iu] = upper
        if self.kinds[k]:
            ui = v[off + d + no:off + d + 2 * no] / _SQRT2
            im[iu] = ui
            im.T[iu] = -ui
        return re, im

    def block_mat(self, v: np.ndarray, k: int):
        """Block as a numpy matrix, complex only when the block is complex."""
        re, im = self.unvec(v, k)
        return re + 1j * im if self.kinds[k] else re

    def vec_block(self, out: np.ndarray, k: int, mat) -> None:
        d = self.dims[k]
        off = self.offsets[k]
        no = d * (d - 1) // 2
        iu = np.triu_indices(d, 1)
        if self.kinds[k]:
            out[off:off + d] = np.diagonal(mat).real
            out[off + d:off + d + no] = _SQRT2 * np.asarray(mat)[iu].real
            out[off + d + no:off + d + 2 * no] = _SQRT2 * np.asarray(mat)[iu].imag
        else:
            out[off:off + d] = np.diagonal(mat)
            out[off + d:off + d + no] = _SQRT2 * np.asarray(mat)[iu]


def _build(problem: SdpProblem):
    nb = len(problem.block_dims)
    complex_flags = [False] * nb
    for pairs in [problem.objective] + [c for c, _ in problem.constraints]:
        for k, (_, im) in pairs.items():
            if np.any(im != 0.0):
                complex_flags[k] = True
    vec = _Vectorizer(problem.block_dims, complex_flags)
    rows = []
    rhs = []
    for pairs, b in problem.constraints:
        row = vec.coeff_row(pairs)
        nrm = float(np.linalg.norm(row))
        if nrm == 0.0:
            if abs(b) > AFFINE_INCONSISTENCY_FLOOR:
                raise ValueError(f"constraint with zero functional and rhs {b}")
            continue
        rows.append(row / nrm)
        rhs.append(b / nrm)
    a = np.array(rows) if rows else np.zeros((0, vec.size))
    b = np.array(rhs)
    c = vec.coeff_row(problem.objective) if problem.objective else np.zeros(vec.size)
    return vec, a, b, c


def _gram_solve(a, b):
    """Least-squares multipliers for A^T mu with A q = b; Cholesky when the
    Gram matrix is positive definite, spectral pseudo-inverse otherwise."""
    gram = a @ a.T
    try:
        np.linalg.cholesky(gram)
        ginv_a = np.linalg.solve(gram, a)
        ginv_b = np.linalg.solve(gram, b)
    except np.linalg.LinAlgError:
        w, v = np.linalg.eigh(gram)
        cut = max(float(w.max()), 0.0) * 1e-13 + 1e-300
        winv = np.where(w > cut, 1.0 / np.where(w > cut, w, 1.0), 0.0)
        ginv = (v * winv) @ v.T
        ginv_a = ginv @ a
        ginv_b = ginv @ b
    return ginv_a, ginv_b


def _consistency(a, b, n):
    """(q, consistent): least-squares point of {Av = b} and whether it fits."""
    if a.shape[0] == 0:
        return np.zeros(n), True
    ginv_a, ginv_b = _gram_solve(a, b)
    q = a.T @ ginv_b
    residual = float(np.max(np.abs(a @ q - b)))
    scale = max(1.0, float(np.max(np.abs(b))))
    return q, residual <= AFFINE_INCONSISTENCY_FLOOR * scale


def solve(problem: SdpProblem, opts: SdpOptions = SdpOptions()) -> SdpSolution:
    """Minimize the problem objective.

    Deterministic given the problem and options.  Status is
    ``indeterminate`` when the iteration cap is reached before the
    residual targets; inconsistent affine constraints are reported as
    ``infeasible`` directly from the least-squares residual floor.
    """
    vec, a, b, c = _build(problem)
    n = vec.size
    q, consistent = _consistency(a, b, n)
    if not consistent:
        return _solution(vec, np.zeros(n), a, b, c, "infeasible", 0)
    if opts.method == "interior-point":
        return _ipm_solve(vec, a, b, c, opts)
    if opts.method == "splitting":
        return _splitting_solve(vec, a, b, c, q, opts)
    raise ValueError(f"unknown method {opts.method!r}")


def _block_mineig(vec, z):
    mineig = 0.0
    for k in range(len(vec.dims)):
        re, im = vec.unvec(z, k)
        if np.any(im != 0.0):
            w, _, _ = kernels.eigh_herm(re, im)
        else:
            w, _ = kernels.eigh_sym(re)
        mineig = min(mineig, float(w[-1]))
    return mineig


def _psd_project_vec(vec, z):
    out = z.copy()
    for k in range(len(vec.dims)):
        re, im = vec.unvec(z, k)
        if vec.kinds[k]:
            re, im = kernels.psd_project_herm(re, im)
            vec.vec_block(out, k, re + 1j * im)
        else:
            vec.vec_block(out, k, kernels.psd_project_sym(re))
    return out


def _polish(vec, a, b, z, rounds: int = 8):
    """Alternate affine and PSD projections from a near-solution point.

    Removes the objective bias a residual-weighted dual would otherwise
    introduce on degenerate problems; returns the iterate with the
    smallest combined violation.
    """
    if a.shape[0] == 0:
        return _psd_project_vec(vec, z)
    ginv_a, ginv_b = _gram_solve(a, b)

    def aff(v):
        return v - a.T @ (ginv_a @ v) + a.T @ ginv_b

    def violation(v):
        res = float(np.max(np.abs(a @ v - b)))
        return max(res, -_block_mineig(vec, v))

    best = z
    best_v = violation(z)
    cur = z
    for _ in range(rounds):
        cur = _psd_project_vec(vec, aff(cur))
        v = violation(cur)
        if v < best_v:
            best, best_v = cur, v
        if v <= 1e-10:
            break
    return best


def _solution(vec, z, a, b, c, status, iterations, polish=False) -> SdpSolution:
    if polish and status == "optimal":
        z = _polish(vec, a, b, z)
    blocks = [vec.unvec(z, k) for k in range(len(vec.dims))]
    res = float(np.max(np.abs(a @ z - b))) if a.shape[0] else 0.0
    return SdpSolution(
        status=status,
        objective_value=float(c @ z),
        blocks=blocks,
        equality_residual=res,
        min_eigenvalue=_block_mineig(vec, z),
        iterations=iterations,
    )


# ---------------------------------------------------------------------------
# Splitting path
# ---------------------------------------------------------------------------

def _splitting_solve(vec, a, b, c, q, opts) -> SdpSolution:
    n = vec.size
    if a.shape[0]:
        ginv_a, _ = _gram_solve(a, b)
        p = np.eye(n) - a.T @ ginv_a
    else:
        p = np.eye(n)
    bkind = np.array(vec.kinds, dtype=np.intc)
    bdim = np.array(vec.dims, dtype=np.intc)
    boff = np.array(vec.offsets, dtype=np.intc)
    x = q.copy()
    z = np.zeros(n)
    u = np.zeros(n)
    rho = opts.rho
    shift = c / rho
    scale_b = max(1.0, float(np.max(np.abs(b))) if b.size else 0.0)

    iters_done = 0
    gap_prev = None
    stall = 0
    status = "indeterminate"
    while iters_done < opts.max_iter:
        chunk = min(opts.check_every, opts.max_iter - iters_done)
        gap, dz = kernels.admm_chunk(p, q, shift, x, z, u, bkind, bdim, boff,
                                     chunk, opts.over_relax)
        iters_done += chunk
        scale = max(1.0, float(np.linalg.norm(z)))
        res_aff = float(np.max(np.abs(a @ z - b))) if a.shape[0] else 0.0
        if (gap <= opts.tol * scale and dz <= opts.tol * scale
                and res_aff <= max(opts.tol * scale_b * 10.0, 1e-10)):
            status = "optimal"
            break
        # primal infeasibility: the consensus gap stops shrinking while the
        # iterates themselves have stopped moving
        if gap_prev is not None and gap > max(100.0 * opts.tol * scale, 1e-7):
            if abs(gap_prev - gap) <= 1e-3 * gap and dz <= max(1e-4 * gap, 1e-12):
                stall += 1
                if stall >= opts.stall_checks:
                    status = "infeasible"
                    break
            else:
                stall = 0
        gap_prev = gap
        # residual balancing keeps the two projection sequences in step
        rp = gap
        rd = rho * dz
        if rp > 10.0 * rd and rho < 1e4:
            rho *= 2.0
            u /= 2.0
            shift = c / rho
        elif rd > 10.0 * rp and rho > 1e-4:
            rho /= 2.0
            u *= 2.0
            shift = c / rho
    return _solution(vec, z, a, b, c, status, iters_done, polish=True)


# ---------------------------------------------------------------------------
# Interior-point path
# ---------------------------------------------------------------------------

def _constraint_tensors(vec, a):
    """Per-block (m, d, d) stacks of the constraint coefficient matrices."""
    m = a.shape[0]
    tensors = []
    for k, d in enumerate(vec.dims):
        off = vec.offsets[k]
        no = d * (d - 1) // 2
        dtype = np.complex128 if vec.kinds[k] else np.float64
        t = np.zeros((m, d, d), dtype=dtype)
        idx = np.arange(d)
        t[:, idx, idx] = a[:, off:off + d]
        iu, ju = np.triu_indices(d, 1)
        upper = a[:, off + d:off + d + no] / _SQRT2
        t[:, iu, ju] += upper
        t[:, ju, iu] += upper
        if vec.kinds[k]:
            ui = a[:, off + d + no:off + d + 2 * no] / _SQRT2
            t[:, iu, ju] += 1j * ui
            t[:, ju, iu] -= 1j * ui
        tensors.append(t)
    return tensors


def _vec_batch(vec, k, mats):
    """Vectorize a (m, d, d) Hermitian batch into (m, block coords)."""
    d = vec.dims[k]
    no = d * (d - 1) // 2
    iu, ju = np.triu_indices(d, 1)
    idx = np.arange(d)
    cols = d * d if vec.kinds[k] else d + no
    out = np.empty((mats.shape[0], cols))
    out[:, :d] = mats[:, idx, idx].real
    out[:, d:d + no] = _SQRT2 * mats[:, iu, ju].real
    if vec.kinds[k]:
        out[:, d + no:] = _SQRT2 * mats[:, iu, ju].imag
    return out


def _step_to_boundary(mat, dmat):
    """Largest alpha <= 1 with mat + alpha * dmat staying positive definite."""
    try:
        ell = np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        return 0.0
    rhs = np.linalg.solve(ell, dmat)
    w = np.linalg.solve(ell, rhs.conj().T).conj().T
    lam = float(np.linalg.eigvalsh((w + w.conj().T) / 2.0)[0])
    if lam >= -1e-14:
        return 1.0
    return min(1.0, -0.98 / lam)


def _ipm_solve(vec, a, b, c, opts) -> SdpSolution:
    """Infeasible-start predictor-corrector with the symmetrized
    HRVW/KSH direction and a dense Schur-complement solve."""
    n = vec.size
    m = a.shape[0]
    dims = vec.dims
    nb = len(dims)
    nu = float(sum(dims))
    tensors = _constraint_tensors(vec, a)

    scale_p = max(1.0, float(np.max(np.abs(b))) if m else 1.0)
    scale_d = max(1.0, float(np.max(np.abs(c))) if n else 1.0)
    eye = [np.eye(d, dtype=np.complex128 if vec.kinds[k] else np.float64)
           for k, d in enumerate(dims)]
    x_blocks = [scale_p * eye[k] for k in range(nb)]
    s_blocks = [scale_d * eye[k] for k in range(nb)]
    y = np.zeros(m)

    x_vec = np.zeros(n)
    s_vec = np.zeros(n)

    def sync():
        for k in range(nb):
            vec.vec_block(x_vec, k, x_blocks[k])
            vec.vec_block(s_vec, k, s_blocks[k])

    sync()
    # hard target ends the loop; the soft band accepts a stalled endgame,
    # which is routine when the optimal face is degenerate
    hard_tol = opts.tol * 10.0
    soft_tol = max(1e-6, hard_tol)
    best_metric = float("inf")
    best_x = x_vec.copy()
    status = "indeterminate"
    it = 0
    for it in range(1, opts.ipm_max_iter + 1):
        rp = b - a @ x_vec if m else np.zeros(0)
        rd = c - (a.T @ y if m else 0.0) - s_vec
        gap = float(x_vec @ s_vec)
        obj = float(c @ x_vec)
        rp_inf = float(np.max(np.abs(rp))) if m else 0.0
        rd_inf = float(np.max(np.abs(rd)))
        metric = max(rp_inf / scale_p, rd_inf / scale_d, gap / (1.0 + abs(obj)))
        if metric < best_metric:
            best_metric = metric
            best_x = x_vec.copy()
        if metric <= hard_tol:
            status = "optimal"
            break
        mu = gap / nu

        broke = False
        sinv = []
        for k in range(nb):
            s_blocks[k] = (s_blocks[k] + s_blocks[k].conj().T) / 2.0
            x_blocks[k] = (x_blocks[k] + x_blocks[k].conj().T) / 2.0
            try:
                inv = np.linalg.inv(s_blocks[k])
            except np.linalg.LinAlgError:
                broke = True
                break
            sinv.append((inv + inv.conj().T) / 2.0)
        if broke:
            break

        # Schur complement H_ij = <A_i, (X A_j Sinv + Sinv A_j X)/2>
        ea = np.empty((m, n))
        for k in range(nb):
            t = tensors[k]
            half = np.einsum("ij,mjl,lk->mik", x_blocks[k], t, sinv[k],
                             optimize=True)
            sym = (half + np.conj(np.swapaxes(half, 1, 2))) / 2.0
            off = vec.offsets[k]
            cols = dims[k] * dims[k] if vec.kinds[k] else dims[k] * (dims[k] + 1) // 2
            ea[:, off:off + cols] = _vec_batch(vec, k, sym)
        h = a @ ea.T if m else np.zeros((0, 0))
        h = (h + h.T) / 2.0

        chol = None
        jitter = 0.0
        hscale = max(1.0, float(np.trace(h)) / max(m, 1)) if m else 1.0
        for attempt in range(6):
            try:
                chol = np.linalg.cholesky(h + jitter * np.eye(m)) if m else None
                break
            except np.linalg.LinAlgError:
                jitter = max(jitter * 1000.0, 1e-14 * hscale)
        if m and chol is None:
            break

        def hsolve(rhs):
            w = np.linalg.solve(chol, rhs)
            return np.linalg.solve(chol.T, w)

        def e_op(k, mat):
            half = x_blocks[k] @ mat @ sinv[k]
            return (half + half.conj().T) / 2.0

        def direction(rc_blocks):
            vec_rc = np.zeros(n)
            vec_erd = np.zeros(n)
            for k in range(nb):
                vec.vec_block(vec_rc, k, rc_blocks[k])
                vec.vec_block(vec_erd, k, e_op(k, vec.block_mat(rd, k)))
            if m:
                rhs_y = rp - a @ (vec_rc - vec_erd)
                dy = hsolve(rhs_y)
                ds = rd - a.T @ dy
            else:
                dy = np.zeros(0)
                ds = rd.copy()
            dx_blocks = []
            dx_vec = np.zeros(n)
            for k in range(nb):
                dxk = rc_blocks[k] - e_op(k, vec.block_mat(ds, k))
                dxk = (dxk + dxk.conj().T) / 2.0
                dx_blocks.append(dxk)
                vec.vec_block(dx_vec, k, dxk)
            return dy, ds, dx_blocks, dx_vec

        # predictor
        rc_aff = [-x_blocks[k] for k in range(nb)]
        dy_a, ds_a, dx_a, dxv_a = direction(rc_aff)
        alpha_p = min(_step_to_boundary(x_blocks[k], dx_a[k]) for k in range(nb))
        alpha_d = min(_step_to_boundary(s_blocks[k], vec.block_mat(ds_a, k))
                      for k in range(nb))
        gap_aff = float((x_vec + alpha_p * dxv_a) @ (s_vec + alpha_d * ds_a))
        sigma = min(max((max(gap_aff, 0.0) / gap) ** 3, 1e-10), 1.0)

        # corrector
        rc = []
        for k in range(nb):
            dsk = vec.block_mat(ds_a, k)
            corr = (dx_a[k] @ dsk @ sinv[k] + sinv[k] @ dsk @ dx_a[k]) / 2.0
            rck = sigma * mu * sinv[k] - x_blocks[k] - corr
            rc.append((rck + rck.conj().T) / 2.0)
        dy, ds, dx_blocks, dxv = direction(rc)
        alpha_p = min(_step_to_boundary(x_blocks[k], dx_blocks[k]) for k in range(nb))
        alpha_d = min(_step_to_boundary(s_blocks[k], vec.block_mat(ds, k))
                      for k in range(nb))
        if max(alpha_p, alpha_d) < 1e-10:
            break
        for k in range(nb):
            x_blocks[k] = x_blocks[k] + alpha_p * dx_blocks[k]
            s_blocks[k] = s_blocks[k] + alpha_d * vec.block_mat(ds, k)
        y = y + alpha_d * dy
        sync()
    if status != "optimal" and best_metric <= soft_tol:
        status = "optimal"
    return _solution(vec, best_x if status == "optimal" else x_vec, a, b, c,
                     status, it, polish=True)


# ---------------------------------------------------------------------------
# Feasibility through maximal slack
# ---------------------------------------------------------------------------

def check_feasibility(problem: SdpProblem, opts: SdpOptions = SdpOptions(),
                      band: float = FEASIBILITY_BAND) -> FeasibilityResult:
    """Decide whether the constraint system admits a PSD point.

    Maximizes t with X_k - t I >= 0 over the affine slice (t capped at
    1, which cannot change the sign); feasible iff the optimum is
    >= -band.  This stays well conditioned for boundary instances,
    where a plain feasibility iteration can stall, and returns the
    attaining point as a certificate.
    """
    nb = len(problem.block_dims)
    aug = SdpProblem(problem.block_dims + [1, 1, 1])  # t+, t-, cap
    tp, tm, cap = nb, nb + 1, nb + 2
    one = np.eye(1)
    for pairs, rhs in problem.constraints:
        coeffs = {k: (re + 1j * im if np.any(im != 0.0) else re)
                  for k, (re, im) in pairs.items()}
        tr = sum(float(np.trace(re)) for re, _ in pairs.values())
        if tr != 0.0:
            coeffs[tp] = tr * one
            coeffs[tm] = -tr * one
        aug.add_constraint(coeffs, rhs)
    aug.add_constraint({tp: one, cap: one}, 1.0)  # t <= 1
    aug.set_objective({tp: -one, tm: one})
    sol = solve(aug, opts)
    if sol.status == "infeasible":
        return FeasibilityResult(status="infeasible", slack=float("-inf"),
                                 blocks=[], solver=sol)
    if sol.status != "optimal":
        return FeasibilityResult(status="indeterminate", slack=float("nan"),
                                 blocks=[], solver=sol)
    slack = -sol.objective_value
    status = "feasible" if slack >= -band else "infeasible"
    blocks = []
    if status == "feasible":
        shift = max(slack, 0.0)
        for k, d in enumerate(problem.block_dims):
            re, im = sol.blocks[k]
            blocks.append((re + shift * np.eye(d), im))
    return FeasibilityResult(status=status, slack=slack, blocks=blocks, solver=sol)


# ---------------------------------------------------------------------------
# Bundled regression set: tiny problems with known closed-form answers
# ---------------------------------------------------------------------------

def regression_set():
    """Ten tiny problems as (name, problem, expected objective or status)."""
    out = []

    p = SdpProblem([2])
    p.set_objective({0: np.eye(2)})
    p.add_constraint({0: np.diag([1.0, 0.0])}, 1.0)
    p.add_constraint({0: np.diag([0.0, 1.0])}, 1.0)
    out.append(("min trace, unit diagonal", p, 2.0))

    p = SdpProblem([2])
    p.add_constraint({0: np.eye(2)}, -1.0)
    out.append(("negative trace is infeasible", p, "infeasible"))

    p = SdpProblem([2])
    p.set_objective({0: -np.array([[0.0, 1.0], [1.0, 0.0]])})
    p.add_constraint({0: np.diag([1.0, 0.0])}, 1.0)
    p.add_constraint({0: np.diag([0.0, 1.0])}, 1.0)
    out.append(("max offdiagonal sum on correlation matrix", p, -2.0))

    p = SdpProblem([3])
    p.set_objective({0: np.diag([3.0, 1.0, 2.0])})
    p.add_constraint({0: np.eye(3)}, 1.0)
    out.append(("min diag objective on trace-one", p, 1.0))

    p = SdpProblem([2])
    p.set_objective({0: -np.array([[0.0, 1.0], [1.0, 0.0]])})
    p.add_constraint({0: np.diag([1.0, 0.0])}, 1.0)
    p.add_constraint({0: np.diag([0.0, 1.0])}, 1.0)
    p.add_constraint({0: np.array([[0.0, 1.0j], [-1.0j, 0.0]])}, 0.6)
    out.append(("max real part with pinned imaginary part", p, -2.0 * math.sqrt(0.91)))

    p = SdpProblem([1, 1])
    p.set_objective({0: np.eye(1), 1: np.eye(1)})
    p.add_constraint({0: np.eye(1), 1: np.eye(1)}, 2.0)
    out.append(("two coupled scalar blocks", p, 2.0))

    p = SdpProblem([2, 1])
    p.set_objective({1: np.eye(1)})
    p.add_constraint({0: np.diag([1.0, 0.0]), 1: -np.eye(1)}, -1.0)
    p.add_constraint({0: np.diag([0.0, 1.0]), 1: -np.eye(1)}, -2.0)
    p.add_constraint({0: np.array([[0.0, 1.0], [1.0, 0.0]])}, 0.0)
    out.append(("smallest shift making diag(1,2) negative semidefinite", p, 2.0))

    p = SdpProblem([2])
    p.add_constraint({0: np.diag([1.0, 0.0])}, 1.0)
    p.add_constraint({0: np.array([[0.0, 1.0], [1.0, 0.0]])}, 1.0)
    p.add_constraint({0: np.diag([0.0, 1.0])}, 0.2)
    out.append(("psd completion below the feasibility edge", p, "infeasible"))

    p = SdpProblem([2])
    p.add_constraint({0: np.diag([1.0, 0.0])}, 1.0)
    p.add_constraint({0: np.array([[0.0, 1.0], [1.0, 0.0]])}, 1.0)
    p.add_constraint({0: np.diag([0.0, 1.0])}, 0.5)
    out.append(("psd completion above the feasibility edge", p, "feasible"))

    p = SdpProblem([2])
    p.set_objective({0: np.diag([1.0, 0.0])})
    p.add_constraint({0: np.array([[0.0, 1.0], [1.0, 0.0]])}, 2.0)
    p.add_constraint({0: np.diag([0.0, 1.0])}, 1.0)
    out.append(("rank-deficient optimum", p, 1.0))

    return out
