"""Dense primal-dual interior-point solver for block-diagonal LMI problems.

Problem form (after folding ``max`` into ``min``)::

    minimize    c^T x
    subject to  S_j(x) = F0_j + sum_a x_a F_ja  PSD   for every block j
                A x = b

Algorithm: homogeneous self-dual embedding, Nesterov-Todd scaling per block,
Mehrotra predictor-corrector, infeasible start at ``s = z = I``.  Blocks of
the same order are stacked so every per-block kernel is one batched numpy
call.  The Newton system is reduced to the dense Schur complement
``M_ab = <W^-1 F_a W^-1, F_b>`` and factored by Cholesky.  ``s`` and ``z``
are kept explicitly and the scaling is recomputed from them each iteration.
A run that stops improving reports NumericalTrouble with its best iterate.
"""

from dataclasses import dataclass, field
import logging

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_SOLVER
from .errors import ArgumentError, SolverError
from .lmi import AffineMatrixMap, AffineScalar, SdpProblem, freeze_membership_problem

log = logging.getLogger(__name__)

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"
MAXITER = "MaxIter"
TROUBLE = "NumericalTrouble"


@dataclass
class SolveReport:
    status: str
    objective_value: float
    primal_point: np.ndarray
    complementarity: float
    primal_residual: float
    dual_residual: float
    iterations: int
    relative_gap: float = np.inf
    dual_objective: float = np.nan
    dual_equality: np.ndarray = field(default=None, repr=False)
    dual_blocks: list = field(default=None, repr=False)

    def to_dict(self):
        def num(v):
            return None if not np.isfinite(v) else float(v)
        return {
            "status": self.status,
            "objective_value": num(self.objective_value),
            "dual_objective": num(self.dual_objective),
            "primal_point": [float(v) for v in self.primal_point],
            "complementarity": num(self.complementarity),
            "relative_gap": num(self.relative_gap),
            "primal_residual": num(self.primal_residual),
            "dual_residual": num(self.dual_residual),
            "iterations": self.iterations,
        }


class _Group:
    """All blocks of one order ``d``, with per-block local variable lists.

    ``idx`` is padded with the dummy index ``N`` whose coefficient is zero.
    """

    def __init__(self, d, blocks, positions, N):
        self.d = d
        self.positions = positions
        K = max(1, max(len(b.coeffs) for b in blocks))
        B = len(blocks)
        self.idx = np.full((B, K), N, dtype=np.intp)
        self.F = np.zeros((B, K, d, d))
        self.F0 = np.zeros((B, d, d))
        for bi, b in enumerate(blocks):
            self.F0[bi] = b.const
            for ki, v in enumerate(sorted(b.coeffs)):
                self.idx[bi, ki] = v
                self.F[bi, ki] = b.coeffs[v]
        pair = self.idx[:, :, None] * (N + 1) + self.idx[:, None, :]
        self.pair = pair.ravel()

    def op(self, xe):
        """``sum_a x_a F_a`` per block (``xe`` has the dummy zero appended)."""
        return np.einsum("bkij,bk->bij", self.F, xe[self.idx])


def _sym(X):
    return 0.5 * (X + np.swapaxes(X, -1, -2))


def _diag(lam):
    d = lam.shape[-1]
    out = np.zeros(lam.shape + (d,))
    i = np.arange(d)
    out[..., i, i] = lam
    return out


def _lyap_div(lam, R):
    """Solve ``lam o U = R`` for ``U`` (``lam`` diagonal, symmetrized product)."""
    return 2.0 * R / (lam[..., :, None] + lam[..., None, :])


def _jordan(A, B):
    return _sym(A @ B)


def _max_step(lam, D):
    """Largest ``alpha`` with ``diag(lam) + alpha D`` PSD (inf if unbounded)."""
    isq = 1.0 / np.sqrt(lam)
    T = isq[..., :, None] * D * isq[..., None, :]
    emin = np.linalg.eigvalsh(_sym(T))[..., 0]
    m = float(np.min(emin)) if emin.size else 0.0
    return np.inf if m >= 0 else -1.0 / m


class _Compiled:
    def __init__(self, problem):
        N = problem.nvars
        self.N = N
        sign = -1.0 if problem.sense == "max" else 1.0
        self.sign = sign
        self.c = np.zeros(N)
        for i, v in problem.objective.coeffs.items():
            self.c[i] += sign * v
        self.c0 = problem.objective.const
        A = np.zeros((len(problem.equalities), N))
        b = np.zeros(len(problem.equalities))
        for r, e in enumerate(problem.equalities):
            for i, v in e.coeffs.items():
                A[r, i] += v
            b[r] = -e.const
        self.A_orig, self.b_orig = A, b
        by_dim = {}
        for pos, blk in enumerate(problem.psd_blocks):
            by_dim.setdefault(blk.dim, []).append(pos)
        self.groups = [_Group(d, [problem.psd_blocks[p] for p in pos], pos, N)
                       for d, pos in sorted(by_dim.items())]
        self.nu = sum(blk.dim for blk in problem.psd_blocks)

    def reduce_equalities(self):
        """Replace ``A x = b`` by an equivalent system with orthonormal rows.

        Returns False when the system is inconsistent.
        """
        A, b = self.A_orig, self.b_orig
        self.T = np.zeros((0, A.shape[0]))
        if A.shape[0] == 0:
            self.A, self.b = A, b
            return True
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
        tol = max(A.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
        r = int(np.sum(s > max(tol, 1e-13)))
        Ur = U[:, :r]
        resid = b - Ur @ (Ur.T @ b)
        if np.linalg.norm(resid) > 1e-9 * (1.0 + np.linalg.norm(b)):
            return False
        self.A = Vt[:r]
        self.b = (Ur.T @ b) / s[:r]
        self.T = Ur / s[:r]  # y_orig = T @ y
        return True

    def F_op(self, x):
        xe = np.append(x, 0.0)
        return [g.op(xe) for g in self.groups]

    def F_adj(self, Z):
        out = np.zeros(self.N + 1)
        for g, Zg in zip(self.groups, Z):
            vals = np.einsum("bkij,bij->bk", g.F, Zg)
            out += np.bincount(g.idx.ravel(), vals.ravel(), minlength=self.N + 1)
        return out[:self.N]


def _inner(X, Y):
    return float(sum(np.sum(a * b) for a, b in zip(X, Y)))


def _norm(X):
    return float(np.sqrt(sum(np.sum(a * a) for a in X)))


class _KKT:
    """Factorization of ``[[M, A^T], [A, 0]]`` for the current scaling.

    ``M + rho A^T A`` is factored by Cholesky (with escalating diagonal
    regularization if needed) and the equalities are eliminated through
    ``A H^-1 A^T``.  Solves are followed by iterative refinement against the
    unregularized system, which keeps the residuals decreasing when ``M`` is
    nearly singular close to the optimum.  ``op`` applies ``M`` without forming
    it; refining against it removes the rounding of the assembled matrix.
    """

    refine_steps = 3

    def __init__(self, M, A, op=None):
        self.M = M
        self.op = op if op is not None else (lambda v: M @ v)
        self.A = A
        scale = float(np.max(np.diag(M))) if M.size else 1.0
        self.rho = max(scale, 1.0)
        H = M + self.rho * (A.T @ A) if A.size else M.copy()
        self.cho = None
        reg = 0.0
        base = max(scale, 1.0)
        for _ in range(8):
            try:
                self.cho = sla.cho_factor(H + reg * np.eye(H.shape[0]), lower=True, check_finite=True)
                break
            except (np.linalg.LinAlgError, ValueError):
                reg = base * (1e-14 if reg == 0.0 else reg / base * 100.0)
        if self.cho is None:
            raise np.linalg.LinAlgError("Schur complement factorization failed")
        if A.shape[0]:
            HiAt = sla.cho_solve(self.cho, A.T)
            S = A @ HiAt
            self.HiAt = HiAt
            self.cho_S = sla.cho_factor(S + 1e-15 * np.trace(S) * np.eye(S.shape[0]), lower=True)

    def _solve_once(self, p, q):
        if self.A.shape[0] == 0:
            return sla.cho_solve(self.cho, p), np.zeros(0)
        rhs = p + self.rho * (self.A.T @ q)
        u = sla.cho_solve(self.cho, rhs)
        dy = sla.cho_solve(self.cho_S, self.A @ u - q)
        dx = u - self.HiAt @ dy
        return dx, dy

    def solve(self, p, q):
        if p.size == 0:
            return p.copy(), np.zeros(self.A.shape[0])
        dx, dy = self._solve_once(p, q)
        scale = max(np.linalg.norm(p), np.linalg.norm(q), 1e-300)

        def residual(dx, dy):
            rp = p - self.op(dx) - self.A.T @ dy
            rq = q - self.A @ dx
            return rp, rq, max(np.linalg.norm(rp), np.linalg.norm(rq))

        rp, rq, err = residual(dx, dy)
        for _ in range(self.refine_steps):
            if err <= 1e-15 * scale:
                break
            cx, cy = self._solve_once(rp, rq)
            rp2, rq2, err2 = residual(dx + cx, dy + cy)
            # a nearly singular M can make the correction diverge; keep the best
            if not err2 < err:
                break
            dx, dy, rp, rq, err = dx + cx, dy + cy, rp2, rq2, err2
        return dx, dy


def solve(problem, config=DEFAULT_SOLVER):
    """Solve an :class:`SdpProblem`; never raises for solver-side failures.

    Optimal requires primal and dual residuals below ``feastol``, each relative
    to the largest of 1, its data norm and the norms of its iterate terms, and ``gap / max(1, |pcost|, |dcost|) <= reltol`` or
    ``gap <= abstol``.  Infeasible / Unbounded are reported when the embedding
    iterates form a normalized Farkas certificate within ``feastol``.
    """
    if not isinstance(problem, SdpProblem):
        raise ArgumentError("solve expects an SdpProblem")
    cp = _Compiled(problem)
    N = cp.N
    if not cp.reduce_equalities():
        return SolveReport(INFEASIBLE, np.inf * cp.sign, np.full(N, np.nan), np.nan,
                           np.inf, np.nan, 0)
    A, b, c = cp.A, cp.b, cp.c
    groups = cp.groups
    F0 = [g.F0 for g in groups]

    resx0 = max(1.0, float(np.linalg.norm(c)))
    resy0 = max(1.0, float(np.linalg.norm(b)))
    resz0 = max(1.0, _norm(F0))

    x = np.zeros(N)
    y = np.zeros(A.shape[0])
    tau, kappa = 1.0, 1.0
    R = [np.broadcast_to(np.eye(g.d), g.F0.shape).copy() for g in groups]
    Rinv = [r.copy() for r in R]
    lam = [np.ones(g.F0.shape[:2]) for g in groups]
    s = [r.copy() for r in R]
    z = [r.copy() for r in R]

    best = None
    best_it = 0
    status = MAXITER
    it = 0
    for it in range(config.max_iter + 1):
        Fx = cp.F_op(x)
        Fz = cp.F_adj(z)
        rx = A.T @ y - Fz + c * tau
        ry = A @ x - b * tau
        rz = [-fx + si - f0 * tau for fx, si, f0 in zip(Fx, s, F0)]
        cx, by, hz = float(c @ x), float(b @ y), _inner(F0, z)
        rt = kappa + cx + by + hz
        sz = float(sum(np.sum(l * l) for l in lam))
        mu = (sz + tau * kappa) / (cp.nu + 1)

        # residuals relative to the largest term of each equation, so that
        # cancellation between large iterate terms does not set a false floor
        scale_y = max(resy0, float(np.linalg.norm(A @ x)) / tau)
        scale_z = max(resz0, _norm(Fx) / tau, _norm(s) / tau)
        scale_x = max(resx0, float(np.linalg.norm(A.T @ y)) / tau, float(np.linalg.norm(Fz)) / tau)
        pres = max(float(np.linalg.norm(ry)) / scale_y, _norm(rz) / scale_z) / tau
        dres = float(np.linalg.norm(rx)) / scale_x / tau
        pcost = cx / tau
        dcost = -(by + hz) / tau
        gap = sz / tau ** 2
        relgap = gap / max(1.0, abs(pcost), abs(dcost))
        snapshot = (x / tau, y / tau, [zi / tau for zi in z], pcost, dcost, gap, relgap, pres, dres)
        log.debug("it %3d pcost %+.9e dcost %+.9e gap %.2e pres %.2e dres %.2e tau %.2e kappa %.2e",
                  it, pcost, dcost, gap, pres, dres, tau, kappa)
        if best is None or max(pres, dres, relgap) <= max(best[7], best[8], best[6]):
            best = snapshot
            best_it = it

        if pres <= config.feastol and dres <= config.feastol and (
                gap <= config.abstol or relgap <= config.reltol):
            status = OPTIMAL
            break
        if by + hz < 0:
            pinf = float(np.linalg.norm(A.T @ y - Fz)) / resx0 / (-(by + hz))
            if pinf <= config.feastol:
                status = INFEASIBLE
                break
        if cx < 0:
            dinf = max(float(np.linalg.norm(A @ x)) / resy0,
                       _norm([si - fx for si, fx in zip(s, Fx)]) / resz0) / (-cx)
            if dinf <= config.feastol:
                status = UNBOUNDED
                break
        if it == config.max_iter:
            status = MAXITER
            break
        if it - best_it > config.stall_iters:
            log.debug("no progress since iteration %d", best_it)
            status = TROUBLE
            break

        try:
            # scaled coefficient matrices P_a = R^-1 F_a R^-T and Schur complement
            P = [ri[:, None] @ g.F @ np.swapaxes(ri, -1, -2)[:, None] for g, ri in zip(groups, Rinv)]
            M = np.zeros((N + 1) * (N + 1))
            for g, Pg in zip(groups, P):
                Mloc = np.einsum("bkij,blij->bkl", Pg, Pg)
                M += np.bincount(g.pair, Mloc.ravel(), minlength=(N + 1) ** 2)
            M = M.reshape(N + 1, N + 1)[:N, :N]
            M = 0.5 * (M + M.T)
        except np.linalg.LinAlgError as exc:
            log.debug("factorization failed at iteration %d: %s", it, exc)
            status = TROUBLE
            break

        def P_adj(U):
            out = np.zeros(N + 1)
            for g, Pg, Ug in zip(groups, P, U):
                vals = np.einsum("bkij,bij->bk", Pg, Ug)
                out += np.bincount(g.idx.ravel(), vals.ravel(), minlength=N + 1)
            return out[:N]

        def P_op(v):
            ve = np.append(v, 0.0)
            return [np.einsum("bkij,bk->bij", Pg, ve[g.idx]) for g, Pg in zip(groups, P)]

        try:
            kkt = _KKT(M, A, lambda v: P_adj(P_op(v)))
        except np.linalg.LinAlgError as exc:
            log.debug("factorization failed at iteration %d: %s", it, exc)
            status = TROUBLE
            break

        F0t = [ri @ f0 @ np.swapaxes(ri, -1, -2) for ri, f0 in zip(Rinv, F0)]
        rzt = [ri @ r_ @ np.swapaxes(ri, -1, -2) for ri, r_ in zip(Rinv, rz)]
        dx2, dy2 = kkt.solve(-(P_adj(F0t) + c), b)
        dz2 = [-pd - f for pd, f in zip(P_op(dx2), F0t)]
        denom = float(c @ dx2 + b @ dy2) + _inner(F0t, dz2) - kappa / tau

        def newton(eta, rc, rk):
            lrc = [_lyap_div(l, r_) for l, r_ in zip(lam, rc)]
            p = -eta * rx + P_adj([eta * a + w for a, w in zip(rzt, lrc)])
            dx1, dy1 = kkt.solve(p, -eta * ry)
            dz1 = [-pd + eta * a + w for pd, a, w in zip(P_op(dx1), rzt, lrc)]
            num = (-eta * rt - float(c @ dx1 + b @ dy1) - _inner(F0t, dz1) - rk / tau)
            dtau = num / denom
            dx = dx1 + dtau * dx2
            dy = dy1 + dtau * dy2
            dzt = [a + dtau * w for a, w in zip(dz1, dz2)]
            dst = [w - a for w, a in zip(lrc, dzt)]
            dkappa = (rk - kappa * dtau) / tau
            return dx, dy, dst, dzt, dtau, dkappa

        def step_to_boundary(dst, dzt, dtau, dkappa):
            a = np.inf
            for l, ds_, dz_ in zip(lam, dst, dzt):
                a = min(a, _max_step(l, _sym(ds_)), _max_step(l, _sym(dz_)))
            if dtau < 0:
                a = min(a, -tau / dtau)
            if dkappa < 0:
                a = min(a, -kappa / dkappa)
            return a

        lam2 = [_diag(l * l) for l in lam]
        # predictor
        aff = newton(1.0, [-L for L in lam2], -tau * kappa)
        a_aff = min(1.0, step_to_boundary(*aff[2:]))
        sigma = (1.0 - a_aff) ** config.expon
        # corrector
        rc = [sigma * mu * np.broadcast_to(np.eye(g.d), L.shape) - L - _jordan(ds_, dz_)
              for g, L, ds_, dz_ in zip(groups, lam2, aff[2], aff[3])]
        rk = sigma * mu - tau * kappa - aff[4] * aff[5]
        dx, dy, dst, dzt, dtau, dkappa = newton(1.0 - sigma, rc, rk)
        amax = step_to_boundary(dst, dzt, dtau, dkappa)
        alpha = min(1.0, config.step_fraction * amax)
        for sigma_safe in (max(sigma, 0.1), 0.5):
            if np.isfinite(alpha) and alpha >= 1e-8:
                break
            # the second-order term can point out of the cone near the end;
            # fall back to plain centered steps
            log.debug("step %.3e at iteration %d, retrying with sigma %.2f", alpha, it, sigma_safe)
            rc = [sigma_safe * mu * np.broadcast_to(np.eye(g.d), L.shape) - L
                  for g, L in zip(groups, lam2)]
            rk = sigma_safe * mu - tau * kappa
            dx, dy, dst, dzt, dtau, dkappa = newton(1.0 - sigma_safe, rc, rk)
            amax = step_to_boundary(dst, dzt, dtau, dkappa)
            alpha = min(1.0, config.step_fraction * amax)
        if not np.isfinite(alpha) or alpha < 1e-12 or not np.all(np.isfinite(dx)):
            log.debug("step length %.3e rejected at iteration %d", alpha, it)
            status = TROUBLE
            break

        x = x + alpha * dx
        y = y + alpha * dy
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkappa
        # s and z are updated additively and the scaling recomputed from them;
        # rebuilding them from the accumulated scaling loses accuracy as mu -> 0
        try:
            for gi, l in enumerate(lam):
                Ri, Rii = R[gi], Rinv[gi]
                s_new = _sym(s[gi] + alpha * (Ri @ dst[gi] @ np.swapaxes(Ri, -1, -2)))
                z_new = _sym(z[gi] + alpha * (np.swapaxes(Rii, -1, -2) @ dzt[gi] @ Rii))
                try:
                    L1 = np.linalg.cholesky(s_new)
                    L2 = np.linalg.cholesky(z_new)
                    U, lnew, Vt = np.linalg.svd(np.swapaxes(L2, -1, -2) @ L1)
                    isq = 1.0 / np.sqrt(lnew)
                    R[gi] = L1 @ (np.swapaxes(Vt, -1, -2) * isq[..., None, :])
                    Rinv[gi] = (isq[..., :, None] * np.swapaxes(U, -1, -2)) @ np.swapaxes(L2, -1, -2)
                except np.linalg.LinAlgError:
                    # too close to the boundary for a direct factorization:
                    # update the scaling multiplicatively in the scaled space
                    L1 = np.linalg.cholesky(_diag(l) + alpha * _sym(dst[gi]))
                    L2 = np.linalg.cholesky(_diag(l) + alpha * _sym(dzt[gi]))
                    U, lnew, Vt = np.linalg.svd(np.swapaxes(L2, -1, -2) @ L1)
                    isq = 1.0 / np.sqrt(lnew)
                    R[gi] = Ri @ L1 @ (np.swapaxes(Vt, -1, -2) * isq[..., None, :])
                    Rinv[gi] = (isq[..., :, None] * np.swapaxes(U, -1, -2)) @ np.swapaxes(L2, -1, -2) @ Rii
                    s_new = R[gi] * lnew[..., None, :] @ np.swapaxes(R[gi], -1, -2)
                    z_new = np.swapaxes(Rinv[gi], -1, -2) * lnew[..., None, :] @ Rinv[gi]
                s[gi], z[gi], lam[gi] = s_new, z_new, lnew
        except np.linalg.LinAlgError as exc:
            log.debug("scaling update failed at iteration %d: %s", it, exc)
            status = TROUBLE
            break

    xs, ys, zs, pcost, dcost, gap, relgap, pres, dres = best
    if status == INFEASIBLE:
        obj = np.inf
    elif status == UNBOUNDED:
        obj = -np.inf
    else:
        obj = pcost
    zblocks = [None] * len(problem.psd_blocks)
    for g, zg in zip(groups, zs):
        for k, pos in enumerate(g.positions):
            zblocks[pos] = zg[k]
    return SolveReport(
        status=status,
        objective_value=cp.sign * obj + (cp.c0 if np.isfinite(obj) else 0.0),
        primal_point=xs,
        complementarity=gap,
        primal_residual=pres,
        dual_residual=dres,
        iterations=it,
        relative_gap=relgap,
        dual_objective=cp.sign * dcost + cp.c0,
        dual_equality=cp.T @ ys if cp.T.size else np.zeros(len(problem.equalities)),
        dual_blocks=zblocks,
    )


# ---------------------------------------------------------------------------
# drivers


def margin_problem(problem, cap=1.0):
    """``max t`` s.t. every block of ``problem`` minus ``t I`` is PSD and ``t <= cap``."""
    N = problem.nvars
    blocks = []
    for blk in problem.psd_blocks:
        shifted = AffineMatrixMap(blk.dim, blk.const.copy(), dict(blk.coeffs))
        shifted.coeffs[N] = -np.eye(blk.dim)
        blocks.append(shifted)
    blocks.append(AffineMatrixMap.scalar(AffineScalar(cap, {N: -1.0})))
    return SdpProblem(N + 1, blocks, list(problem.equalities), AffineScalar.var(N), "max")


def feasibility_margin(target, point=None, config=DEFAULT_SOLVER, return_report=False):
    """Largest uniform shift ``t <= cap`` keeping every block ``>= t I``.

    ``target`` is a frozen :class:`SdpProblem`, or a slice-form representation
    together with ``point``.  Returns ``-inf`` when the equalities alone are
    infeasible.  ``t > 0`` certifies strict feasibility, ``t < 0`` infeasibility.
    """
    problem = target if point is None else freeze_membership_problem(target, point)
    rep = solve(margin_problem(problem, config.margin_cap), config)
    if rep.status == OPTIMAL:
        value = rep.objective_value
    elif rep.status == INFEASIBLE:
        value = -np.inf
    elif max(rep.primal_residual, rep.dual_residual) <= 1e-6 and rep.relative_gap <= 1e-6:
        log.warning("feasibility margin accepted at reduced accuracy (%s)", rep.status)
        value = rep.objective_value
    else:
        raise SolverError(f"feasibility margin solve ended with status {rep.status}", rep)
    return (value, rep) if return_report else value


def solve_file(path, config=DEFAULT_SOLVER):
    """Parse an SDPA sparse file and solve it."""
    from .sdpa import read_sdpa
    return solve(read_sdpa(path), config)


def check_report(problem, report):
    """Replay an Optimal report: ``(max equality residual, min block eigenvalue)``."""
    from .symlin import eigvals_sym
    x = report.primal_point
    eq = max((abs(e.evaluate(x)) for e in problem.equalities), default=0.0)
    eig = min((eigvals_sym(b.evaluate(x))[-1] for b in problem.psd_blocks), default=np.inf)
    return eq, eig
