"""Deciding membership in, and sampling from, represented cones by solving SDPs."""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_SOLVER, DEFAULT_TOLERANCES
from .errors import ArgumentError, SolverError, UnsupportedFormError
from .lmi import (AffineMap, AffineMatrixMap, AffineScalar, SdpProblem, SdpRepresentation,
                  embed, problem_from_representation)
from .oracle import BOUNDARY, IN, OUT
from .sdpsolve import OPTIMAL, INFEASIBLE, UNBOUNDED, feasibility_margin, solve
from .conelib import _arrow


@dataclass(frozen=True)
class RepVerdict:
    """Outcome of a representation-side membership test.

    ``margin`` is the feasibility margin (slice form) or the negated projection
    residual (projection form).
    """

    margin: float
    decision: str


class MembershipProbe:
    """Repeated membership tests against one slice-form representation.

    The split of every block into its interface part and auxiliary part is
    done once; each query only forms the constant term.
    """

    def __init__(self, rep, config=DEFAULT_SOLVER, tol=DEFAULT_TOLERANCES):
        if not rep.is_slice_form:
            raise UnsupportedFormError("membership probes need a slice-form representation")
        self.rep = rep
        self.config = config
        self.tol = tol
        P = rep.primal_dim
        blocks = list(rep.psd_blocks) + [AffineMatrixMap.scalar(s) for s in rep.nonneg_scalars]
        self._blocks = []
        for b in blocks:
            iface = sorted(v for v in b.coeffs if v < P)
            stack = np.array([b.coeffs[v] for v in iface]) if iface else np.zeros((0, b.dim, b.dim))
            aux = {v - P: F for v, F in b.coeffs.items() if v >= P}
            self._blocks.append((b.dim, b.const, np.array(iface, dtype=np.intp), stack, aux))
        self._eqs = []
        for e in rep.equalities:
            iface = [(v, c) for v, c in e.coeffs.items() if v < P]
            aux = {v - P: c for v, c in e.coeffs.items() if v >= P}
            self._eqs.append((e.const, iface, aux))

    def problem(self, point):
        p = np.asarray(point, dtype=float).ravel()
        if p.size != self.rep.primal_dim:
            raise ArgumentError(f"point has length {p.size}, expected {self.rep.primal_dim}")
        blocks = []
        for dim, const, iface, stack, aux in self._blocks:
            C = const + np.tensordot(p[iface], stack, axes=1) if iface.size else const.copy()
            blocks.append(AffineMatrixMap(dim, C, aux))
        eqs = [AffineScalar(const + sum(c * p[v] for v, c in iface), dict(aux))
               for const, iface, aux in self._eqs]
        return SdpProblem(self.rep.aux_dim, blocks, eqs)

    def margin(self, point):
        return feasibility_margin(self.problem(point), config=self.config)

    def verdict(self, point):
        m = self.margin(point)
        b = self.tol.boundary
        return RepVerdict(m, IN if m > b else (OUT if m < -b else BOUNDARY))


def output_rows(rep):
    """The interface coordinates of a representation as affine functions of its variables."""
    if rep.is_slice_form:
        return [AffineScalar.var(i) for i in range(rep.primal_dim)]
    return list(rep.output_map.rows)


def projection_residual(rep, w, config=DEFAULT_SOLVER):
    """``min |output(v) - w|`` over the lifted feasible set (Euclidean norm in
    interface coordinates).  Returns ``inf`` when the lifted set is empty."""
    w = np.asarray(w, dtype=float).ravel()
    rows = output_rows(rep)
    if w.size != len(rows):
        raise ArgumentError(f"point has length {w.size}, expected {len(rows)}")
    r = rep.nvars
    u = [row - float(wi) for row, wi in zip(rows, w)]
    arrow = _arrow(u, AffineScalar.var(r))
    base = problem_from_representation(rep)
    problem = SdpProblem(r + 1, base.psd_blocks + [arrow], base.equalities,
                         AffineScalar.var(r), "min")
    report = solve(problem, config)
    if report.status == OPTIMAL:
        return max(report.objective_value, 0.0)
    if report.status == INFEASIBLE:
        return np.inf
    if max(report.primal_residual, report.dual_residual) <= 1e-6:
        return max(report.objective_value, 0.0)
    raise SolverError(f"projection solve ended with status {report.status}", report)


def directional_margin(rep, point, direction, cap=1.0, config=DEFAULT_SOLVER):
    """``max t <= cap`` such that ``point - t * direction`` lies in the cone.

    Works for both forms.  With ``direction`` interior to the cone, the sign of
    the result decides membership of ``point``.  Returns ``-inf`` when no ``t``
    works.
    """
    p = np.asarray(point, dtype=float).ravel()
    d = np.asarray(direction, dtype=float).ravel()
    host = SdpRepresentation(0, "directional")
    t = host.add_aux(1)[0]
    embed(host, rep, AffineMap([AffineScalar(float(pi), {t: -float(di)} if di else {})
                                for pi, di in zip(p, d)]))
    host.add_nonneg(AffineScalar(cap, {t: -1.0}))
    problem = problem_from_representation(host, AffineScalar.var(t), "max")
    report = solve(problem, config)
    if report.status == OPTIMAL:
        return report.objective_value
    if report.status == INFEASIBLE:
        return -np.inf
    if max(report.primal_residual, report.dual_residual) <= 1e-6 and report.relative_gap <= 1e-6:
        return report.objective_value
    raise SolverError(f"directional margin solve ended with status {report.status}", report)


def member(rep, point, config=DEFAULT_SOLVER, tol=DEFAULT_TOLERANCES):
    """Membership verdict from the representation alone.

    Slice form: feasibility margin with the boundary band ``tol.boundary``.
    Projection form: accepted iff the projection residual is at most
    ``tol.projection * (1 + |point|)``; never reports Boundary.
    """
    if rep.is_slice_form:
        return MembershipProbe(rep, config, tol).verdict(point)
    w = np.asarray(point, dtype=float).ravel()
    res = projection_residual(rep, w, config)
    ok = res <= tol.projection * (1.0 + np.linalg.norm(w))
    return RepVerdict(-res, IN if ok else OUT)


def sample_members(rep, rng, count, normal, config=DEFAULT_SOLVER):
    """Extreme points of the slice ``{w in cone : <normal, w> = 1}``.

    Each sample maximizes a random Gaussian linear functional over the slice.
    ``normal`` must make the slice bounded.  Returns an array of shape
    ``(count, interface_dim)``; the zero cone yields zeros.
    """
    rows = output_rows(rep)
    normal = np.asarray(normal, dtype=float).ravel()
    if all(not r.coeffs for r in rows):
        return np.zeros((count, len(rows)))
    norm_eq = sum((r * float(c) for r, c in zip(rows, normal)), AffineScalar()) - 1.0
    out = []
    while len(out) < count:
        c = rng.standard_normal(len(rows))
        objective = sum((r * float(ci) for r, ci in zip(rows, c)), AffineScalar())
        problem = problem_from_representation(rep, objective, "max", [norm_eq])
        report = solve(problem, config)
        if report.status != OPTIMAL:
            if report.status in (INFEASIBLE, UNBOUNDED):
                raise SolverError(f"sampling slice is {report.status.lower()}", report)
            continue
        v = report.primal_point
        out.append(np.array([r.evaluate(v) for r in rows]))
    return np.array(out)
