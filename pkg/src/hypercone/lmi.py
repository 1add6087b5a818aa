"""Affine LMI data model.

A representation lives on a flat vector of scalar variables.  The first
``primal_dim`` entries are the interface variables (the point whose
membership is described); the remaining ``aux_dim`` entries are lifted
auxiliary variables.  A symmetric matrix variable ``X`` of order ``n`` uses
``n(n+1)/2`` consecutive scalars in row-major upper-triangle order
(``X00, X01, ..., X0n, X11, ...``); off-diagonal scalars are unscaled, so the
scalar ``X_ij`` appears at both ``(i, j)`` and ``(j, i)`` of the matrix.

Two forms exist:

* slice form (``output_map is None``): a point ``p`` is a member iff fixing the
  interface variables to ``p`` leaves a feasible LMI in the auxiliaries;
* projection form: the cone is the image of the feasible set under
  ``output_map`` and ``primal_dim`` is 0.
"""

from dataclasses import dataclass, field
import json

import numpy as np

from .errors import ArgumentError, UnsupportedFormError


# ---------------------------------------------------------------------------
# symmetric vectorization


def svec_len(n):
    return n * (n + 1) // 2


def sym_pairs(n):
    """Upper-triangle index pairs in the package's fixed row-major order."""
    return [(i, j) for i in range(n) for j in range(i, n)]


def svec(X):
    X = np.asarray(X, dtype=float)
    iu = np.triu_indices(X.shape[0])
    return X[iu].copy()


def smat(v, n):
    X = np.zeros((n, n))
    iu = np.triu_indices(n)
    X[iu] = v
    X.T[iu] = v
    return X


# ---------------------------------------------------------------------------
# affine objects


@dataclass
class AffineScalar:
    """``const + sum(coeffs[i] * v[i])``."""

    const: float = 0.0
    coeffs: dict = field(default_factory=dict)

    @classmethod
    def var(cls, index, coef=1.0):
        return cls(0.0, {int(index): float(coef)})

    @classmethod
    def linear(cls, indices, values, const=0.0):
        out = cls(float(const), {})
        for i, c in zip(indices, values):
            if c != 0.0:
                out.coeffs[int(i)] = out.coeffs.get(int(i), 0.0) + float(c)
        return out

    def evaluate(self, v):
        return self.const + sum(c * v[i] for i, c in self.coeffs.items())

    def __add__(self, other):
        if isinstance(other, (int, float)):
            return AffineScalar(self.const + other, dict(self.coeffs))
        out = AffineScalar(self.const + other.const, dict(self.coeffs))
        for i, c in other.coeffs.items():
            out.coeffs[i] = out.coeffs.get(i, 0.0) + c
        return out

    __radd__ = __add__

    def __mul__(self, s):
        return AffineScalar(self.const * s, {i: c * s for i, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def max_index(self):
        return max(self.coeffs, default=-1)


@dataclass
class AffineMatrixMap:
    """Symmetric-matrix-valued affine function ``const + sum_i v[i] * coeffs[i]``."""

    dim: int
    const: np.ndarray
    coeffs: dict = field(default_factory=dict)

    @classmethod
    def zeros(cls, dim):
        return cls(dim, np.zeros((dim, dim)), {})

    @classmethod
    def constant(cls, C):
        C = np.array(C, dtype=float)
        return cls(C.shape[0], C, {})

    @classmethod
    def symmetric_variable(cls, n, offset):
        """The matrix ``X`` whose svec occupies ``v[offset : offset + n(n+1)/2]``."""
        out = cls.zeros(n)
        for idx, (i, j) in enumerate(sym_pairs(n)):
            E = np.zeros((n, n))
            E[i, j] = E[j, i] = 1.0
            out.coeffs[offset + idx] = E
        return out

    @classmethod
    def scalar(cls, expr):
        """1x1 block holding an affine scalar."""
        out = cls(1, np.array([[float(expr.const)]]), {})
        for i, c in expr.coeffs.items():
            out.coeffs[i] = np.array([[float(c)]])
        return out

    def evaluate(self, v):
        out = self.const.copy()
        for i, F in self.coeffs.items():
            out += v[i] * F
        return out

    def _combine(self, other, sign):
        out = AffineMatrixMap(self.dim, self.const + sign * other.const,
                              {i: F.copy() for i, F in self.coeffs.items()})
        for i, F in other.coeffs.items():
            if i in out.coeffs:
                out.coeffs[i] = out.coeffs[i] + sign * F
            else:
                out.coeffs[i] = sign * F
        return out

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, s):
        return AffineMatrixMap(self.dim, s * self.const, {i: s * F for i, F in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def congruence(self, V):
        """``V^T (.) V`` applied to every term."""
        V = np.asarray(V, dtype=float)
        return AffineMatrixMap(V.shape[1], V.T @ self.const @ V,
                               {i: V.T @ F @ V for i, F in self.coeffs.items()})

    def trace(self):
        return AffineScalar(float(np.trace(self.const)),
                            {i: float(np.trace(F)) for i, F in self.coeffs.items()
                             if np.trace(F) != 0.0})

    def entry(self, i, j):
        return AffineScalar(float(self.const[i, j]),
                            {k: float(F[i, j]) for k, F in self.coeffs.items() if F[i, j] != 0.0})

    def max_index(self):
        return max(self.coeffs, default=-1)

    def prune(self):
        self.coeffs = {i: F for i, F in self.coeffs.items() if np.any(F)}
        return self


@dataclass
class AffineMap:
    """Vector-valued affine map given by its rows."""

    rows: list

    @property
    def out_dim(self):
        return len(self.rows)

    @classmethod
    def identity(cls, indices):
        return cls([AffineScalar.var(i) for i in indices])

    @classmethod
    def constant(cls, values):
        return cls([AffineScalar(float(c), {}) for c in np.ravel(values)])

    @classmethod
    def from_matrix_map(cls, M):
        """svec of a symmetric-matrix-valued map, in package order."""
        return cls([M.entry(i, j) for i, j in sym_pairs(M.dim)])

    def evaluate(self, v):
        return np.array([r.evaluate(v) for r in self.rows])

    def concat(self, other):
        return AffineMap(list(self.rows) + list(other.rows))

    def max_index(self):
        return max((r.max_index() for r in self.rows), default=-1)


def substitute_matrix(F, subs):
    """Replace each variable ``a`` of ``F`` by the affine scalar ``subs[a]``."""
    out = AffineMatrixMap(F.dim, F.const.copy(), {})
    for a, Fa in F.coeffs.items():
        s = subs[a]
        if s.const != 0.0:
            out.const += s.const * Fa
        for b, c in s.coeffs.items():
            if b in out.coeffs:
                out.coeffs[b] += c * Fa
            else:
                out.coeffs[b] = c * Fa
    return out.prune()


def substitute_scalar(f, subs):
    out = AffineScalar(f.const, {})
    for a, ca in f.coeffs.items():
        out = out + subs[a] * ca
    out.coeffs = {i: c for i, c in out.coeffs.items() if c != 0.0}
    return out


# ---------------------------------------------------------------------------
# representations


@dataclass
class Level:
    """Blocks introduced directly by one construction step."""

    label: str
    dims: list = field(default_factory=list)

    @property
    def size(self):
        return sum(self.dims)


class SdpRepresentation:
    """Lifted semidefinite description of a cone."""

    def __init__(self, primal_dim, label=""):
        if primal_dim < 0:
            raise ArgumentError("primal_dim must be nonnegative")
        self.primal_dim = int(primal_dim)
        self.aux_dim = 0
        self.psd_blocks = []
        self.nonneg_scalars = []
        self.equalities = []
        self.output_map = None
        self.label = label
        self.levels = [Level(label)]

    @property
    def nvars(self):
        return self.primal_dim + self.aux_dim

    @property
    def interface_dim(self):
        if self.output_map is not None:
            return self.output_map.out_dim
        return self.primal_dim

    @property
    def is_slice_form(self):
        return self.output_map is None

    def add_aux(self, count):
        start = self.nvars
        self.aux_dim += int(count)
        return list(range(start, start + int(count)))

    def _check(self, max_index):
        if max_index >= self.nvars:
            raise ArgumentError(f"variable index {max_index} out of range ({self.nvars} variables)")

    def add_block(self, block):
        self._check(block.max_index())
        self.psd_blocks.append(block)
        self.levels[0].dims.append(block.dim)

    def add_nonneg(self, expr):
        self._check(expr.max_index())
        self.nonneg_scalars.append(expr)
        self.levels[0].dims.append(1)

    def add_equality(self, expr):
        self._check(expr.max_index())
        self.equalities.append(expr)

    def size(self):
        return sum(b.dim for b in self.psd_blocks) + len(self.nonneg_scalars)

    def evaluate_constraints(self, v):
        """Minimum block eigenvalue and maximum equality violation at ``v``."""
        mins = [np.linalg.eigvalsh(b.evaluate(v))[0] for b in self.psd_blocks]
        mins += [s.evaluate(v) for s in self.nonneg_scalars]
        eq = [abs(e.evaluate(v)) for e in self.equalities]
        return (min(mins, default=np.inf), max(eq, default=0.0))

    def __repr__(self):
        form = "slice" if self.is_slice_form else "projection"
        return (f"SdpRepresentation({self.label!r}, {form}, primal_dim={self.primal_dim}, "
                f"aux_dim={self.aux_dim}, size={self.size()})")


def new_representation(primal_dim, label=""):
    """Empty representation: the whole interface space."""
    return SdpRepresentation(primal_dim, label)


def embed(host, cone, image):
    """Constrain ``image(host variables)`` to lie in ``cone``.

    The cone's auxiliaries become fresh host auxiliaries.  For a slice-form
    cone the image is substituted for the cone's interface variables; for a
    projection-form cone every internal variable is fresh and the image is tied
    to ``cone.output_map`` by equalities.  Sizes add exactly.
    """
    if image.out_dim != cone.interface_dim:
        raise ArgumentError(f"image dimension {image.out_dim} does not match cone "
                            f"interface dimension {cone.interface_dim}")
    host._check(image.max_index())
    if cone.is_slice_form:
        fresh = host.add_aux(cone.aux_dim)
        subs = list(image.rows) + [AffineScalar.var(i) for i in fresh]
    else:
        fresh = host.add_aux(cone.nvars)
        subs = [AffineScalar.var(i) for i in fresh]
    for b in cone.psd_blocks:
        host.psd_blocks.append(substitute_matrix(b, subs))
    for s in cone.nonneg_scalars:
        host.nonneg_scalars.append(substitute_scalar(s, subs))
    for e in cone.equalities:
        host.equalities.append(substitute_scalar(e, subs))
    if not cone.is_slice_form:
        for target, out in zip(image.rows, cone.output_map.rows):
            eq = target - substitute_scalar(out, subs)
            eq.coeffs = {i: c for i, c in eq.coeffs.items() if c != 0.0}
            if eq.coeffs or eq.const != 0.0:
                host.equalities.append(eq)
    host.levels.extend(Level(lv.label, list(lv.dims)) for lv in cone.levels)
    return fresh


# ---------------------------------------------------------------------------
# problems


@dataclass
class SdpProblem:
    """``min/max objective(v)`` s.t. every block is PSD and every equality is zero.

    Scalar inequalities are 1x1 blocks.
    """

    nvars: int
    psd_blocks: list
    equalities: list = field(default_factory=list)
    objective: AffineScalar = field(default_factory=AffineScalar)
    sense: str = "min"

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ArgumentError(f"sense must be 'min' or 'max', got {self.sense!r}")
        top = max([b.max_index() for b in self.psd_blocks]
                  + [e.max_index() for e in self.equalities]
                  + [self.objective.max_index()], default=-1)
        if top >= self.nvars:
            raise ArgumentError(f"variable index {top} out of range ({self.nvars} variables)")


def problem_from_representation(rep, objective=None, sense="min", equalities=()):
    """SDP over all variables of ``rep``; PSD blocks first, then scalar blocks."""
    blocks = list(rep.psd_blocks) + [AffineMatrixMap.scalar(s) for s in rep.nonneg_scalars]
    return SdpProblem(rep.nvars, blocks, list(rep.equalities) + list(equalities),
                      objective if objective is not None else AffineScalar(), sense)


def freeze_membership_problem(rep, point):
    """Fix the interface variables of a slice-form representation at ``point``.

    Returns a feasibility problem in the auxiliary variables only (renumbered
    from 0).
    """
    if not rep.is_slice_form:
        raise UnsupportedFormError("projection-form representations cannot be frozen; "
                                   "use a projection or directional membership test")
    point = np.asarray(point, dtype=float).ravel()
    if point.size != rep.primal_dim:
        raise ArgumentError(f"point has length {point.size}, expected {rep.primal_dim}")
    subs = [AffineScalar(float(p), {}) for p in point]
    subs += [AffineScalar.var(i) for i in range(rep.aux_dim)]
    blocks = [substitute_matrix(b, subs) for b in rep.psd_blocks]
    blocks += [AffineMatrixMap.scalar(substitute_scalar(s, subs)) for s in rep.nonneg_scalars]
    eqs = [substitute_scalar(e, subs) for e in rep.equalities]
    return SdpProblem(rep.aux_dim, blocks, eqs)


# ---------------------------------------------------------------------------
# JSON


def _triplets(M, tol=0.0):
    iu = np.triu_indices(M.shape[0])
    return [[int(i), int(j), float(M[i, j])] for i, j in zip(*iu) if abs(M[i, j]) > tol]


def _from_triplets(dim, entries):
    M = np.zeros((dim, dim))
    for i, j, v in entries:
        M[i, j] = M[j, i] = v
    return M


def _scalar_to_obj(s):
    return {"const": s.const, "coeffs": [[int(i), float(c)] for i, c in sorted(s.coeffs.items())]}


def _scalar_from_obj(o):
    return AffineScalar(float(o["const"]), {int(i): float(c) for i, c in o["coeffs"]})


def _block_to_obj(b):
    return {"dim": b.dim, "const": _triplets(b.const),
            "coeffs": [{"var": int(i), "entries": _triplets(F)} for i, F in sorted(b.coeffs.items())]}


def _block_from_obj(o):
    dim = int(o["dim"])
    return AffineMatrixMap(dim, _from_triplets(dim, o["const"]),
                           {int(c["var"]): _from_triplets(dim, c["entries"]) for c in o["coeffs"]})


def rep_to_dict(rep):
    return {
        "label": rep.label,
        "primal_dim": rep.primal_dim,
        "aux_dim": rep.aux_dim,
        "size": rep.size(),
        "blocks": [_block_to_obj(b) for b in rep.psd_blocks],
        "nonneg": [_scalar_to_obj(s) for s in rep.nonneg_scalars],
        "equalities": [_scalar_to_obj(e) for e in rep.equalities],
        "output_map": (None if rep.output_map is None else
                       {"dim": rep.output_map.out_dim,
                        "rows": [_scalar_to_obj(r) for r in rep.output_map.rows]}),
        "levels": [{"label": lv.label, "dims": list(lv.dims)} for lv in rep.levels],
    }


def rep_from_dict(d):
    rep = SdpRepresentation(int(d["primal_dim"]), d.get("label", ""))
    rep.aux_dim = int(d["aux_dim"])
    rep.psd_blocks = [_block_from_obj(o) for o in d["blocks"]]
    rep.nonneg_scalars = [_scalar_from_obj(o) for o in d.get("nonneg", [])]
    rep.equalities = [_scalar_from_obj(o) for o in d["equalities"]]
    if d.get("output_map") is not None:
        rep.output_map = AffineMap([_scalar_from_obj(o) for o in d["output_map"]["rows"]])
    if "levels" in d:
        rep.levels = [Level(lv["label"], list(lv["dims"])) for lv in d["levels"]]
    else:
        rep.levels = [Level(rep.label, [b.dim for b in rep.psd_blocks] + [1] * len(rep.nonneg_scalars))]
    return rep


def to_json(rep, indent=None):
    return json.dumps(rep_to_dict(rep), indent=indent)


def from_json(text):
    return rep_from_dict(json.loads(text))


def structurally_equal(a, b):
    """Exact equality of two representations' data."""
    return rep_to_dict(a) == rep_to_dict(b)
