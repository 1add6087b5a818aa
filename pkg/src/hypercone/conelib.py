"""Semidefinite representations of derivative relaxations and their duals.

Notation: ``orthant(n, k)`` is the k-th derivative relaxation of the
nonnegative orthant in direction ``1``, i.e. ``{x : e_1(x), ..., e_{n-k}(x) >= 0}``;
``psd(n, k)`` is the set of symmetric ``X`` whose eigenvalues lie in
``orthant(n, k)``.  Both are built recursively:

* derivative step: ``x in orthant(n, k)  <=>  V^T diag(x) V in psd(n-1, k-1)``
  for ``1 <= k <= n-1``;
* polar step: ``x in orthant(n, k)  <=>  exists Z in psd(n-1, k)`` with
  ``diag(x) - V Z V^T`` PSD, for ``k <= n-2``;
* spectral lift: ``X in psd(n, k)  <=>  exists z in orthant(n, k)`` with ``(X, z)``
  in the Schur-Horn cone (eigenvalues of ``X`` majorized by ``z``).

Here ``V`` is :func:`symlin.complement_basis`.  The dual cones use the
adjoint steps (``w = diag(V Y V^T)``, ``w = diag(Y)`` with ``V^T Y V`` in the
dual of ``psd(n-1, k)``) and the same Schur-Horn lift.

Matrix interfaces use the package svec order (row-major upper triangle,
off-diagonals unscaled).  Spectrahedral cones ``{x : sum_i A_i x_i in psd(m, k)}``
are normalized by ``B = A(e)`` so that the image of ``e`` is the identity.
"""

from dataclasses import dataclass, field
from enum import Enum
import json
from importlib import resources

import numpy as np

from .errors import ArgumentError, StrategyError
from .lmi import (AffineMap, AffineMatrixMap, AffineScalar, SdpRepresentation, embed,
                  sym_pairs, svec_len)
from .symlin import as_symmetric, complement_basis, inv_sqrt_pd


class Strategy(str, Enum):
    DERIVATIVE = "deriv"
    POLAR = "polar"
    AUTO = "auto"
    SOC = "soc"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {"derivativebased": "deriv", "derivative": "deriv", "polarbased": "polar",
                   "socsimplified": "soc"}
        key = str(value).lower().replace("_", "").replace("-", "")
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ArgumentError(f"unknown strategy {value!r}") from None


def _check_nk(n, k):
    if int(n) != n or int(k) != k:
        raise ArgumentError("n and k must be integers")
    if n < 1 or not 0 <= k <= n:
        raise ArgumentError(f"need n >= 1 and 0 <= k <= n, got n={n}, k={k}")


# ---------------------------------------------------------------------------
# pencils


@dataclass(frozen=True)
class Pencil:
    """Symmetric pencil ``A(x) = sum_i A_i x_i`` with ``A(e)`` positive definite."""

    A: tuple
    e: np.ndarray

    def __post_init__(self):
        mats = tuple(as_symmetric(a) for a in self.A)
        if not mats:
            raise ArgumentError("pencil needs at least one matrix")
        m = mats[0].shape[0]
        if any(a.shape != (m, m) for a in mats):
            raise ArgumentError("pencil matrices must share one size")
        e = np.asarray(self.e, dtype=float).ravel()
        if e.size != len(mats):
            raise ArgumentError(f"direction has length {e.size}, expected {len(mats)}")
        object.__setattr__(self, "A", mats)
        object.__setattr__(self, "e", e)
        # raises DefinitenessError when A(e) is not positive definite
        object.__setattr__(self, "_S", inv_sqrt_pd(self.matrix(e)))

    @property
    def m(self):
        return self.A[0].shape[0]

    @property
    def n(self):
        return len(self.A)

    def matrix(self, x):
        return sum(a * xi for a, xi in zip(self.A, np.asarray(x, dtype=float).ravel()))

    def normalized(self):
        """The matrices ``S A_i S`` with ``S = A(e)^(-1/2)``."""
        S = self._S
        return [S @ a @ S for a in self.A]

    def normalized_matrix(self, x):
        return sum(a * xi for a, xi in zip(self.normalized(), np.asarray(x, dtype=float).ravel()))

    def to_dict(self):
        return {"m": self.m,
                "A": [[[int(i), int(j), float(a[i, j])] for i, j in sym_pairs(self.m) if a[i, j] != 0.0]
                      for a in self.A],
                "e": [float(v) for v in self.e]}

    @classmethod
    def from_dict(cls, d):
        m = int(d["m"])
        mats = []
        for entries in d["A"]:
            a = np.zeros((m, m))
            for i, j, v in entries:
                a[int(i), int(j)] = a[int(j), int(i)] = float(v)
            mats.append(a)
        return cls(tuple(mats), np.asarray(d["e"], dtype=float))


def three_ellipse_pencil():
    """The 8x8 pencil in ``(x, y, z)`` whose ``z = 1`` slice is the 3-ellipse with
    foci ``(0,0), (0,4), (3,0)`` and distance sum 8; direction ``e = (0, 0, 1)``."""
    text = resources.files("hypercone").joinpath("data/three_ellipse.json").read_text()
    return ConeSpec.from_dict(json.loads(text)).pencil


# ---------------------------------------------------------------------------
# cone specifications


@dataclass(frozen=True)
class ConeSpec:
    """Symbolic cone identifier.

    ``kind`` is ``"orthant"``, ``"psd"``, ``"spectrahedral"`` or ``"dual"``.
    For spectrahedral cones ``n`` is the number of pencil variables.
    """

    kind: str
    n: int = 0
    k: int = 0
    strategy: Strategy = Strategy.AUTO
    pencil: Pencil = field(default=None, compare=False, repr=False)
    inner: "ConeSpec" = None

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy.parse(self.strategy))
        if self.kind in ("orthant", "psd"):
            _check_nk(self.n, self.k)
        elif self.kind == "spectrahedral":
            if self.pencil is None:
                raise ArgumentError("spectrahedral spec needs a pencil")
            object.__setattr__(self, "n", self.pencil.n)
            if not 0 <= self.k <= self.pencil.m - 1:
                raise ArgumentError(f"k={self.k} outside 0..{self.pencil.m - 1}")
        elif self.kind == "dual":
            if self.inner is None or self.inner.kind == "dual":
                raise ArgumentError("dual spec needs a non-dual inner spec")
        else:
            raise ArgumentError(f"unknown cone kind {self.kind!r}")

    @property
    def interface_dim(self):
        if self.kind == "dual":
            return self.inner.interface_dim
        if self.kind == "psd":
            return svec_len(self.n)
        return self.n

    @property
    def is_matrix(self):
        return self.kind == "psd" or (self.kind == "dual" and self.inner.kind == "psd")

    def label(self):
        if self.kind == "dual":
            return f"dual[{self.inner.label()}]"
        name = {"orthant": "orthant", "psd": "psd_deriv", "spectrahedral": "spectrahedral"}[self.kind]
        first = self.pencil.m if self.kind == "spectrahedral" else self.n
        return f"{name}({first},{self.k})"

    def to_dict(self):
        if self.kind == "dual":
            return {"kind": "dual", "inner": self.inner.to_dict()}
        if self.kind == "spectrahedral":
            d = {"kind": "spectrahedral", "k": self.k, "strategy": self.strategy.value}
            d.update(self.pencil.to_dict())
            return d
        return {"kind": self.kind, "n": self.n, "k": self.k, "strategy": self.strategy.value}

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "kind" not in d:
            raise ArgumentError("cone spec must be an object with a 'kind' field")
        kind = str(d["kind"]).lower()
        kind = {"psdderiv": "psd", "psd_deriv": "psd", "spectrahedralderiv": "spectrahedral",
                "dualof": "dual"}.get(kind, kind)
        try:
            if kind == "dual":
                return cls("dual", inner=cls.from_dict(d["inner"]))
            strategy = d.get("strategy", "auto")
            if kind == "spectrahedral":
                return cls("spectrahedral", k=int(d["k"]), strategy=strategy,
                           pencil=Pencil.from_dict(d))
            return cls(kind, int(d["n"]), int(d["k"]), strategy)
        except KeyError as exc:
            raise ArgumentError(f"cone spec is missing field {exc}") from None

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text):
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ArgumentError(f"cone spec is not valid JSON: {exc}") from None

    def with_strategy(self, strategy):
        if self.kind == "dual":
            return ConeSpec("dual", inner=self.inner.with_strategy(strategy))
        return ConeSpec(self.kind, self.n, self.k, strategy, self.pencil)


def Orthant(n, k, strategy=Strategy.AUTO):
    return ConeSpec("orthant", n, k, strategy)


def PsdDeriv(n, k, strategy=Strategy.AUTO):
    return ConeSpec("psd", n, k, strategy)


def SpectrahedralDeriv(pencil, k, strategy=Strategy.AUTO):
    return ConeSpec("spectrahedral", k=k, strategy=strategy, pencil=pencil)


def DualOf(spec):
    return ConeSpec("dual", inner=spec)


# ---------------------------------------------------------------------------
# small affine helpers


def _matrix_var(n, indices):
    """Symmetric matrix whose svec entries are the given variables."""
    out = AffineMatrixMap.zeros(n)
    for idx, (i, j) in zip(indices, sym_pairs(n)):
        E = np.zeros((n, n))
        E[i, j] = E[j, i] = 1.0
        out.coeffs[idx] = E
    return out


def _diag_var(indices):
    n = len(indices)
    out = AffineMatrixMap.zeros(n)
    for i, idx in enumerate(indices):
        E = np.zeros((n, n))
        E[i, i] = 1.0
        out.coeffs[idx] = E
    return out


def _trace_of_svec(n, indices):
    return AffineScalar.linear([indices[p] for p, (i, j) in enumerate(sym_pairs(n)) if i == j],
                               [1.0] * n)


def _congruence_image(x_indices, V):
    """svec of ``V^T diag(x) V`` as an affine map of ``x``."""
    r = V.shape[1]
    return AffineMap([AffineScalar.linear(x_indices, V[:, i] * V[:, j]) for i, j in sym_pairs(r)])


def _arrow(u_rows, t):
    """Arrow LMI ``[[t I, u], [u^T, t]]``, PSD iff ``|u| <= t``."""
    d = len(u_rows) + 1
    out = AffineMatrixMap.zeros(d)

    def put(expr, i, j):
        if expr.const:
            out.const[i, j] += expr.const
            if i != j:
                out.const[j, i] += expr.const
        for v, c in expr.coeffs.items():
            F = out.coeffs.setdefault(v, np.zeros((d, d)))
            F[i, j] += c
            if i != j:
                F[j, i] += c

    for i in range(d):
        put(t, i, i)
    for i, u in enumerate(u_rows):
        put(u, i, d - 1)
    return out.prune()


# ---------------------------------------------------------------------------
# primal builders


def _resolve_orthant(n, k, strategy):
    if strategy is Strategy.AUTO:
        if k == n - 1 or k <= n / 2:
            return Strategy.DERIVATIVE
        return Strategy.POLAR
    return strategy


def build_orthant(n, k, strategy=Strategy.AUTO):
    """Slice-form representation of ``orthant(n, k)`` over ``x in R^n``."""
    _check_nk(n, k)
    strategy = Strategy.parse(strategy)
    rep = SdpRepresentation(n, f"orthant({n},{k})")
    x = list(range(n))
    if k == n:
        return rep
    if k == 0:
        for i in x:
            rep.add_nonneg(AffineScalar.var(i))
        return rep
    if strategy is Strategy.SOC:
        if k == n - 2:
            rep.add_block(_arrow([AffineScalar.var(i) for i in x], AffineScalar.linear(x, [1.0] * n)))
            return rep
        if k == n - 1:
            step = Strategy.DERIVATIVE
        else:
            step = Strategy.POLAR
    else:
        step = _resolve_orthant(n, k, strategy)
    V = complement_basis(n).V
    if step is Strategy.DERIVATIVE:
        embed(rep, build_psd_deriv(n - 1, k - 1, strategy), _congruence_image(x, V))
        return rep
    if k > n - 2:
        raise StrategyError(f"the polar step needs k <= n-2 (got n={n}, k={k})")
    Z = rep.add_aux(svec_len(n - 1))
    rep.add_block(_diag_var(x) - _matrix_var(n - 1, Z).congruence(V.T))
    embed(rep, build_psd_deriv(n - 1, k, strategy), AffineMap.identity(Z))
    return rep


def build_schur_horn(n):
    """Slice-form representation of the Schur-Horn cone over ``(svec X, z)``.

    ``z`` weakly decreasing, ``tr X = sum z``, ``X <= z_1 I``, and for
    ``l = 2..n-1`` the sum of the ``l`` largest eigenvalues of ``X`` is at most
    ``z_1 + ... + z_l`` via ``X <= t_l I + Z_l``, ``Z_l >= 0``,
    ``l t_l + tr Z_l <= z_1 + ... + z_l``.
    """
    if n < 1:
        raise ArgumentError("Schur-Horn cone needs n >= 1")
    N = svec_len(n)
    rep = SdpRepresentation(N + n, f"schur_horn({n})")
    Xv = list(range(N))
    z = list(range(N, N + n))
    X = _matrix_var(n, Xv)
    for i in range(n - 1):
        rep.add_nonneg(AffineScalar.linear([z[i], z[i + 1]], [1.0, -1.0]))
    rep.add_equality(X.trace() - AffineScalar.linear(z, [1.0] * n))
    if n == 1:
        return rep
    rep.add_block(AffineMatrixMap(n, np.zeros((n, n)), {z[0]: np.eye(n)}) - X)
    for ell in range(2, n):
        t = rep.add_aux(1)[0]
        Zl = rep.add_aux(N)
        Zm = _matrix_var(n, Zl)
        rep.add_block(Zm)
        tI = AffineMatrixMap(n, np.zeros((n, n)), {t: np.eye(n)})
        rep.add_block(tI + Zm - X)
        rep.add_nonneg(AffineScalar.linear(z[:ell], [1.0] * ell)
                       - AffineScalar.var(t, float(ell)) - Zm.trace())
    return rep


def build_psd_deriv(n, k, strategy=Strategy.AUTO):
    """Slice-form representation of ``psd(n, k)`` over ``svec X``.

    With the derivative strategy every ``1 <= k <= n-1`` goes through the
    Schur-Horn lift, including the halfspace ``k = n-1``; the polar and auto
    strategies use ``tr X >= 0`` there.
    """
    _check_nk(n, k)
    strategy = Strategy.parse(strategy)
    N = svec_len(n)
    rep = SdpRepresentation(N, f"psd_deriv({n},{k})")
    Xv = list(range(N))
    if k == n:
        return rep
    if k == 0:
        if n == 1:
            rep.add_nonneg(AffineScalar.var(0))
        else:
            rep.add_block(_matrix_var(n, Xv))
        return rep
    if k == n - 1 and strategy is not Strategy.DERIVATIVE:
        rep.add_nonneg(_trace_of_svec(n, Xv))
        return rep
    if k == n - 2 and strategy is Strategy.SOC:
        u = [AffineScalar.var(Xv[sym_index(n, i, j)]) for i in range(n) for j in range(n)]
        rep.add_block(_arrow(u, _trace_of_svec(n, Xv)))
        return rep
    z = rep.add_aux(n)
    embed(rep, build_schur_horn(n), AffineMap.identity(Xv + z))
    embed(rep, build_orthant(n, k, strategy), AffineMap.identity(z))
    return rep


def sym_index(n, i, j):
    """Position of ``X_ij`` in svec order."""
    i, j = min(i, j), max(i, j)
    return i * n - i * (i - 1) // 2 + (j - i)


def build_soc_orthant(n, k):
    """Second-order-cone form of ``orthant(n, n-2)`` and ``orthant(n, n-3)``."""
    _check_nk(n, k)
    if k not in (n - 2, n - 3):
        raise StrategyError(f"second-order-cone form exists only for k = n-2 or n-3 (got n={n}, k={k})")
    return build_orthant(n, k, Strategy.SOC)


def build_spectrahedral_deriv(pencil, k, strategy=Strategy.AUTO):
    """``{x : sum_i S A_i S x_i in psd(m, k)}`` with ``S = A(e)^(-1/2)``."""
    if not 0 <= k <= pencil.m - 1:
        raise ArgumentError(f"k={k} outside 0..{pencil.m - 1}")
    m = pencil.m
    rep = SdpRepresentation(pencil.n, f"spectrahedral({m},{k})")
    mats = pencil.normalized()
    x = list(range(pencil.n))
    image = AffineMap([AffineScalar.linear(x, [a[i, j] for a in mats]) for i, j in sym_pairs(m)])
    embed(rep, build_psd_deriv(m, k, strategy), image)
    return rep


# ---------------------------------------------------------------------------
# dual builders


def _ray(direction, label):
    rep = SdpRepresentation(0, label)
    t = rep.add_aux(1)[0]
    rep.add_nonneg(AffineScalar.var(t))
    rep.output_map = AffineMap([AffineScalar.linear([t], [float(d)]) for d in direction])
    return rep


def _zero(dim, label):
    rep = SdpRepresentation(0, label)
    rep.output_map = AffineMap.constant(np.zeros(dim))
    return rep


def _no_soc(strategy):
    if strategy is Strategy.SOC:
        raise StrategyError("second-order-cone simplifications are defined for primal cones only")


def build_orthant_dual(n, k, strategy=Strategy.AUTO):
    """Representation of the dual of ``orthant(n, k)`` over ``w in R^n``.

    ``k = 0`` is slice form (the orthant is self-dual); all other cases are
    projection form.
    """
    _check_nk(n, k)
    strategy = Strategy.parse(strategy)
    _no_soc(strategy)
    label = f"orthant_dual({n},{k})"
    if k == n:
        return _zero(n, label)
    if k == 0:
        rep = SdpRepresentation(n, label)
        for i in range(n):
            rep.add_nonneg(AffineScalar.var(i))
        return rep
    step = _resolve_orthant(n, k, strategy)
    V = complement_basis(n).V
    if step is Strategy.DERIVATIVE:
        r = n - 1
        rep = SdpRepresentation(0, label)
        Y = rep.add_aux(svec_len(r))
        embed(rep, build_psd_deriv_dual(r, k - 1, strategy), AffineMap.identity(Y))
        rows = []
        for ell in range(n):
            coef = [V[ell, i] * V[ell, j] * (1.0 if i == j else 2.0) for i, j in sym_pairs(r)]
            rows.append(AffineScalar.linear(Y, coef))
        rep.output_map = AffineMap(rows)
        return rep
    if k > n - 2:
        raise StrategyError(f"the polar step needs k <= n-2 (got n={n}, k={k})")
    rep = SdpRepresentation(0, label)
    Y = rep.add_aux(svec_len(n))
    Ym = _matrix_var(n, Y)
    rep.add_block(Ym)
    embed(rep, build_psd_deriv_dual(n - 1, k, strategy), AffineMap.from_matrix_map(Ym.congruence(V)))
    rep.output_map = AffineMap([AffineScalar.var(Y[sym_index(n, i, i)]) for i in range(n)])
    return rep


def build_psd_deriv_dual(n, k, strategy=Strategy.AUTO):
    """Representation of the dual of ``psd(n, k)`` over ``svec W``.

    Uses ``W`` in the dual iff some ``y`` in the dual of ``orthant(n, k)`` has
    ``(W, y)`` in the Schur-Horn cone.  Base cases: ``k = 0`` PSD cone, ``k = n-1``
    the ray of the identity (except under the derivative strategy, which follows
    the lift all the way down), ``k = n`` the zero cone.
    """
    _check_nk(n, k)
    strategy = Strategy.parse(strategy)
    _no_soc(strategy)
    N = svec_len(n)
    label = f"psd_deriv_dual({n},{k})"
    if k == n:
        return _zero(N, label)
    if k == 0:
        rep = SdpRepresentation(N, label)
        if n == 1:
            rep.add_nonneg(AffineScalar.var(0))
        else:
            rep.add_block(_matrix_var(n, list(range(N))))
        return rep
    if k == n - 1 and strategy is not Strategy.DERIVATIVE:
        return _ray([1.0 if i == j else 0.0 for i, j in sym_pairs(n)], label)
    rep = SdpRepresentation(N, label)
    y = rep.add_aux(n)
    embed(rep, build_schur_horn(n), AffineMap.identity(list(range(N)) + y))
    embed(rep, build_orthant_dual(n, k, strategy), AffineMap.identity(y))
    return rep


def build_spectrahedral_deriv_dual(pencil, k, strategy=Strategy.AUTO):
    """Dual of a spectrahedral derivative relaxation, as the image
    ``w_i = <S A_i S, Y>`` of the dual of ``psd(m, k)``.

    The image is closed because ``e`` is interior to the primal cone.
    """
    if not 0 <= k <= pencil.m - 1:
        raise ArgumentError(f"k={k} outside 0..{pencil.m - 1}")
    m = pencil.m
    rep = SdpRepresentation(0, f"spectrahedral_dual({m},{k})")
    Y = rep.add_aux(svec_len(m))
    embed(rep, build_psd_deriv_dual(m, k, strategy), AffineMap.identity(Y))
    rows = []
    for a in pencil.normalized():
        rows.append(AffineScalar.linear(Y, [a[i, j] * (1.0 if i == j else 2.0) for i, j in sym_pairs(m)]))
    rep.output_map = AffineMap(rows)
    return rep


# ---------------------------------------------------------------------------
# dispatch and size accounting


def build(spec):
    """Build the representation described by a :class:`ConeSpec`."""
    if spec.kind == "orthant":
        return build_orthant(spec.n, spec.k, spec.strategy)
    if spec.kind == "psd":
        return build_psd_deriv(spec.n, spec.k, spec.strategy)
    if spec.kind == "spectrahedral":
        return build_spectrahedral_deriv(spec.pencil, spec.k, spec.strategy)
    inner = spec.inner
    if inner.kind == "orthant":
        return build_orthant_dual(inner.n, inner.k, inner.strategy)
    if inner.kind == "psd":
        return build_psd_deriv_dual(inner.n, inner.k, inner.strategy)
    return build_spectrahedral_deriv_dual(inner.pencil, inner.k, inner.strategy)


@dataclass(frozen=True)
class SizeRow:
    label: str
    dims: tuple
    size: int


@dataclass(frozen=True)
class SizeReport:
    rows: tuple
    total: int

    def table(self):
        width = max([len(r.label) for r in self.rows] + [5])
        lines = [f"{'level':<{width}}  {'size':>6}  blocks"]
        for r in self.rows:
            lines.append(f"{r.label:<{width}}  {r.size:>6}  {list(r.dims)}")
        lines.append(f"{'total':<{width}}  {self.total:>6}")
        return "\n".join(lines)

    def to_dict(self):
        return {"levels": [{"label": r.label, "dims": list(r.dims), "size": r.size} for r in self.rows],
                "total": self.total}


def size_report(spec_or_rep):
    """Per-level size accounting along the construction chain, top level first."""
    rep = spec_or_rep if isinstance(spec_or_rep, SdpRepresentation) else build(spec_or_rep)
    rows = tuple(SizeRow(lv.label, tuple(lv.dims), lv.size) for lv in rep.levels)
    total = sum(r.size for r in rows)
    assert total == rep.size()
    return SizeReport(rows, total)


def representation_size(spec):
    return build(spec).size()
