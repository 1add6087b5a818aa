"""Tolerances and solver parameters.

Every numerical threshold used by the package lives here and is passed
explicitly; no module reads ambient state.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ToleranceConfig:
    symmetry: float = 1e-12  # relative, for accepting a matrix as symmetric
    basis: float = 1e-12  # complement basis orthonormality
    pivot: float = 1e-12  # relative size of a Schur complement pivot
    definiteness: float = 1e-10  # relative lambda_min for inv_sqrt_pd
    boundary: float = 1e-6  # |margin| below this is reported as Boundary
    projection: float = 1e-7  # projection residual acceptance, times (1 + |w|)

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)


@dataclass(frozen=True)
class SolverConfig:
    feastol: float = 1e-8
    abstol: float = 1e-8
    reltol: float = 1e-8
    max_iter: int = 200
    step_fraction: float = 0.98
    # centering exponent in sigma = (1 - alpha_affine) ** expon
    expon: int = 3
    # iterations without a better iterate before giving up as NumericalTrouble
    stall_iters: int = 25
    # |t| cap used by the feasibility-margin driver
    margin_cap: float = 1.0

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)


DEFAULT_TOLERANCES = ToleranceConfig()
DEFAULT_SOLVER = SolverConfig()
