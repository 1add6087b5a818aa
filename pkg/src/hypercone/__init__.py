"""Semidefinite representations of derivative relaxations of the orthant, the
PSD cone and spectrahedral cones, with a small SDP solver and independent
polynomial membership oracles."""

from .config import DEFAULT_SOLVER, DEFAULT_TOLERANCES, SolverConfig, ToleranceConfig
from .conelib import (ConeSpec, DualOf, Orthant, Pencil, PsdDeriv, SpectrahedralDeriv, Strategy,
                      build, build_orthant, build_orthant_dual, build_psd_deriv,
                      build_psd_deriv_dual, build_schur_horn, build_soc_orthant,
                      build_spectrahedral_deriv, build_spectrahedral_deriv_dual, size_report,
                      three_ellipse_pencil)
from .errors import (ArgumentError, DefinitenessError, HyperconeError, NumericalError, ParseError,
                     SingularPivotError, SolverError, StrategyError, UnsupportedFormError)
from .lmi import (AffineMap, AffineMatrixMap, AffineScalar, SdpProblem, SdpRepresentation, embed,
                  freeze_membership_problem, from_json, new_representation, smat, svec, to_json)
from .membership import (MembershipProbe, directional_margin, member, projection_residual,
                         sample_members)
from .oracle import (MembershipVerdict, check_main_identity, check_polar_identity,
                     dual_pairing_min, majorization_check, orthant_margin, psd_deriv_margin,
                     spectrahedral_margin)
from .sdpa import from_sdpa, read_sdpa, to_sdpa, write_sdpa
from .sdpsolve import SolveReport, feasibility_margin, solve, solve_file
from .symlin import (charpoly_coeffs, complement_basis, eigvals_sym, elem_sym, inv_sqrt_pd,
                     schur_complement)

__version__ = "0.1.0"
