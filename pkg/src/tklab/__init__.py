"""tklab: kernels of finite-rank-perturbed block Toeplitz compressions.

A desk-scale numerical workbench over truncated vector-valued Hardy space:
builds compressions of matrix-symbol multiplication operators and their
finite-rank perturbations, extracts kernels by dense SVD, measures how far
those kernels are from backward-shift invariance, constructs the predicted
defect spaces for each structured symbol class, and verifies the coordinate
representation of nearly invariant subspaces.
"""

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (CircleRootError, ContainmentError, DimensionMismatch,
                     FrameDeficientError, NotInnerError, NotInvertibleError,
                     OrthonormalityError, ScenarioParseError,
                     ScenarioValidationError, TKLabError)
from .hardy_core import (CoeffVec, LaurentVec, backward_shift, eval_at_zero,
                         forward_shift, inner_product, reproducing_column,
                         riesz_project)
from .model_spaces import (ModelSpace, build_model_space,
                           decompose_against_theta, project_onto_model)
from .near_invariance import (DefectReport, KernelResult, compute_defect,
                              kernel_of, verify_theorem_inner_symbol,
                              verify_theorem_invertible_factors,
                              verify_theorem_phi_zero,
                              verify_theorem_theta_star)
from .operators import (BrownHalmosReport, PerturbedToeplitz,
                        ToeplitzCompression, brown_halmos_check,
                        build_perturbed, build_toeplitz, orthonormalize_family)
from .representation import (Coordinates, RepresentationFrame, build_frame,
                             check_coordinate_space_invariance,
                             extract_coordinates,
                             rank_one_complement_analysis,
                             rank_one_inner_kernel,
                             rank_one_invertible_kernel,
                             rank_one_theta_star_analysis, reassemble)
from .subspaces import (SigmaGap, Subspace, full_space, intersect,
                        is_contained, nullspace, ortho_complement_within,
                        project, span_of, subspace_equal,
                        vanishing_at_zero_space, zero_at_origin_slice)
from .symbols import (InnerCheck, LaurentMatrixSymbol,
                      ScalarInnerOuterFactorization, blaschke_taylor,
                      diagonal_inner_outer, diagonal_inner_part,
                      invert_analytic, is_inner, is_invertible_analytic,
                      scalar_inner_outer, symbol_adjoint, symbol_multiply)

__version__ = "0.1.0"
