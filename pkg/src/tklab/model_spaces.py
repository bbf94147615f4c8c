"""Model spaces K = H^2 minus Theta H^2 at truncation, and range splitting.

The truncated model space is computed as the kernel of the compression of
Theta*, which is exact on polynomials because Theta* has no positive powers:
nothing gets flushed past the degree window.  The shifted range Theta H^2 is
spanned by interior-window generators only, so that boundary-degree
artifacts never contaminate range membership.  Two independent projections
(kernel-basis and multiply-project-multiply) are cross-checked on every
build; a disagreement aborts, since silent truncation bugs here would poison
every downstream defect computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotInnerError
from .hardy_core import CoeffVec, riesz_project
from .operators import build_toeplitz
from .subspaces import Subspace, is_contained, nullspace, project, span_of
from .symbols import LaurentMatrixSymbol, is_inner, symbol_adjoint


@dataclass(frozen=True)
class ModelSpace:
    theta: LaurentMatrixSymbol
    N: int
    as_subspace: Subspace
    range_subspace: Subspace
    #: directions of the ambient in neither the model space nor the
    #: interior-window range; they live at boundary degrees
    boundary_dim: int
    inner_deviation: float

    @property
    def m(self) -> int:
        return self.theta.m

    @property
    def interior(self) -> int:
        return self.N - self.theta.d


def build_model_space(theta: LaurentMatrixSymbol, N: int,
                      tol_inner: float = 1e-8, grid_size: int = 2048,
                      tol_rel: float | None = None,
                      cross_check_tol: float = 1e-8) -> ModelSpace:
    """Construct the truncated model space of an analytic inner symbol."""
    if not theta.is_analytic():
        raise NotInnerError("model spaces need an analytic symbol")
    check = is_inner(theta, grid_size=grid_size, tol=tol_inner)
    if not check.ok:
        raise NotInnerError(
            f"symbol is not inner on the grid (deviation {check.max_deviation:.3e})")
    m, d = theta.m, theta.d
    if N <= d:
        raise NotInnerError(f"truncation N={N} must exceed the symbol degree {d}")
    comp = build_toeplitz(symbol_adjoint(theta), N)
    model = nullspace(comp.matrix, (m, N), tol_rel=tol_rel)

    generators = []
    for j in range(N - d):
        for i in range(m):
            generators.append(
                theta.act(CoeffVec.monomial(m, N, i, j)).analytic_part().resized(N))
    rng = span_of(generators, tol_rel=tol_rel)

    boundary = m * N - model.dim - rng.dim
    ms = ModelSpace(theta=theta, N=N, as_subspace=model, range_subspace=rng,
                    boundary_dim=boundary, inner_deviation=check.max_deviation)
    _cross_check_projections(ms, cross_check_tol)
    return ms


def _cross_check_projections(ms: ModelSpace, tol: float) -> None:
    """Compare kernel-basis projection with the multiply-project-multiply form.

    Probes are interior-supported monomials, where both constructions are
    exact; a mismatch indicates an assembly bug, not a truncation effect.
    """
    m, N = ms.m, ms.N
    probes = min(ms.interior, 4)
    worst = 0.0
    for j in range(probes):
        for i in range(m):
            F = CoeffVec.monomial(m, N, i, j)
            a = project(F, ms.as_subspace)
            b = project_onto_model_formula(F, ms)
            keep = ms.interior
            worst = max(worst, float(np.linalg.norm(
                a.coeffs[:, :keep] - b.coeffs[:, :keep])))
    if worst > tol:
        raise AssertionError(
            f"model-space projections disagree by {worst:.3e} on the interior window")


def project_onto_model_formula(F: CoeffVec, ms: ModelSpace) -> CoeffVec:
    """F - Theta P_+(Theta* F) in truncated coefficients."""
    adj = symbol_adjoint(ms.theta)
    inner_part = riesz_project(adj.act(F)).resized(F.N)
    back = ms.theta.act(inner_part).analytic_part().resized(F.N)
    return F - back


def project_onto_model(F: CoeffVec, ms: ModelSpace) -> CoeffVec:
    """Orthogonal projection onto the truncated model space."""
    return project(F, ms.as_subspace)


@dataclass(frozen=True)
class RangeSplit:
    """G = model_part + range_part with the membership verdict for the range."""

    model_part: CoeffVec
    range_part: CoeffVec
    in_range: bool
    model_mass: float

    @property
    def outside_mass(self) -> float:
        return self.model_mass


def decompose_against_theta(G: CoeffVec, ms: ModelSpace,
                            tol_membership: float = 1e-8) -> RangeSplit:
    """Split G into its model-space part and its Theta H^2 remainder.

    The verdict ``in_range`` is True when the model-space mass falls below
    tol_membership relative to |G|.
    """
    g_model = project_onto_model(G, ms)
    g_range = G - g_model
    mass = g_model.norm()
    return RangeSplit(model_part=g_model, range_part=g_range,
                      in_range=mass <= tol_membership * max(G.norm(), 1e-300),
                      model_mass=mass)


def model_space_dimension_on_interior(ms: ModelSpace) -> int:
    """Model-space directions supported on the interior window."""
    dim = 0
    for v in ms.as_subspace.basis_vectors():
        tail = float(np.linalg.norm(v.coeffs[:, ms.interior:]))
        if tail < 0.5:  # basis vectors are unit; mostly-interior counts
            dim += 1
    return dim


def model_contains(ms: ModelSpace, other: Subspace, tol: float = 1e-8):
    return is_contained(other, ms.as_subspace, tol)
