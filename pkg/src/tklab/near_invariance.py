"""Near-invariance defect measurement and the per-symbol-class verifications.

The defect of a subspace M measures how far backward-shifting its
origin-vanishing members escapes M: residuals r_F = S*F - P_M(S*F) over the
slice {F in M : F(0) = 0} span the (minimal, orthogonal-to-M) defect space.

Each verify_* operation builds the perturbed operator for one symbol class,
extracts its polynomial kernel from the exact-action matrix, measures the
defect, and compares it against the class prediction.  Predictions are
generally oblique to the kernel, so containment is assessed modulo M: the
defect (which is orthogonal to M by construction) must lie inside
span(M + prediction), equivalently inside the prediction projected onto the
orthocomplement of M.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotInnerError, NotInvertibleError
from .hardy_core import CoeffVec, backward_shift
from .model_spaces import build_model_space, decompose_against_theta
from .operators import PerturbedToeplitz, build_perturbed, build_toeplitz
from .subspaces import (SigmaGap, Subspace, is_contained, nullspace, span_of,
                        subspace_equal, zero_at_origin_slice, zero_space)
from .symbols import (LaurentMatrixSymbol, invert_analytic, is_inner,
                      is_invertible_analytic, symbol_adjoint, symbol_multiply)


@dataclass(frozen=True)
class KernelResult:
    subspace: Subspace
    residual_max: float
    sigma_cut: float
    sigma_gap: SigmaGap
    audit_violations: int


def kernel_of(T: PerturbedToeplitz, tol_rel: float | None = None) -> KernelResult:
    """Polynomial kernel of the perturbed operator via dense SVD.

    Uses the exact-action (overflow-row) matrix so that top-degree monomials
    flushed past the truncation window cannot masquerade as kernel vectors.
    Every basis vector is audited against 10x the singular-value cut.
    """
    action = T.action_matrix()
    ker = nullspace(action, (T.m, T.N), tol_rel=tol_rel)
    resid = 0.0
    violations = 0
    for i in range(ker.dim):
        r = float(np.linalg.norm(action @ ker.basis[:, i]))
        resid = max(resid, r)
        if r > 10.0 * max(ker.tol, np.finfo(float).eps):
            violations += 1
    return KernelResult(subspace=ker, residual_max=resid, sigma_cut=ker.tol,
                        sigma_gap=ker.sigma_gap, audit_violations=violations)


@dataclass
class DefectReport:
    """Defect measurement, optionally against a predicted defect space."""

    subspace_dim: int
    slice_dim: int
    defect_dim: int
    defect_basis: Subspace
    sigma_gap: SigmaGap
    predicted: Subspace | None = None
    predicted_dim: int | None = None
    containment_residual: float | None = None
    kernel_residual_max: float | None = None
    defect_bound: int | None = None
    details: dict = field(default_factory=dict)

    @property
    def bound_ok(self) -> bool:
        return self.defect_bound is None or self.defect_dim <= self.defect_bound

    def containment_ok(self, tol: float) -> bool:
        return self.containment_residual is None or self.containment_residual <= tol

    def to_json(self) -> dict:
        return {
            "subspace_dim": self.subspace_dim,
            "slice_dim": self.slice_dim,
            "defect_dim": self.defect_dim,
            "sigma_gap": self.sigma_gap.to_pair(),
            "containment_residual": self.containment_residual,
            "predicted_dim": self.predicted_dim,
            "kernel_residual_max": self.kernel_residual_max,
            "details": {k: v for k, v in self.details.items()
                        if isinstance(v, (int, float, str, bool, list, type(None)))},
        }


def compute_defect(M: Subspace, defect_floor: float = 1e-8,
                   tol_rel: float | None = None) -> DefectReport:
    """Measure the near-invariance defect of M.

    The slice is computed exactly inside M; residual directions below the
    absolute floor are treated as noise, which is what keeps exactly
    invariant subspaces (for instance model spaces) at defect zero.
    """
    sl = zero_at_origin_slice(M)
    if sl.dim == 0:
        return DefectReport(subspace_dim=M.dim, slice_dim=0, defect_dim=0,
                            defect_basis=zero_space(M.m, M.N),
                            sigma_gap=SigmaGap(0.0, None))
    residuals = []
    for F in sl.basis_vectors():
        shifted = backward_shift(F).flatten()
        residuals.append(CoeffVec.from_flat(shifted - M.project_flat(shifted), M.m, M.N))
    defect = span_of(residuals, tol_rel=tol_rel, floor=defect_floor)
    overlap = 0.0
    if defect.dim and M.dim:
        overlap = float(np.max(np.abs(M.basis.conj().T @ defect.basis)))
    return DefectReport(subspace_dim=M.dim, slice_dim=sl.dim,
                        defect_dim=defect.dim, defect_basis=defect,
                        sigma_gap=defect.sigma_gap,
                        details={"defect_overlap_with_subspace": overlap})


def _attach_prediction(report: DefectReport, M: Subspace,
                       predicted_vectors: list[CoeffVec],
                       defect_floor: float = 1e-8) -> DefectReport:
    """Containment of the measured defect in the prediction, modulo M.

    The prediction spans need not be orthogonal to M (the kernel), while the
    measured defect is; so the fair comparison projects the prediction onto
    the orthocomplement of M.  Equality of that projection with the defect is
    recorded alongside the containment residual.
    """
    nonzero = [v for v in predicted_vectors if v.norm() > 1e-14]
    if not nonzero:
        report.predicted = zero_space(M.m, M.N)
        report.predicted_dim = 0
        report.containment_residual = 0.0 if report.defect_dim == 0 else 1.0
        return report
    predicted = span_of(nonzero)
    report.predicted = predicted
    report.predicted_dim = predicted.dim
    reduced = [CoeffVec.from_flat(v.flatten() - M.project_flat(v.flatten()), M.m, M.N)
               for v in nonzero]
    pred_mod = span_of(reduced, floor=defect_floor)
    _, resid = is_contained(report.defect_basis, pred_mod, 0.0)
    report.containment_residual = resid
    _, eq_resid = subspace_equal(report.defect_basis, pred_mod, 1e-8)
    report.details["prediction_mod_kernel_dim"] = pred_mod.dim
    report.details["prediction_equality_residual"] = eq_resid
    return report


def _kernel_defect(T: PerturbedToeplitz, defect_floor: float,
                   tol_rel: float | None) -> tuple[KernelResult, DefectReport]:
    kr = kernel_of(T, tol_rel=tol_rel)
    report = compute_defect(kr.subspace, defect_floor=defect_floor, tol_rel=tol_rel)
    report.kernel_residual_max = kr.residual_max
    report.details["kernel_sigma_cut"] = kr.sigma_cut
    report.details["kernel_sigma_ratio"] = kr.sigma_gap.ratio
    report.details["kernel_audit_violations"] = kr.audit_violations
    return kr, report


def verify_theorem_phi_zero(G: list[CoeffVec], H: list[CoeffVec], N: int,
                            m: int | None = None,
                            defect_floor: float = 1e-8,
                            tol_rel: float | None = None,
                            tol_ortho: float = 1e-8) -> DefectReport:
    """Zero symbol: the kernel is the orthocomplement of span{G_i}; the
    defect space sits inside span{G_i} with defect at most the rank."""
    if G:
        m = G[0].m
    elif m is None:
        raise ValueError("component count m is required when the family is empty")
    T = build_perturbed(LaurentMatrixSymbol.zero(m), N, list(G), list(H),
                        tol_ortho=tol_ortho)
    kr, report = _kernel_defect(T, defect_floor, tol_rel)
    report.defect_bound = len(G)
    _attach_prediction(report, kr.subspace, list(G), defect_floor)
    return report


def verify_theorem_inner_symbol(theta: LaurentMatrixSymbol, G: list[CoeffVec],
                                H: list[CoeffVec], N: int,
                                defect_floor: float = 1e-8,
                                tol_rel: float | None = None,
                                tol_ortho: float = 1e-8,
                                tol_inner: float = 1e-8) -> DefectReport:
    """Inner symbol: defect at most n inside span{S*(T_{Theta*} H_i)}."""
    chk = is_inner(theta, tol=tol_inner)
    if not chk.ok:
        raise NotInnerError(f"symbol deviates from inner by {chk.max_deviation:.3e}")
    T = build_perturbed(theta, N, list(G), list(H), tol_ortho=tol_ortho)
    kr, report = _kernel_defect(T, defect_floor, tol_rel)
    report.defect_bound = len(G)
    adj = build_toeplitz(symbol_adjoint(theta), N)
    predicted = [backward_shift(adj.apply(h)) for h in H]
    alternate = [adj.apply(backward_shift(h)) for h in H]
    _attach_prediction(report, kr.subspace, predicted, defect_floor)
    # the shifted-then-compressed and compressed-then-shifted forms span the
    # same space; record how exactly
    both_zero = all(v.norm() < 1e-14 for v in predicted + alternate)
    if both_zero:
        report.details["alternate_form_residual"] = 0.0
    else:
        _, resid = subspace_equal(span_of(predicted, floor=1e-12),
                                  span_of(alternate, floor=1e-12))
        report.details["alternate_form_residual"] = resid
    return report


def verify_theorem_invertible_factors(F1: LaurentMatrixSymbol,
                                      F2: LaurentMatrixSymbol,
                                      G: list[CoeffVec], H: list[CoeffVec],
                                      N: int,
                                      defect_floor: float = 1e-8,
                                      tol_rel: float | None = None,
                                      tol_ortho: float = 1e-8,
                                      margin: float = 1e-6) -> DefectReport:
    """Symbol F1* F2 with invertible analytic factors: defect at most n
    inside span{F2^{-1} S*(T_{F1*^{-1}} H_i)}."""
    for name, F in (("F1", F1), ("F2", F2)):
        if not is_invertible_analytic(F, margin=margin):
            raise NotInvertibleError(f"factor {name} is not invertible on the disk")
    phi = symbol_multiply(symbol_adjoint(F1), F2)
    T = build_perturbed(phi, N, list(G), list(H), tol_ortho=tol_ortho)
    kr, report = _kernel_defect(T, defect_floor, tol_rel)
    report.defect_bound = len(G)
    inv1 = invert_analytic(F1, N - 1)
    inv2 = invert_analytic(F2, N - 1)
    inv1_adj = symbol_adjoint(inv1)
    predicted = []
    for h in H:
        intermediate = inv1_adj.act(h).analytic_part().resized(N)
        predicted.append(inv2.act(backward_shift(intermediate)).analytic_part().resized(N))
    _attach_prediction(report, kr.subspace, predicted, defect_floor)
    return report


def verify_theorem_theta_star(theta: LaurentMatrixSymbol, G: list[CoeffVec],
                              H: list[CoeffVec], N: int,
                              defect_floor: float = 1e-8,
                              tol_rel: float | None = None,
                              tol_ortho: float = 1e-8,
                              tol_inner: float = 1e-8,
                              range_membership: float = 1e-8) -> DefectReport:
    """Adjoint-of-inner symbol: defect at most n + l where l counts the G_j
    outside the shifted range; prediction adds their model-space parts."""
    chk = is_inner(theta, tol=tol_inner)
    if not chk.ok:
        raise NotInnerError(f"symbol deviates from inner by {chk.max_deviation:.3e}")
    T = build_perturbed(symbol_adjoint(theta), N, list(G), list(H), tol_ortho=tol_ortho)
    kr, report = _kernel_defect(T, defect_floor, tol_rel)
    ms = build_model_space(theta, N, tol_inner=tol_inner)
    predicted = [theta.act(backward_shift(h)).analytic_part().resized(N) for h in H]
    outside = 0
    for g in G:
        split = decompose_against_theta(g, ms, tol_membership=range_membership)
        if not split.in_range:
            outside += 1
            predicted.append(split.model_part)
    report.defect_bound = len(G) + outside
    report.details["outside_range_count"] = outside
    _attach_prediction(report, kr.subspace, predicted, defect_floor)
    return report
