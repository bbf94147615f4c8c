"""Coordinate representation of nearly invariant subspaces.

A subspace M with defect frame E_1..E_p and non-vanishing frame W_1..W_r
(an orthonormal basis of M minus its origin-vanishing slice) represents each
member as

    F = sum_a K0_a * W_a + sum_j z * k_j * E_j,

with scalar coefficient functions (K0, k_1..k_p) drawn from a backward-shift
invariant coordinate space, and |F|^2 = |K0|^2 + sum |k_j|^2.

Coordinates are extracted by degree peeling: the value F(0) fixes the
degree-0 block of K0 through the (injective) value map of the W frame;
subtracting and backward-shifting exposes the degree-0 values of the k_j as
inner products against the defect frame; iterating walks up the degrees.
Peeling lands exactly on the coordinate-space solution, which a flat
least-squares solve of the (often rank-deficient) frame map would not.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, FrameDeficientError, NotInnerError
from .hardy_core import (CoeffVec, backward_shift, eval_at_zero, inner_product,
                         reproducing_column)
from .model_spaces import build_model_space, decompose_against_theta
from .near_invariance import compute_defect, kernel_of
from .operators import build_perturbed, build_toeplitz, orthonormalize_family
from .subspaces import (Subspace, intersect, is_contained,
                        ortho_complement_within, project, span_of,
                        subspace_equal, vanishing_at_zero_space, zero_space)
from .symbols import (LaurentMatrixSymbol, invert_analytic, is_inner,
                      is_invertible_analytic, symbol_adjoint)


def scalar_multiply_truncated(scalar_coeffs: np.ndarray, V: CoeffVec) -> CoeffVec:
    """Truncated product of a scalar series with a vector series."""
    s = np.asarray(scalar_coeffs, dtype=complex).ravel()
    out = np.zeros((V.m, V.N), dtype=complex)
    for i in range(V.m):
        out[i] = np.convolve(s, V.coeffs[i])[:V.N]
    return CoeffVec(out)


@dataclass(frozen=True)
class RepresentationFrame:
    M: Subspace
    W: tuple[CoeffVec, ...]
    E: tuple[CoeffVec, ...]
    vanishing_case: bool
    #: conditioning of the value-at-zero map of the W frame
    value_map_cond: float

    @property
    def r(self) -> int:
        return len(self.W)

    @property
    def p(self) -> int:
        return len(self.E)

    def value_matrix(self) -> np.ndarray:
        if not self.W:
            return np.zeros((self.M.m, 0), dtype=complex)
        return np.stack([eval_at_zero(w) for w in self.W], axis=1)


def build_frame(M: Subspace, defect: Subspace,
                tol_contain: float = 1e-8,
                defect_floor: float = 1e-8) -> RepresentationFrame:
    """Assemble (W, E) frames for M with the given defect space.

    The defect space must contain the measured defect of M and be orthogonal
    to M.  W spans M minus (M intersect zH2), orthonormalized by Gram-Schmidt
    in the order of M's basis columns.
    """
    measured = compute_defect(M, defect_floor=defect_floor)
    ok, resid = is_contained(measured.defect_basis, defect, tol_contain)
    if not ok:
        raise DimensionMismatch(
            f"provided defect space misses measured defect directions "
            f"(residual {resid:.3e})")
    if defect.dim and M.dim:
        overlap = float(np.max(np.abs(M.basis.conj().T @ defect.basis)))
        if overlap > tol_contain:
            raise DimensionMismatch(
                f"defect frame is not orthogonal to the subspace (overlap {overlap:.3e})")
    zslice = intersect(M, vanishing_at_zero_space(M.m, M.N))
    W: list[CoeffVec] = []
    for idx in range(M.dim):
        v = M.basis[:, idx] - zslice.project_flat(M.basis[:, idx])
        for w in W:
            v = v - w.flatten() * np.vdot(w.flatten(), v)
        nrm = float(np.linalg.norm(v))
        if nrm > 1e-10:
            W.append(CoeffVec.from_flat(v / nrm, M.m, M.N))
    if W:
        vals = np.stack([eval_at_zero(w) for w in W], axis=1)
        svals = np.linalg.svd(vals, compute_uv=False)
        cond = float(svals[0] / svals[-1]) if svals[-1] > 0 else float("inf")
    else:
        cond = 1.0
    return RepresentationFrame(M=M, W=tuple(W), E=tuple(defect.basis_vectors()),
                               vanishing_case=not W, value_map_cond=cond)


@dataclass
class Coordinates:
    """Extracted coordinate functions with their quality measures."""

    K0: CoeffVec | None
    k: tuple[CoeffVec, ...]
    reconstruction_residual: float
    isometry_gap: float
    source_norm: float

    def coordinate_norm_sq(self) -> float:
        total = self.K0.norm_sq() if self.K0 is not None else 0.0
        return total + sum(kj.norm_sq() for kj in self.k)

    def shifted(self, n: int) -> "Coordinates":
        """Apply the backward shift n times to every coordinate function."""
        K0 = self.K0
        if K0 is not None:
            arr = np.zeros_like(K0.coeffs)
            if n < K0.N:
                arr[:, :K0.N - n] = K0.coeffs[:, n:]
            K0 = CoeffVec(arr)
        k = []
        for kj in self.k:
            arr = np.zeros_like(kj.coeffs)
            if n < kj.N:
                arr[:, :kj.N - n] = kj.coeffs[:, n:]
            k.append(CoeffVec(arr))
        return Coordinates(K0=K0, k=tuple(k), reconstruction_residual=0.0,
                           isometry_gap=0.0, source_norm=self.source_norm)


def reassemble(frame: RepresentationFrame, K0: CoeffVec | None,
               k: tuple[CoeffVec, ...]) -> CoeffVec:
    """F0 K0 + sum_j z k_j E_j in truncated coefficients."""
    m, N = frame.M.m, frame.M.N
    out = CoeffVec.zeros(m, N)
    if K0 is not None:
        for a, w in enumerate(frame.W):
            out = out + scalar_multiply_truncated(K0.coeffs[a], w)
    for j, e in enumerate(frame.E):
        shifted = np.concatenate([[0.0 + 0.0j], k[j].coeffs[0]])[:N]
        out = out + scalar_multiply_truncated(shifted, e)
    return out


def extract_coordinates(F: CoeffVec, frame: RepresentationFrame,
                        tol_membership: float = 1e-6,
                        tol_rep: float = 1e-8,
                        tol_tail: float = 1e-10,
                        max_steps: int | None = None) -> Coordinates:
    """Peel coordinate functions of an M-member degree by degree.

    The peeled remainder lives inside the same degree window at every step,
    so the recursion can run past the window length: coordinate functions
    are generally infinite series even for polynomial members, and the loop
    continues until their tail (the unrepresented remainder mass) drops
    below tol_tail or max_steps is hit.  The remainder enters the reported
    isometry gap, so a slowly converging frame is visible, never hidden.

    Raises if F is not an M-member within tolerance, or if the frame cannot
    reconstruct it (a deficient defect frame or missing headroom).
    """
    M = frame.M
    if F.shape != (M.m, M.N):
        raise DimensionMismatch(f"vector shape {F.shape} vs ambient ({M.m}, {M.N})")
    fnorm = F.norm()
    member_resid = M.residual_flat(F.flatten())
    if member_resid > tol_membership * max(fnorm, 1e-300):
        raise ValueError(
            f"vector is not a member of the subspace (residual {member_resid:.3e})")
    r, p, N = frame.r, frame.p, M.N
    if max_steps is None:
        max_steps = max(64 * N, 4096)
    mm = M.m
    W_mat = (np.stack([w.flatten() for w in frame.W], axis=1)
             if r else np.zeros((mm * N, 0), complex))
    E_mat = (np.stack([e.flatten() for e in frame.E], axis=1)
             if p else np.zeros((mm * N, 0), complex))
    # value solve per step is the same least-squares system; pin it once
    vals_pinv = np.linalg.pinv(frame.value_matrix()) if r else None
    K0_cols: list[np.ndarray] = []
    k_cols: list[np.ndarray] = []
    cur = F.flatten()
    floor = tol_tail * max(fnorm, 1e-300)
    zeros_block = np.zeros(mm, dtype=complex)
    for _ in range(max_steps):
        if np.linalg.norm(cur) <= floor:
            break
        if r:
            a = vals_pinv @ cur[:mm]  # degree-0 block sits in the first m slots
            K0_cols.append(a)
            cur = cur - W_mat @ a
        else:
            K0_cols.append(np.zeros(0, dtype=complex))
        cur = np.concatenate([cur[mm:], zeros_block])  # backward shift, flat form
        if p:
            cs = E_mat.conj().T @ cur
            k_cols.append(cs)
            cur = cur - E_mat @ cs
        else:
            k_cols.append(np.zeros(0, dtype=complex))
    steps = max(len(K0_cols), 1)
    K0 = None
    if r:
        arr = np.zeros((r, steps), dtype=complex)
        for t, col in enumerate(K0_cols):
            arr[:, t] = col
        K0 = CoeffVec(arr)
    k: tuple[CoeffVec, ...] = ()
    if p:
        arr = np.zeros((p, steps), dtype=complex)
        for t, col in enumerate(k_cols):
            arr[:, t] = col
        k = tuple(CoeffVec(arr[j:j + 1]) for j in range(p))
    rebuilt = reassemble(frame, K0, k)
    recon = float(np.linalg.norm(rebuilt.coeffs - F.coeffs))
    if recon > tol_rep * max(fnorm, 1e-300):
        raise FrameDeficientError(
            f"frame cannot reconstruct the member (residual {recon:.3e})")
    norm_gap = abs(fnorm ** 2 - (K0.norm_sq() if K0 is not None else 0.0)
                   - sum(kj.norm_sq() for kj in k))
    return Coordinates(K0=K0, k=k, reconstruction_residual=recon,
                       isometry_gap=norm_gap, source_norm=fnorm)


@dataclass(frozen=True)
class InvarianceReport:
    depth: int
    #: max over the coordinate sample of the membership residual per shift
    residuals: tuple[float, ...]

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    def to_json(self) -> dict:
        return {"depth": self.depth, "invariance_residuals": list(self.residuals)}


def check_coordinate_space_invariance(frame: RepresentationFrame,
                                      coords_list: list[Coordinates],
                                      depth: int) -> InvarianceReport:
    """Backward-shift the coordinates and test membership of the reassembly.

    Residuals are scaled by the source member's norm: they measure escape
    mass relative to the original element.
    """
    out = []
    for n in range(1, depth + 1):
        worst = 0.0
        for coords in coords_list:
            shifted = coords.shifted(n)
            v = reassemble(frame, shifted.K0, shifted.k)
            resid = frame.M.residual_flat(v.flatten())
            worst = max(worst, resid / max(coords.source_norm, 1e-300))
        out.append(worst)
    return InvarianceReport(depth=depth, residuals=tuple(out))


def default_depth(N: int) -> int:
    """Each backward shift consumes usable degrees; past N/2 the check degenerates."""
    return min(8, N // 2)


# ---------------------------------------------------------------------------
# rank-one application analyses
# ---------------------------------------------------------------------------


def _autocorrelation(G: CoeffVec) -> np.ndarray:
    """Fourier coefficients of |G|^2 on the circle, degrees -(N-1)..N-1."""
    N = G.N
    out = np.zeros(2 * N - 1, dtype=complex)
    for i in range(G.m):
        row = G.coeffs[i]
        out += np.correlate(row, row, mode="full")  # sum_j row[j+k] conj(row[j])
    return out


def _analytic_part_of_correlation(corr: np.ndarray, shift: int, N: int) -> np.ndarray:
    """Coefficients of P(z^shift * corr) up to degree N-1; shift may be negative."""
    half = (len(corr) - 1) // 2
    out = np.zeros(N, dtype=complex)
    for j in range(N):
        k = j - shift
        if -half <= k <= half:
            out[j] = corr[k + half]
    return out


def _unit_norm_check(G: CoeffVec, tol: float = 1e-8) -> None:
    if abs(G.norm() - 1.0) > tol:
        raise ValueError(f"generator must have unit norm, got {G.norm():.6f}")


def _shifted_pairing(coeff_rows: np.ndarray, data_rows: np.ndarray, n: int) -> complex:
    """<coeffs, z^n data> over matching degree slots."""
    width = min(data_rows.shape[1], coeff_rows.shape[1] - n)
    if width <= 0:
        return 0j
    return complex(np.sum(coeff_rows[:, n:n + width] * np.conj(data_rows[:, :width])))


@dataclass
class ComplementAnalysis:
    """Orthocomplement-of-one-vector analysis for the zero symbol."""

    frame: RepresentationFrame
    projections_F: tuple[CoeffVec, ...]
    gs_coefficients: np.ndarray
    G0: CoeffVec
    g: CoeffVec
    projection_formula_residual: float
    condition_residual_max: float
    samples: int
    coords: list[Coordinates] = field(default_factory=list)

    @property
    def r(self) -> int:
        return self.frame.r

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "vanishing_case": self.frame.vanishing_case,
            "projection_formula_residual": self.projection_formula_residual,
            "condition_residual_max": self.condition_residual_max,
            "samples": self.samples,
            "G0": self.G0.to_json(),
            "g": self.g.to_json(),
        }


def rank_one_complement_analysis(G: CoeffVec, N: int, depth: int | None = None,
                                 samples: int = 4, seed: int = 0,
                                 tol: float = 1e-8) -> ComplementAnalysis:
    """Analyze M = H^2 minus the line through a unit vector G.

    Produces the non-vanishing frame from projected reproducing columns, the
    adjoint data (G0, g) governing the coordinate space, and verifies the
    membership characterization <K0, z^n G0> + <k1, z^n g> = 0 on a sample
    of members.
    """
    _unit_norm_check(G, tol)
    if G.N != N:
        G = G.resized(N)
    m = G.m
    M = span_of([G]).perp()
    # projected reproducing columns and the closed form they must match
    projections = []
    formula_resid = 0.0
    g0_vals = eval_at_zero(G)
    for i in range(m):
        Fi = project(reproducing_column(m, N, i), M)
        closed = reproducing_column(m, N, i) - complex(np.conj(g0_vals[i])) * G
        formula_resid = max(formula_resid, (Fi - closed).norm())
        projections.append(Fi)
    # Gram-Schmidt in index order, dropping dependent columns in place
    W: list[CoeffVec] = []
    C = np.zeros((m, m), dtype=complex)
    for i, Fi in enumerate(projections):
        v = Fi.flatten()
        coeff = np.zeros(m, dtype=complex)
        for w_idx, w in enumerate(W):
            overlap = np.vdot(w.flatten(), v)
            v = v - w.flatten() * overlap
            coeff += overlap * C[w_idx]
        nrm = float(np.linalg.norm(v))
        if nrm > 1e-10:
            unit = np.zeros(m, dtype=complex)
            unit[i] = 1.0
            C[len(W)] = (unit - coeff) / nrm
            W.append(CoeffVec.from_flat(v / nrm, m, N))
    r = len(W)
    C = C[:r]
    frame = RepresentationFrame(M=M, W=tuple(W), E=(G,),
                                vanishing_case=not W,
                                value_map_cond=1.0)
    corr = _autocorrelation(G)
    # G0 row i = sum_t conj(C[i, t]) P(g_t - g_t(0) |G|^2)
    g0_rows = np.zeros((max(r, 1), N), dtype=complex)
    for i in range(r):
        for t in range(m):
            if C[i, t] == 0:
                continue
            term = G.coeffs[t].copy()
            term -= g0_vals[t] * _analytic_part_of_correlation(corr, 0, N)
            g0_rows[i] += np.conj(C[i, t]) * term
    G0 = CoeffVec(g0_rows[:max(r, 1)])
    g = CoeffVec(_analytic_part_of_correlation(corr, -1, N).reshape(1, N))
    # sample members and test the coordinate-space membership condition
    rng = np.random.default_rng(seed)
    members: list[CoeffVec] = list(W)
    for _ in range(samples):
        raw = np.zeros((m, N), dtype=complex)
        deg = max(2, min(N - 2, N // 2))
        raw[:, :deg] = rng.standard_normal((m, deg)) + 1j * rng.standard_normal((m, deg))
        cand = project(CoeffVec(raw), M)
        if cand.norm() > 1e-8:
            members.append(cand * (1.0 / cand.norm()))
    if depth is None:
        depth = default_depth(N)
    cond_resid = 0.0
    coords_list = []
    for F in members:
        coords = extract_coordinates(F, frame)
        coords_list.append(coords)
        K0 = coords.K0
        k1 = coords.k[0]
        for n in range(depth + 1):
            total = 0.0 + 0.0j
            if K0 is not None and r:
                total += _shifted_pairing(K0.coeffs, G0.coeffs, n)
            total += _shifted_pairing(k1.coeffs, g.coeffs, n)
            cond_resid = max(cond_resid, abs(total))
    return ComplementAnalysis(frame=frame, projections_F=tuple(projections),
                              gs_coefficients=C, G0=G0, g=g,
                              projection_formula_residual=formula_resid,
                              condition_residual_max=cond_resid,
                              samples=len(members), coords=coords_list)


@dataclass
class RankOneKernelReport:
    """Kernel dispatch for a rank-one bump of a structured symbol."""

    case: str
    criterion: complex
    kernel_dim: int
    kernel: Subspace
    expected_match_residual: float | None
    origin_case: str | None
    coordinate_residuals: dict
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "criterion": [self.criterion.real, self.criterion.imag],
            "kernel_dim": self.kernel_dim,
            "expected_match_residual": self.expected_match_residual,
            "origin_case": self.origin_case,
            "coordinate_residuals": self.coordinate_residuals,
            "details": {k: v for k, v in self.details.items()
                        if isinstance(v, (int, float, str, bool, list, type(None)))},
        }


def _one_dim_structure(kernel: Subspace, candidate: CoeffVec,
                       defect_candidates: list[CoeffVec],
                       defect_floor: float = 1e-8) -> tuple[str, dict]:
    """Coordinate-space shape of a one-dimensional kernel.

    With value nonzero at the origin the coordinates must be a constant K0
    and vanishing k; in the vanishing case a constant k1.  The defect frame
    stays in the analysis's natural (unprojected) form; the coordinate space
    is then exactly the constants, and the peeling terminates in one step.
    """
    value_mass = float(np.linalg.norm(eval_at_zero(candidate)))
    if value_mass > 1e-8 * max(candidate.norm(), 1e-300):
        origin = "value_nonzero"
        W: tuple[CoeffVec, ...] = (candidate * (1.0 / candidate.norm()),)
    else:
        origin = "value_zero"
        W = ()
    E = tuple(orthonormalize_family([v for v in defect_candidates
                                     if v.norm() > defect_floor]))
    frame = RepresentationFrame(M=kernel, W=W, E=E, vanishing_case=not W,
                                value_map_cond=1.0)
    resid: dict = {"vanishing_case_mismatch": float((kernel.dim > 0)
                                                    and frame.vanishing_case
                                                    and origin == "value_nonzero")}
    member = kernel.basis_vectors()[0]
    coords = extract_coordinates(member, frame)
    resid["reconstruction"] = coords.reconstruction_residual
    resid["isometry_gap"] = coords.isometry_gap
    if origin == "value_nonzero":
        k0 = coords.K0
        resid["K0_shift_mass"] = backward_shift(k0).norm() if k0 is not None else 0.0
        resid["k_mass"] = float(np.sqrt(sum(kj.norm_sq() for kj in coords.k)))
    else:
        if coords.k:
            resid["k1_shift_mass"] = backward_shift(coords.k[0]).norm()
    return origin, resid


def rank_one_inner_kernel(theta: LaurentMatrixSymbol, G: CoeffVec, H: CoeffVec,
                          N: int, tol: float = 1e-8,
                          tol_crit: float = 1e-8) -> RankOneKernelReport:
    """Kernel of T_theta + <., G> H for an inner analytic symbol.

    The criterion 1 + <T_{theta*} H, G> decides between a trivial kernel and
    the line through T_{theta*} H; a nontrivial kernel also requires H to lie
    in the shifted range of theta.
    """
    chk = is_inner(theta, tol=tol)
    if not chk.ok:
        raise NotInnerError(f"symbol deviates from inner by {chk.max_deviation:.3e}")
    _unit_norm_check(G, tol)
    if backward_shift(H).norm() < tol:
        raise ValueError("H must have a nonzero backward shift")
    adj = build_toeplitz(symbol_adjoint(theta), N)
    candidate = adj.apply(H)
    criterion = 1.0 + inner_product(candidate, G)
    ms = build_model_space(theta, N, tol_inner=max(tol, chk.max_deviation * 4))
    h_in_range = decompose_against_theta(H, ms).in_range
    T = build_perturbed(theta, N, [G], [H], require_orthonormal=False)
    kr = kernel_of(T)
    kernel = kr.subspace
    details = {"kernel_residual_max": kr.residual_max,
               "h_in_shifted_range": h_in_range,
               "inner_deviation": chk.max_deviation}
    if abs(criterion) > tol_crit and kernel.dim == 0:
        return RankOneKernelReport(case="trivial_kernel", criterion=criterion,
                                   kernel_dim=0, kernel=kernel,
                                   expected_match_residual=None, origin_case=None,
                                   coordinate_residuals={}, details=details)
    if abs(criterion) <= tol_crit and (h_in_range is None or h_in_range):
        expected = span_of([candidate])
        _, resid = subspace_equal(kernel, expected)
        defect_cands = [backward_shift(candidate)]
        origin, cres = _one_dim_structure(kernel, candidate, defect_cands)
        return RankOneKernelReport(case="spanned_kernel", criterion=criterion,
                                   kernel_dim=kernel.dim, kernel=kernel,
                                   expected_match_residual=resid, origin_case=origin,
                                   coordinate_residuals=cres, details=details)
    return RankOneKernelReport(case="unexpected", criterion=criterion,
                               kernel_dim=kernel.dim, kernel=kernel,
                               expected_match_residual=None, origin_case=None,
                               coordinate_residuals={}, details=details)


def rank_one_invertible_kernel(F1: LaurentMatrixSymbol, F2: LaurentMatrixSymbol,
                               G: CoeffVec, H: CoeffVec, N: int,
                               tol: float = 1e-8, tol_crit: float = 1e-8,
                               margin: float = 1e-6) -> RankOneKernelReport:
    """Kernel of T_{F1* F2} + <., G> H for invertible analytic factors.

    The candidate vector F2^{-1} T_{F1*^{-1}} H is assembled two ways (matrix
    application and direct coefficient convolution) and the orders are
    cross-checked before the criterion dispatch.
    """
    for name, F in (("F1", F1), ("F2", F2)):
        if not is_invertible_analytic(F, margin=margin):
            raise ValueError(f"factor {name} is not invertible on the disk")
    _unit_norm_check(G, tol)
    inv1 = invert_analytic(F1, N - 1)
    inv2 = invert_analytic(F2, N - 1)
    intermediate = symbol_adjoint(inv1).act(H).analytic_part().resized(N)
    # route one: block Toeplitz application of the inverted factor
    candidate = build_toeplitz(inv2, N).apply(intermediate)
    # route two: direct Cauchy-product of the coefficient sequences
    conv = np.zeros((H.m, N), dtype=complex)
    for n in range(N):
        acc = np.zeros(H.m, dtype=complex)
        for kk in range(n + 1):
            acc += inv2.fourier(kk) @ intermediate.coeffs[:, n - kk]
        conv[:, n] = acc
    convolution_gap = float(np.linalg.norm(candidate.coeffs - conv))
    # shift identity: z S*(A) = A - A(0)
    fwd = np.zeros_like(intermediate.coeffs)
    fwd[:, 1:] = backward_shift(intermediate).coeffs[:, :-1]
    shift_gap = float(np.linalg.norm(
        fwd - (intermediate.coeffs - np.concatenate(
            [eval_at_zero(intermediate)[:, None],
             np.zeros((H.m, N - 1), dtype=complex)], axis=1))))
    criterion = 1.0 + inner_product(candidate, G)
    phi = symbol_adjoint(F1).multiply(F2)
    T = build_perturbed(phi, N, [G], [H], require_orthonormal=False)
    kr = kernel_of(T)
    kernel = kr.subspace
    details = {"kernel_residual_max": kr.residual_max,
               "convolution_gap": convolution_gap,
               "shift_identity_gap": shift_gap}
    if abs(criterion) > tol_crit:
        return RankOneKernelReport(
            case="trivial_kernel", criterion=criterion, kernel_dim=kernel.dim,
            kernel=kernel, expected_match_residual=None, origin_case=None,
            coordinate_residuals={}, details=details)
    expected = span_of([candidate])
    _, resid = subspace_equal(kernel, expected)
    defect_cands = [inv2.act(backward_shift(intermediate)).analytic_part().resized(N)]
    origin, cres = _one_dim_structure(kernel, candidate, defect_cands)
    return RankOneKernelReport(case="spanned_kernel", criterion=criterion,
                               kernel_dim=kernel.dim, kernel=kernel,
                               expected_match_residual=resid, origin_case=origin,
                               coordinate_residuals=cres, details=details)


@dataclass
class ThetaStarReport:
    """Four-way dispatch for the adjoint-of-inner rank-one kernel."""

    case: str
    in_range: bool
    criterion: complex
    kernel_dim: int
    kernel: Subspace
    predicted_dim: int
    equality_residual: float
    projection_formula_residual: float
    membership_residuals: dict
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "in_range": self.in_range,
            "criterion": [self.criterion.real, self.criterion.imag],
            "kernel_dim": self.kernel_dim,
            "predicted_dim": self.predicted_dim,
            "equality_residual": self.equality_residual,
            "projection_formula_residual": self.projection_formula_residual,
            "membership_residuals": self.membership_residuals,
            "details": {k: v for k, v in self.details.items()
                        if isinstance(v, (int, float, str, bool, list, type(None)))},
        }


def _span_with(ms_basis: Subspace, extra: list[CoeffVec]) -> Subspace:
    vectors = ms_basis.basis_vectors() + extra
    return span_of(vectors)


def _subtract_line(space: Subspace, vector: CoeffVec) -> Subspace:
    """space minus the line through vector (which must lie inside space)."""
    return ortho_complement_within(space, span_of([vector]))


def rank_one_theta_star_analysis(theta: LaurentMatrixSymbol, G: CoeffVec,
                                 H: CoeffVec, N: int,
                                 tol: float = 1e-8, tol_crit: float = 1e-8,
                                 depth: int | None = None,
                                 tol_equality: float = 1e-6) -> ThetaStarReport:
    """Kernel of T_{theta*} + <., G> H against its predicted structure.

    G splits into a model-space part and a shifted-range part; the criterion
    1 + <theta H, range part> picks one of four kernel shapes, each verified
    against the SVD kernel by subspace equality.  G need not be normalized:
    the critical branches are unreachable for unit G by Cauchy-Schwarz.
    """
    chk = is_inner(theta, tol=tol)
    if not chk.ok:
        raise NotInnerError(f"symbol deviates from inner by {chk.max_deviation:.3e}")
    if backward_shift(H).norm() < tol:
        raise ValueError("H must have a nonzero backward shift")
    if G.norm() < tol:
        raise ValueError("G must be nonzero")
    ms = build_model_space(theta, N, tol_inner=tol)
    split = decompose_against_theta(G, ms)
    theta_h = theta.act(H).analytic_part().resized(N)
    ambient_sum = _span_with(ms.as_subspace, [theta_h])
    T = build_perturbed(symbol_adjoint(theta), N, [G], [H], require_orthonormal=False)
    kr = kernel_of(T)
    kernel = kr.subspace
    correction_line: CoeffVec | None = None
    if split.in_range:
        criterion = 1.0 + inner_product(theta_h, G)
        if abs(criterion) <= tol_crit:
            case = "in_range_critical"
            predicted = ambient_sum
        else:
            case = "in_range_noncritical"
            predicted = ms.as_subspace
    else:
        criterion = 1.0 + inner_product(theta_h, split.range_part)
        if abs(criterion) <= tol_crit:
            case = "outside_range_critical"
            correction_line = split.model_part
        else:
            case = "outside_range_noncritical"
            correction_line = (split.model_part
                               + (np.conj(criterion) / H.norm_sq()) * theta_h)
        predicted = _subtract_line(ambient_sum, correction_line)
    _, eq_resid = subspace_equal(kernel, predicted)
    # projection of reproducing columns: closed form vs numerical projection
    theta0 = theta.fourier(0)
    proj_resid = 0.0
    for i in range(theta.m):
        col = reproducing_column(theta.m, N, i)
        vec = np.conj(theta0[i, :])
        correction = theta.act(CoeffVec(vec.reshape(theta.m, 1))).analytic_part().resized(N)
        formula = col - correction
        if case != "in_range_noncritical":
            formula = formula + (inner_product(col, theta_h) / theta_h.norm_sq()) * theta_h
        if correction_line is not None and correction_line.norm() > 1e-14:
            formula = formula - (inner_product(col, correction_line)
                                 / correction_line.norm_sq()) * correction_line
        proj_resid = max(proj_resid, (project(col, kernel) - formula).norm())
    # coordinate-space membership residuals on kernel members
    if depth is None:
        depth = default_depth(N)
    membership: dict = {"ambient_sum": 0.0, "correction_orthogonality": 0.0,
                        "range_component": 0.0}
    defect_cands = [theta.act(backward_shift(H)).analytic_part().resized(N)]
    if not split.in_range:
        defect_cands.append(split.model_part)
    reduced = []
    for v in defect_cands:
        w = v.flatten() - kernel.project_flat(v.flatten())
        if np.linalg.norm(w) > 1e-8:
            reduced.append(CoeffVec.from_flat(w, kernel.m, kernel.N))
    defect = span_of(reduced, floor=1e-8) if reduced else zero_space(kernel.m, kernel.N)
    frame = build_frame(kernel, defect)
    sample = kernel.basis_vectors()[:min(kernel.dim, 6)]
    for F in sample:
        coords = extract_coordinates(F, frame)
        for n in range(depth + 1):
            shifted = coords.shifted(n)
            v = reassemble(frame, shifted.K0, shifted.k)
            flat = v.flatten()
            membership["ambient_sum"] = max(
                membership["ambient_sum"],
                float(np.linalg.norm(flat - ambient_sum.project_flat(flat))))
            if correction_line is not None and correction_line.norm() > 1e-14:
                membership["correction_orthogonality"] = max(
                    membership["correction_orthogonality"],
                    abs(inner_product(v, correction_line)) / correction_line.norm())
            if case == "in_range_noncritical":
                membership["range_component"] = max(
                    membership["range_component"],
                    abs(inner_product(v, theta_h)) / theta_h.norm())
    return ThetaStarReport(
        case=case, in_range=split.in_range, criterion=criterion,
        kernel_dim=kernel.dim, kernel=kernel, predicted_dim=predicted.dim,
        equality_residual=eq_resid, projection_formula_residual=proj_resid,
        membership_residuals=membership,
        details={"kernel_residual_max": kr.residual_max,
                 "model_dim": ms.as_subspace.dim,
                 "model_mass_of_G": split.model_mass,
                 "equality_tolerance": tol_equality,
                 "equality_ok": eq_resid <= tol_equality})
