"""Numerical subspace lattice over truncated coefficient space.

Subspaces carry an orthonormal basis of the flattened (degree-major) ambient
C^{mN} together with the sigma gap observed at the rank cut that produced
them.  Rank decisions are auditable: every report records the boundary
singular values on both sides of the cut; a ratio near 1 means the decision
was not clean and downstream checks should flag themselves inconclusive
rather than pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import rank_threshold
from .errors import ContainmentError, DimensionMismatch
from .hardy_core import CoeffVec, backward_shift


@dataclass(frozen=True)
class SigmaGap:
    """Boundary singular values at a rank cut.

    ``zero_side`` is the largest singular value treated as zero (None when
    nothing was classified as zero), ``signal_side`` the smallest one treated
    as genuine (None when everything was zero).  ``ratio`` is small for clean
    cuts and close to 1 for ambiguous ones.
    """

    zero_side: float | None
    signal_side: float | None

    @property
    def ratio(self) -> float:
        if self.zero_side is None:
            return 0.0
        if self.signal_side is None or self.signal_side == 0.0:
            return float("inf") if self.zero_side > 0 else 0.0
        return self.zero_side / self.signal_side

    def to_pair(self) -> list:
        return [self.zero_side, self.signal_side]


class Subspace:
    """Orthonormal-basis subspace of the (m, N) coefficient ambient."""

    __slots__ = ("_m", "_N", "_basis", "_tol", "_sigma_gap")

    def __init__(self, m: int, N: int, basis: np.ndarray, tol: float,
                 sigma_gap: SigmaGap | None = None):
        basis = np.asarray(basis, dtype=complex)
        if basis.ndim != 2 or basis.shape[0] != m * N:
            raise DimensionMismatch(
                f"basis shape {basis.shape} does not match ambient {m}*{N}")
        if basis.shape[1] > m * N:
            raise DimensionMismatch("more basis vectors than ambient dimensions")
        if basis.shape[1]:
            gram = basis.conj().T @ basis
            if np.max(np.abs(gram - np.eye(basis.shape[1]))) > 1e-12:
                raise ValueError("basis columns are not orthonormal within 1e-12")
        basis = basis.copy()
        basis.setflags(write=False)
        self._m, self._N = int(m), int(N)
        self._basis = basis
        self._tol = float(tol)
        self._sigma_gap = sigma_gap if sigma_gap is not None else SigmaGap(None, None)

    @property
    def m(self) -> int:
        return self._m

    @property
    def N(self) -> int:
        return self._N

    @property
    def dim(self) -> int:
        return self._basis.shape[1]

    @property
    def basis(self) -> np.ndarray:
        return self._basis

    @property
    def tol(self) -> float:
        return self._tol

    @property
    def sigma_gap(self) -> SigmaGap:
        return self._sigma_gap

    def basis_vectors(self) -> list[CoeffVec]:
        return [CoeffVec.from_flat(self._basis[:, i], self._m, self._N)
                for i in range(self.dim)]

    def project_flat(self, v: np.ndarray) -> np.ndarray:
        if self.dim == 0:
            return np.zeros_like(np.asarray(v, dtype=complex))
        return self._basis @ (self._basis.conj().T @ v)

    def residual_flat(self, v: np.ndarray) -> float:
        return float(np.linalg.norm(np.asarray(v, dtype=complex) - self.project_flat(v)))

    def contains_vector(self, F: CoeffVec, tol: float) -> bool:
        return self.residual_flat(F.flatten()) <= tol * max(F.norm(), 1e-300)

    def perp(self) -> "Subspace":
        """Orthogonal complement within the full ambient."""
        mN = self._m * self._N
        if self.dim == 0:
            return Subspace(self._m, self._N, np.eye(mN, dtype=complex), self._tol)
        proj = np.eye(mN, dtype=complex) - self._basis @ self._basis.conj().T
        u, s, _ = np.linalg.svd(proj)
        r = int(np.sum(s > 0.5))  # projector spectrum is 0/1
        return Subspace(self._m, self._N, u[:, :r], self._tol)

    def report_json(self, include_basis: bool = True) -> dict:
        out = {"dim": self.dim, "sigma_gap": self._sigma_gap.to_pair()}
        if include_basis:
            out["basis"] = [v.to_json() for v in self.basis_vectors()]
        return out

    def __repr__(self) -> str:
        return f"Subspace(m={self._m}, N={self._N}, dim={self.dim})"


def full_space(m: int, N: int, tol: float = 0.0) -> Subspace:
    return Subspace(m, N, np.eye(m * N, dtype=complex), tol)


def zero_space(m: int, N: int, tol: float = 0.0) -> Subspace:
    return Subspace(m, N, np.zeros((m * N, 0), dtype=complex), tol)


def vanishing_at_zero_space(m: int, N: int) -> Subspace:
    """All vectors with value 0 at the origin (degrees >= 1)."""
    basis = np.zeros((m * N, m * (N - 1)), dtype=complex)
    for j in range(1, N):
        for i in range(m):
            basis[j * m + i, (j - 1) * m + i] = 1.0
    return Subspace(m, N, basis, 0.0)


def nullspace(A: np.ndarray, shape: tuple[int, int],
              tol_rel: float | None = None) -> Subspace:
    """Numerical kernel of A acting on the flattened (m, N) ambient.

    Right singular vectors whose singular value falls at or below the rank
    threshold form the basis.  For the zero matrix every direction counts.
    """
    m, N = shape
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[1] != m * N:
        raise DimensionMismatch(f"matrix shape {A.shape} vs ambient {m}*{N}")
    if not np.all(np.isfinite(A.real)) or not np.all(np.isfinite(A.imag)):
        raise ValueError("matrix must be finite")
    if np.max(np.abs(A)) == 0.0:
        return Subspace(m, N, np.eye(m * N, dtype=complex), 0.0,
                        SigmaGap(0.0, None))
    # full_matrices=True so exact-null directions of wide matrices survive
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    s = np.concatenate([s, np.zeros(m * N - s.size)])
    thresh = rank_threshold(A.shape, float(s[0]), tol_rel)
    rank = int(np.sum(s > thresh))
    basis = vh.conj().T[:, rank:] if rank < vh.shape[0] else np.zeros((m * N, 0), complex)
    gap = SigmaGap(zero_side=float(s[rank]) if rank < len(s) else None,
                   signal_side=float(s[rank - 1]) if rank > 0 else None)
    return Subspace(m, N, basis, thresh, gap)


def span_of(vectors: list[CoeffVec], tol_rel: float | None = None,
            floor: float = 0.0) -> Subspace:
    """Orthonormal basis of the numerical column span.

    ``floor`` is an absolute singular-value cutoff on top of the relative
    policy; it keeps all-noise inputs (for instance residuals of an exactly
    invariant subspace) from being promoted to genuine directions.
    """
    if not vectors:
        raise DimensionMismatch("span_of needs at least one vector")
    m, N = vectors[0].m, vectors[0].N
    for v in vectors:
        if v.shape != (m, N):
            raise DimensionMismatch("span_of vectors must share (m, N)")
    stack = np.stack([v.flatten() for v in vectors], axis=1)
    if np.max(np.abs(stack)) == 0.0:
        return Subspace(m, N, np.zeros((m * N, 0), complex), floor, SigmaGap(0.0, None))
    u, s, _ = np.linalg.svd(stack, full_matrices=False)
    thresh = max(rank_threshold(stack.shape, float(s[0]), tol_rel), floor)
    rank = int(np.sum(s > thresh))
    gap = SigmaGap(zero_side=float(s[rank]) if rank < len(s) else None,
                   signal_side=float(s[rank - 1]) if rank > 0 else None)
    return Subspace(m, N, u[:, :rank], thresh, gap)


def project(F: CoeffVec, M: Subspace) -> CoeffVec:
    if F.shape != (M.m, M.N):
        raise DimensionMismatch(f"vector shape {F.shape} vs ambient ({M.m}, {M.N})")
    return CoeffVec.from_flat(M.project_flat(F.flatten()), M.m, M.N)


def is_contained(A: Subspace, B: Subspace, tol_angle: float = 1e-8):
    """Whether every direction of A lies in B; returns (verdict, max residual)."""
    _check_same_ambient(A, B)
    if A.dim == 0:
        return True, 0.0
    resid = 0.0
    for i in range(A.dim):
        resid = max(resid, B.residual_flat(A.basis[:, i]))
    return resid <= tol_angle, float(resid)


def subspace_equal(A: Subspace, B: Subspace, tol: float = 1e-8):
    """Mutual containment; returns (verdict, max residual both ways)."""
    ok_ab, r_ab = is_contained(A, B, tol)
    ok_ba, r_ba = is_contained(B, A, tol)
    return ok_ab and ok_ba, max(r_ab, r_ba)


def intersect(M: Subspace, L: Subspace, tol_int: float = 1e-8) -> Subspace:
    """Intersection via principal angles: SVD of basis cross-Gram.

    Directions with cos(angle) >= 1 - tol_int count as common.  This is far
    better conditioned than stacking nullspaces.
    """
    _check_same_ambient(M, L)
    if M.dim == 0 or L.dim == 0:
        return zero_space(M.m, M.N)
    u, s, _ = np.linalg.svd(M.basis.conj().T @ L.basis)
    s = np.clip(s, 0.0, 1.0)
    keep = s >= 1.0 - tol_int
    r = int(np.sum(keep))
    if r == 0:
        gap = SigmaGap(zero_side=float(s[0]) if s.size else None, signal_side=None)
        return Subspace(M.m, M.N, np.zeros((M.m * M.N, 0), complex), tol_int, gap)
    cols = M.basis @ u[:, :r]
    q, _ = np.linalg.qr(cols)
    gap = SigmaGap(zero_side=float(s[r]) if r < s.size else None,
                   signal_side=float(s[r - 1]))
    return Subspace(M.m, M.N, q, tol_int, gap)


def ortho_complement_within(M: Subspace, A: Subspace,
                            tol_contain: float = 1e-8) -> Subspace:
    """M minus A, requiring A to sit inside M."""
    _check_same_ambient(M, A)
    ok, resid = is_contained(A, M, tol_contain)
    if not ok:
        raise ContainmentError(
            f"complement requested for a non-subspace (residual {resid:.3e})")
    if A.dim == 0:
        return M
    reduced = M.basis - A.basis @ (A.basis.conj().T @ M.basis)
    u, s, _ = np.linalg.svd(reduced, full_matrices=False)
    target = M.dim - A.dim
    r = int(np.sum(s > 0.5))  # projections of an orthonormal basis: sigma near 1 or 0
    if r != target:
        raise ContainmentError(
            f"complement dimension {r} != dim M - dim A = {target}; cut is ambiguous")
    gap = SigmaGap(zero_side=float(s[r]) if r < s.size else None,
                   signal_side=float(s[r - 1]) if r > 0 else None)
    return Subspace(M.m, M.N, u[:, :r], M.tol, gap)


def zero_at_origin_slice(M: Subspace) -> Subspace:
    """Members of M vanishing at the origin.

    Computed as the nullspace of the m x dim matrix of degree-0 coefficients
    of M's basis, mapped back through the basis, which keeps the result an
    exact subspace of M.
    """
    if M.dim == 0:
        return M
    values = M.basis[:M.m, :]  # degree-0 block rows
    if np.max(np.abs(values)) == 0.0:
        return M
    _, s, vh = np.linalg.svd(values, full_matrices=True)
    s = np.concatenate([s, np.zeros(max(M.dim - s.size, 0))])
    # the basis columns are unit vectors, so the value matrix is bounded by
    # one; an absolute floor keeps all-noise value rows from faking rank
    thresh = max(rank_threshold(values.shape, float(s[0]), None), 1e-12)
    rank = int(np.sum(s > thresh))
    combos = vh.conj().T[:, rank:]
    basis = M.basis @ combos
    gap = SigmaGap(zero_side=float(s[rank]) if rank < len(s) else None,
                   signal_side=float(s[rank - 1]) if rank > 0 else None)
    return Subspace(M.m, M.N, basis, M.tol, gap)


def shift_invariance_residuals(M: Subspace) -> list[float]:
    """Diagnostic: escape mass of backward-shifted slice members."""
    out = []
    for F in zero_at_origin_slice(M).basis_vectors():
        out.append(M.residual_flat(backward_shift(F).flatten()))
    return out


def _check_same_ambient(A: Subspace, B: Subspace) -> None:
    if (A.m, A.N) != (B.m, B.N):
        raise DimensionMismatch(
            f"ambient mismatch: ({A.m}, {A.N}) vs ({B.m}, {B.N})")
