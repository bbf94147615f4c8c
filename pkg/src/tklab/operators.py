"""Finite compressions of multiplication operators and their rank-n bumps.

The compression of a symbol Phi to degrees [0, N) is the block Toeplitz
matrix with block (j, t) = Phi_{j-t}.  Identities that survive truncation do
so only on the interior window [0, N - bandwidth); everything here records
that window so callers can restrict their assertions to it.

For kernel work the square compression is the wrong object when the symbol
has positive powers: top-degree monomials get flushed past the window and
masquerade as kernel vectors.  The rectangular `action_matrix` keeps those
overflow rows, so its nullspace consists of genuine polynomial kernel
elements only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, OrthonormalityError
from .hardy_core import CoeffVec, inner_product
from .symbols import LaurentMatrixSymbol, symbol_multiply


def _block_toeplitz(symbol: LaurentMatrixSymbol, rows: int, cols: int) -> np.ndarray:
    m = symbol.m
    out = np.zeros((rows * m, cols * m), dtype=complex)
    for k in symbol.powers():
        mat = symbol.fourier(k)
        for t in range(cols):
            j = t + k
            if 0 <= j < rows:
                out[j * m:(j + 1) * m, t * m:(t + 1) * m] = mat
    return out


class ToeplitzCompression:
    """Compression of multiplication-then-project by a symbol to degrees [0, N)."""

    __slots__ = ("_symbol", "_N", "_matrix")

    def __init__(self, symbol: LaurentMatrixSymbol, N: int):
        if N <= symbol.d:
            raise DimensionMismatch(
                f"truncation N={N} must exceed the symbol bandwidth d={symbol.d}")
        self._symbol = symbol
        self._N = int(N)
        mat = _block_toeplitz(symbol, N, N)
        mat.setflags(write=False)
        self._matrix = mat

    @property
    def symbol(self) -> LaurentMatrixSymbol:
        return self._symbol

    @property
    def m(self) -> int:
        return self._symbol.m

    @property
    def N(self) -> int:
        return self._N

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def interior(self) -> int:
        """Degrees [0, interior) agree with the untruncated operator."""
        return self._N - self._symbol.d

    def apply(self, F: CoeffVec) -> CoeffVec:
        if F.shape != (self.m, self._N):
            raise DimensionMismatch(f"operand shape {F.shape} != ({self.m}, {self._N})")
        return CoeffVec.from_flat(self._matrix @ F.flatten(), self.m, self._N)

    def action_matrix(self) -> np.ndarray:
        """Exact polynomial action: rows extended to degrees [0, N + d_pos).

        On polynomial inputs of degree < N this matrix computes every
        coefficient of the true image, so its nullspace has no truncation
        artifacts.
        """
        return _block_toeplitz(self._symbol, self._N + self._symbol.d_pos, self._N)

    def __repr__(self) -> str:
        return f"ToeplitzCompression(m={self.m}, N={self._N}, d={self._symbol.d})"


def build_toeplitz(phi: LaurentMatrixSymbol, N: int) -> ToeplitzCompression:
    return ToeplitzCompression(phi, N)


def gram_deviation(vectors: list[CoeffVec]) -> float:
    """Max |<v_i, v_j> - delta_ij| over a family."""
    n = len(vectors)
    if n == 0:
        return 0.0
    g = np.array([[inner_product(vectors[i], vectors[j]) for j in range(n)]
                  for i in range(n)])
    return float(np.max(np.abs(g - np.eye(n))))


def orthonormalize_family(vectors: list[CoeffVec], drop_tol: float = 1e-12) -> list[CoeffVec]:
    """Explicit Gram-Schmidt; callers opt in, nothing repairs families silently."""
    out: list[CoeffVec] = []
    for v in vectors:
        w = v.flatten()
        for u in out:
            w = w - u.flatten() * np.vdot(u.flatten(), w)
        nrm = np.linalg.norm(w)
        if nrm > drop_tol:
            out.append(CoeffVec.from_flat(w / nrm, v.m, v.N))
    return out


class PerturbedToeplitz:
    """T = compression(Phi) + sum_i <., G_i> H_i as a dense matrix plus data."""

    __slots__ = ("_base", "_G", "_H", "_matrix")

    def __init__(self, base: ToeplitzCompression, G: list[CoeffVec], H: list[CoeffVec],
                 tol_ortho: float = 1e-8, require_orthonormal: bool = True):
        if len(G) != len(H):
            raise DimensionMismatch(f"families differ in length: {len(G)} vs {len(H)}")
        for v in list(G) + list(H):
            if v.shape != (base.m, base.N):
                raise DimensionMismatch(
                    f"family member shape {v.shape} != ({base.m}, {base.N})")
        if require_orthonormal:
            for name, fam in (("G", G), ("H", H)):
                dev = gram_deviation(list(fam))
                if dev > tol_ortho:
                    raise OrthonormalityError(
                        f"family {name} deviates from orthonormality by {dev:.3e} "
                        f"(tolerance {tol_ortho:g})")
        self._base = base
        self._G = tuple(G)
        self._H = tuple(H)
        mat = base.matrix.copy()
        for g, h in zip(G, H):
            mat += np.outer(h.flatten(), np.conj(g.flatten()))
        mat.setflags(write=False)
        self._matrix = mat
        self._verify_functional_form()

    def _verify_functional_form(self) -> None:
        # matrix and functional forms must agree on a probe; a fixed seed
        # keeps construction deterministic
        rng = np.random.default_rng(0)
        probe = CoeffVec((rng.standard_normal((self.m, self.N))
                          + 1j * rng.standard_normal((self.m, self.N))))
        direct = self.apply(probe).flatten()
        via_matrix = self._matrix @ probe.flatten()
        scale = max(1.0, float(np.linalg.norm(via_matrix)))
        if np.linalg.norm(direct - via_matrix) > 1e-10 * scale:
            raise AssertionError("matrix and functional forms disagree")

    @property
    def base(self) -> ToeplitzCompression:
        return self._base

    @property
    def m(self) -> int:
        return self._base.m

    @property
    def N(self) -> int:
        return self._base.N

    @property
    def rank(self) -> int:
        return len(self._G)

    @property
    def G(self) -> tuple[CoeffVec, ...]:
        return self._G

    @property
    def H(self) -> tuple[CoeffVec, ...]:
        return self._H

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def apply(self, F: CoeffVec) -> CoeffVec:
        out = self._base.apply(F)
        for g, h in zip(self._G, self._H):
            out = out + inner_product(F, g) * h
        return out

    def action_matrix(self) -> np.ndarray:
        """Exact polynomial action with perturbation rows embedded."""
        base = self._base.action_matrix()
        rows = base.shape[0]
        mat = base.copy()
        for g, h in zip(self._G, self._H):
            h_flat = np.zeros(rows, dtype=complex)
            h_flat[:h.flatten().size] = h.flatten()
            mat += np.outer(h_flat, np.conj(g.flatten()))
        return mat

    def __repr__(self) -> str:
        return (f"PerturbedToeplitz(m={self.m}, N={self.N}, rank={self.rank}, "
                f"d={self._base.symbol.d})")


def build_perturbed(phi: LaurentMatrixSymbol, N: int, G: list[CoeffVec],
                    H: list[CoeffVec], tol_ortho: float = 1e-8,
                    require_orthonormal: bool = True) -> PerturbedToeplitz:
    return PerturbedToeplitz(build_toeplitz(phi, N), G, H,
                             tol_ortho=tol_ortho,
                             require_orthonormal=require_orthonormal)


@dataclass(frozen=True)
class BrownHalmosReport:
    deviation: float
    hypothesis_met: bool
    window: int
    product_is_zero: bool
    product_symbol_is_zero: bool

    def to_json(self) -> dict:
        return {
            "deviation": self.deviation,
            "hypothesis_met": self.hypothesis_met,
            "window": self.window,
            "product_is_zero": self.product_is_zero,
            "product_symbol_is_zero": self.product_symbol_is_zero,
        }


def brown_halmos_check(psi: LaurentMatrixSymbol, phi: LaurentMatrixSymbol,
                       N: int) -> BrownHalmosReport:
    """Compare compression(Psi) compression(Phi) with compression(Psi Phi).

    The two agree on the interior window whenever Psi* or Phi is analytic.
    The check still runs when neither is, flagged as hypothesis unmet, which
    is how product-is-still-Toeplitz counterexamples get reported.
    """
    if psi.m != phi.m:
        raise DimensionMismatch(f"size mismatch: {psi.m} vs {phi.m}")
    if N <= psi.d + phi.d:
        raise DimensionMismatch(
            f"N={N} must exceed the combined bandwidth {psi.d + phi.d}")
    hypothesis = psi.adjoint().is_analytic() or phi.is_analytic()
    cp, cf = build_toeplitz(psi, N), build_toeplitz(phi, N)
    prod_sym = symbol_multiply(psi, phi)
    product = cp.matrix @ cf.matrix
    diff = product - _block_toeplitz(prod_sym, N, N)
    w = N - psi.d - phi.d
    m = psi.m
    window = diff[:w * m, :w * m]
    deviation = float(np.max(np.abs(window))) if window.size else 0.0
    return BrownHalmosReport(
        deviation=deviation,
        hypothesis_met=hypothesis,
        window=w,
        product_is_zero=bool(np.max(np.abs(product)) < 1e-12),
        product_symbol_is_zero=prod_sym.is_zero(),
    )
