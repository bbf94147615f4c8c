"""Matrix trigonometric-polynomial symbols and scalar inner-outer splitting.

A symbol is a finite Fourier series Phi(z) = sum_k Phi_k z^k with matrix
coefficients, z on the unit circle.  Analytic symbols (k >= 0 only) act as
multipliers; general symbols act through the Riesz projection.  Scalar
polynomials factor into a Blaschke-monomial inner part and a zero-free outer
part via companion-matrix roots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CircleRootError, DimensionMismatch, NotInvertibleError
from .hardy_core import CoeffVec, LaurentVec


class LaurentMatrixSymbol:
    """Phi(z) = sum_{k in [-d, d]} Phi_k z^k with Phi_k in C^{m x m}.

    Coefficients are stored sparsely by Fourier index; exactly-zero matrices
    are dropped so that the bandwidth d reflects actual content.  Instances
    are immutable.
    """

    __slots__ = ("_m", "_terms")

    def __init__(self, m: int, terms):
        if m < 1:
            raise DimensionMismatch(f"matrix size must be positive, got {m}")
        self._m = int(m)
        cleaned: dict[int, np.ndarray] = {}
        for k, mat in dict(terms).items():
            arr = np.array(mat, dtype=complex)
            if arr.shape != (m, m):
                raise DimensionMismatch(
                    f"coefficient at power {k} has shape {arr.shape}, expected ({m}, {m})")
            if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
                raise ValueError(f"coefficient at power {k} is not finite")
            if np.any(arr != 0):
                arr.setflags(write=False)
                cleaned[int(k)] = arr
        self._terms = cleaned

    @property
    def m(self) -> int:
        return self._m

    @property
    def d(self) -> int:
        """Bandwidth: max |k| over nonzero Fourier coefficients."""
        return max((abs(k) for k in self._terms), default=0)

    @property
    def d_pos(self) -> int:
        return max((k for k in self._terms if k > 0), default=0)

    @property
    def d_neg(self) -> int:
        return max((-k for k in self._terms if k < 0), default=0)

    def powers(self) -> list[int]:
        return sorted(self._terms)

    def fourier(self, k: int) -> np.ndarray:
        mat = self._terms.get(int(k))
        if mat is None:
            return np.zeros((self._m, self._m), dtype=complex)
        return mat.copy()

    def is_zero(self) -> bool:
        return not self._terms

    def is_analytic(self) -> bool:
        return all(k >= 0 for k in self._terms)

    def is_coanalytic(self) -> bool:
        return all(k <= 0 for k in self._terms)

    def is_diagonal(self) -> bool:
        return all(np.all(mat == np.diag(np.diag(mat))) for mat in self._terms.values())

    # ---- constructors ----

    @classmethod
    def zero(cls, m: int) -> "LaurentMatrixSymbol":
        return cls(m, {})

    @classmethod
    def identity(cls, m: int) -> "LaurentMatrixSymbol":
        return cls(m, {0: np.eye(m)})

    @classmethod
    def shift(cls, m: int, power: int = 1) -> "LaurentMatrixSymbol":
        """z^power times the identity; power may be negative."""
        return cls(m, {power: np.eye(m)})

    @classmethod
    def diagonal(cls, entries) -> "LaurentMatrixSymbol":
        """Analytic diagonal symbol from per-entry Taylor coefficient arrays."""
        rows = [np.atleast_1d(np.asarray(e, dtype=complex)) for e in entries]
        m = len(rows)
        terms: dict[int, np.ndarray] = {}
        for i, row in enumerate(rows):
            for k, c in enumerate(row):
                if c != 0:
                    terms.setdefault(k, np.zeros((m, m), dtype=complex))[i, i] = c
        return cls(m, terms)

    @classmethod
    def constant(cls, mat) -> "LaurentMatrixSymbol":
        arr = np.asarray(mat, dtype=complex)
        return cls(arr.shape[0], {0: arr})

    # ---- algebra ----

    def multiply(self, other: "LaurentMatrixSymbol") -> "LaurentMatrixSymbol":
        """Pointwise product self(z) @ other(z); Fourier convolution."""
        if self._m != other._m:
            raise DimensionMismatch(f"size mismatch: {self._m} vs {other._m}")
        out: dict[int, np.ndarray] = {}
        for k1, a in self._terms.items():
            for k2, b in other._terms.items():
                k = k1 + k2
                acc = out.get(k)
                prod = a @ b
                out[k] = prod if acc is None else acc + prod
        return LaurentMatrixSymbol(self._m, out)

    def adjoint(self) -> "LaurentMatrixSymbol":
        """Pointwise conjugate transpose on the circle: (Phi*)_k = (Phi_{-k})^H."""
        return LaurentMatrixSymbol(
            self._m, {-k: mat.conj().T for k, mat in self._terms.items()})

    def scale(self, scalar: complex) -> "LaurentMatrixSymbol":
        return LaurentMatrixSymbol(
            self._m, {k: mat * scalar for k, mat in self._terms.items()})

    def __add__(self, other: "LaurentMatrixSymbol") -> "LaurentMatrixSymbol":
        if self._m != other._m:
            raise DimensionMismatch(f"size mismatch: {self._m} vs {other._m}")
        out = {k: mat.copy() for k, mat in self._terms.items()}
        for k, mat in other._terms.items():
            out[k] = out.get(k, 0) + mat
        return LaurentMatrixSymbol(self._m, out)

    def __sub__(self, other: "LaurentMatrixSymbol") -> "LaurentMatrixSymbol":
        return self + other.scale(-1.0)

    def equals(self, other: "LaurentMatrixSymbol") -> bool:
        """Exact coefficient equality."""
        if self._m != other._m or set(self._terms) != set(other._terms):
            return False
        return all(np.array_equal(self._terms[k], other._terms[k]) for k in self._terms)

    def coefficient_norm(self) -> float:
        return float(np.sqrt(sum(np.sum(np.abs(mat) ** 2) for mat in self._terms.values())))

    # ---- actions ----

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Stack of matrix values Phi(z) for each z in points, shape (len, m, m)."""
        pts = np.asarray(points, dtype=complex).ravel()
        out = np.zeros((pts.size, self._m, self._m), dtype=complex)
        for k, mat in self._terms.items():
            out += np.power(pts, k)[:, None, None] * mat[None, :, :]
        return out

    def act(self, F: CoeffVec) -> LaurentVec:
        """Exact Laurent product Phi * F of a symbol with a truncated element.

        The result window is wide enough to hold every product degree, so no
        mass is lost; callers project or truncate as appropriate.
        """
        if F.m != self._m:
            raise DimensionMismatch(f"component mismatch: {F.m} vs {self._m}")
        half = F.N + self.d
        out = np.zeros((self._m, 2 * half), dtype=complex)
        for k, mat in self._terms.items():
            block = mat @ F.coeffs  # (m, N) contributions at degrees k .. k+N-1
            out[:, half + k:half + k + F.N] += block
        return LaurentVec(out)

    def apply_truncated(self, F: CoeffVec) -> CoeffVec:
        """Riesz-project Phi * F and truncate back to F's window."""
        return self.act(F).analytic_part().resized(F.N)

    # ---- serialization ----

    def to_json(self) -> dict:
        return {
            "m": self._m,
            "terms": [
                {"power": k,
                 "matrix": [[[float(c.real), float(c.imag)] for c in row]
                            for row in self._terms[k]]}
                for k in self.powers()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LaurentMatrixSymbol":
        m = int(data["m"])
        terms = {}
        for item in data["terms"]:
            mat = np.array([[complex(re, im) for re, im in row] for row in item["matrix"]])
            terms[int(item["power"])] = terms.get(int(item["power"]), 0) + mat.reshape(m, m)
        return cls(m, terms)

    def __repr__(self) -> str:
        return f"LaurentMatrixSymbol(m={self._m}, powers={self.powers()})"


def symbol_multiply(A: LaurentMatrixSymbol, B: LaurentMatrixSymbol) -> LaurentMatrixSymbol:
    return A.multiply(B)


def symbol_adjoint(A: LaurentMatrixSymbol) -> LaurentMatrixSymbol:
    return A.adjoint()


def unit_circle_grid(grid_size: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(grid_size) / grid_size)


@dataclass(frozen=True)
class InnerCheck:
    ok: bool
    max_deviation: float
    grid_size: int
    tol: float


def is_inner(theta: LaurentMatrixSymbol, grid_size: int = 2048,
             tol: float = 1e-8) -> InnerCheck:
    """Grid test of unitarity a.e. on the circle.

    Samples ||Theta(z)^H Theta(z) - I||_2 on a uniform grid.  A trigonometric
    polynomial of bandwidth d is determined by 2d+1 samples, so the default
    grid vastly oversamples desk-scale symbols.
    """
    if grid_size < 4 * (2 * theta.d + 1):
        raise ValueError(
            f"grid_size {grid_size} too small for bandwidth {theta.d}; need >= {4 * (2 * theta.d + 1)}")
    vals = theta.evaluate(unit_circle_grid(grid_size))
    gram = np.einsum("gij,gik->gjk", vals.conj(), vals)
    gram -= np.eye(theta.m)[None, :, :]
    dev = float(np.max(np.linalg.norm(gram, ord=2, axis=(1, 2)))) if grid_size else 0.0
    return InnerCheck(ok=dev <= tol, max_deviation=dev, grid_size=grid_size, tol=tol)


def closed_disk_grid(radial: int = 8, angular: int = 64) -> np.ndarray:
    """Sample points of the closed unit disk, boundary included."""
    radii = np.linspace(0.0, 1.0, radial + 1)
    angles = unit_circle_grid(angular)
    pts = np.concatenate([[0.0 + 0.0j]] + [r * angles for r in radii[1:]])
    return pts


def is_invertible_analytic(A: LaurentMatrixSymbol, grid_size: int = 64,
                           margin: float = 1e-6) -> bool:
    """True when |det A(z)| stays above margin on a closed-disk sample grid."""
    if not A.is_analytic():
        raise ValueError("invertibility test is defined for analytic symbols only")
    pts = closed_disk_grid(angular=max(grid_size, 4 * (2 * A.d + 1)))
    dets = np.linalg.det(A.evaluate(pts))
    return bool(np.min(np.abs(dets)) >= margin)


def invert_analytic(A: LaurentMatrixSymbol, K: int) -> LaurentMatrixSymbol:
    """Degree-K Taylor truncation of A(z)^{-1} by coefficient recursion.

    B_0 = A_0^{-1}, B_j = -A_0^{-1} sum_{t=1..min(j,d)} A_t B_{j-t}.  The
    reconstruction A*B - I vanishes identically on degrees <= K, so the
    residual check below only detects roundoff.
    """
    if not A.is_analytic():
        raise ValueError("series inversion is defined for analytic symbols only")
    m, d = A.m, A.d
    A0 = A.fourier(0)
    if abs(np.linalg.det(A0)) < np.finfo(float).eps * max(1.0, np.linalg.norm(A0)) ** m:
        raise NotInvertibleError("constant coefficient is singular")
    A0_inv = np.linalg.inv(A0)
    B = [A0_inv]
    for j in range(1, K + 1):
        acc = np.zeros((m, m), dtype=complex)
        for t in range(1, min(j, d) + 1):
            acc += A.fourier(t) @ B[j - t]
        B.append(-A0_inv @ acc)
    inv = LaurentMatrixSymbol(m, {j: B[j] for j in range(K + 1)})
    resid = _inversion_residual(A, inv, K)
    if resid > 1e-10 * max(1.0, A.coefficient_norm()):
        raise NotInvertibleError(f"inversion residual {resid:.3e} exceeds tolerance")
    return inv


def _inversion_residual(A: LaurentMatrixSymbol, B: LaurentMatrixSymbol, K: int) -> float:
    prod = A.multiply(B)
    resid = 0.0
    for j in range(0, max(K - A.d, 0) + 1):
        target = np.eye(A.m) if j == 0 else 0.0
        resid = max(resid, float(np.max(np.abs(prod.fourier(j) - target))))
    return resid


# ---------------------------------------------------------------------------
# scalar inner-outer factorization
# ---------------------------------------------------------------------------


def blaschke_taylor(alpha: complex, degree: int) -> np.ndarray:
    """Taylor coefficients of |a|/a * (a - z)/(1 - conj(a) z) up to `degree`."""
    alpha = complex(alpha)
    if alpha == 0:
        raise ValueError("a zero at the origin belongs in the monomial factor")
    unim = abs(alpha) / alpha
    coeffs = np.zeros(degree + 1, dtype=complex)
    coeffs[0] = abs(alpha)
    tail = unim * (abs(alpha) ** 2 - 1.0)
    ac = np.conj(alpha)
    for j in range(1, degree + 1):
        coeffs[j] = tail * ac ** (j - 1)
    return coeffs


def _polymul_trunc(a: np.ndarray, b: np.ndarray, degree: int | None = None) -> np.ndarray:
    out = np.convolve(a, b)
    if degree is not None:
        out = out[:degree + 1]
    return out


@dataclass(frozen=True)
class ScalarInnerOuterFactorization:
    """p = inner * outer with inner = z^k * product of disk Blaschke factors.

    The Blaschke zeros are stored exactly; Taylor expansion happens on demand
    at whatever truncation the consumer works at.
    """

    zero_power: int
    disk_zeros: tuple
    unimodular_constant: complex
    outer_coeffs: np.ndarray = field(repr=False)

    def inner_taylor(self, degree: int) -> np.ndarray:
        coeffs = np.zeros(degree + 1, dtype=complex)
        if self.zero_power > degree:
            return coeffs
        series = np.array([self.unimodular_constant], dtype=complex)
        for a in self.disk_zeros:
            series = _polymul_trunc(series, blaschke_taylor(a, degree), degree)
        width = min(len(series), degree + 1 - self.zero_power)
        coeffs[self.zero_power:self.zero_power + width] = series[:width]
        return coeffs

    def inner_eval(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        vals = self.unimodular_constant * pts ** self.zero_power
        for a in self.disk_zeros:
            vals = vals * (abs(a) / a) * (a - pts) / (1.0 - np.conj(a) * pts)
        return vals

    def outer_eval(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        return np.polyval(self.outer_coeffs[::-1], pts)

    def reconstruction_residual(self, p: np.ndarray, grid_size: int = 512) -> float:
        grid = unit_circle_grid(grid_size)
        target = np.polyval(np.asarray(p, dtype=complex)[::-1], grid)
        got = self.inner_eval(grid) * self.outer_eval(grid)
        scale = max(float(np.max(np.abs(target))), 1e-300)
        return float(np.max(np.abs(got - target))) / scale

    def to_json(self) -> dict:
        return {
            "inner": {
                "zero_power": self.zero_power,
                "disk_zeros": [[float(a.real), float(a.imag)] for a in self.disk_zeros],
                "constant": [float(self.unimodular_constant.real),
                             float(self.unimodular_constant.imag)],
            },
            "outer": [[float(c.real), float(c.imag)] for c in self.outer_coeffs],
        }


def scalar_inner_outer(p, eps_circle: float = 1e-6,
                       tol_reconstruct: float = 1e-8) -> ScalarInnerOuterFactorization:
    """Split a scalar polynomial into Blaschke-monomial inner and outer parts.

    Roots come from the companion matrix (np.roots).  Roots inside the disk
    feed Blaschke factors, the origin multiplicity feeds the monomial, and
    everything else stays in the outer polynomial.  Roots within eps_circle
    of the unit circle make the split meaningless, so they are refused.
    """
    coeffs = np.atleast_1d(np.asarray(p, dtype=complex))
    if not np.any(coeffs != 0):
        raise ValueError("cannot factor the zero polynomial")
    # strip exact zero leading (low-order) coefficients into the monomial part
    k = 0
    while coeffs[k] == 0:
        k += 1
    core = coeffs[k:]
    # strip trailing zeros so np.roots sees the true degree
    top = len(core) - 1
    while top > 0 and core[top] == 0:
        top -= 1
    core = core[:top + 1]
    lead = core[-1]
    roots = np.roots(core[::-1]) if len(core) > 1 else np.array([], dtype=complex)
    radii = np.abs(roots)
    if np.any(np.abs(radii - 1.0) < eps_circle):
        worst = roots[np.argmin(np.abs(radii - 1.0))]
        raise CircleRootError(
            f"root {worst:.6g} lies within {eps_circle:g} of the unit circle")
    disk = tuple(roots[radii < 1.0])
    outside = roots[radii > 1.0]
    # p = z^k * lead * prod_in (z - a) * prod_out (z - b)
    #   = inner * [lead * prod_in (-a/|a|) (1 - conj(a) z)] * prod_out (z - b)
    outer = np.array([lead], dtype=complex)
    for a in disk:
        outer = outer * (-a / abs(a))
        outer = _polymul_trunc(outer, np.array([1.0, -np.conj(a)], dtype=complex))
    for b in outside:
        outer = _polymul_trunc(outer, np.array([-b, 1.0], dtype=complex))
    fact = ScalarInnerOuterFactorization(
        zero_power=k, disk_zeros=disk, unimodular_constant=1.0 + 0.0j,
        outer_coeffs=outer)
    resid = fact.reconstruction_residual(coeffs)
    if resid > tol_reconstruct:
        raise CircleRootError(
            f"factorization residual {resid:.3e} exceeds {tol_reconstruct:g}")
    return fact


def _diagonal_entries(phi: LaurentMatrixSymbol) -> list[np.ndarray]:
    if not phi.is_analytic():
        raise ValueError("inner-outer splitting expects an analytic symbol")
    if not phi.is_diagonal():
        raise ValueError("inner-outer splitting is implemented for diagonal symbols")
    entries = []
    for i in range(phi.m):
        coeffs = np.array([phi.fourier(kk)[i, i] for kk in range(phi.d + 1)])
        entries.append(coeffs)
    return entries


def diagonal_inner_outer(phi: LaurentMatrixSymbol, taylor_degree: int,
                         eps_circle: float = 1e-6):
    """Entrywise factorization of a diagonal analytic symbol.

    Returns (inner_symbol, outer_symbol, factorizations) with the inner part
    expanded to the requested Taylor degree.
    """
    facts = [scalar_inner_outer(e, eps_circle=eps_circle) for e in _diagonal_entries(phi)]
    inner = LaurentMatrixSymbol.diagonal([f.inner_taylor(taylor_degree) for f in facts])
    outer = LaurentMatrixSymbol.diagonal([f.outer_coeffs for f in facts])
    return inner, outer, facts


def diagonal_inner_part(phi: LaurentMatrixSymbol, taylor_degree: int,
                        eps_circle: float = 1e-6) -> LaurentMatrixSymbol:
    inner, _, _ = diagonal_inner_outer(phi, taylor_degree, eps_circle=eps_circle)
    return inner
