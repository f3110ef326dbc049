"""Dense complex matrix arithmetic and eigenvalue kernels.

Everything else in the package reduces to a handful of primitives defined
here: the Hermitian part of a matrix, the largest eigenvalue of a Hermitian
matrix, the full spectrum of a general complex matrix, and induced matrix
p-norms for p in {1, 2, inf}.  All operations are pure functions on
immutable inputs and are safe to call from many threads.

Batched variants (suffix ``_batch``) operate on stacks of matrices with
shape ``(..., n, n)`` and exist so that Monte Carlo loops elsewhere in the
package can stay vectorized; they share the same numerics as the scalar
entry points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "ComplexMatrix",
    "Spectrum",
    "MatrixLike",
    "DimensionError",
    "NonHermitianError",
    "EigenConvergenceError",
    "as_complex_matrix",
    "check_p",
    "hermitian_part",
    "lambda_max_hermitian",
    "lambda_max_hermitian_batch",
    "max_re_eigvals_batch",
    "spectrum",
    "matrix_norm",
    "matrix_norm_batch",
    "vector_norm",
]

#: machine epsilon for binary64, the only precision used in this package
_EPS = float(np.finfo(np.float64).eps)


class DimensionError(ValueError):
    """Raised when a matrix or vector has an incompatible shape."""


class NonHermitianError(ValueError):
    """Raised when an operation requiring a Hermitian input gets one that
    is non-Hermitian beyond the accepted tolerance."""


class EigenConvergenceError(RuntimeError):
    """Raised when an iterative eigensolver fails to converge.

    ``partial`` carries whatever eigenvalues were obtained before the
    failure (possibly an empty tuple).
    """

    def __init__(self, message: str, partial: tuple[complex, ...] = ()):
        super().__init__(message)
        self.partial = partial


class ComplexMatrix:
    """Immutable dense n-by-m complex matrix with validated finite entries.

    Stores entries row-major as pairs of binary64 (complex128).  Instances
    interoperate with numpy via ``__array__``/``.array``; the backing array
    is read-only.
    """

    __slots__ = ("_a",)

    def __init__(self, rows: int, cols: int, entries: Iterable[complex]):
        rows = int(rows)
        cols = int(cols)
        if rows <= 0 or cols <= 0:
            raise DimensionError(f"matrix dimensions must be positive, got {rows}x{cols}")
        a = np.asarray(list(entries), dtype=np.complex128)
        if a.ndim != 1 or a.size != rows * cols:
            raise DimensionError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {a.size}"
            )
        a = a.reshape(rows, cols)
        if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
            raise ValueError("matrix entries must be finite (no NaN/Inf)")
        a.flags.writeable = False
        self._a = a

    @classmethod
    def from_array(cls, array: "MatrixLike") -> "ComplexMatrix":
        """Build from a 2-D array-like (nested sequences or ndarray)."""
        if isinstance(array, ComplexMatrix):
            return array
        a = np.asarray(array, dtype=np.complex128)
        if a.ndim != 2:
            raise DimensionError(f"expected a 2-D array, got shape {a.shape}")
        return cls(a.shape[0], a.shape[1], a.ravel())

    @classmethod
    def identity(cls, n: int) -> "ComplexMatrix":
        return cls.from_array(np.eye(n))

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def entries(self) -> tuple[complex, ...]:
        """Row-major entries as built-in complex numbers."""
        return tuple(complex(v) for v in self._a.ravel())

    @property
    def array(self) -> np.ndarray:
        """Read-only complex128 view of the matrix."""
        return self._a

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __array__(self, dtype=None, copy=None):
        if dtype is None and not copy:
            return self._a
        return np.array(self._a, dtype=dtype or np.complex128)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __repr__(self) -> str:
        return f"ComplexMatrix({self.rows}x{self.cols})"


MatrixLike = Union[ComplexMatrix, np.ndarray, Sequence[Sequence[complex]]]


@dataclass(frozen=True)
class Spectrum:
    """All eigenvalues of a square matrix (unordered multiset) together
    with an upper estimate of the solver's backward error."""

    eigenvalues: tuple[complex, ...]
    residual_bound: float


def as_complex_matrix(M: MatrixLike, *, square: bool = False, name: str = "matrix") -> ComplexMatrix:
    """Coerce array-likes to :class:`ComplexMatrix`, optionally requiring squareness."""
    cm = ComplexMatrix.from_array(M)
    if square and not cm.is_square:
        raise DimensionError(f"{name} must be square, got {cm.rows}x{cm.cols}")
    return cm


def _square_array(M: MatrixLike, name: str = "matrix") -> np.ndarray:
    """Internal: coerce to a validated square complex ndarray."""
    return as_complex_matrix(M, square=True, name=name).array


def check_p(p) -> float:
    """Normalize a p-norm selector to 1, 2, or ``math.inf``.

    Accepts the integers 1 and 2, any representation of infinity, and the
    strings "1", "2", "inf".  Anything else raises ValueError.
    """
    if isinstance(p, str):
        s = p.strip().lower()
        if s == "inf":
            return math.inf
        if s in ("1", "2"):
            return int(s)
        raise ValueError(f"unsupported p-norm {p!r}; expected 1, 2 or inf")
    if p == 1:
        return 1
    if p == 2:
        return 2
    if p == math.inf:
        return math.inf
    raise ValueError(f"unsupported p-norm {p!r}; expected 1, 2 or inf")


def hermitian_part(M: MatrixLike) -> ComplexMatrix:
    """Return (M + M^H) / 2.

    The result is Hermitian to the last bit: conjugate pairs are averaged,
    which in IEEE arithmetic lands the (i, j) and (j, i) entries on exact
    conjugates and zeroes the imaginary part of the diagonal.
    """
    a = _square_array(M)
    return ComplexMatrix.from_array(0.5 * (a + a.conj().T))


def lambda_max_hermitian(H: MatrixLike, *, rtol: float = 1e-12) -> float:
    """Largest eigenvalue of a Hermitian matrix, as a real number.

    The input must be Hermitian within ``rtol * norm(H, inf)``; it is then
    symmetrized exactly before the solve, so tiny asymmetries cannot leak
    into the result.
    """
    a = _square_array(H)
    scale = float(np.max(np.sum(np.abs(a), axis=1)))  # row-sum norm
    dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if dev > rtol * max(scale, 1e-300):
        raise NonHermitianError(
            f"matrix is not Hermitian within tolerance (deviation {dev:.3e}, "
            f"allowed {rtol * scale:.3e})"
        )
    h = 0.5 * (a + a.conj().T)
    if not np.any(h.imag):
        h = h.real  # real-symmetric solver path
    return float(lambda_max_hermitian_batch(h[np.newaxis])[0])


def lambda_max_hermitian_batch(H: np.ndarray) -> np.ndarray:
    """Largest eigenvalue for a stack of Hermitian matrices ``(..., n, n)``.

    Assumes the inputs are already Hermitian (no checking); n = 1 and n = 2
    use closed forms, larger n uses the LAPACK Hermitian solver.
    """
    n = H.shape[-1]
    if H.shape[-2] != n:
        raise DimensionError(f"expected square matrices, got shape {H.shape}")
    if n == 1:
        return np.ascontiguousarray(H[..., 0, 0].real)
    if n == 2:
        a = H[..., 0, 0].real
        d = H[..., 1, 1].real
        off = np.abs(H[..., 0, 1])
        return 0.5 * (a + d) + np.hypot(0.5 * (a - d), off)
    try:
        return np.linalg.eigvalsh(H)[..., -1]
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise EigenConvergenceError(f"Hermitian eigensolver failed: {exc}") from exc


def max_re_eigvals_batch(M: np.ndarray) -> np.ndarray:
    """Largest real part over the spectrum, for a stack of general matrices.

    n = 1 and n = 2 use closed forms (the 2x2 case via the quadratic
    formula); larger n uses the LAPACK general eigensolver.
    """
    n = M.shape[-1]
    if M.shape[-2] != n:
        raise DimensionError(f"expected square matrices, got shape {M.shape}")
    if n == 1:
        return np.ascontiguousarray(M[..., 0, 0].real)
    if n == 2:
        tr = M[..., 0, 0] + M[..., 1, 1]
        det = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
        disc = np.sqrt((tr * tr - 4.0 * det).astype(np.complex128))
        return np.maximum((0.5 * (tr + disc)).real, (0.5 * (tr - disc)).real)
    try:
        return np.linalg.eigvals(M).real.max(axis=-1)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(f"general eigensolver failed: {exc}") from exc


def spectrum(M: MatrixLike) -> Spectrum:
    """All eigenvalues of a general square complex matrix.

    Uses a backward-stable general eigensolver (Hessenberg + shifted QR);
    ``residual_bound`` is a conservative upper estimate of the backward
    error, proportional to n * eps * norm(M, 2).
    """
    a = _square_array(M)
    n = a.shape[0]
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(
            f"eigenvalue iteration failed to converge for {n}x{n} matrix: {exc}"
        ) from exc
    bound = 20.0 * n * _EPS * matrix_norm(a, 2)
    return Spectrum(eigenvalues=tuple(complex(v) for v in vals), residual_bound=bound)


def matrix_norm(M: MatrixLike, p) -> float:
    """Induced matrix p-norm for p in {1, 2, inf}.

    p = 1 is the maximum column absolute sum, p = inf the maximum row
    absolute sum, and p = 2 is sqrt(lambda_max(M^H M)).
    """
    a = _square_array(M)
    return float(matrix_norm_batch(a[np.newaxis], p)[0])


def matrix_norm_batch(M: np.ndarray, p) -> np.ndarray:
    """Induced p-norm for a stack of square matrices ``(..., n, n)``."""
    p = check_p(p)
    if M.shape[-2] != M.shape[-1]:
        raise DimensionError(f"expected square matrices, got shape {M.shape}")
    if p == 1:
        return np.abs(M).sum(axis=-2).max(axis=-1)
    if p == math.inf:
        return np.abs(M).sum(axis=-1).max(axis=-1)
    gram = np.matmul(np.conj(np.swapaxes(M, -1, -2)), M)
    lam = lambda_max_hermitian_batch(gram)
    return np.sqrt(np.maximum(lam.real, 0.0))


def vector_norm(x, p) -> float:
    """Vector p-norm for p in {1, 2, inf} with finite entries."""
    p = check_p(p)
    v = np.asarray(x, dtype=np.complex128).ravel()
    if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
        raise ValueError("vector entries must be finite")
    mag = np.abs(v)
    if p == 1:
        return float(mag.sum())
    if p == 2:
        return float(np.sqrt((mag * mag).sum()))
    return float(mag.max()) if mag.size else 0.0
