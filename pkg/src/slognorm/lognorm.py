"""Logarithmic norms of complex matrices.

The logarithmic norm mu_p(A) is the one-sided directional derivative of the
induced p-norm at the identity, lim_{h -> 0+} (norm(I + h A, p) - 1) / h.
For p in {1, 2, inf} it has closed forms:

* p = 1:   max over columns j of  Re(a_jj) + sum_{i != j} |a_ij|
* p = 2:   lambda_max((A + A^H) / 2)
* p = inf: max over rows i of     Re(a_ii) + sum_{j != i} |a_ij|

``mu`` evaluates the closed form; ``mu_limit_check`` estimates the defining
limit numerically by extrapolating difference quotients to h = 0, which is
useful as an independent cross-check of the closed forms.
"""

from __future__ import annotations

import math

import numpy as np

from .matcore import (
    MatrixLike,
    check_p,
    hermitian_part,
    lambda_max_hermitian,
    lambda_max_hermitian_batch,
    matrix_norm_batch,
    as_complex_matrix,
)

__all__ = ["mu", "mu_batch", "mu_limit_check", "ols_intercept_weights"]


def mu(A: MatrixLike, p) -> float:
    """Logarithmic norm mu_p(A) for p in {1, 2, inf} via closed forms."""
    p = check_p(p)
    cm = as_complex_matrix(A, square=True, name="A")
    if p == 2:
        return lambda_max_hermitian(hermitian_part(cm))
    return float(mu_batch(cm.array[np.newaxis], p)[0])


def mu_batch(M: np.ndarray, p) -> np.ndarray:
    """Logarithmic norm for a stack of square matrices ``(..., n, n)``.

    Same closed forms as :func:`mu`; intended for vectorized Monte Carlo
    use, so the input is not re-validated.
    """
    p = check_p(p)
    if p == 2:
        herm = 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))
        if np.iscomplexobj(herm) and not np.any(herm.imag):
            herm = herm.real
        return lambda_max_hermitian_batch(herm)
    mag = np.abs(M)
    diag_mag = np.diagonal(mag, axis1=-2, axis2=-1)
    diag_re = np.diagonal(M, axis1=-2, axis2=-1).real
    if p == 1:
        col = mag.sum(axis=-2) - diag_mag + diag_re
        return col.max(axis=-1)
    row = mag.sum(axis=-1) - diag_mag + diag_re
    return row.max(axis=-1)


def ols_intercept_weights(x: np.ndarray) -> np.ndarray:
    """Weights w with intercept = w . y for the least-squares line through (x, y).

    Derived from the normal equations: w_k = 1/K - xbar (x_k - xbar) / Sxx.
    """
    x = np.asarray(x, dtype=np.float64)
    k = x.size
    if k < 2:
        raise ValueError("need at least two abscissae for a line fit")
    xbar = x.mean()
    sxx = float(((x - xbar) ** 2).sum())
    if sxx == 0.0:
        raise ValueError("abscissae must not be all equal")
    return 1.0 / k - xbar * (x - xbar) / sxx


def default_mu_h_sequence(A: MatrixLike, p, *, count: int = 8) -> tuple[float, ...]:
    """Geometric step sequence h_k = h0 / 2^k used by :func:`mu_limit_check`.

    h0 is scaled by the matrix norm so the quotients sit in the regime where
    the curvature of h -> norm(I + h A, p) is negligible after the linear
    term is removed by the fit.
    """
    a = as_complex_matrix(A, square=True, name="A").array
    scale = float(matrix_norm_batch(a[np.newaxis], p)[0])
    h0 = 1e-5 / max(1.0, scale)
    return tuple(h0 * 0.5**k for k in range(count))


def mu_limit_check(A: MatrixLike, p, h_seq=None) -> float:
    """Estimate mu_p(A) from its defining limit.

    Computes the difference quotient (norm(I + h A, p) - 1) / h for each h
    in ``h_seq`` (strictly decreasing positive reals, all above 1e-10) and
    returns the intercept of the least-squares line through the quotients,
    i.e. the extrapolation to h = 0.
    """
    p = check_p(p)
    a = as_complex_matrix(A, square=True, name="A").array
    if h_seq is None:
        h_seq = default_mu_h_sequence(a, p)
    h = np.asarray(list(h_seq), dtype=np.float64)
    if h.size < 2:
        raise ValueError("h_seq must contain at least two step sizes")
    if np.any(h <= 1e-10):
        raise ValueError("step sizes must be greater than 1e-10")
    if np.any(np.diff(h) >= 0):
        raise ValueError("h_seq must be strictly decreasing")
    eye = np.eye(a.shape[0], dtype=a.dtype)
    mats = eye[np.newaxis] + h[:, np.newaxis, np.newaxis] * a[np.newaxis]
    quotients = (matrix_norm_batch(mats, p) - 1.0) / h
    weights = ols_intercept_weights(h)
    return float(weights @ quotients)
