"""Stochastic logarithmic norms of linear SDE coefficient tuples.

For the linear Ito system dX = A X dt + sum_j B(j) X dW(j) with constant
square matrices, the stochastic logarithmic norm nu_p^l(A, B(1:m)) bounds
the exponential growth rate of the l-th mean E norm(X_t, p)^l, exactly as
the classical logarithmic norm mu_p does for ODEs.  This module offers two
Monte Carlo estimators plus every closed-form bound the theory provides:

* ``nu_direct`` evaluates l * E[mu_p(A - 1/2 sum B^2 + sum B zeta)] with
  zeta i.i.d. standard normal (the white-noise representation).
* ``nu_definitional`` estimates the defining limit: the h -> 0 intercept of
  the difference quotients (E norm(I + hA + sum B dW + sum BB I_(i,j), p)^l
  - 1) / h, with common random numbers across the h-sequence.

The two functionals genuinely differ on some inputs — for B = I, p = 2,
l = 2 the direct route gives 2 mu_2(A) - 1 while the definitional limit is
2 mu_2(A) + 1 — so both are exposed, never averaged or reconciled; callers
(and the CLI) are expected to compare them and surface disagreement.

All estimators share one deterministic Monte Carlo engine: draws are
generated in fixed-size blocks, each block seeded independently from
(seed, block index), and reduced in fixed order, which makes every result
bit-identical for a given seed regardless of the worker-thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .lognorm import mu, mu_batch, ols_intercept_weights
from .matcore import (
    ComplexMatrix,
    EigenConvergenceError,
    MatrixLike,
    as_complex_matrix,
    check_p,
    lambda_max_hermitian,
    matrix_norm,
    matrix_norm_batch,
    max_re_eigvals_batch,
)

__all__ = [
    "SdeSystem",
    "McConfig",
    "NuEstimate",
    "BoundsReport",
    "BOUND_APPLICABILITY",
    "StabilityClass",
    "PerturbedSpectrumCheck",
    "ScalingCheck",
    "default_samples",
    "default_h_sequence",
    "nu_direct",
    "nu_definitional",
    "iterated_integral_sampler",
    "bounds_report",
    "classify",
    "scalar_stability",
    "twobytwo_inf_ms_stable",
    "expected_max_re_perturbed",
    "scaling_check",
]

#: replicates generated per RNG block; the unit of deterministic parallelism
_BLOCK = 4096


def _block_size(dim: int) -> int:
    """Replicates per RNG block for ``dim x dim`` systems.

    Fixed at ``_BLOCK`` up to dim 32 and shrunk quadratically beyond that so
    a block's working set stays bounded.  The size depends only on the
    system, never on worker count, so the random stream partition (and with
    it every numeric result) is reproducible.
    """
    return max(64, min(_BLOCK, 4_194_304 // max(1, dim * dim)))


#: subintervals used to discretize off-diagonal iterated Wiener integrals
LEVY_SUBDIVISIONS = 32

#: absolute allowance added to 3-sigma windows when comparing estimates whose
#: Monte Carlo variance vanishes; covers summation rounding of the mean
FP_FLOOR = 1e-9


@dataclass(frozen=True)
class SdeSystem:
    """Coefficients (A, B(1)..B(m)) of a linear SDE with m noise channels.

    ``A`` is the drift (units 1/time), ``diffusions`` the ordered noise
    coefficients (units 1/sqrt(time)); all must be square and of identical
    dimension.  m = 0 denotes a deterministic ODE.
    """

    A: ComplexMatrix
    diffusions: tuple[ComplexMatrix, ...] = ()

    def __post_init__(self):
        a = as_complex_matrix(self.A, square=True, name="A")
        bs = tuple(
            as_complex_matrix(b, square=True, name=f"B({j + 1})")
            for j, b in enumerate(self.diffusions)
        )
        for j, b in enumerate(bs):
            if b.rows != a.rows:
                raise ValueError(
                    f"B({j + 1}) is {b.rows}x{b.cols} but A is {a.rows}x{a.cols}"
                )
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "diffusions", bs)

    @property
    def dim(self) -> int:
        return self.A.rows

    @property
    def m(self) -> int:
        return len(self.diffusions)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (A, stacked B) as ndarrays, downcast to real when possible.

        Real inputs keep real dtype so the Hermitian eigenvalue kernels can
        take the faster real-symmetric path.
        """
        a = self.A.array
        bs = (
            np.stack([b.array for b in self.diffusions])
            if self.diffusions
            else np.zeros((0, self.dim, self.dim), dtype=np.complex128)
        )
        if not np.any(a.imag) and not np.any(bs.imag):
            return a.real.copy(), bs.real.copy()
        return a.copy(), bs.copy()

    def scaled(self, alpha: float) -> "SdeSystem":
        """The system (alpha A, sqrt(alpha) B(1:m)) for alpha > 0."""
        if alpha <= 0:
            raise ValueError(f"scaling factor must be positive, got {alpha}")
        root = math.sqrt(alpha)
        return SdeSystem(
            ComplexMatrix.from_array(alpha * self.A.array),
            tuple(ComplexMatrix.from_array(root * b.array) for b in self.diffusions),
        )


def default_samples(n: int) -> int:
    """Default Monte Carlo sample count by system dimension."""
    if n <= 4:
        return 10**6
    if n <= 16:
        return 10**5
    return 10**4


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo controls shared by all estimators.

    ``samples=None`` resolves to :func:`default_samples` for the system at
    hand.  ``antithetic`` draws (zeta, -zeta) pairs and averages each pair
    into one replicate, so the reported standard error is the spread of the
    pair means; with it enabled the effective sample count is rounded down
    to a multiple of two.  ``workers`` only fans out independent RNG blocks
    and can never change any numeric result.
    """

    samples: int | None = None
    seed: int = 42
    antithetic: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.samples is not None and self.samples < 2:
            raise ValueError(f"samples must be at least 2, got {self.samples}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")

    def resolve_samples(self, n: int) -> int:
        return self.samples if self.samples is not None else default_samples(n)


@dataclass(frozen=True)
class NuEstimate:
    """A Monte Carlo estimate of nu_p^l with its standard error.

    ``std_error`` is the sample standard deviation of the per-replicate
    statistic divided by sqrt(samples of that statistic); under antithetic
    pairing the replicate is a pair mean.  ``h_used`` is present exactly
    for the definitional estimator; ``bias_warning`` marks definitional
    runs whose extrapolation residual dominates the Monte Carlo error.
    """

    value: float
    std_error: float
    samples: int
    estimator: str
    p: float
    l: int
    h_used: tuple[float, ...] | None = None
    bias_warning: bool = False

    def __post_init__(self):
        if self.estimator not in ("direct", "definitional"):
            raise ValueError(f"unknown estimator {self.estimator!r}")
        if self.estimator == "definitional" and not self.h_used:
            raise ValueError("definitional estimates must record h_used")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.std_error < 0:
            raise ValueError("std_error must be nonnegative")


class StabilityClass(str, Enum):
    ASYMPTOTICALLY_STABLE = "asymptotically_stable"
    STABLE = "stable"
    UNSTABLE = "unstable"


def classify(nu: NuEstimate, tol: float = 0.0) -> StabilityClass:
    """Map an estimate of nu to a stability verdict.

    value + 2 se < -tol is asymptotically stable; |value| <= 2 se + tol is
    the indeterminate boundary, reported as stable; anything else is
    unstable.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if nu.value + 2.0 * nu.std_error < -tol:
        return StabilityClass.ASYMPTOTICALLY_STABLE
    if abs(nu.value) <= 2.0 * nu.std_error + tol:
        return StabilityClass.STABLE
    return StabilityClass.UNSTABLE


# ---------------------------------------------------------------------------
# deterministic block Monte Carlo engine
# ---------------------------------------------------------------------------


def _collect_blocks(
    rep_fn: Callable[[np.random.Generator, int, int], np.ndarray],
    reps: int,
    ncols: int,
    seed: int,
    workers: int,
    block: int = _BLOCK,
) -> np.ndarray:
    """Fill a (reps, ncols) matrix of replicate statistics deterministically.

    Block b (of size ``block``) is produced by ``rep_fn(rng_b, count,
    start)`` where rng_b is seeded from (seed, spawn_key=(b,)) only.  The
    output slices are disjoint, so any thread fan-out yields bit-identical
    results; reductions over the returned array are the caller's business
    and use numpy's fixed-order pairwise summation.
    """
    out = np.empty((reps, ncols), dtype=np.float64)
    nblocks = -(-reps // block)

    def run(b: int) -> None:
        start = b * block
        stop = min(start + block, reps)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(b,)))
        out[start:stop] = rep_fn(rng, stop - start, start)

    if workers > 1 and nblocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run, b) for b in range(nblocks)]
            for f in futures:
                f.result()
    else:
        for b in range(nblocks):
            run(b)
    return out


def _replicate_plan(samples: int, antithetic: bool) -> tuple[int, int]:
    """(replicates, total draws) for a requested sample budget."""
    if antithetic:
        if samples < 4:
            raise ValueError("antithetic estimation needs at least 4 samples")
        reps = samples // 2
        return reps, 2 * reps
    return samples, samples


# ---------------------------------------------------------------------------
# direct estimator
# ---------------------------------------------------------------------------


def nu_direct(system: SdeSystem, p=2, l: int = 2, cfg: McConfig | None = None) -> NuEstimate:
    """Estimate nu_p^l as l * E[mu_p(A - 1/2 sum B^2 + sum B zeta)].

    zeta(1)..zeta(m) are i.i.d. standard normal; the expectation is a plain
    Monte Carlo mean over ``cfg.samples`` draws (antithetic by default).
    With m = 0 the statistic is deterministic and the exact value
    l * mu_p(A) is returned with zero standard error.
    """
    p = check_p(p)
    l = _check_l(l)
    cfg = cfg or McConfig()
    a, bs = system.arrays()
    m = system.m
    if m == 0:
        return NuEstimate(
            value=l * mu(system.A, p), std_error=0.0, samples=1,
            estimator="direct", p=p, l=l,
        )
    base = a - 0.5 * _sum_squares(bs)
    samples = cfg.resolve_samples(system.dim)
    reps, total = _replicate_plan(samples, cfg.antithetic)

    def stat(z: np.ndarray) -> np.ndarray:
        mats = base + np.tensordot(z, bs, axes=(1, 0))
        return l * mu_batch(mats, p)

    def rep(rng: np.random.Generator, count: int, start: int) -> np.ndarray:
        z = rng.standard_normal((count, m))
        try:
            if cfg.antithetic:
                vals = 0.5 * (stat(z) + stat(-z))
            else:
                vals = stat(z)
        except EigenConvergenceError as exc:
            raise EigenConvergenceError(
                f"{exc} (while evaluating replicates {start}..{start + count})",
                exc.partial,
            ) from exc
        return vals[:, np.newaxis]

    arr = _collect_blocks(
        rep, reps, 1, cfg.seed, cfg.workers, block=_block_size(system.dim)
    )[:, 0]
    value = float(arr.mean())
    se = float(arr.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    return NuEstimate(
        value=value, std_error=se, samples=total, estimator="direct", p=p, l=l
    )


def _check_l(l) -> int:
    if not isinstance(l, (int, np.integer)) or isinstance(l, bool) or l < 1:
        raise ValueError(f"l must be a positive integer, got {l!r}")
    return int(l)


def _sum_squares(bs: np.ndarray) -> np.ndarray:
    """sum_j B(j) @ B(j) for a stack of matrices (m, n, n)."""
    if bs.shape[0] == 0:
        return np.zeros(bs.shape[1:], dtype=bs.dtype)
    return np.einsum("mij,mjk->ik", bs, bs)


# ---------------------------------------------------------------------------
# definitional estimator
# ---------------------------------------------------------------------------


def default_h_sequence(system: SdeSystem | MatrixLike, p=2, *, count: int = 7) -> tuple[float, ...]:
    """Step sizes h0 * 2^-k, k = 0..count-1, with h0 = 0.05 / max(1, norm(A, p))."""
    a = system.A if isinstance(system, SdeSystem) else system
    h0 = 0.05 / max(1.0, matrix_norm(a, p))
    return tuple(h0 * 0.5**k for k in range(count))


def _validate_h_sequence(h_seq, a_norm: float) -> np.ndarray:
    h = np.asarray(list(h_seq), dtype=np.float64)
    if h.size < 2:
        raise ValueError("h_seq must contain at least two step sizes")
    if np.any(h <= 0):
        raise ValueError("step sizes must be positive")
    if np.any(np.diff(h) >= 0):
        raise ValueError("h_seq must be strictly decreasing")
    worst = float(h[0] * a_norm)
    if worst >= 0.1:
        raise ValueError(
            f"largest step violates the expansion regime: h*norm(A,p) = {worst:.3g} >= 0.1"
        )
    return h


def nu_definitional(
    system: SdeSystem,
    p=2,
    l: int = 2,
    h_seq: Sequence[float] | None = None,
    cfg: McConfig | None = None,
) -> NuEstimate:
    """Estimate nu_p^l from its defining h -> 0 limit.

    For each h in ``h_seq`` the quotient (E norm(G_h, p)^l - 1) / h is
    sampled, where G_h = I + hA + sum_j B(j) dW(j) + sum_ij B(i)B(j)
    I_(i,j)(h).  One underlying standard-normal draw per replicate is
    rescaled across the whole h-sequence (common random numbers), the
    per-replicate quotient curve is collapsed to its least-squares h = 0
    intercept, and the Monte Carlo spread of those intercepts is combined
    (in quadrature) with the intercept error of the fit to the mean curve.

    Every h must satisfy h * norm(A, p) < 0.1 (expansion regime).  When the
    extrapolation residual exceeds 10x the Monte Carlo error — the h-range
    is too coarse for the curvature — the estimate carries
    ``bias_warning=True`` rather than raising.
    """
    p = check_p(p)
    l = _check_l(l)
    cfg = cfg or McConfig()
    a, bs = system.arrays()
    n, m = system.dim, system.m
    if h_seq is None:
        h_seq = default_h_sequence(system, p)
    h = _validate_h_sequence(h_seq, matrix_norm(system.A, p))
    nh = h.size
    weights = ols_intercept_weights(h)
    samples = cfg.resolve_samples(n)
    reps, total = _replicate_plan(samples, cfg.antithetic)

    eye = np.eye(n, dtype=a.dtype)
    deterministic = eye[np.newaxis] + h[:, np.newaxis, np.newaxis] * a  # (nh, n, n)
    pairs = (
        np.einsum("iab,jbc->ijac", bs, bs)
        if m
        else np.zeros((0, 0, n, n), dtype=a.dtype)
    )

    def quotient_rows(xi: np.ndarray, count: int) -> np.ndarray:
        """Quotients for every h from one batch of unit normals (count, ...)."""
        rows = np.empty((count, nh), dtype=np.float64)
        for k in range(nh):
            hk = float(h[k])
            if m == 0:
                g = np.broadcast_to(deterministic[k], (count, n, n))
            else:
                dw, imat = _increments_from_normals(xi, hk)
                g = (
                    deterministic[k]
                    + np.tensordot(dw, bs, axes=(1, 0))
                    + np.einsum("sij,ijab->sab", imat, pairs)
                )
            rows[:, k] = (matrix_norm_batch(g, p) ** l - 1.0) / hk
        return rows

    def rep(rng: np.random.Generator, count: int, start: int) -> np.ndarray:
        if m == 0:
            xi = np.empty((count, 0))
        elif m == 1:
            xi = rng.standard_normal((count, 1))
        else:
            xi = rng.standard_normal((count, LEVY_SUBDIVISIONS, m))
        try:
            rows = quotient_rows(xi, count)
            if cfg.antithetic and m > 0:
                rows = 0.5 * (rows + quotient_rows(-xi, count))
        except EigenConvergenceError as exc:
            raise EigenConvergenceError(
                f"{exc} (while evaluating replicates {start}..{start + count})",
                exc.partial,
            ) from exc
        return np.column_stack([rows @ weights, rows])

    arr = _collect_blocks(
        rep, reps, 1 + nh, cfg.seed, cfg.workers, block=_block_size(system.dim)
    )
    intercepts = arr[:, 0]
    value = float(intercepts.mean())
    mc_se = float(intercepts.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    extrap_se = _intercept_residual_error(h, arr[:, 1:].mean(axis=0))
    se = math.hypot(mc_se, extrap_se)
    bias = extrap_se > 10.0 * mc_se and extrap_se > FP_FLOOR * max(1.0, abs(value))
    return NuEstimate(
        value=value,
        std_error=se,
        samples=total,
        estimator="definitional",
        p=p,
        l=l,
        h_used=tuple(float(v) for v in h),
        bias_warning=bool(bias),
    )


def _intercept_residual_error(h: np.ndarray, qbar: np.ndarray) -> float:
    """Standard error of the h = 0 intercept from the residuals of the
    least-squares line through the mean quotient curve (0 when the line
    fits exactly, e.g. with only two step sizes)."""
    k = h.size
    if k <= 2:
        return 0.0
    hbar = h.mean()
    shh = float(((h - hbar) ** 2).sum())
    slope = float(((h - hbar) * (qbar - qbar.mean())).sum() / shh)
    intercept = float(qbar.mean() - slope * hbar)
    resid = qbar - (intercept + slope * h)
    s2 = float((resid**2).sum() / (k - 2))
    return math.sqrt(s2 * (1.0 / k + hbar**2 / shh))


def _increments_from_normals(xi: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Wiener increments and iterated integrals from unit normals.

    ``xi`` has shape (count, 1) for one channel (the iterated integral is
    then exact) or (count, K, m) for m >= 2 channels, in which case the
    off-diagonal integrals accumulate over the K subintervals and the
    symmetry identity I_(i,j) + I_(j,i) = dW(i) dW(j) - delta_ij h fixes
    the lower triangle.
    """
    if xi.ndim == 2:  # single channel
        dw = math.sqrt(h) * xi
        imat = (0.5 * (dw[:, 0] ** 2 - h))[:, np.newaxis, np.newaxis]
        return dw, imat
    count, k_sub, m = xi.shape
    delta = math.sqrt(h / k_sub) * xi
    dw = delta.sum(axis=1)
    pre = np.cumsum(delta, axis=1) - delta  # W at the start of each subinterval
    imat = np.empty((count, m, m), dtype=np.float64)
    for j in range(m):
        imat[:, j, j] = 0.5 * (dw[:, j] ** 2 - h)
    for i in range(m):
        for j in range(i + 1, m):
            upper = np.einsum("sk,sk->s", pre[:, :, i], delta[:, :, j])
            imat[:, i, j] = upper
            imat[:, j, i] = dw[:, i] * dw[:, j] - upper
    return dw, imat


def sample_wiener_increments(
    rng: np.random.Generator, count: int, m: int, h: float
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``count`` joint samples of (dW, iterated integrals) for m channels.

    Returns arrays of shape (count, m) and (count, m, m).  Single-channel
    integrals are exact; multi-channel off-diagonals use the subinterval
    accumulation described in :func:`_increments_from_normals`.
    """
    if m < 1:
        raise ValueError(f"need at least one channel, got m={m}")
    if h <= 0:
        raise ValueError(f"step size must be positive, got {h}")
    if m == 1:
        xi = rng.standard_normal((count, 1))
    else:
        xi = rng.standard_normal((count, LEVY_SUBDIVISIONS, m))
    return _increments_from_normals(xi, h)


def iterated_integral_sampler(
    m: int, h: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """One joint sample of the Wiener increment vector dW ~ N(0, h I_m) and
    the iterated-integral matrix I_(i,j) = int_0^h int_0^s dW(i) dW(j).

    Diagonal entries are exact, I_(j,j) = ((dW(j))^2 - h) / 2; off-diagonal
    entries are accumulated over ``LEVY_SUBDIVISIONS`` subintervals with the
    symmetry identity I_(i,j) + I_(j,i) = dW(i) dW(j) - delta_ij h enforced
    exactly.
    """
    dw, imat = sample_wiener_increments(rng, 1, m, h)
    return dw[0], imat[0]


# ---------------------------------------------------------------------------
# closed-form bounds
# ---------------------------------------------------------------------------

#: applicability predicate for each bound identifier, keyed by field name
BOUND_APPLICABILITY = {
    "main12_upper": "p = 2, m = 1 (quadratic lambda_max term only for l > 2)",
    "main12_exact_B_eq_I": "p = 2, m = 1, B = I",
    "msest_upper": "p = 2, m = 1 (quadratic mu term only for l > 2)",
    "beq1_identities": "p = 2, m = 1, B = I, l in {1, 2} (exact identity)",
    "lpest1_upper": "any p, m = 1",
    "lpest_upper": "any p, m = 1",
    "mu_upper": "any p, any m",
    "mu_lower": "any p, any m",
    "abs_bound": "any p, any m (bound on |nu|)",
    "multi_channel_upper": "m > 1 (spectral refinement when p = 2 and l >= 2)",
}


@dataclass(frozen=True)
class BoundsReport:
    """Every applicable closed-form bound on nu_p^l for one system.

    Inapplicable bounds are None, never zero-filled;
    :data:`BOUND_APPLICABILITY` states each field's predicate.  All values
    are upper bounds except ``mu_lower`` (a lower bound), ``abs_bound`` (a
    bound on |nu|), and the two exact identities ``main12_exact_B_eq_I``
    and ``beq1_identities``.
    """

    p: float
    l: int
    channels: int
    main12_upper: float | None = None
    main12_exact_B_eq_I: float | None = None
    msest_upper: float | None = None
    beq1_identities: float | None = None
    lpest1_upper: float | None = None
    lpest_upper: float | None = None
    mu_upper: float | None = None
    mu_lower: float | None = None
    abs_bound: float | None = None
    multi_channel_upper: float | None = None

    def items(self) -> dict[str, float]:
        """The applicable bounds as an identifier -> value mapping."""
        return {
            name: getattr(self, name)
            for name in BOUND_APPLICABILITY
            if getattr(self, name) is not None
        }


def _is_identity(b: ComplexMatrix) -> bool:
    return bool(np.array_equal(b.array, np.eye(b.rows)))


def bounds_report(system: SdeSystem, p=2, l: int = 2) -> BoundsReport:
    """Evaluate every closed-form bound applicable to (system, p, l)."""
    p = check_p(p)
    l = _check_l(l)
    a = system.A.array
    bs = [b.array for b in system.diffusions]
    m = system.m
    mu_a = mu(a, p)
    out: dict[str, float | None] = {}

    # any p, any m: the white-noise sandwich and the absolute bound
    up = low = 0.0
    for b in bs:
        b2 = b @ b
        odd = mu(b, p) + mu(-b, p)
        up += mu(-b2, p) + odd
        low += mu(b2, p) + odd
    out["mu_upper"] = l * mu_a + 0.5 * l * up
    out["mu_lower"] = l * mu_a - 0.5 * l * low
    drift = a - 0.5 * sum((b @ b for b in bs), np.zeros_like(a))
    out["abs_bound"] = l * matrix_norm(drift, p) + l * sum(matrix_norm(b, p) for b in bs)

    if m == 1:
        b = bs[0]
        bnorm = matrix_norm(b, p)
        out["lpest1_upper"] = (
            l * mu_a
            + 0.5 * l * mu(-(b @ b), p)
            + l * (l + 1) / 4.0 * bnorm**2
            + l * bnorm
        )
        out["lpest_upper"] = l * mu_a + l * bnorm * (1.0 + (l + 3) / 4.0 * bnorm)
        if p == 2:
            lam_a = lambda_max_hermitian(a + a.conj().T)
            lam_b = lambda_max_hermitian(b + b.conj().T)
            lam_bneg = lambda_max_hermitian(-(b + b.conj().T))
            lam_gram = lambda_max_hermitian(b.conj().T @ b)
            main = (
                0.5 * l * lam_a
                + 0.25 * l * (lam_b + lam_bneg)
                + 0.5 * l * lam_gram
            )
            if l > 2:
                main += l * (l - 2) / 8.0 * lam_b**2
            out["main12_upper"] = main
            mu_b = mu(b, 2)
            ms = mu(a, 2) + 0.5 * matrix_norm(b, 2) ** 2 + 0.5 * (mu_b + mu(-b, 2))
            if l > 2:
                ms += (l - 2) / 2.0 * mu_b**2
            out["msest_upper"] = l * ms
            if _is_identity(system.diffusions[0]):
                out["main12_exact_B_eq_I"] = 0.5 * l * lam_a + 0.5 * l + l * (l - 2) / 2.0
                if l == 1:
                    out["beq1_identities"] = mu(a, 2)
                elif l == 2:
                    out["beq1_identities"] = 2.0 * mu(a, 2) + 1.0
    elif m > 1:
        if p == 2 and l >= 2:
            total = mu(a, 2)
            quad = 0.0
            for b in bs:
                mu_b = mu(b, 2)
                total += 0.5 * matrix_norm(b, 2) ** 2 + 0.5 * (mu_b + mu(-b, 2))
                quad += mu_b**2
            out["multi_channel_upper"] = l * total + l * (l - 2) / 2.0 * quad
        else:
            norms = [matrix_norm(b, p) for b in bs]
            cross = sum(
                matrix_norm(bs[i] @ bs[j], p)
                for i in range(m)
                for j in range(m)
                if i != j
            )
            out["multi_channel_upper"] = (
                l * mu_a
                - 0.5 * l * mu(sum(bs[1:], bs[0].copy()), p)
                + l * sum(norms)
                + 0.5 * l * sum(v**2 for v in norms)
                + l / math.sqrt(2.0) * cross
            )
    return BoundsReport(p=p, l=l, channels=m, **out)


# ---------------------------------------------------------------------------
# special-case stability criteria
# ---------------------------------------------------------------------------


def scalar_stability(alpha: complex, beta: complex, l: int) -> bool:
    """Stability of the scalar SDE dX = alpha X dt + beta X dW in the l-th mean.

    l = 1: Re(alpha) + |beta|^2 / 2 <= 0;  l = 2: 2 Re(alpha) + |beta|^2 <= 0.
    """
    if l == 1:
        return complex(alpha).real + 0.5 * abs(beta) ** 2 <= 0.0
    if l == 2:
        return 2.0 * complex(alpha).real + abs(beta) ** 2 <= 0.0
    raise ValueError(f"l must be 1 or 2, got {l!r}")


def twobytwo_inf_ms_stable(lam1, lam2, alpha1, beta1, alpha2, beta2) -> bool:
    """Mean-square stability test in the inf-norm for the 2x2 system with
    diagonal drift diag(lam1, lam2) and antidiagonal-coupled noise entries:
    2 max(lam) + 2 (5/4 max(|a1|+|b1|, |a2|+|b2|) + 1)^2 <= 0."""
    lam = max(float(lam1), float(lam2))
    coupling = max(abs(alpha1) + abs(beta1), abs(alpha2) + abs(beta2))
    return 2.0 * lam + 2.0 * (1.25 * coupling + 1.0) ** 2 <= 0.0


# ---------------------------------------------------------------------------
# spectrum of the perturbed stability matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PerturbedSpectrumCheck:
    """Paired Monte Carlo comparison of E[max Re spectrum(A - 1/2 sum B^2 +
    sum B zeta)] against half the direct nu_2^2 statistic on the same draws."""

    estimate: float
    estimate_stderr: float
    half_nu: float
    half_nu_stderr: float
    inequality_holds: bool
    samples: int


def expected_max_re_perturbed(
    system: SdeSystem, cfg: McConfig | None = None
) -> PerturbedSpectrumCheck:
    """Estimate the expected spectral abscissa of the randomly perturbed
    stability matrix and check it against nu_2^2 / 2.

    Both statistics are evaluated on the same zeta draws, so the comparison
    ``inequality_holds`` (estimate <= half_nu within 3 combined standard
    errors) is a paired test; pointwise max Re lambda(M) <= mu_2(M) makes
    it hold with margin for any system.
    """
    cfg = cfg or McConfig()
    a, bs = system.arrays()
    m = system.m
    base = a - 0.5 * _sum_squares(bs)
    samples = cfg.resolve_samples(system.dim)
    reps, total = _replicate_plan(samples, cfg.antithetic)

    def stat(z: np.ndarray) -> np.ndarray:
        mats = base + np.tensordot(z, bs, axes=(1, 0)) if m else np.broadcast_to(
            base, (z.shape[0],) + base.shape
        )
        return np.column_stack([max_re_eigvals_batch(mats), mu_batch(mats, 2)])

    def rep(rng: np.random.Generator, count: int, start: int) -> np.ndarray:
        z = rng.standard_normal((count, m))
        try:
            if cfg.antithetic:
                return 0.5 * (stat(z) + stat(-z))
            return stat(z)
        except EigenConvergenceError as exc:
            raise EigenConvergenceError(
                f"{exc} (while evaluating replicates {start}..{start + count})",
                exc.partial,
            ) from exc

    arr = _collect_blocks(
        rep, reps, 2, cfg.seed, cfg.workers, block=_block_size(system.dim)
    )
    means = arr.mean(axis=0)
    if reps > 1:
        ses = arr.std(axis=0, ddof=1) / math.sqrt(reps)
        diff_se = float((arr[:, 0] - arr[:, 1]).std(ddof=1) / math.sqrt(reps))
    else:
        ses = np.zeros(2)
        diff_se = 0.0
    gap = float(means[0] - means[1])
    holds = gap <= 3.0 * diff_se + FP_FLOOR
    return PerturbedSpectrumCheck(
        estimate=float(means[0]),
        estimate_stderr=float(ses[0]),
        half_nu=float(means[1]),
        half_nu_stderr=float(ses[1]),
        inequality_holds=bool(holds),
        samples=total,
    )


# ---------------------------------------------------------------------------
# scaling law
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalingCheck:
    """Matched-seed comparison of nu(alpha A, sqrt(alpha) B) with alpha * nu(A, B)."""

    alpha: float
    base: NuEstimate
    scaled: NuEstimate
    expected: float
    difference: float
    tolerance: float
    within_tolerance: bool


def scaling_check(
    system: SdeSystem,
    alpha: float,
    p=2,
    l: int = 2,
    h_seq: Sequence[float] | None = None,
    cfg: McConfig | None = None,
) -> ScalingCheck:
    """Verify nu_p^l(alpha A, sqrt(alpha) B) = alpha * nu_p^l(A, B).

    Runs the definitional estimator on the base system with ``h_seq`` and
    on the scaled system with ``h_seq / alpha`` under the same seed.  The
    time change h -> h/alpha couples the two runs draw-for-draw, so the
    difference is pure floating-point noise; the check window is 3 combined
    standard errors plus a small absolute allowance for that rounding.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    cfg = cfg or McConfig()
    if h_seq is None:
        h_seq = default_h_sequence(system, p)
    base = nu_definitional(system, p, l, h_seq, cfg)
    scaled_h = tuple(h / alpha for h in base.h_used)
    scaled = nu_definitional(system.scaled(alpha), p, l, scaled_h, cfg)
    expected = alpha * base.value
    difference = scaled.value - expected
    tol = 3.0 * math.hypot(scaled.std_error, alpha * base.std_error) + FP_FLOOR
    return ScalingCheck(
        alpha=float(alpha),
        base=base,
        scaled=scaled,
        expected=expected,
        difference=difference,
        tolerance=tol,
        within_tolerance=bool(abs(difference) <= tol),
    )
