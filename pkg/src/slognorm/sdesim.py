"""Ensemble moment simulation for linear SDEs with multiplicative noise.

Integrates dX = A X dt + sum_j B(j) X dW(j) over many independent paths
with the Euler-Maruyama (strong order 0.5) or Milstein (strong order 1.0)
scheme and records the sample mean and standard error of norm(X_t, p)^l at
evenly spaced checkpoints.  The fitted slope of log-moments against time
(:func:`growth_rate`) is the quantity the stochastic logarithmic norm
bounds, which makes the simulator an end-to-end oracle for the estimators
in :mod:`slognorm.slognorm`.

Paths are simulated in fixed-size blocks, each seeded from (seed, block
index) and reduced in path order, so trajectories are bit-identical for a
given seed regardless of the worker-thread count.  Paths whose norm leaves
[0, 1e150] are flagged as diverged and the affected checkpoints report an
infinite moment rather than raising.

Single-step updates (:func:`em_step`, :func:`milstein_step`) are exposed
both for convergence testing against exact solutions and because the
ensemble engine is built on exactly the same kernels.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Union

import numpy as np

from .matcore import check_p, vector_norm
from .slognorm import SdeSystem, sample_wiener_increments

__all__ = [
    "SimConfig",
    "MomentTrajectory",
    "DIVERGENCE_THRESHOLD",
    "em_step",
    "milstein_step",
    "simulate_moments",
    "growth_rate",
    "milstein_R",
    "milstein_ms_stable",
    "em_2x2_ms_stable",
]

#: paths simulated per RNG block; the unit of deterministic parallelism
_PATH_BLOCK = 4096

#: norm magnitude beyond which a path is flagged as diverged
DIVERGENCE_THRESHOLD = 1e150

_SCHEMES = ("euler_maruyama", "milstein")


@dataclass(frozen=True)
class SimConfig:
    """Ensemble integration controls.

    ``t_end / h`` must be a whole number of steps and ``checkpoints`` must
    divide it; moments are recorded at t = 0 and after every
    steps/checkpoints-th step.
    """

    h: float
    t_end: float
    paths: int
    checkpoints: int = 10
    scheme: str = "milstein"
    seed: int = 42
    p: float = 2
    l: int = 2

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError(f"step size must be positive, got {self.h}")
        if self.t_end <= 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.paths < 1:
            raise ValueError(f"paths must be positive, got {self.paths}")
        if self.scheme not in _SCHEMES:
            raise ValueError(f"scheme must be one of {_SCHEMES}, got {self.scheme!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "p", check_p(self.p))
        if not isinstance(self.l, (int, np.integer)) or self.l < 1:
            raise ValueError(f"l must be a positive integer, got {self.l!r}")
        steps = self.steps  # validates integrality
        if self.checkpoints < 1 or steps % self.checkpoints != 0:
            raise ValueError(
                f"checkpoints ({self.checkpoints}) must divide the step count ({steps})"
            )

    @property
    def steps(self) -> int:
        """Total step count t_end / h, validated to be a whole number."""
        ratio = self.t_end / self.h
        steps = int(round(ratio))
        if steps < 1 or abs(ratio - steps) > 1e-9 * max(1.0, ratio):
            raise ValueError(
                f"t_end/h = {ratio!r} is not a whole number of steps"
            )
        return steps


@dataclass(frozen=True)
class MomentTrajectory:
    """Estimated E norm(X_t, p)^l at the checkpoint times.

    ``moments[0]`` is the exact deterministic value norm(x0, p)^l.  A
    checkpoint where any path has diverged reports infinite moment and
    standard error, with the offending path count in ``diverged``.
    """

    times: np.ndarray
    moments: np.ndarray
    std_errors: np.ndarray
    paths: int
    config: SimConfig
    diverged: np.ndarray

    def __post_init__(self):
        if not (len(self.times) == len(self.moments) == len(self.std_errors) == len(self.diverged)):
            raise ValueError("times/moments/std_errors/diverged must have equal length")

    def write_csv(self, dest: Union[str, "io.TextIOBase", IO[str]]) -> None:
        """Write columns time, moment, stderr, paths, scheme; one row per checkpoint."""
        if isinstance(dest, (str, bytes)) or hasattr(dest, "__fspath__"):
            with open(dest, "w", newline="") as fh:
                self._write_rows(fh)
        else:
            self._write_rows(dest)

    def _write_rows(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["time", "moment", "stderr", "paths", "scheme"])
        for t, mom, se in zip(self.times, self.moments, self.std_errors):
            writer.writerow([repr(float(t)), repr(float(mom)), repr(float(se)),
                             self.paths, self.config.scheme])


def _step_matrices(system: SdeSystem, milstein: bool):
    """(A, stacked B, stacked B(i)B(j) or None) ready for `_apply_step`."""
    a, bs = system.arrays()
    pairs = np.einsum("iab,jbc->ijac", bs, bs) if milstein and system.m else None
    return a, bs, pairs


def _apply_step(x, a, bs, pairs, dw, imat, h: float):
    """One explicit step x + (hA + sum dW B + sum I BB) x, batched over
    any leading axes shared by x, dw, and imat."""
    update = h * a + np.tensordot(dw, bs, axes=(-1, 0))
    if pairs is not None and imat is not None and pairs.size:
        update = update + np.einsum("...ij,ijab->...ab", imat, pairs)
    return x + np.einsum("...ab,...b->...a", update, x)


def em_step(system: SdeSystem, x, dw, h: float) -> np.ndarray:
    """Euler-Maruyama update x + h A x + sum_j dW(j) B(j) x.

    ``x`` may be a single state (n,) or a batch (..., n); ``dw`` must carry
    matching leading axes with final axis m.
    """
    a, bs, _ = _step_matrices(system, milstein=False)
    x = np.asarray(x)
    dw = np.asarray(dw, dtype=np.float64).reshape(x.shape[:-1] + (system.m,))
    return _apply_step(x, a, bs, None, dw, None, float(h))


def milstein_step(system: SdeSystem, x, dw, iter_ints, h: float) -> np.ndarray:
    """Milstein update: Euler-Maruyama plus sum_ij I_(i,j) B(i) B(j) x.

    ``iter_ints`` are iterated Wiener integrals shaped (..., m, m) and are
    expected to satisfy the sampler symmetry identity
    I_(i,j) + I_(j,i) = dW(i) dW(j) - delta_ij h.
    """
    a, bs, pairs = _step_matrices(system, milstein=True)
    x = np.asarray(x)
    m = system.m
    dw = np.asarray(dw, dtype=np.float64).reshape(x.shape[:-1] + (m,))
    imat = np.asarray(iter_ints, dtype=np.float64).reshape(x.shape[:-1] + (m, m))
    return _apply_step(x, a, bs, pairs, dw, imat, float(h))


def _norm_rows(x: np.ndarray, p) -> np.ndarray:
    """Vector p-norm along the last axis (same arithmetic as vector_norm)."""
    mag = np.abs(x)
    if p == 1:
        return mag.sum(axis=-1)
    if p == math.inf:
        return mag.max(axis=-1)
    return np.sqrt((mag * mag).sum(axis=-1))


def simulate_moments(
    system: SdeSystem, x0, cfg: SimConfig, workers: int = 1
) -> MomentTrajectory:
    """Estimate E norm(X_t, p)^l over an ensemble of independent paths.

    The initial condition is deterministic, so ``moments[0]`` is exact.
    The result is bit-identical for a fixed ``cfg.seed`` at any ``workers``
    count: blocks of paths own independent child seeds and the cross-block
    reduction runs in fixed order.
    """
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    x0 = np.asarray(x0).ravel()
    if x0.shape[0] != system.dim:
        raise ValueError(f"x0 has dimension {x0.shape[0]}, system is {system.dim}")
    start_norm = vector_norm(x0, cfg.p)
    if start_norm == 0.0:
        raise ValueError("x0 must be nonzero")

    steps = cfg.steps
    ncheck = cfg.checkpoints
    stride = steps // ncheck
    m = system.m
    use_milstein = cfg.scheme == "milstein"
    a, bs, pairs = _step_matrices(system, milstein=use_milstein)
    dtype = np.complex128 if (np.iscomplexobj(a) or np.iscomplexobj(x0)) else np.float64
    x0 = x0.astype(dtype)
    a = a.astype(dtype)
    bs = bs.astype(dtype)
    if pairs is not None:
        pairs = pairs.astype(dtype)

    nblocks = -(-cfg.paths // _PATH_BLOCK)
    # per-block partial reductions: sum, sum of squares, diverged count
    sums = np.zeros((nblocks, ncheck))
    sqs = np.zeros((nblocks, ncheck))
    dead = np.zeros((nblocks, ncheck), dtype=np.int64)

    def run(b: int) -> None:
        count = min(_PATH_BLOCK, cfg.paths - b * _PATH_BLOCK)
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(b,)))
        x = np.tile(x0, (count, 1))
        alive = np.ones(count, dtype=bool)
        c = 0
        with np.errstate(over="ignore", invalid="ignore"):
            for step in range(1, steps + 1):
                if use_milstein and m:
                    dw, imat = sample_wiener_increments(rng, count, m, cfg.h)
                else:
                    dw = math.sqrt(cfg.h) * rng.standard_normal((count, m))
                    imat = None
                x = _apply_step(x, a, bs, pairs, dw, imat, cfg.h)
                if step % stride == 0:
                    norms = _norm_rows(x, cfg.p)
                    vals = norms**cfg.l
                    alive &= np.isfinite(vals) & (norms <= DIVERGENCE_THRESHOLD)
                    live_vals = vals[alive]
                    sums[b, c] = live_vals.sum()
                    sqs[b, c] = (live_vals * live_vals).sum()
                    dead[b, c] = count - int(alive.sum())
                    c += 1

    if workers > 1 and nblocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for f in [pool.submit(run, b) for b in range(nblocks)]:
                f.result()
    else:
        for b in range(nblocks):
            run(b)

    total = np.add.reduce(sums, axis=0)
    total_sq = np.add.reduce(sqs, axis=0)
    total_dead = np.add.reduce(dead, axis=0)

    times = np.arange(ncheck + 1, dtype=np.float64) * (stride * cfg.h)
    moments = np.empty(ncheck + 1)
    errors = np.empty(ncheck + 1)
    diverged = np.zeros(ncheck + 1, dtype=np.int64)
    moments[0] = start_norm**cfg.l
    errors[0] = 0.0
    diverged[1:] = total_dead
    for c in range(ncheck):
        if total_dead[c] > 0:
            moments[c + 1] = math.inf
            errors[c + 1] = math.inf
            continue
        mean = total[c] / cfg.paths
        moments[c + 1] = mean
        if cfg.paths > 1:
            var = max(total_sq[c] - cfg.paths * mean * mean, 0.0) / (cfg.paths - 1)
            errors[c + 1] = math.sqrt(var / cfg.paths)
        else:
            errors[c + 1] = 0.0
    for arr in (times, moments, errors, diverged):
        arr.flags.writeable = False
    return MomentTrajectory(
        times=times, moments=moments, std_errors=errors,
        paths=cfg.paths, config=cfg, diverged=diverged,
    )


def growth_rate(traj: MomentTrajectory) -> tuple[float, float]:
    """Least-squares exponential growth rate of the moment trajectory.

    Fits log(moments) against times over the leading run of finite,
    positive moments and returns (slope, slope standard error); the error
    propagates each checkpoint's moment stderr through the logarithm by the
    delta method.  Fewer than three usable checkpoints is an error.
    """
    mom = np.asarray(traj.moments, dtype=np.float64)
    usable = np.isfinite(mom) & (mom > 0.0)
    cut = int(np.argmin(usable)) if not usable.all() else usable.size
    if cut < 3:
        raise ValueError(f"need at least 3 finite positive moments, have {cut}")
    t = np.asarray(traj.times, dtype=np.float64)[:cut]
    y = np.log(mom[:cut])
    y_se = np.asarray(traj.std_errors, dtype=np.float64)[:cut] / mom[:cut]
    tbar = t.mean()
    stt = float(((t - tbar) ** 2).sum())
    coeffs = (t - tbar) / stt
    slope = float(coeffs @ y)
    slope_se = float(np.sqrt(((coeffs * y_se) ** 2).sum()))
    return slope, slope_se


def milstein_R(h: float, lam: complex, mu: complex) -> float:
    """Mean-square stability function of the scalar Milstein scheme:
    R(h) = |1 + h lam|^2 + |h mu^2| + |h^2 mu^4| / 2."""
    if h <= 0:
        raise ValueError(f"step size must be positive, got {h}")
    lam = complex(lam)
    mu = complex(mu)
    return float(
        abs(1.0 + h * lam) ** 2 + abs(h * mu**2) + 0.5 * abs(h**2 * mu**4)
    )


def milstein_ms_stable(h: float, lam: complex, mu: complex) -> bool:
    """True when the scalar Milstein iteration is mean-square stable, R(h) < 1."""
    return milstein_R(h, lam, mu) < 1.0


def em_2x2_ms_stable(h, lam1, lam2, alpha1, beta1, alpha2, beta2) -> bool:
    """Mean-square stability of the Euler-Maruyama iteration on the 2x2
    test system with drift diag(lam1, lam2) and noise rows (alpha_i, beta_i):
    max_i {(1 + lam_i h)^2 + (|alpha_i| + |beta_i|)^2} < 1."""
    if h <= 0:
        raise ValueError(f"step size must be positive, got {h}")
    first = (1.0 + float(lam1) * h) ** 2 + (abs(alpha1) + abs(beta1)) ** 2
    second = (1.0 + float(lam2) * h) ** 2 + (abs(alpha2) + abs(beta2)) ** 2
    return max(first, second) < 1.0
