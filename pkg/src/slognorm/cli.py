"""Command-line front end for the stochastic logarithmic norm toolkit.

Usage:
    slognorm lognorm MATRIX.json --p 2
    slognorm slognorm SYSTEM.json --method both --p 2 --l 2
    slognorm simulate SYSTEM.json --h 1e-4 --t-end 0.02 --paths 100000 --out traj.csv
    slognorm table1 --samples 100000
    slognorm examples --which pendulum --b 120

Matrix files are JSON objects {"rows": n, "cols": n, "data": [...]} with
row-major data whose entries are numbers (imaginary part 0) or [re, im]
pairs; system files are {"A": matrix, "B": [matrix, ...]} with optional
"name"/"source" metadata.  The --p flags accept 1, 2 or inf.

Machine-readable reports are printed as JSON on stdout; human-readable
summaries go to stderr.  Exit codes: 0 success (including mathematically
unstable verdicts), 2 input error, 3 numerical failure.  Every numeric
result carries an estimator or bound identifier.  Re-running an identical
invocation reproduces the report byte for byte, and --workers can never
change any numeric output, so execution knobs are left out of the
invocation echo.  The SLOGNORM_SEED environment variable overrides the
default seed; an explicit --seed flag wins over both.  Non-finite numbers
are serialized as the strings "inf", "-inf", "nan".
"""

from __future__ import annotations

import json
import math
from contextlib import contextmanager

import click
import numpy as np

from . import __version__
from .matcore import (
    ComplexMatrix,
    DimensionError,
    EigenConvergenceError,
    NonHermitianError,
    check_p,
)
from .lognorm import mu
from .slognorm import (
    BOUND_APPLICABILITY,
    FP_FLOOR,
    McConfig,
    NuEstimate,
    SdeSystem,
    bounds_report,
    classify,
    nu_definitional,
    nu_direct,
)
from .sdesim import SimConfig, growth_rate, simulate_moments

__all__ = ["cli", "main", "TABLE1_CASES", "TABLE1_REFERENCE"]


class InputError(click.ClickException):
    """A problem with user input (files, flags, preconditions): exit code 2."""

    exit_code = 2


class NumericalError(click.ClickException):
    """A numerical failure inside a computation: exit code 3."""

    exit_code = 3


@contextmanager
def _numeric_guard():
    """Map library exceptions onto the CLI exit-code contract."""
    try:
        yield
    except EigenConvergenceError as exc:
        raise NumericalError(str(exc)) from exc
    except np.linalg.LinAlgError as exc:
        raise NumericalError(str(exc)) from exc
    except (DimensionError, NonHermitianError, ValueError) as exc:
        raise InputError(str(exc)) from exc


# ---------------------------------------------------------------------------
# file ingestion
# ---------------------------------------------------------------------------


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path} is not valid JSON (line {exc.lineno}, column {exc.colno}: {exc.msg})"
        ) from exc


def _entry_to_complex(entry, where: str) -> complex:
    if isinstance(entry, bool):
        raise InputError(f"{where}: expected a number or [re, im] pair, got a boolean")
    if isinstance(entry, (int, float)):
        return complex(entry, 0.0)
    if isinstance(entry, list) and len(entry) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry
    ):
        return complex(entry[0], entry[1])
    raise InputError(f"{where}: expected a number or [re, im] pair, got {entry!r}")


def _matrix_from_obj(obj, where: str) -> ComplexMatrix:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object with rows/cols/data")
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise InputError(f"{where}: missing required field {key!r}")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not isinstance(rows, int) or not isinstance(cols, int):
        raise InputError(f"{where}: rows/cols must be integers")
    if not isinstance(data, list):
        raise InputError(f"{where}.data: expected a list of entries")
    if len(data) != rows * cols:
        raise InputError(
            f"{where}.data: expected {rows * cols} entries for {rows}x{cols}, got {len(data)}"
        )
    entries = [
        _entry_to_complex(entry, f"{where}.data[{i}]") for i, entry in enumerate(data)
    ]
    try:
        return ComplexMatrix(rows, cols, entries)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from exc


def _load_matrix(path: str) -> ComplexMatrix:
    return _matrix_from_obj(_load_json(path), "matrix")


def _load_system(path: str) -> tuple[SdeSystem, dict]:
    obj = _load_json(path)
    if not isinstance(obj, dict) or "A" not in obj:
        raise InputError(f"{path}: expected an object with an 'A' matrix")
    a = _matrix_from_obj(obj["A"], "A")
    raw_b = obj.get("B", [])
    if not isinstance(raw_b, list):
        raise InputError("B: expected a list of matrix objects")
    bs = tuple(_matrix_from_obj(b, f"B[{j}]") for j, b in enumerate(raw_b))
    try:
        system = SdeSystem(a, bs)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    meta = {k: obj[k] for k in ("name", "source") if k in obj and isinstance(obj[k], str)}
    return system, meta


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------


def _jsonable(value):
    """Recursively convert a report to JSON-safe types; non-finite floats
    become the strings "inf"/"-inf"/"nan" so reports stay parseable."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        if math.isfinite(f):
            return f
        if math.isnan(f):
            return "nan"
        return "inf" if f > 0 else "-inf"
    if isinstance(value, complex):
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    return str(value)


def _emit(report: dict, summary: list[str]) -> None:
    click.echo(json.dumps(_jsonable(report), indent=2))
    for line in summary:
        click.echo(line, err=True)


def _p_label(p) -> str:
    return "inf" if p == math.inf else str(int(p))


def _estimate_payload(est: NuEstimate) -> dict:
    payload = {
        "identity": f"nu_p{_p_label(est.p)}_l{est.l}_{est.estimator}",
        "estimator": est.estimator,
        "value": est.value,
        "std_error": est.std_error,
        "samples": est.samples,
        "p": _p_label(est.p),
        "l": est.l,
    }
    if est.h_used is not None:
        payload["h_used"] = list(est.h_used)
        payload["bias_warning"] = est.bias_warning
    return payload


_SEED_OPTION = click.option(
    "--seed",
    type=int,
    default=42,
    show_default=True,
    envvar="SLOGNORM_SEED",
    help="Monte Carlo seed (SLOGNORM_SEED overrides the default; the flag wins).",
)
_WORKERS_OPTION = click.option(
    "--workers",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    help="Worker threads; can never change numeric results.",
)
_ANTITHETIC_OPTION = click.option(
    "--antithetic/--no-antithetic",
    default=True,
    show_default=True,
    help="Pair each draw with its negation to cancel odd-order noise.",
)
_P_OPTION = click.option(
    "--p",
    "p_label",
    type=click.Choice(["1", "2", "inf"]),
    default="2",
    show_default=True,
    help="Which induced norm to use.",
)
_L_OPTION = click.option(
    "--l",
    type=click.IntRange(min=1),
    default=2,
    show_default=True,
    help="Moment order l (mean-square stability is l=2).",
)


@click.group()
@click.version_option(__version__, prog_name="slognorm")
def cli() -> None:
    """Stochastic logarithmic norms, stability bounds, and SDE moment simulation."""


# ---------------------------------------------------------------------------
# lognorm
# ---------------------------------------------------------------------------


@cli.command(name="lognorm")
@click.argument("matrix_file", type=click.Path(exists=True, dir_okay=False))
@_P_OPTION
def cmd_lognorm(matrix_file: str, p_label: str) -> None:
    """Classical logarithmic norm mu_p of a square matrix."""
    matrix = _load_matrix(matrix_file)
    with _numeric_guard():
        p = check_p(p_label)
        value = mu(matrix, p)
    report = {
        "command": "lognorm",
        "version": __version__,
        "invocation": {"matrix_file": matrix_file, "p": p_label},
        "results": {
            "mu": {
                "identity": f"mu_p{p_label}_closed_form",
                "value": value,
                "p": p_label,
            }
        },
        "warnings": [],
    }
    _emit(report, [f"mu_{p_label}(A) = {value:.10g}  ({matrix.rows}x{matrix.cols} matrix)"])


# ---------------------------------------------------------------------------
# slognorm
# ---------------------------------------------------------------------------


@cli.command(name="slognorm")
@click.argument("system_file", type=click.Path(exists=True, dir_okay=False))
@_P_OPTION
@_L_OPTION
@click.option(
    "--method",
    type=click.Choice(["direct", "definitional", "both"]),
    default="both",
    show_default=True,
    help="Which estimator(s) to run.",
)
@click.option("--samples", type=click.IntRange(min=2), default=None,
              help="Monte Carlo samples (default scales with dimension).")
@_SEED_OPTION
@click.option("--h0", type=float, default=None,
              help="Largest step of the definitional h-sequence (default 0.05/max(1, norm(A,p))).")
@click.option("--hsteps", type=click.IntRange(min=2), default=7, show_default=True,
              help="Length of the halving h-sequence.")
@click.option("--tol", type=float, default=0.0, show_default=True,
              help="Stability cut-off added around zero when classifying.")
@_ANTITHETIC_OPTION
@_WORKERS_OPTION
def cmd_slognorm(
    system_file: str,
    p_label: str,
    l: int,
    method: str,
    samples: int | None,
    seed: int,
    h0: float | None,
    hsteps: int,
    tol: float,
    antithetic: bool,
    workers: int,
) -> None:
    """Estimate the stochastic logarithmic norm nu_p^l of a system file.

    Runs the white-noise (direct) estimator, the limit-definition
    (definitional) estimator, or both, plus every applicable closed-form
    bound and a stability classification.  The two estimators measure
    genuinely different functionals on some systems; a warning is emitted
    when they disagree beyond 3 combined standard errors.
    """
    system, meta = _load_system(system_file)
    with _numeric_guard():
        p = check_p(p_label)
        cfg = McConfig(samples=samples, seed=seed, antithetic=antithetic, workers=workers)
        h_seq = None
        if h0 is not None:
            if h0 <= 0:
                raise InputError(f"--h0 must be positive, got {h0}")
            h_seq = tuple(h0 * 0.5**k for k in range(hsteps))
        if tol < 0:
            raise InputError(f"--tol must be nonnegative, got {tol}")
        estimates: list[NuEstimate] = []
        if method in ("direct", "both"):
            estimates.append(nu_direct(system, p, l, cfg))
        if method in ("definitional", "both"):
            estimates.append(nu_definitional(system, p, l, h_seq, cfg))
        bounds = bounds_report(system, p, l)

    warnings: list[str] = []
    for est in estimates:
        if est.bias_warning:
            warnings.append(
                f"{est.estimator} estimator: extrapolation residual exceeds 10x the "
                "Monte Carlo error; shrink --h0 for a sharper limit"
            )
    if len(estimates) == 2:
        d, f = estimates
        gap = abs(d.value - f.value)
        window = 3.0 * math.hypot(d.std_error, f.std_error) + FP_FLOOR
        if gap > window:
            warnings.append(
                "direct and definitional estimators disagree beyond 3 combined "
                f"standard errors ({d.value:.6g} vs {f.value:.6g}); they measure "
                "different functionals on such systems (e.g. B = I) and are both reported"
            )

    results = {
        "system": {"dimension": system.dim, "channels": system.m, **meta},
        "estimates": [_estimate_payload(est) for est in estimates],
        "classification": {
            est.estimator: classify(est, tol).value for est in estimates
        },
        "bounds": bounds.items(),
        "bound_applicability": {
            name: BOUND_APPLICABILITY[name] for name in bounds.items()
        },
    }
    report = {
        "command": "slognorm",
        "version": __version__,
        "invocation": {
            "system_file": system_file,
            "p": p_label,
            "l": l,
            "method": method,
            "samples": samples,
            "seed": seed,
            "h0": h0,
            "hsteps": hsteps,
            "tol": tol,
            "antithetic": antithetic,
        },
        "results": results,
        "warnings": warnings,
    }
    summary = [
        f"nu_p{p_label}_l{l} ({est.estimator}) = {est.value:.10g} "
        f"+/- {est.std_error:.3g}  [{classify(est, tol).value}]"
        for est in estimates
    ] + [f"warning: {w}" for w in warnings]
    _emit(report, summary)


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def _parse_x0(text: str | None, dim: int) -> np.ndarray:
    if text is None:
        return np.ones(dim)
    parts = [tok.strip() for tok in text.split(",")]
    try:
        values = [complex(tok) for tok in parts if tok]
    except ValueError as exc:
        raise InputError(f"--x0: cannot parse component: {exc}") from exc
    if len(values) != dim:
        raise InputError(f"--x0 has {len(values)} components, system dimension is {dim}")
    arr = np.asarray(values, dtype=np.complex128)
    if not np.any(arr.imag):
        return arr.real.copy()
    return arr


@cli.command(name="simulate")
@click.argument("system_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--x0", type=str, default=None,
              help="Comma-separated initial state (default: all ones).")
@click.option("--h", type=float, default=0.01, show_default=True, help="Step size.")
@click.option("--t-end", type=float, default=1.0, show_default=True, help="Final time.")
@click.option("--paths", type=click.IntRange(min=1), default=10000, show_default=True,
              help="Ensemble size.")
@click.option("--checkpoints", type=click.IntRange(min=1), default=10, show_default=True,
              help="Number of moment checkpoints (must divide the step count).")
@click.option("--scheme", type=click.Choice(["euler_maruyama", "milstein"]),
              default="milstein", show_default=True)
@_P_OPTION
@_L_OPTION
@_SEED_OPTION
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the trajectory as CSV (time, moment, stderr, paths, scheme).")
@_WORKERS_OPTION
def cmd_simulate(
    system_file: str,
    x0: str | None,
    h: float,
    t_end: float,
    paths: int,
    checkpoints: int,
    scheme: str,
    p_label: str,
    l: int,
    seed: int,
    out: str | None,
    workers: int,
) -> None:
    """Simulate E norm(X_t, p)^l over an ensemble and fit its growth rate."""
    system, meta = _load_system(system_file)
    with _numeric_guard():
        cfg = SimConfig(
            h=h, t_end=t_end, paths=paths, checkpoints=checkpoints,
            scheme=scheme, seed=seed, p=check_p(p_label), l=l,
        )
        start = _parse_x0(x0, system.dim)
        traj = simulate_moments(system, start, cfg, workers=workers)

    warnings: list[str] = []
    diverged_total = int(traj.diverged[-1])
    if diverged_total > 0:
        warnings.append(
            f"{diverged_total} of {paths} paths diverged (norm beyond 1e150); "
            "affected checkpoints report infinite moments"
        )
    rate_payload = None
    try:
        rate, rate_se = growth_rate(traj)
        rate_payload = {
            "identity": "ols_log_moment_slope",
            "value": rate,
            "std_error": rate_se,
        }
    except ValueError as exc:
        warnings.append(f"growth rate not fitted: {exc}")

    if out is not None:
        traj.write_csv(out)

    results = {
        "system": {"dimension": system.dim, "channels": system.m, **meta},
        "trajectory": {
            "identity": f"mean_norm_p{p_label}_power{l}",
            "times": list(traj.times),
            "moments": list(traj.moments),
            "std_errors": list(traj.std_errors),
            "diverged": [int(v) for v in traj.diverged],
        },
        "growth_rate": rate_payload,
        "csv_path": out,
    }
    report = {
        "command": "simulate",
        "version": __version__,
        "invocation": {
            "system_file": system_file,
            "x0": x0,
            "h": h,
            "t_end": t_end,
            "paths": paths,
            "checkpoints": checkpoints,
            "scheme": scheme,
            "p": p_label,
            "l": l,
            "seed": seed,
            "out": out,
        },
        "results": results,
        "warnings": warnings,
    }
    summary = []
    if rate_payload is not None:
        summary.append(
            f"fitted growth rate of E||X||_{p_label}^{l}: "
            f"{rate_payload['value']:.6g} +/- {rate_payload['std_error']:.3g}"
        )
    summary.extend(f"warning: {w}" for w in warnings)
    if out is not None:
        summary.append(f"trajectory written to {out}")
    _emit(report, summary)


# ---------------------------------------------------------------------------
# table1
# ---------------------------------------------------------------------------

_I = 1j

#: benchmark systems (drift, single diffusion) transcribed from the
#: published comparison table; case (h) is regenerated randomly at run time.
TABLE1_CASES: dict[str, dict] = {
    "a": {
        "A": [[-100, 0], [0, -200]],
        "B": [[5, 0], [0, 6]],
        "closed_form": -225.0,
        "annotations": [
            "the reference nu (-104.70) is not reproducible from the white-noise "
            "statistic 2*max(-112.5+5z, -218+6z), which concentrates at -225 "
            "because its second branch is active only for z > 105.5",
        ],
    },
    "b": {"A": [[-100, 0], [200, -200]], "B": [[5, 2], [0, 6]]},
    "c": {"A": [[-100, 20], [0, -200]], "B": [[5, 2], [0, 6]]},
    "d": {
        "A": [[-100 + 20 * _I, 0], [2, -200 + 1 * _I]],
        "B": [[5 + 1 * _I, 0], [2 * _I, -6 - 10 * _I]],
    },
    "e": {"A": [[-100, 20], [7, -200]], "B": [[5, 2], [4, 6]]},
    "f": {
        "A": [[-100]],
        "B": [[10]],
        "closed_form": -300.0,
        "annotations": [
            "reference nu -300.26 reflects sampling error in the original benchmark "
            "run; the statistic 2*(-150+10z) has exact mean -300",
        ],
    },
    "g": {
        "A": None,  # assembled below from the 3x3 blocks
        "B": None,
        "annotations": [
            "neither estimator nor any closed-form bound reproduces this reference "
            "row (+924.53 / -918.52 / +4839.8); the white-noise estimate is near "
            "+747.6 and the tightest printed upper bound evaluates to +938.5",
        ],
    },
    "i": {"A": [[-100, 0], [0, -1]], "B": [[0, 2], [2, 0]]},
}

#: printed reference rows (lower bound, nu, upper bound) per case
TABLE1_REFERENCE: dict[str, tuple[float, float, float]] = {
    "a": (-112.39, -104.70, -40.393),
    "b": (-119.19, -114.68, -31.393),
    "c": (-240.82, -224.15, -153.02),
    "d": (-224.90, -223.54, -59.075),
    "e": (-268.37, -232.32, -121.915),
    "f": (-300.00, -300.26, -100.00),
    "g": (-918.52, 924.53, 4839.8),
    "h": (-2.5191e7, 1.2369e5, 2.5330e7),
    "i": (-6.0000, -5.91409, -2.0000),
}


def _table1_case_g() -> tuple[np.ndarray, np.ndarray]:
    a1 = np.array([[0.1, 4, 20], [0, 0.1, 5], [0, 0, 0.1]])
    a2 = np.array([[-0.2, 3, 100], [0, -0.2, 50], [0, 0, -0.2]])
    b1 = np.array([[2, 30, 10], [0, 2, 50], [0, 0, 2]])
    b2 = np.array([[4, 6, 20], [0, 4, 40], [0, 0, 4]])
    a12 = np.array([
        [2.2857e-2, -2.3547e-2, -6.8279e-2],
        [9.3914e-2, -9.6719e-2, -2.8049e-1],
        [2.8585e-1, -2.9443e-1, -8.5382e-1],
    ])
    b12 = np.array([
        [1.2606e-1, -4.6007e-1, 7.0963e-3],
        [1.8156e-1, -6.6259e-1, 1.0235e-2],
        [1.4481e-1, -5.2845e-1, 8.1625e-3],
    ])
    zero = np.zeros((3, 3))
    a = np.block([[a1, a12], [zero, a2]])
    b = np.block([[b1, b12], [zero, b2]])
    return a, b


def table1_system(case: str, seed: int = 42) -> SdeSystem:
    """Build the benchmark system for one table row.

    Case (h) has no published entries; it is regenerated as 100 * U(0, 1)
    matrices from a child of ``seed``, so it serves as a deterministic
    smoke case rather than a value check.
    """
    if case == "g":
        a, b = _table1_case_g()
    elif case == "h":
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1000,)))
        a = 100.0 * rng.random((100, 100))
        b = 100.0 * rng.random((100, 100))
    else:
        spec = TABLE1_CASES[case]
        a, b = np.array(spec["A"]), np.array(spec["B"])
    return SdeSystem(ComplexMatrix.from_array(a), (ComplexMatrix.from_array(b),))


@cli.command(name="table1")
@_SEED_OPTION
@click.option("--samples", type=click.IntRange(min=2), default=None,
              help="Monte Carlo samples per case (default scales with dimension).")
@_ANTITHETIC_OPTION
@_WORKERS_OPTION
def cmd_table1(seed: int, samples: int | None, antithetic: bool, workers: int) -> None:
    """Reproduce the published nu_2^2 benchmark table with fresh estimates.

    For each case the white-noise estimate, the closed-form bounds, the
    printed reference row, and agreement verdicts are reported.  Rows whose
    reference values are not reproducible from any printed formula carry
    explanatory annotations; case (h) is a randomly regenerated smoke case
    excluded from value checks.
    """
    cases = []
    summary = []
    with _numeric_guard():
        cfg = McConfig(samples=samples, seed=seed, antithetic=antithetic, workers=workers)
        for case in ("a", "b", "c", "d", "e", "f", "g", "h", "i"):
            system = table1_system(case, seed=seed)
            est = nu_direct(system, 2, 2, cfg)
            bounds = bounds_report(system, 2, 2)
            ref_lower, ref_nu, ref_upper = TABLE1_REFERENCE[case]
            payload = {
                "case": case,
                "dimension": system.dim,
                "nu": _estimate_payload(est),
                "classification": classify(est).value,
                "bounds": bounds.items(),
                "reference": {"lower": ref_lower, "nu": ref_nu, "upper": ref_upper},
            }
            annotations = list(TABLE1_CASES.get(case, {}).get("annotations", []))
            if case == "h":
                payload["verdicts"] = None
                annotations.append(
                    "matrices are regenerated as 100*U(0,1) from the run seed; the "
                    "reference row used unpublished draws, so values are not "
                    "comparable (smoke case only)"
                )
                summary.append(
                    f"case (h): nu = {est.value:.6g} +/- {est.std_error:.3g} "
                    "(random regeneration; reference not comparable)"
                )
            else:
                tol = max(0.01 * abs(ref_nu), 3.0 * est.std_error) + FP_FLOOR
                nu_ok = abs(est.value - ref_nu) <= tol
                verdicts = {
                    "nu_matches_reference": nu_ok,
                    "nu_reference_tolerance": tol,
                    "upper_matches_reference": (
                        abs(bounds.mu_upper - ref_upper) <= 0.01 * abs(ref_upper)
                    ),
                    "lower_matches_reference": (
                        abs(bounds.mu_lower - ref_lower) <= 0.01 * abs(ref_lower)
                    ),
                }
                closed = TABLE1_CASES.get(case, {}).get("closed_form")
                if closed is not None:
                    payload["closed_form_value"] = closed
                    verdicts["matches_closed_form"] = (
                        abs(est.value - closed) <= 3.0 * est.std_error + FP_FLOOR
                    )
                payload["verdicts"] = verdicts
                state = "OK" if nu_ok else "MISMATCH"
                summary.append(
                    f"case ({case}): nu = {est.value:.6g} +/- {est.std_error:.3g} "
                    f"(reference {ref_nu:.6g}) {state}"
                )
            payload["annotations"] = annotations
            cases.append(payload)

    report = {
        "command": "table1",
        "version": __version__,
        "invocation": {"seed": seed, "samples": samples, "antithetic": antithetic},
        "results": {"cases": cases},
        "annotations": [
            "the reference Lbound/Ubound columns are not consistently reproduced by "
            "any single printed bound formula; every computed bound is reported "
            "under its own identifier for comparison",
        ],
        "warnings": [],
    }
    _emit(report, summary)


# ---------------------------------------------------------------------------
# examples
# ---------------------------------------------------------------------------


def _folded_normal_mean(c: float, s: float) -> float:
    """E|N(c, s^2)| for s > 0."""
    return s * math.sqrt(2.0 / math.pi) * math.exp(-c * c / (2.0 * s * s)) + c * math.erf(
        c / (s * math.sqrt(2.0))
    )


@cli.command(name="examples")
@click.option(
    "--which",
    type=click.Choice(["pendulum", "nonnormal"]),
    required=True,
    help="Which worked example to evaluate.",
)
@click.option("--g-over-l", type=float, default=10.0, show_default=True,
              help="Pendulum: gravity to length ratio (> 0).")
@click.option("--eps", type=float, default=0.1, show_default=True,
              help="Pendulum: relative noise on the velocity coupling (0 < eps < 1).")
@click.option("--b", type=float, default=None,
              help="Pendulum: noise amplitude (>= 0, default 50); "
                   "nonnormal: drift coupling (default 1).")
@click.option("--sigma2", type=float, default=1.0, show_default=True,
              help="Nonnormal: signed sigma^2 (negative values model imaginary sigma).")
@click.option("--samples", type=click.IntRange(min=2), default=None,
              help="Monte Carlo samples for the cross-check estimate.")
@_SEED_OPTION
@_ANTITHETIC_OPTION
@_WORKERS_OPTION
def cmd_examples(
    which: str,
    g_over_l: float,
    eps: float,
    b: float | None,
    sigma2: float,
    samples: int | None,
    seed: int,
    antithetic: bool,
    workers: int,
) -> None:
    """Worked stability examples with closed-form nu_2^2 oracles.

    pendulum: noisy linearized pendulum with drift [[0, 1], [g/l, 0]] and
    diffusion [[0, eps], [b, 0]]; nu has the closed form E|N(c, s^2)| - eps*b
    with c = 1 + g/l and s = b + eps, so stabilization needs amplitude
    b >= (1 + g/l)/eps.

    nonnormal: drift [[-1, b], [0, -1]], diffusion [[0, sigma], [-sigma, 0]];
    nu = sigma^2 - 2 + |b| exactly, stable iff sigma^2 <= min(2 - b, 2 + b);
    a signed --sigma2 covers the imaginary-sigma regime.
    """
    with _numeric_guard():
        cfg = McConfig(samples=samples, seed=seed, antithetic=antithetic, workers=workers)
    if which == "pendulum":
        amplitude = 50.0 if b is None else b
        if g_over_l <= 0:
            raise InputError(f"--g-over-l must be positive, got {g_over_l}")
        if not 0.0 < eps < 1.0:
            raise InputError(f"--eps must lie in (0, 1), got {eps}")
        if amplitude < 0:
            raise InputError(f"--b must be nonnegative, got {amplitude}")
        c = 1.0 + g_over_l
        s = amplitude + eps
        closed = _folded_normal_mean(c, s) - eps * amplitude
        threshold = c / eps
        system = SdeSystem(
            ComplexMatrix.from_array([[0.0, 1.0], [g_over_l, 0.0]]),
            (ComplexMatrix.from_array([[0.0, eps], [amplitude, 0.0]]),),
        )
        with _numeric_guard():
            est = nu_direct(system, 2, 2, cfg)
        agreement = abs(est.value - closed) <= 3.0 * est.std_error + FP_FLOOR
        results = {
            "parameters": {"g_over_l": g_over_l, "eps": eps, "b": amplitude},
            "nu_closed_form": {
                "identity": "pendulum_folded_normal_mean",
                "value": closed,
            },
            "nu_estimate": _estimate_payload(est),
            "classification": classify(est).value,
            "amplitude_threshold": {
                "identity": "pendulum_necessary_amplitude",
                "value": threshold,
                "note": "mean-square stabilization is impossible for b below this value",
            },
            "estimate_matches_closed_form": agreement,
        }
        summary = [
            f"pendulum: nu = {closed:.10g} (closed form), "
            f"{est.value:.10g} +/- {est.std_error:.3g} (Monte Carlo)",
            f"necessary amplitude b* = {threshold:.10g}; requested b = {amplitude:g}",
        ]
    else:
        coupling = 1.0 if b is None else b
        closed = sigma2 - 2.0 + abs(coupling)
        threshold = min(2.0 - coupling, 2.0 + coupling)
        results = {
            "parameters": {"b": coupling, "sigma2": sigma2},
            "nu_closed_form": {
                "identity": "nonnormal_direct_formula",
                "value": closed,
            },
            "stability_condition": {
                "identity": "nonnormal_sigma2_threshold",
                "value": threshold,
                "satisfied": sigma2 <= threshold,
                "note": "nu <= 0 exactly when sigma^2 <= min(2 - b, 2 + b)",
            },
            "no_real_sigma_stabilizes": threshold < 0,
        }
        summary = [
            f"nonnormal: nu = {closed:.10g} (exact), "
            f"stable iff sigma^2 <= {threshold:.10g}",
        ]
        if threshold < 0:
            summary.append(
                "no real sigma stabilizes this coupling (threshold below zero); "
                "only the signed-sigma2 regime can"
            )
        if sigma2 >= 0:
            sigma = math.sqrt(sigma2)
            system = SdeSystem(
                ComplexMatrix.from_array([[-1.0, coupling], [0.0, -1.0]]),
                (ComplexMatrix.from_array([[0.0, sigma], [-sigma, 0.0]]),),
            )
            with _numeric_guard():
                est = nu_direct(system, 2, 2, cfg)
            results["nu_estimate"] = _estimate_payload(est)
            results["classification"] = classify(est).value
            results["estimate_matches_closed_form"] = (
                abs(est.value - closed) <= 3.0 * est.std_error + FP_FLOOR
            )
            summary.append(
                f"Monte Carlo cross-check: {est.value:.10g} +/- {est.std_error:.3g}"
            )

    report = {
        "command": "examples",
        "version": __version__,
        "invocation": {
            "which": which,
            "g_over_l": g_over_l,
            "eps": eps,
            "b": b,
            "sigma2": sigma2,
            "samples": samples,
            "seed": seed,
            "antithetic": antithetic,
        },
        "results": results,
        "warnings": [],
    }
    _emit(report, summary)


def main() -> None:
    cli(prog_name="slognorm")


if __name__ == "__main__":
    main()
