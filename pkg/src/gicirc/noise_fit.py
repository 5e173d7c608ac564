"""Advantage-versus-noise-gain curves and noise-model parameter fitting.

The model ties the lossy-amplifier parameters ``(rho, epsilon2)`` of each
amplifier to observable quantum noise gains: for a target QNG the gain
``kappa`` is recovered by inversion, the nested interferometer is run with
both lossy amplifiers through the covariance engine, and its SNR is divided
by the equal-loss ``g = 0`` MZI SNR at the same input power.  Fitting
minimizes squared dB residuals of that advantage with a derivative-free
simplex search restarted from seeded random points (the inner QNG inversion
makes the objective non-smooth at the no-solution boundary, so gradient
methods are avoided).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import InstabilityError, NoSolutionError
from .interferometers import SisniParams, SqMziParams, engine_report
from .noise_model import NoisyPaParams, kappa_from_qng

__all__ = [
    "FitResult",
    "advantage_vs_qng",
    "fit_noise_model",
    "load_fit_data",
    "DEFAULT_BOUNDS",
]

# (rho_lo, rho_hi), (eps2_lo, eps2_hi)
DEFAULT_BOUNDS = ((0.0, 0.1), (1.0, 1e4))

_RHO_FLOOR = 1e-8  # stands in for rho = 0 in log-space search
_INFEASIBLE = 1e12  # penalty when a data point's QNG is unreachable


@dataclass(frozen=True)
class FitResult:
    """Best-fit noise parameters with residual and convergence metadata.

    ``residual_rms`` is the root-mean-square of the (sigma-weighted) dB
    residuals at the optimum; ``iterations`` counts objective evaluations
    across all restarts and the polish stage.
    """

    rho1: float
    rho2: float
    eps1_sq: float
    eps2_sq: float
    residual_rms: float
    iterations: int
    converged: bool


def _sql_snr(losses, alpha2: float, dphi: float) -> float:
    l_is, _, l_e = losses
    baseline = SqMziParams(alpha=math.sqrt(alpha2), L_i=l_is, L_e=l_e)
    return engine_report(baseline, dphi).snr


def _sisni_snr(
    qng1_db: float,
    qng2_db: float,
    losses,
    noise1,
    noise2,
    alpha2: float,
    dphi: float,
    kappa_cache: dict,
) -> float:
    l_is, l_ii, l_e = losses

    def lookup(qng_db, rho, eps2):
        key = (qng_db, rho, eps2)
        if key not in kappa_cache:
            kappa_cache[key] = kappa_from_qng(qng_db, rho, eps2)
        return kappa_cache[key]

    rho1, eps1 = noise1
    rho2, eps2 = noise2
    pa1 = NoisyPaParams(rho1, lookup(qng1_db, rho1, eps1), eps1)
    pa2 = NoisyPaParams(rho2, lookup(qng2_db, rho2, eps2), eps2)
    params = SisniParams(
        alpha=math.sqrt(alpha2), L_is=l_is, L_ii=l_ii, L_e=l_e
    )
    return engine_report(params, dphi, noisy_pa1=pa1, noisy_pa2=pa2).snr


def advantage_vs_qng(
    qng1_db: float,
    qng2_grid,
    losses,
    noise1,
    noise2,
    *,
    alpha2: float = 36.0,
    dphi: float = 1e-3,
) -> np.ndarray:
    """SNR advantage (dB) over the equal-loss MZI versus downstream QNG.

    Args:
        qng1_db: upstream amplifier quantum noise gain (dB).
        qng2_grid: downstream QNG values (dB) to sweep.
        losses: ``(L_is, L_ii, L_e)`` intensity losses.
        noise1, noise2: ``(rho, epsilon2)`` per amplifier.
        alpha2: bright-port photon number (the advantage is independent of
            it; both SNRs scale linearly).
        dphi: phase excursion for the engine finite difference.

    Returns:
        Advantage in dB at each grid point (positive = better than the MZI).
    """
    grid = np.asarray(qng2_grid, dtype=float)
    base = _sql_snr(losses, alpha2, dphi)
    cache: dict = {}
    out = np.empty(grid.shape)
    for i, q2 in enumerate(grid.flat):
        snr = _sisni_snr(qng1_db, float(q2), losses, noise1, noise2, alpha2, dphi, cache)
        out.flat[i] = 10.0 * math.log10(snr / base)
    return out


def load_fit_data(source) -> list[tuple[float, float, float, float]]:
    """Read advantage measurements from CSV.

    Expects a header row with columns ``qng1_db, qng2_db, advantage_db`` and
    an optional ``sigma_db`` column enabling weighted least squares (missing
    or empty sigmas default to 1).
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8", newline="") as fh:
            text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    required = {"qng1_db", "qng2_db", "advantage_db"}
    if reader.fieldnames is None or not required <= set(reader.fieldnames):
        raise ValueError(
            f"fit data needs columns {sorted(required)} (optional sigma_db); "
            f"got {reader.fieldnames}"
        )
    rows = []
    for rec in reader:
        sigma = rec.get("sigma_db")
        rows.append(
            (
                float(rec["qng1_db"]),
                float(rec["qng2_db"]),
                float(rec["advantage_db"]),
                float(sigma) if sigma not in (None, "") else 1.0,
            )
        )
    return rows


def _normalize_data(data) -> list[tuple[float, float, float, float]]:
    rows = []
    for rec in data:
        rec = tuple(float(v) for v in rec)
        if len(rec) == 3:
            rec = rec + (1.0,)
        if len(rec) != 4:
            raise ValueError(
                f"data rows must be (qng1_db, qng2_db, advantage_db[, sigma_db]), got {rec}"
            )
        rows.append(rec)
    if len(rows) < 4:
        raise ValueError(f"need at least 4 data points, got {len(rows)}")
    if len({r[1] for r in rows}) < 2:
        raise ValueError("data must span at least 2 distinct qng2_db values")
    return rows


def fit_noise_model(
    data,
    losses=(0.16, 0.10, 0.15),
    bounds=DEFAULT_BOUNDS,
    *,
    seed: int = 0,
    restarts: int = 8,
    max_evals: int = 2000,
    alpha2: float = 36.0,
    dphi: float = 1e-3,
) -> FitResult:
    """Fit ``(rho1, rho2, eps1^2, eps2^2)`` to measured advantage data.

    Minimizes the sum of squared (optionally sigma-weighted) dB residuals of
    :func:`advantage_vs_qng` with Nelder-Mead simplex searches started from
    ``restarts`` seeded random points in log-transformed coordinates, then
    polishes the best candidate.  Deterministic for a fixed seed.  Parameter
    proposals for which some data point's QNG is unreachable score infinity,
    which the simplex contracts away from.

    Args:
        data: rows ``(qng1_db, qng2_db, advantage_db[, sigma_db])``; at
            least 4 points spanning at least 2 distinct qng2 values.
        losses: fixed ``(L_is, L_ii, L_e)``.
        bounds: ``((rho_lo, rho_hi), (eps2_lo, eps2_hi))`` box, shared by
            both amplifiers.
        seed: RNG seed for the restart points.
        restarts: number of random starts.
        max_evals: objective-evaluation budget per start (the polish stage
            gets twice this).
    """
    rows = _normalize_data(data)
    (rho_lo, rho_hi), (eps_lo, eps_hi) = bounds
    if not (0.0 <= rho_lo < rho_hi and 1.0 <= eps_lo < eps_hi):
        raise ValueError(f"unusable bounds {bounds}")
    w_lo = math.log10(max(rho_lo, _RHO_FLOOR))
    w_hi = math.log10(rho_hi)
    v_lo = math.log10(eps_lo)
    v_hi = math.log10(eps_hi)
    lo = np.array([w_lo, w_lo, v_lo, v_lo])
    hi = np.array([w_hi, w_hi, v_hi, v_hi])
    box = list(zip(lo, hi))

    base = _sql_snr(losses, alpha2, dphi)
    ln10_10 = 10.0 / math.log(10.0)
    evals = 0

    def objective(z) -> float:
        nonlocal evals
        evals += 1
        rho1, rho2 = 10.0 ** z[0], 10.0 ** z[1]
        eps1, eps2 = 10.0 ** z[2], 10.0 ** z[3]
        cache: dict = {}
        total = 0.0
        try:
            for q1, q2, adv, sigma in rows:
                snr = _sisni_snr(
                    q1, q2, losses, (rho1, eps1), (rho2, eps2), alpha2, dphi, cache
                )
                model = ln10_10 * math.log(snr / base)
                r = (model - adv) / sigma
                total += r * r
        except (NoSolutionError, InstabilityError):
            return _INFEASIBLE
        return total

    rng = np.random.default_rng(seed)
    starts = rng.uniform(lo, hi, size=(restarts, 4))
    best = None
    for z0 in starts:
        res = minimize(
            objective,
            z0,
            method="Nelder-Mead",
            bounds=box,
            options={
                "maxfev": max_evals,
                "xatol": 1e-4,
                "fatol": 1e-10,
                "adaptive": True,
            },
        )
        if best is None or res.fun < best.fun:
            best = res
    polish = minimize(
        objective,
        best.x,
        method="Nelder-Mead",
        bounds=box,
        options={
            "maxfev": 2 * max_evals,
            "xatol": 1e-7,
            "fatol": 1e-16,
            "adaptive": True,
        },
    )
    if polish.fun <= best.fun:
        best = polish
    z = best.x
    return FitResult(
        rho1=10.0 ** z[0],
        rho2=10.0 ** z[1],
        eps1_sq=10.0 ** z[2],
        eps2_sq=10.0 ** z[3],
        residual_rms=math.sqrt(best.fun / len(rows)) if best.fun < _INFEASIBLE else math.inf,
        iterations=evals,
        converged=bool(best.success and best.fun < _INFEASIBLE),
    )
