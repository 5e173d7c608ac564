"""Lossy parametric amplifier with thermal auxiliary inputs.

The amplifier couples its two signal modes with factors ``(G_bar, g_bar)``
and leaks in two auxiliary modes with factors ``(G_bar_prime, g_bar_prime)``:

    c = G_bar b + g_bar a^dag + G_bar_prime b0 + g_bar_prime a0^dag
    d = G_bar a + g_bar b^dag + G_bar_prime a0 + g_bar_prime b0^dag

Loss and gain are parametrized by ``rho >= 0`` and ``kappa >= 0`` through

    G_bar = [(1 - rho^2)/4 + kappa^2] / M        g_bar = kappa / M
    G_bar_prime = sqrt(rho) (1 + rho) / (2 M)    g_bar_prime = kappa sqrt(rho) / M

with ``M = (1 + rho)^2/4 - kappa^2 > 0`` (stability).  The auxiliaries are
thermal with quadrature variance ``epsilon2 >= 1``; tracing them out yields
an affine Gaussian channel whose added noise grows with both ``rho`` and
``epsilon2``.  Commutator preservation fixes
``G_bar^2 - g_bar^2 + G_bar_prime^2 - g_bar_prime^2 = 1`` identically, and
``rho = 0`` recovers an ideal (noiseless) amplifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import InstabilityError, NoSolutionError, PhysicalityError
from .states import ElementMap
from .elements import _check_pair, embed_pair, pair_coupling

__all__ = [
    "NoisyPaParams",
    "CouplingFactors",
    "coupling_factors",
    "noisy_pa",
    "quantum_noise_gain",
    "kappa_from_qng",
]


@dataclass(frozen=True)
class NoisyPaParams:
    """Loss ``rho``, gain ``kappa`` and auxiliary variance ``epsilon2``."""

    rho: float
    kappa: float
    epsilon2: float = 1.0

    def __post_init__(self):
        rho = float(self.rho)
        kappa = float(self.kappa)
        epsilon2 = float(self.epsilon2)
        if rho < 0.0:
            raise ValueError(f"loss parameter rho must be >= 0, got {rho}")
        if kappa < 0.0:
            raise ValueError(f"gain parameter kappa must be >= 0, got {kappa}")
        if epsilon2 < 1.0:
            raise PhysicalityError(
                f"auxiliary thermal variance must be >= 1, got {epsilon2}"
            )
        if _stability(rho, kappa) <= 0.0:
            raise InstabilityError(
                f"unstable amplifier: kappa = {kappa} reaches the pole at (1 + rho)/2 = {(1 + rho) / 2}"
            )
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "epsilon2", epsilon2)

    @property
    def stability_margin(self) -> float:
        """``M = (1 + rho)^2/4 - kappa^2``; positive for stable operation."""
        return _stability(self.rho, self.kappa)


def _stability(rho: float, kappa: float) -> float:
    return (1.0 + rho) ** 2 / 4.0 - kappa * kappa


@dataclass(frozen=True)
class CouplingFactors:
    """Signal and auxiliary coupling factors of the lossy amplifier."""

    G_bar: float
    g_bar: float
    G_bar_prime: float
    g_bar_prime: float

    def commutator_defect(self) -> float:
        """Deviation of ``G^2 - g^2 + G'^2 - g'^2`` from 1 (analytically zero)."""
        return (
            self.G_bar**2
            - self.g_bar**2
            + self.G_bar_prime**2
            - self.g_bar_prime**2
            - 1.0
        )


def coupling_factors(params: NoisyPaParams) -> CouplingFactors:
    """Evaluate the four coupling factors for given ``(rho, kappa)``."""
    rho, kappa = params.rho, params.kappa
    m = _stability(rho, kappa)
    sqrt_rho = math.sqrt(rho)
    return CouplingFactors(
        G_bar=((1.0 - rho * rho) / 4.0 + kappa * kappa) / m,
        g_bar=kappa / m,
        G_bar_prime=sqrt_rho * (1.0 + rho) / (2.0 * m),
        g_bar_prime=kappa * sqrt_rho / m,
    )


def noisy_pa(pair, params: NoisyPaParams, n_modes: int) -> ElementMap:
    """Gaussian channel of the lossy amplifier on a mode pair.

    The linear part is an ideal-amplifier coupling with ``(G_bar, g_bar)``;
    the traced-out thermal auxiliaries contribute additive noise
    ``epsilon2 * S' S'^T`` where ``S'`` is the same coupling structure built
    from ``(G_bar_prime, g_bar_prime)``.  Physical (completely positive) for
    every ``epsilon2 >= 1``.
    """
    pair = _check_pair(pair, n_modes)
    f = coupling_factors(params)
    linear = embed_pair(pair_coupling(f.G_bar, f.g_bar), pair, n_modes)
    aux = pair_coupling(f.G_bar_prime, f.g_bar_prime)
    noise = embed_pair(params.epsilon2 * (aux @ aux.T), pair, n_modes, base="zeros")
    return ElementMap(linear, noise, np.zeros(2 * n_modes))


def quantum_noise_gain(params: NoisyPaParams) -> float:
    """Vacuum-input output variance of either amplifier mode (linear units).

    Equals ``G_bar^2 + g_bar^2 + epsilon2 (G_bar_prime^2 + g_bar_prime^2)``
    and increases strictly with ``kappa``.
    """
    f = coupling_factors(params)
    return (
        f.G_bar**2
        + f.g_bar**2
        + params.epsilon2 * (f.G_bar_prime**2 + f.g_bar_prime**2)
    )


def kappa_from_qng(qng_db: float, rho: float, epsilon2: float) -> float:
    """Solve for the ``kappa`` that realizes a target quantum noise gain.

    For fixed ``(rho, epsilon2)`` the noise gain increases monotonically from
    its ``kappa = 0`` floor to infinity at the stability pole, so a bracketed
    root search on ``kappa in [0, (1 + rho)/2)`` finds the unique solution.
    Targets below the floor raise :class:`NoSolutionError`.
    """
    qng_db = float(qng_db)
    rho = float(rho)
    epsilon2 = float(epsilon2)
    if qng_db < 0.0:
        raise ValueError(f"quantum noise gain must be >= 0 dB, got {qng_db}")
    target = 10.0 ** (qng_db / 10.0)
    floor = ((1.0 - rho) ** 2 + 4.0 * rho * epsilon2) / (1.0 + rho) ** 2
    if target <= floor:
        if target >= floor - 1e-12:
            return 0.0
        raise NoSolutionError(
            f"QNG {qng_db} dB is unreachable: the kappa = 0 floor for "
            f"rho = {rho}, epsilon2 = {epsilon2} is {10.0 * math.log10(floor):.6g} dB"
        )

    def objective(kappa: float) -> float:
        return quantum_noise_gain(NoisyPaParams(rho, kappa, epsilon2)) - target

    hi = (1.0 + rho) / 2.0 * (1.0 - 1e-13)
    return float(brentq(objective, 0.0, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200))
