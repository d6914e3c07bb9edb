"""Concurrence and negativity of the dephased two-spin states.

For the states considered here (``sum_i a_i |ii>`` and Werner mixtures)
the environment only multiplies each coherence ``|ii><jj|`` by a
decoherence factor ``F_ij``, so every measure is a closed-form function
of the moduli ``|F_ij|``.  Negativity is the unnormalized
``sum |negative eigenvalues of rho^T2|`` (1 for a maximally entangled
pair of qutrits).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .decoherence import (
    all_pair_series,
    cutoff_energy,
    default_cutoff,
    factor_modulus,
    uniform_grid,
)
from .spectrum import ChainConfig, branch_lambdas

log = logging.getLogger(__name__)

NORM_TOL = 1e-12
CLAMP = 1e-14


class PureAmplitudes:
    """Normalized amplitudes of ``sum_i a_i |ii>``."""

    def __init__(self, amps):
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        if amps.size < 2:
            raise ValueError("need at least two amplitudes")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"amplitudes not normalized: sum |a|^2 = {norm!r}")
        amps.setflags(write=False)
        self.amps = amps

    @property
    def d(self) -> int:
        return self.amps.size

    @classmethod
    def maximally_entangled(cls, d: int) -> PureAmplitudes:
        return cls(np.full(d, 1.0 / math.sqrt(d)))

    def __repr__(self):
        return f"PureAmplitudes({self.amps.tolist()!r})"


@dataclass(frozen=True)
class WernerParams:
    P: float
    d: int = 2

    def __post_init__(self):
        if not 0.0 <= self.P <= 1.0:
            raise ValueError(f"Werner weight P must lie in [0, 1], got {self.P}")
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")

    @property
    def separable_bound(self) -> float:
        """Largest ``P`` for which the state is separable at every time."""
        return 1.0 / (self.d + 1)


@dataclass(frozen=True, eq=False)
class MeasureSeries:
    times: np.ndarray
    values: np.ndarray
    kind: str
    params: dict = field(default_factory=dict)


def _clamp(x):
    return np.where((x < 0) & (x >= -CLAMP), 0.0, x)


def _check_modulus(F):
    F = np.asarray(F, dtype=float)
    if np.any(F < 0) or np.any(F > 1 + 1e-12):
        raise ValueError("decoherence-factor moduli must lie in [0, 1]")
    return F


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def concurrence_pure(amps, F):
    """``C = 2|a b*| |F|``: initial concurrence times the factor modulus."""
    amps = amps if isinstance(amps, PureAmplitudes) else PureAmplitudes(amps)
    if amps.d != 2:
        raise ValueError("pure-state concurrence needs two amplitudes")
    a, b = amps.amps
    return _scalar(2.0 * abs(a * np.conj(b)) * _check_modulus(F))


def concurrence_werner(P, F):
    """Two-qubit Werner state: ``max(0, P(|F| + 1/2) - 1/2)``."""
    WernerParams(P, 2)
    F = _check_modulus(F)
    return _scalar(_clamp(np.maximum(0.0, P * (F + 0.5) - 0.5)))


def sudden_death_threshold(P: float, d: int = 2) -> float:
    """Factor level ``(1/P - 1)/d`` at and below which the Werner pair is separable.

    A value >= 1 means the state is never entangled.
    """
    if not 0.0 < P <= 1.0:
        raise ValueError(f"threshold needs P in (0, 1], got {P}")
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return (1.0 / P - 1.0) / d


def disentanglement_time_analytic(P: float, gamma: float) -> float:
    """Crossing time of ``exp(-gamma t^4)`` with the qubit threshold."""
    if not 1.0 / 3.0 < P < 1.0:
        raise ValueError(f"analytic disentanglement time needs 1/3 < P < 1, got {P}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return (math.log(2.0 * P / (1.0 - P)) / gamma) ** 0.25


def _max_factor(config, pairs, d, convention):
    def f(t):
        return max(factor_modulus(config, p, t, d, convention) for p in pairs)
    return f


def default_horizon(config: ChainConfig, P: float, d: int = 2) -> float | None:
    """Four times the quartic-law crossing estimate, or None when g = 0."""
    thr = sudden_death_threshold(P, d)
    gamma = 2.0 * cutoff_energy(default_cutoff(config.M), config.L) * config.g**2
    if gamma <= 0 or not 0 < thr < 1:
        return None
    return 4.0 * (math.log(1.0 / thr) / gamma) ** 0.25


def _scan(config, P, d, horizon, points, convention):
    thr = sudden_death_threshold(P, d)
    if thr >= 1.0:
        raise ValueError(f"P={P} is separable for d={d}; no disentanglement time exists")
    if thr == 0.0 or config.g == 0.0:
        return thr, None, None
    if horizon is None:
        horizon = default_horizon(config, P, d)
    pairs = branch_lambdas(config, d).pairs()
    grid = uniform_grid(horizon, points)
    peak = np.max([factor_modulus(config, p, grid, d, convention) for p in pairs], axis=0)
    return thr, grid, peak


def disentanglement_time_numeric(
    config: ChainConfig,
    P: float,
    d: int = 2,
    horizon: float | None = None,
    points: int = 4001,
    convention: str = "atan2",
    xtol: float = 1e-6,
) -> float | None:
    """Earliest time at which every ``|F_ij|`` is at or below the threshold.

    Scans a uniform grid on ``[0, horizon]`` then refines the first crossing
    of ``max_ij |F_ij(t)|`` by bracketing.  Returns None for a pure state,
    for ``g = 0`` or when no crossing happens before the horizon.  Later
    re-entanglement is logged; see :func:`revival_times`.
    """
    thr, grid, peak = _scan(config, P, d, horizon, points, convention)
    if grid is None:
        return None
    below = np.nonzero(peak <= thr)[0]
    if below.size == 0:
        return None
    n = below[0]
    if peak[n] == thr or n == 0:
        t_d = float(grid[n])
    else:
        f = _max_factor(config, branch_lambdas(config, d).pairs(), d, convention)
        t_d = brentq(lambda t: f(t) - thr, grid[n - 1], grid[n], xtol=xtol)
    if np.any(peak[n:] > thr):
        log.info("entanglement revives after t_d=%.6g (P=%g, d=%d)", t_d, P, d)
    return t_d


def revival_times(config, P, d=2, horizon=None, points=4001, convention="atan2") -> list[float]:
    """Grid times at which a dead Werner state becomes entangled again."""
    thr, grid, peak = _scan(config, P, d, horizon, points, convention)
    if grid is None:
        return []
    dead = peak <= thr
    return [float(grid[n]) for n in range(1, grid.size) if dead[n - 1] and not dead[n]]


def negativity_pure(amps, factors):
    """``sum_{i<j} |a_i a_j* F_ij|`` for ``sum_i a_i |ii>``."""
    amps = amps if isinstance(amps, PureAmplitudes) else PureAmplitudes(amps)
    a = amps.amps
    d = amps.d
    factors = [_check_modulus(f) for f in factors]
    if len(factors) != d * (d - 1) // 2:
        raise ValueError(f"need {d * (d - 1) // 2} pair factors for d={d}")
    total = 0.0
    idx = 0
    for i in range(d):
        for j in range(i + 1, d):
            total = total + abs(a[i] * np.conj(a[j])) * factors[idx]
            idx += 1
    return _scalar(total)


def negativity_pure_qutrit(amps, F1, F2, F3):
    """Qutrit pure state; ``F1, F2, F3`` belong to the pairs (0,1), (0,2), (1,2)."""
    amps = amps if isinstance(amps, PureAmplitudes) else PureAmplitudes(amps)
    if amps.d != 3:
        raise ValueError("qutrit negativity needs three amplitudes")
    return negativity_pure(amps, [F1, F2, F3])


def negativity_werner_general(P, d, factors):
    """``(1/d) sum_{i<j} max(0, P(|F_ij| + 1/d) - 1/d)`` for the d-level Werner state.

    ``factors`` is either a sequence in lexicographic pair order or a
    mapping ``{(i, j): |F_ij|}``.
    """
    WernerParams(P, d)
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    if isinstance(factors, dict):
        if set(factors) != set(pairs):
            raise ValueError(f"factor keys must be exactly {pairs}")
        factors = [factors[p] for p in pairs]
    if len(factors) != len(pairs):
        raise ValueError(f"need {len(pairs)} pair factors for d={d}, got {len(factors)}")
    total = 0.0
    for F in factors:
        F = _check_modulus(F)
        total = total + _clamp(np.maximum(0.0, P * (F + 1.0 / d) - 1.0 / d))
    return _scalar(total / d)


def partial_transpose(rho: np.ndarray, dims=None) -> np.ndarray:
    """Transpose on the second factor of a bipartite operator."""
    rho = np.asarray(rho)
    n = rho.shape[0]
    if dims is None:
        d = math.isqrt(n)
        dims = (d, d)
    d1, d2 = dims
    if rho.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"matrix of shape {rho.shape} does not match dims {dims}")
    return rho.reshape(d1, d2, d1, d2).transpose(0, 3, 2, 1).reshape(d1 * d2, d1 * d2)


def negativity_eigen_oracle(rho: np.ndarray, dims=None, tol: float = 1e-10) -> float:
    """Sum of ``|mu|`` over negative eigenvalues of the partial transpose."""
    rho = np.array(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real!r}, not 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix is not positive semidefinite")
    mu = np.linalg.eigvalsh(partial_transpose(rho, dims))
    return float(-np.sum(mu[mu < 0]))


def _state(state, d):
    if state is None:
        return PureAmplitudes.maximally_entangled(d)
    if isinstance(state, (PureAmplitudes, WernerParams)):
        return state
    return PureAmplitudes(state)


def concurrence_series(config, times, state=None, convention="atan2", jobs=1) -> MeasureSeries:
    """Two-qubit concurrence on a time grid; ``state`` defaults to ``(|00> + |11>)/sqrt(2)``."""
    state = _state(state, 2)
    F = all_pair_series(config, times, 2, convention, jobs)[(0, 1)]
    if isinstance(state, WernerParams):
        values = concurrence_werner(state.P, F.values)
        params = {"state": "werner", "P": state.P}
    else:
        values = concurrence_pure(state, F.values)
        params = {"state": "pure", "amps": state.amps.tolist()}
    params.update(L=config.L, lam=config.lam, g=config.g, convention=convention)
    return MeasureSeries(F.times, np.asarray(values, dtype=float), "concurrence", params)


def negativity_series(config, times, d=3, state=None, convention="atan2", jobs=1) -> MeasureSeries:
    """Negativity of the dephased pure (``sum_i a_i |ii>``) or Werner state."""
    state = _state(state, d)
    series = all_pair_series(config, times, d, convention, jobs)
    factors = [series[p].values for p in sorted(series)]
    times = next(iter(series.values())).times
    if isinstance(state, WernerParams):
        if state.d != d:
            raise ValueError(f"Werner state has d={state.d}, expected {d}")
        values = negativity_werner_general(state.P, d, factors)
        params = {"state": "werner", "P": state.P}
    else:
        if state.d != d:
            raise ValueError(f"{state.d} amplitudes given for d={d}")
        values = negativity_pure(state, factors)
        params = {"state": "pure", "amps": state.amps.tolist()}
    params.update(L=config.L, lam=config.lam, g=config.g, d=d, convention=convention)
    return MeasureSeries(times, np.asarray(values, dtype=float), "negativity", params)
