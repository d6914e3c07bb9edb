"""Decoherence-factor moduli ``|F_ij(t)|`` and the small-k cutoff approximations.

``|F_ij(t)| = |<psi_E| U_j^dag U_i |psi_E>|`` with the environment in the
momentum-space vacuum factorizes into one term per pair mode ``k = 1..M``:

    F_k = sqrt(1 - [sin(a) cos(b) sin(th_i) - cos(a) sin(b) sin(th_j)]^2
                 - sin(a)^2 sin(b)^2 sin(th_i - th_j)^2),

where ``a = Omega_k^(i) t`` and ``b = Omega_k^(j) t``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .spectrum import (
    ChainConfig,
    ModeSpectrum,
    branch_lambdas,
    build_spectrum,
    small_k_frequency,
)

# Radicands in [-RADICAND_SLACK, 0) are roundoff; anything below is a bug.
RADICAND_SLACK = 1e-12
# Switch to log-space accumulation when a mode factor drops below this.
UNDERFLOW_GUARD = 1e-8
SINGULAR_FREQUENCY = 1e-12
_CHUNK = 256


class NumericalError(ArithmeticError):
    """A closed-form evaluation left its mathematically allowed range."""


class SingularApproximationError(ArithmeticError):
    """The small-k approximation is undefined for a branch at the critical field."""


@dataclass(frozen=True, eq=False)
class FactorSeries:
    times: np.ndarray
    values: np.ndarray
    branch_pair: tuple[int, int]
    config: ChainConfig
    d: int = 2
    convention: str = "atan2"


@dataclass(frozen=True)
class ApproxParams:
    Kc: int
    E_Kc: float
    gamma: float
    Gamma: float


@lru_cache(maxsize=256)
def _spectrum(config: ChainConfig, Lambda: float, convention: str) -> ModeSpectrum:
    return build_spectrum(config, Lambda, convention=convention)


def pair_spectra(config, pair, d=2, convention="atan2"):
    branches = branch_lambdas(config, d)
    i, j = pair
    if not (0 <= i < d and 0 <= j < d):
        raise ValueError(f"branch pair {pair} out of range for d={d}")
    return _spectrum(config, branches[i], convention), _spectrum(config, branches[j], convention)


def _mode_factor_table(spec_i: ModeSpectrum, spec_j: ModeSpectrum, t, kmax=None):
    """Mode factors with shape ``t.shape + (kmax,)``."""
    if spec_i.config.L != spec_j.config.L:
        raise ValueError("spectra belong to chains of different length")
    kmax = spec_i.M if kmax is None else kmax
    t = np.asarray(t, dtype=float)[..., None]
    om_i, om_j = spec_i.omega[:kmax], spec_j.omega[:kmax]
    th_i, th_j = spec_i.theta[:kmax], spec_j.theta[:kmax]

    sa, ca = np.sin(om_i * t), np.cos(om_i * t)
    sb, cb = np.sin(om_j * t), np.cos(om_j * t)
    bracket = sa * cb * np.sin(th_i) - ca * sb * np.sin(th_j)
    cross = sa * sb * np.sin(th_i - th_j)
    return _root(1.0 - bracket**2 - cross**2)


def _root(radicand):
    worst = np.min(radicand, initial=0.0)
    if worst < -RADICAND_SLACK:
        raise NumericalError(f"negative mode-factor radicand {worst:.3e}")
    return np.sqrt(np.clip(radicand, 0.0, None))


def _reduce_modes(factors: np.ndarray) -> np.ndarray:
    # Strict left-to-right product in ascending k, so results do not depend
    # on how the time grid was chunked.
    out = np.multiply.accumulate(factors, axis=-1)[..., -1]
    tiny = (factors < UNDERFLOW_GUARD).any(axis=-1)
    if np.any(tiny):
        with np.errstate(divide="ignore"):
            logs = np.log(factors[tiny]).sum(axis=-1)
        out = np.array(out, copy=True)
        out[tiny] = np.exp(logs)
    return out


def mode_factor(spec_i: ModeSpectrum, spec_j: ModeSpectrum, k: int, t: float) -> float:
    """The single factor ``F_k`` for mode ``k`` (1-based)."""
    if not 1 <= k <= spec_i.M:
        raise ValueError(f"mode index k={k} outside 1..{spec_i.M}")
    return float(_mode_factor_table(spec_i, spec_j, t)[..., k - 1])


def mode_factors(spec_i: ModeSpectrum, spec_j: ModeSpectrum, t) -> np.ndarray:
    """All ``F_k``, ``k = 1..M``, at time(s) ``t``."""
    return _mode_factor_table(spec_i, spec_j, t)


def spectra_modulus(spec_i: ModeSpectrum, spec_j: ModeSpectrum, t, kmax=None):
    """Product of the first ``kmax`` mode factors (all modes by default)."""
    t = np.asarray(t, dtype=float)
    if t.ndim == 0:
        return float(_reduce_modes(_mode_factor_table(spec_i, spec_j, t, kmax)))
    out = np.empty(t.shape)
    flat_t, flat_out = t.reshape(-1), out.reshape(-1)
    for start in range(0, flat_t.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        flat_out[sl] = _reduce_modes(_mode_factor_table(spec_i, spec_j, flat_t[sl], kmax))
    return out


def factor_modulus(config: ChainConfig, pair=(0, 1), t=0.0, d=2, convention="atan2"):
    """``|F_ij(t)|`` for the branch pair ``(i, j)`` of the ``d``-level branch set."""
    spec_i, spec_j = pair_spectra(config, pair, d, convention)
    return spectra_modulus(spec_i, spec_j, t)


def check_time_grid(times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("time grid must be a non-empty 1-D sequence")
    if times[0] != 0.0:
        raise ValueError("time grid must start at t = 0")
    if not np.all(np.isfinite(times)) or np.any(np.diff(times) <= 0):
        raise ValueError("time grid must be finite and strictly increasing")
    return times


def uniform_grid(tmax: float, points: int = 500) -> np.ndarray:
    if points < 1 or not tmax > 0:
        raise ValueError("need points >= 1 and tmax > 0")
    if points == 1:
        return np.zeros(1)
    return np.linspace(0.0, tmax, points)


def _series_values(spec_i, spec_j, times, jobs):
    if jobs <= 1 or times.size <= _CHUNK:
        values = spectra_modulus(spec_i, spec_j, times)
    else:
        chunks = [times[s:s + _CHUNK] for s in range(0, times.size, _CHUNK)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda c: spectra_modulus(spec_i, spec_j, c), chunks))
        values = np.concatenate(parts)
    values = np.clip(values, 0.0, 1.0)
    values[times == 0.0] = 1.0
    return values


def factor_series(config, pair=(0, 1), times=None, d=2, convention="atan2", jobs=1) -> FactorSeries:
    """Sample ``|F_ij|`` on a grid that starts at 0.

    With ``jobs > 1`` chunks of the grid are evaluated concurrently; the
    output is identical to the serial result.
    """
    times = check_time_grid(uniform_grid(20.0) if times is None else times)
    spec_i, spec_j = pair_spectra(config, pair, d, convention)
    values = _series_values(spec_i, spec_j, times, jobs)
    return FactorSeries(times=times, values=values, branch_pair=tuple(pair), config=config,
                        d=d, convention=convention)


def all_pair_series(config, times, d, convention="atan2", jobs=1) -> dict[tuple[int, int], FactorSeries]:
    branches = branch_lambdas(config, d)
    return {p: factor_series(config, p, times, d, convention, jobs) for p in branches.pairs()}


def partial_product(config, pair=(0, 1), Kc=1, t=0.0, d=2, convention="atan2"):
    """Cutoff product over modes ``k = 1..Kc``; never smaller than the full product."""
    if isinstance(Kc, bool) or int(Kc) != Kc or not 1 <= Kc <= config.M:
        raise ValueError(f"Kc must be an integer in 1..{config.M}, got {Kc!r}")
    spec_i, spec_j = pair_spectra(config, pair, d, convention)
    return spectra_modulus(spec_i, spec_j, t, kmax=int(Kc))


def cutoff_energy(Kc: int, L: int) -> float:
    """``E(Kc) = (2 pi / L)^2 * sum_{k<=Kc} k^2``."""
    if Kc < 1 or L < 3:
        raise ValueError(f"need Kc >= 1 and L >= 3, got Kc={Kc}, L={L}")
    return 4.0 * math.pi**2 * Kc * (Kc + 1) * (2 * Kc + 1) / (6.0 * L**2)


def default_cutoff(M: int) -> int:
    return min(M, math.ceil(0.1 * M))


def partial_sum_S(config: ChainConfig, Lambda_i: float, Lambda_j: float, Kc: int, t):
    """Small-k estimate of ``ln |F|_c`` (uses ln(1-x) ~ -x and Omega_k ~ |2 - Lambda|)."""
    if not 1 <= Kc <= config.M:
        raise ValueError(f"Kc must lie in 1..{config.M}, got {Kc}")
    wi, wj = small_k_frequency(Lambda_i), small_k_frequency(Lambda_j)
    if wi < SINGULAR_FREQUENCY or wj < SINGULAR_FREQUENCY:
        raise SingularApproximationError(
            "small-k approximation is singular for a branch at Lambda = 2; "
            "use the exact mode product instead"
        )
    t = np.asarray(t, dtype=float)
    si, ci = np.sin(wi * t), np.cos(wi * t)
    sj, cj = np.sin(wj * t), np.cos(wj * t)
    brace = (Lambda_i - Lambda_j) ** 2 * si**2 * sj**2 + (si * cj * wj - sj * ci * wi) ** 2
    S = -2.0 * cutoff_energy(Kc, config.L) * brace / (wi**2 * wj**2)
    return float(S) if S.ndim == 0 else S


def short_time_rate(spec_i: ModeSpectrum, spec_j: ModeSpectrum) -> float:
    """Coefficient ``Gamma`` of the leading ``exp(-Gamma t^4)`` behaviour of ``|F_ij|``."""
    s = np.sin(spec_i.theta - spec_j.theta)
    return 0.5 * float(np.sum(s**2 * spec_i.omega**2 * spec_j.omega**2))


def quartic_rates(config: ChainConfig, Kc: int | None = None, convention="atan2") -> ApproxParams:
    """Cutoff rate ``gamma = 2 E(Kc) g^2`` and short-time rate ``Gamma`` for the qubit pair."""
    Kc = default_cutoff(config.M) if Kc is None else Kc
    if not 1 <= Kc <= config.M:
        raise ValueError(f"Kc must lie in 1..{config.M}, got {Kc}")
    E = cutoff_energy(Kc, config.L)
    spec_0, spec_1 = pair_spectra(config, (0, 1), 2, convention)
    return ApproxParams(Kc=Kc, E_Kc=E, gamma=2.0 * E * config.g**2, Gamma=short_time_rate(spec_0, spec_1))
