"""Mode spectrum of the transverse-field Ising environment.

The two-spin system couples to the chain only through the conserved
field ``Lambda = lambda + (g/2)(s1z + s2z)``.  Inside each sector the
chain is a free-fermion model whose even-parity pair modes ``(k, -k)``
each carry a 2x2 pseudospin Hamiltonian ``hz*sz + hy*sy`` with

    hz = -Lambda + 2 cos(2 pi k / L),   hy = -2 sin(2 pi k / L).

Units: hbar = 1 and the Ising exchange is 1.  The critical field is
``Lambda = 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ANGLE_CONVENTIONS = ("atan2", "arcsin")

# Below this frequency a mode is treated as degenerate (theta := 0).
DEGENERATE_OMEGA = 1e-14


@dataclass(frozen=True)
class ChainConfig:
    """Environment chain of ``L`` spins in field ``lam``, coupled with ``g``.

    The pair modes are ``k = 1..M`` with ``M = (L - 1) // 2``.  For odd
    ``L = 2M + 1`` these are all momenta in ``(0, pi)``.  For even ``L`` the
    momentum-``pi`` mode is also dropped; it has ``hy = 0`` and contributes
    a factor of exactly 1 unless the branches straddle ``Lambda = -2``.
    """

    L: int
    lam: float
    g: float

    def __post_init__(self):
        if isinstance(self.L, bool) or int(self.L) != self.L:
            raise ValueError(f"L must be an integer, got {self.L!r}")
        object.__setattr__(self, "L", int(self.L))
        if self.L < 3:
            raise ValueError(f"L must be >= 3, got {self.L}")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "g", float(self.g))
        if not math.isfinite(self.lam):
            raise ValueError(f"lambda must be finite, got {self.lam}")
        if not math.isfinite(self.g) or self.g < 0:
            raise ValueError(f"g must be finite and >= 0, got {self.g}")

    @property
    def M(self) -> int:
        return (self.L - 1) // 2


@dataclass(frozen=True)
class BranchSet:
    """Values of the conserved field on the sectors ``|ii>``, ascending in ``i``."""

    d: int
    lambdas: tuple[float, ...]

    def __len__(self):
        return len(self.lambdas)

    def __getitem__(self, i):
        return self.lambdas[i]

    def pairs(self) -> list[tuple[int, int]]:
        """Index pairs ``(i, j)`` with ``i < j`` in lexicographic order."""
        return [(i, j) for i in range(self.d) for j in range(i + 1, self.d)]


def branch_values(lam: float, g: float, d: int) -> tuple[float, ...]:
    """``Lambda_i = lam + (g/2)(2i + 1 - d)`` for ``i = 0..d-1``.

    Unlike :class:`ChainConfig` this accepts any finite ``g``; a negative
    coupling just reverses the order of the values.
    """
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise ValueError(f"local dimension d must be an integer >= 2, got {d!r}")
    d = int(d)
    return tuple(lam + 0.5 * g * (2 * i + 1 - d) for i in range(d))


def branch_lambdas(config: ChainConfig, d: int) -> BranchSet:
    return BranchSet(d=int(d), lambdas=branch_values(config.lam, config.g, d))


@dataclass(frozen=True, eq=False)
class ModeSpectrum:
    """Per-mode tables for one sector, ``k = 1..M`` (array index ``k - 1``).

    Arrays are made read-only so a spectrum can be shared between workers.
    """

    config: ChainConfig
    Lambda: float
    omega: np.ndarray
    theta: np.ndarray
    hz: np.ndarray
    hy: np.ndarray
    branch: int | None = None
    convention: str = "atan2"
    degenerate: np.ndarray = field(default=None)

    @property
    def M(self) -> int:
        return self.config.M

    @property
    def has_degenerate_modes(self) -> bool:
        return bool(np.any(self.degenerate))


def mode_momenta(L: int) -> np.ndarray:
    """``2 pi k / L`` for ``k = 1..M``; the k = 0 mode never enters |F|."""
    k = np.arange(1, (L - 1) // 2 + 1)
    return 2.0 * np.pi * k / L


def build_spectrum(
    config: ChainConfig,
    Lambda: float,
    branch: int | None = None,
    convention: str = "atan2",
) -> ModeSpectrum:
    """Frequencies ``Omega_k`` and Bogoliubov angles ``theta_k`` for field ``Lambda``.

    ``convention="atan2"`` takes ``theta = atan2(hy, hz)`` so that
    ``Omega*cos(theta) = hz`` holds on every mode.  ``"arcsin"`` reproduces
    ``theta = arcsin(hy / Omega)``, which folds modes with ``hz < 0`` into
    ``(-pi/2, pi/2)``; it is kept only for comparison with that form.
    """
    if convention not in ANGLE_CONVENTIONS:
        raise ValueError(f"unknown angle convention {convention!r}")
    Lambda = float(Lambda)
    if not math.isfinite(Lambda):
        raise ValueError(f"Lambda must be finite, got {Lambda}")

    x = mode_momenta(config.L)
    hz = -Lambda + 2.0 * np.cos(x)
    hy = -2.0 * np.sin(x)
    omega = np.hypot(hz, hy)
    degenerate = omega < DEGENERATE_OMEGA
    safe = np.where(degenerate, 1.0, omega)
    if convention == "atan2":
        theta = np.arctan2(hy, hz)
    else:
        theta = np.arcsin(np.clip(hy / safe, -1.0, 1.0))
    theta = np.where(degenerate, 0.0, theta)

    for a in (omega, theta, hz, hy, degenerate):
        a.setflags(write=False)
    return ModeSpectrum(
        config=config,
        Lambda=Lambda,
        omega=omega,
        theta=theta,
        hz=hz,
        hy=hy,
        branch=branch,
        convention=convention,
        degenerate=degenerate,
    )


def branch_spectra(config: ChainConfig, d: int, convention: str = "atan2") -> list[ModeSpectrum]:
    branches = branch_lambdas(config, d)
    return [build_spectrum(config, lam, branch=i, convention=convention) for i, lam in enumerate(branches)]


def small_k_frequency(Lambda: float) -> float:
    """Long-wavelength limit of ``Omega_k``: ``|2 - Lambda|``."""
    return abs(2.0 - Lambda)
