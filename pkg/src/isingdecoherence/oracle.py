"""Independent reference calculations.

Nothing here uses the trigonometric closed forms.  Pair-mode propagators
are dense matrix exponentials of ``hz*sz + hy*sy`` built straight from
the chain coefficients, so no Bogoliubov angle (and no angle branch
choice) is involved.  Reduced density matrices are assembled explicitly
in the product basis ``|i>|j>`` (row index ``i*d + j``) for eigenvalue
checks of the entanglement measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# Pseudospin vacuum: both fermion modes k, -k empty, sigma_z = -1.
VACUUM = np.array([0.0, 1.0], dtype=complex)


@dataclass(frozen=True)
class ModeHamiltonian:
    """``H_k = hz*sz + hy*sy`` on the even-parity pair space ``{|0>, d_k^+ d_-k^+ |0>}``.

    ``phase0`` is the zero-mode energy; it only rotates the global phase
    of a sector and is dropped from every modulus.
    """

    hz: float
    hy: float
    phase0: float = 0.0

    def matrix(self) -> np.ndarray:
        return self.hz * SIGMA_Z + self.hy * SIGMA_Y


def mode_hamiltonians(L: int, Lambda: float) -> list[ModeHamiltonian]:
    M = (L - 1) // 2
    out = []
    for k in range(1, M + 1):
        x = 2.0 * math.pi * k / L
        out.append(ModeHamiltonian(hz=-Lambda + 2.0 * math.cos(x), hy=-2.0 * math.sin(x),
                                   phase0=1.0 - Lambda / 2.0))
    return out


def _stack(hams) -> np.ndarray:
    hz = np.array([h.hz for h in hams])[:, None, None]
    hy = np.array([h.hy for h in hams])[:, None, None]
    return hz * SIGMA_Z + hy * SIGMA_Y


def mode_propagator(h: ModeHamiltonian, t: float) -> np.ndarray:
    """``exp(-i t H_k)`` by scaling and squaring."""
    return expm(-1j * t * h.matrix())


def oracle_mode_factor(h_i: ModeHamiltonian, h_j: ModeHamiltonian, t: float) -> float:
    """``|<0| U_j^dag U_i |0>|`` for one pair mode."""
    u_i = mode_propagator(h_i, t)
    u_j = mode_propagator(h_j, t)
    return float(abs(VACUUM.conj() @ u_j.conj().T @ u_i @ VACUUM))


def oracle_mode_factors(L: int, Lambda_i: float, Lambda_j: float, t: float) -> np.ndarray:
    """All pair-mode overlaps ``k = 1..M`` at one time, batched through ``expm``."""
    h_i = _stack(mode_hamiltonians(L, Lambda_i))
    h_j = _stack(mode_hamiltonians(L, Lambda_j))
    u_i = expm(-1j * t * h_i)
    u_j = expm(-1j * t * h_j)
    amp = np.einsum("a,kba,kbc,c->k", VACUUM.conj(), u_j.conj(), u_i, VACUUM)
    return np.abs(amp)


def oracle_factor_modulus(L: int, Lambda_i: float, Lambda_j: float, t: float) -> float:
    return float(np.prod(oracle_mode_factors(L, Lambda_i, Lambda_j, t)))


def _pair_matrix(factors, d: int) -> np.ndarray:
    """Symmetric ``d x d`` table with unit diagonal from the ``i < j`` factor list."""
    factors = np.asarray(factors, dtype=complex).reshape(-1)
    n_pairs = d * (d - 1) // 2
    if factors.size != n_pairs:
        raise ValueError(f"need {n_pairs} pair factors for d={d}, got {factors.size}")
    table = np.eye(d, dtype=complex)
    idx = 0
    for i in range(d):
        for j in range(i + 1, d):
            table[i, j] = factors[idx]
            table[j, i] = np.conj(factors[idx])
            idx += 1
    return table


def assemble_reduced_density(state, factors, d: int | None = None) -> np.ndarray:
    """Two-spin reduced state after dephasing by the given factor values.

    ``state`` is a :class:`~isingdecoherence.measures.PureAmplitudes` (or a
    plain amplitude sequence) for ``sum_i a_i |ii>``, or a
    :class:`~isingdecoherence.measures.WernerParams`.  ``factors`` lists
    ``F_ij`` for ``i < j`` in lexicographic order.  Each coherence
    ``|ii><jj|`` picks up ``F_ij``; everything else is untouched.
    """
    from .measures import PureAmplitudes, WernerParams

    if isinstance(state, WernerParams):
        if d is not None and d != state.d:
            raise ValueError(f"dimension mismatch: d={d} but Werner state has d={state.d}")
        d = state.d
        coeff = np.full((d, d), state.P / d, dtype=complex)
        background = (1.0 - state.P) / d**2
    else:
        amps = state.amps if isinstance(state, PureAmplitudes) else PureAmplitudes(state).amps
        if d is not None and d != amps.size:
            raise ValueError(f"dimension mismatch: d={d} but {amps.size} amplitudes")
        d = amps.size
        coeff = np.outer(amps, amps.conj())
        background = 0.0

    coeff = coeff * _pair_matrix(factors, d)
    rho = background * np.eye(d * d, dtype=complex)
    diag = [i * d + i for i in range(d)]
    rho[np.ix_(diag, diag)] += coeff
    return rho


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrence of a two-qubit state from the spin-flipped spectrum."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("Wootters concurrence needs a 4x4 density matrix")
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    r = rho @ yy @ rho.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0.0, None))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def is_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> bool:
    rho = np.asarray(rho)
    return (
        np.max(np.abs(rho - rho.conj().T)) <= tol
        and abs(np.trace(rho) - 1.0) <= tol
        and np.linalg.eigvalsh(rho).min() >= -tol
    )


def random_dephased_state(rng: np.random.Generator, d: int, werner: bool):
    """Draw ``(state, factors, rho)`` with uniform factor moduli, rejecting unphysical sets.

    Independent moduli need not form a positive matrix for ``d >= 3``;
    those draws are discarded.
    """
    from .measures import PureAmplitudes, WernerParams

    while True:
        factors = rng.uniform(0.0, 1.0, d * (d - 1) // 2)
        if werner:
            state = WernerParams(float(rng.uniform(0.0, 1.0)), d)
        else:
            a = rng.normal(size=d) + 1j * rng.normal(size=d)
            state = PureAmplitudes(a / np.linalg.norm(a))
        rho = assemble_reduced_density(state, factors)
        if is_density_matrix(rho):
            return state, factors, rho
