"""Dressed eigenstates of the coupled system and dressed coherent states.

The doublet (|g,n>, |e,n-1>) mixes with angle theta_n.  Two variants are
carried side by side so that errors from truncating the mixing angle can be
separated from Fock-space truncation:

* ``exact``:       theta_n = arctan(2*lam*sqrt(n)) / 2   (true eigenbasis)
* ``first_order``: theta_n = lam*sqrt(n)                 (what U_D^dag produces)

Index bookkeeping for the excited branch: the state written here as
``dressed e, n`` is cos(theta_{n+1}) |e,n> + sin(theta_{n+1}) |g,n+1>, i.e. the
partner lives one cavity level up.  This is the one place where an off-by-one
slips in easily; tests pin it against direct diagonalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hilbert import (
    CutoffError,
    FockCutoff,
    SystemParams,
    poisson_amplitudes,
    poisson_tail,
    required_cutoff,
)

__all__ = [
    "DressedBasis",
    "dressed_basis",
    "mixing_angle",
    "dressed_state",
    "dressed_coherent_state",
    "effective_qubit_state",
    "effective_drive_strength",
]

VARIANTS = ("exact", "first_order")


def mixing_angle(n: int, lam: float, variant: str = "exact") -> float:
    """Doublet mixing angle theta_n; theta_0 = 0 (the dark state has no partner)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 0.0
    if variant == "exact":
        return 0.5 * math.atan(2.0 * lam * math.sqrt(n))
    if variant == "first_order":
        return lam * math.sqrt(n)
    raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


@dataclass(frozen=True, eq=False)
class DressedBasis:
    """Mixing angles theta_n for n = 0..n_max-1 at fixed parameters and variant."""

    params: SystemParams
    cutoff: FockCutoff
    variant: str
    angles: np.ndarray = field(repr=False)

    @property
    def n_max(self) -> int:
        return self.cutoff.n_max


def dressed_basis(params: SystemParams, cutoff: FockCutoff, variant: str = "exact") -> DressedBasis:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    angles = np.array([mixing_angle(n, params.lam, variant) for n in range(cutoff.n_max)])
    return DressedBasis(params=params, cutoff=cutoff, variant=variant, angles=angles)


def dressed_state(qubit: str, n: int, basis: DressedBasis) -> np.ndarray:
    """Dressed eigenstate.

    qubit='g': cos(theta_n)|g,n> - sin(theta_n)|e,n-1>, defined for 0 <= n < n_max.
    qubit='e': cos(theta_{n+1})|e,n> + sin(theta_{n+1})|g,n+1>, needs n+1 < n_max.
    """
    n_max = basis.n_max
    psi = np.zeros(2 * n_max, dtype=complex)
    if qubit == "g":
        if not 0 <= n < n_max:
            raise ValueError(f"Fock index {n} outside truncation 0..{n_max - 1}")
        th = basis.angles[n]
        psi[n] = math.cos(th)
        if n >= 1:
            psi[n_max + n - 1] = -math.sin(th)
    elif qubit == "e":
        if not 0 <= n < n_max - 1:
            raise ValueError(
                f"dressed (e,{n}) needs partner level {n + 1} inside truncation 0..{n_max - 1}"
            )
        th = basis.angles[n + 1]
        psi[n_max + n] = math.cos(th)
        psi[n + 1] = math.sin(th)
    else:
        raise ValueError(f"qubit must be 'g' or 'e', got {qubit!r}")
    return psi


def dressed_coherent_state(qubit: str, alpha: complex, basis: DressedBasis) -> np.ndarray:
    """Poisson-weighted superposition of dressed states, normalized.

    The excited branch puts weight on partner levels n+1, so it needs one
    extra level of headroom over the plain coherent-state rule.
    """
    n_max = basis.n_max
    cos_t = np.cos(basis.angles)
    sin_t = np.sin(basis.angles)
    psi = np.zeros(2 * n_max, dtype=complex)
    if qubit == "g":
        if poisson_tail(alpha, n_max) >= 1e-10:
            raise CutoffError(
                f"truncation leak for |alpha|={abs(alpha):.3g}: need n_max >= "
                f"{required_cutoff(alpha)}, got {n_max}"
            )
        amps = poisson_amplitudes(alpha, n_max)
        psi[:n_max] = amps * cos_t
        psi[n_max : 2 * n_max - 1] -= (amps * sin_t)[1:]
    elif qubit == "e":
        if poisson_tail(alpha, n_max - 1) >= 1e-10:
            raise CutoffError(
                f"truncation leak for |alpha|={abs(alpha):.3g} (e branch needs one "
                f"level of headroom): need n_max >= {required_cutoff(alpha) + 1}, got {n_max}"
            )
        amps = poisson_amplitudes(alpha, n_max - 1)
        psi[n_max : 2 * n_max - 1] = amps * cos_t[1:]
        psi[1:n_max] = amps * sin_t[1:]
    else:
        raise ValueError(f"qubit must be 'g' or 'e', got {qubit!r}")
    return psi / np.linalg.norm(psi)


def effective_qubit_state(beta: complex, lam: float) -> tuple[complex, complex]:
    """Reduced-qubit approximation (c_g, c_e) = (1, -lam*beta)/sqrt(1+lam^2|beta|^2).

    Lowest nontrivial order in lam of the ground-branch dressed coherent
    state: the cavity drive effectively tilts the qubit by an angle set by
    the amplitude and phase of beta.  Meaningful for |lam*beta| < 0.5.
    """
    norm = math.sqrt(1.0 + (lam * abs(beta)) ** 2)
    return 1.0 / norm, -lam * beta / norm


def effective_drive_strength(beta: complex, lam: float, duration: float) -> complex:
    """Resonant qubit-drive strength q0 = i beta* lam / T that mimics the tilt.

    Evolving q0 sigma^- + q0* sigma^+ for the drive duration reproduces
    effective_qubit_state up to O(lam^2 |beta|^2) corrections.
    """
    if duration <= 0.0:
        raise ValueError("drive duration must be positive")
    return 1j * np.conj(beta) * lam / duration
