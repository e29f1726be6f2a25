"""Scalar figures of merit: fidelities, populations, photon numbers, entanglement."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .dressed import DressedBasis, dressed_coherent_state
from .hilbert import coherent_state

__all__ = [
    "fidelity",
    "FidelityGap",
    "dressed_vs_bare_gap",
    "excited_probability",
    "photon_number",
    "reduced_qubit",
    "entanglement_entropy",
]


def fidelity(psi: np.ndarray, phi: np.ndarray) -> float:
    """|<psi|phi>|^2; symmetric, insensitive to global phases of either state."""
    if psi.shape != phi.shape:
        raise ValueError(f"dimension mismatch: {psi.shape} vs {phi.shape}")
    return float(abs(np.vdot(psi, phi)) ** 2)


class FidelityGap(NamedTuple):
    f_dressed: float
    f_bare: float
    gap: float


def dressed_vs_bare_gap(
    psi_numeric: np.ndarray,
    alpha_tilde: complex,
    qubit: str,
    basis: DressedBasis,
) -> FidelityGap:
    """Overlap of a numerical state with the dressed coherent state and with the
    bare product state at the same target amplitude; gap = F_dressed - F_bare.

    A positive gap means the entangled dressed description fits the true
    state better than the factorized one.
    """
    f_d = fidelity(psi_numeric, dressed_coherent_state(qubit, alpha_tilde, basis))
    f_b = fidelity(psi_numeric, coherent_state(alpha_tilde, basis.cutoff, qubit))
    return FidelityGap(f_d, f_b, f_d - f_b)


def excited_probability(psi: np.ndarray) -> float:
    """Population of the excited qubit branch, summed over all photon numbers."""
    n_max = psi.shape[0] // 2
    return float(np.sum(np.abs(psi[n_max:]) ** 2))


def photon_number(psi: np.ndarray) -> float:
    """<a'a> of a composite state."""
    n_max = psi.shape[0] // 2
    n = np.arange(n_max, dtype=float)
    p = np.abs(psi) ** 2
    return float(np.dot(n, p[:n_max]) + np.dot(n, p[n_max:]))


def reduced_qubit(psi: np.ndarray) -> np.ndarray:
    """2x2 reduced density matrix of the qubit (cavity traced out); row 0 = |g>."""
    n_max = psi.shape[0] // 2
    block = psi.reshape(2, n_max)
    rho = block @ block.conj().T
    return 0.5 * (rho + rho.conj().T)


def entanglement_entropy(psi: np.ndarray) -> float:
    """Von Neumann entropy of the reduced qubit, in bits; 0 iff the pure state factorizes."""
    evals = np.linalg.eigvalsh(reduced_qubit(psi))
    evals = np.clip(evals.real, 0.0, 1.0)
    nz = evals[evals > 1e-300]
    return max(0.0, float(-np.sum(nz * np.log2(nz))))
