"""Standard-representation Dirac matrices and free-particle kinematics.

Conventions (natural units, hbar = c = 1):
    beta  = diag(I2, -I2)
    alpha_k = offdiag(sigma_k, sigma_k)
    gamma_k = beta alpha_k
    Sigma_k = diag(sigma_k, sigma_k)
    Pi_k    = beta Sigma_k
    rho_k   = 2x2 Pauli set acting on two-component scalar-sector states.

All entries are exact elements of {0, +-1, +-i}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)


def _block(a, b, c, d):
    return np.block([[a, b], [c, d]])


@dataclass(frozen=True)
class GammaSet:
    beta: np.ndarray
    alpha: tuple
    gamma: tuple
    Sigma: tuple
    Pi: tuple
    rho: tuple

    def __post_init__(self):
        for m in (self.beta, *self.alpha, *self.gamma, *self.Sigma, *self.Pi):
            m.setflags(write=False)
        for m in self.rho:
            m.setflags(write=False)


def build_gamma_set() -> GammaSet:
    """Construct the fixed standard-representation matrix set."""
    z = np.zeros((2, 2), dtype=complex)
    beta = _block(I2, z, z, -I2)
    alpha = tuple(_block(z, s, s, z) for s in PAULI)
    gamma = tuple(beta @ a for a in alpha)
    sigma_big = tuple(_block(s, z, z, s) for s in PAULI)
    pi = tuple(beta @ s for s in sigma_big)
    return GammaSet(beta=beta, alpha=alpha, gamma=gamma, Sigma=sigma_big, Pi=pi, rho=PAULI)


GAMMA = build_gamma_set()


def energy(p, m: float) -> float:
    """Relativistic energy sqrt(m^2 + |p|^2) of a free particle."""
    if m < 0:
        raise ValueError(f"mass must be non-negative, got {m}")
    p = np.asarray(p, dtype=float)
    return float(np.sqrt(m * m + p @ p))


@dataclass(frozen=True)
class Kinematics:
    """Momentum, mass, and the derived on-shell energy."""

    p: np.ndarray
    m: float
    eps: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float).copy())
        self.p.setflags(write=False)
        object.__setattr__(self, "eps", energy(self.p, self.m))
        residual = abs(self.eps**2 - self.p @ self.p - self.m**2)
        if residual > 1e-12 * max(1.0, self.eps**2):
            raise ValueError(f"mass-shell violation: {residual:.3e}")


def dirac_hamiltonian(p, m: float) -> np.ndarray:
    """H = beta m + alpha . p as a 4x4 matrix at fixed momentum."""
    p = np.asarray(p, dtype=float)
    h = m * GAMMA.beta.copy()
    for k in range(3):
        h += p[k] * GAMMA.alpha[k]
    return h


def fw_hamiltonian(p, m: float) -> np.ndarray:
    """Block-diagonal free Hamiltonian beta sqrt(m^2 + p^2)."""
    return energy(p, m) * GAMMA.beta
