"""Exact pure-dephasing dynamics of the central qubit.

The qubit couples to every bath spin through alpha * sigma^z (x) sum_i
sigma_i^z, which commutes with the bare qubit Hamiltonian, so populations are
frozen and the coherence is modulated by the decoherence function

    Gamma(t) = Z_B(h - 2 i alpha t / beta) / Z_B(h),

a ratio of complex-field to real-field Ising partition sums.  Everything is
evaluated in the interaction picture: the qubit splitting ``omega`` is
recorded in SystemParams but never enters the dynamics.

Gamma is periodic up to a sign, Gamma(t + T) = (-1)^N Gamma(t) with the
recoherence period T = pi / (2 alpha); its modulus has period T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import (
    BathParams,
    _log_power_sums,
    config_energies,
    config_magnetizations,
    log_partition_function,
)
from .errors import InternalConsistencyError

__all__ = [
    "SystemParams",
    "recoherence_period",
    "decoherence_function",
    "loschmidt_amplitude",
    "decoherence_rate",
    "evolve_qubit",
    "kraus_channel",
    "validate_density",
]

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Central qubit parameters.

    alpha : system-bath coupling, restricted to [0, 1]
    a, b  : amplitudes of the initial pure state a|0> + b|1>, normalized
    omega : bare qubit splitting (bookkeeping only, see module docstring)
    """

    alpha: float
    a: complex
    b: complex
    omega: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"|a|^2 + |b|^2 = {norm!r} is not 1 within {_NORM_TOL}")

    @classmethod
    def plus(cls, alpha: float, omega: float = 0.0) -> "SystemParams":
        """|+> = (|0> + |1>)/sqrt(2)."""
        r = 1.0 / math.sqrt(2.0)
        return cls(alpha, complex(r), complex(r), omega)

    @classmethod
    def minus(cls, alpha: float, omega: float = 0.0) -> "SystemParams":
        """|-> = (|0> - |1>)/sqrt(2)."""
        r = 1.0 / math.sqrt(2.0)
        return cls(alpha, complex(r), complex(-r), omega)

    def density(self) -> np.ndarray:
        """Initial density matrix |psi><psi|."""
        vec = np.array([self.a, self.b], dtype=complex)
        return np.outer(vec, vec.conj())


def validate_density(rho: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity of a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > tol or abs(np.trace(rho).imag) > tol:
        raise ValueError("density matrix trace is not 1 within tolerance")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -tol:
        raise ValueError("density matrix has a negative eigenvalue beyond tolerance")
    return rho


def recoherence_period(alpha: float) -> float:
    """Time T = pi / (2 alpha) after which |Gamma| returns to 1."""
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return math.pi / (2.0 * alpha)


def _log_gamma(bath: BathParams, alpha: float, t) -> tuple[np.ndarray, np.ndarray]:
    """(log |Gamma|, arg Gamma) on an array of times."""
    t = np.asarray(t, dtype=float)
    if alpha == 0.0:
        return np.zeros_like(t), np.zeros_like(t)
    if bath.beta == 0.0:
        # uniform weights factorize per site: Gamma = cos^N(2 alpha t)
        c = np.cos(2.0 * alpha * t)
        with np.errstate(divide="ignore"):
            log_abs = bath.n_sites * np.log(np.abs(c))
        phase = np.where(c < 0.0, math.pi * bath.n_sites, 0.0)
        return log_abs, phase
    b_fields = bath.beta * bath.field - 2j * alpha * t
    log_num, phase = _log_power_sums(bath.beta * bath.coupling, b_fields, bath.n_sites)
    return log_num - log_partition_function(bath), phase


def decoherence_function(bath: BathParams, alpha: float, t):
    """Gamma(t); accepts a scalar time or an array of times.

    |Gamma| <= 1 always, Gamma(0) = 1 and Gamma(-t) = conj(Gamma(t)).
    """
    log_abs, phase = _log_gamma(bath, alpha, t)
    out = np.exp(log_abs) * (np.cos(phase) + 1j * np.sin(phase))
    return complex(out) if np.isscalar(t) or np.ndim(t) == 0 else out


def loschmidt_amplitude(bath: BathParams, alpha: float, t):
    """Overlap between the bath state and its field-quenched evolution.

    For this model the amplitude coincides with the decoherence function;
    the alias exists so dynamical-transition workflows read naturally.
    """
    return decoherence_function(bath, alpha, t)


def decoherence_rate(bath: BathParams, alpha: float, t):
    """-log |Gamma(t)|, evaluated in log space so deep minima stay exact.

    Returns +inf where Gamma vanishes.  The modulus is used because it is
    what controls the coherence decay; the phase of Gamma is a reversible
    rotation.
    """
    log_abs, _ = _log_gamma(bath, alpha, t)
    out = -log_abs
    return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out


def evolve_qubit(sys: SystemParams, bath: BathParams, t: float) -> np.ndarray:
    """Reduced qubit state at time t: populations frozen, coherence times Gamma."""
    g = decoherence_function(bath, sys.alpha, float(t))
    return np.array(
        [[abs(sys.a) ** 2, sys.a * np.conj(sys.b) * g],
         [np.conj(sys.a) * sys.b * np.conj(g), abs(sys.b) ** 2]], dtype=complex)


def kraus_channel(sys: SystemParams, bath: BathParams, t: float,
                  completeness_tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Explicit Kraus family of the dephasing channel and its action on rho(0).

    One operator per bath configuration chi,

        K_chi = sqrt(w(chi)) * diag(e^{-i alpha m(chi) t}, e^{+i alpha m(chi) t}),

    with w the Gibbs weight; the family is diagonal because the joint
    propagator never mixes bath configurations.  Returns (kraus_ops, rho_t)
    where kraus_ops has shape (2^N, 2, 2).  Completeness sum K^dag K = 1 is
    verified and an InternalConsistencyError raised if it fails.
    """
    if bath.n_sites > 16:
        raise ValueError(f"kraus_channel enumerates 2^N operators; n_sites={bath.n_sites} > 16")
    log_w = -bath.beta * config_energies(bath) - log_partition_function(bath)
    amp = np.exp(0.5 * log_w)
    m = config_magnetizations(bath.n_sites)
    phase = np.exp(-1j * sys.alpha * m * t)
    ops = np.zeros((amp.size, 2, 2), dtype=complex)
    ops[:, 0, 0] = amp * phase
    ops[:, 1, 1] = amp * np.conj(phase)
    total = np.einsum("kji,kjl->il", ops.conj(), ops)
    defect = float(np.max(np.abs(total - np.eye(2))))
    if defect > completeness_tol:
        raise InternalConsistencyError(
            f"Kraus completeness violated: max |sum K^dag K - 1| = {defect:.3e}")
    rho0 = sys.density()
    rho_t = np.einsum("kab,bc,kdc->ad", ops, rho0, ops.conj())
    return ops, rho_t
