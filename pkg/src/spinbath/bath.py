"""Thermal Ising ring bath: configurations, energies, Gibbs weights and
transfer-matrix partition sums.

The bath is a periodic chain of N spin-1/2 sites with nearest-neighbour
coupling J and a longitudinal field h (units k_B = hbar = 1),

    E(chi) = -J sum_i sigma_i sigma_{i+1} - h sum_i sigma_i,   sigma_{N+1} = sigma_1.

Partition sums are evaluated from the two eigenvalues of the 2x2 transfer
matrix and carried in (log magnitude, phase) form so that large beta*N never
overflows.  The field argument may be complex; that is what turns the
partition function into the qubit decoherence function elsewhere in the
package.  Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

__all__ = [
    "BathParams",
    "SpinConfig",
    "LogComplex",
    "energy",
    "transfer_matrix",
    "log_partition_function",
    "log_complex_partition_function",
    "gibbs_weight",
    "bath_purity",
    "config_magnetizations",
    "config_bond_sums",
    "config_energies",
]

_LOG2 = math.log(2.0)


class LogComplex(NamedTuple):
    """A complex number stored as (log magnitude, phase in radians)."""

    log_abs: float
    phase: float

    @property
    def value(self) -> complex:
        """Materialize the complex number (may under/overflow for extreme logs)."""
        return complex(math.exp(self.log_abs) * math.cos(self.phase),
                       math.exp(self.log_abs) * math.sin(self.phase))


@dataclass(frozen=True)
class BathParams:
    """Definition of the Ising ring bath.

    coupling : nearest-neighbour bond energy J (ferromagnetic for J > 0)
    field    : longitudinal field h
    beta     : inverse temperature, beta >= 0
    n_sites  : number of spins N >= 1
    boundary : only "periodic" is supported; the closed-form two-eigenvalue
               partition sum is valid for the ring only
    """

    coupling: float
    field: float
    beta: float
    n_sites: int
    boundary: str = "periodic"

    def __post_init__(self) -> None:
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        if not (self.beta >= 0.0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be a finite non-negative real, got {self.beta}")
        for name in ("coupling", "field"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite, got {getattr(self, name)}")
        if self.boundary != "periodic":
            raise ValueError(f"unsupported boundary {self.boundary!r}; only 'periodic'")


@dataclass(frozen=True)
class SpinConfig:
    """One bath microstate.

    Bit i of ``bits`` refers to site i+1; a cleared bit is sigma = +1 and a
    set bit is sigma = -1, so the all-up state is ``bits = 0``.
    """

    bits: int
    n_sites: int

    def __post_init__(self) -> None:
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        if not 0 <= self.bits < (1 << self.n_sites):
            raise ValueError(f"bits {self.bits:#x} out of range for {self.n_sites} sites")

    @classmethod
    def all_up(cls, n_sites: int) -> "SpinConfig":
        return cls(0, n_sites)

    @classmethod
    def from_spins(cls, spins) -> "SpinConfig":
        """Build from an iterable of +-1 values."""
        bits = 0
        count = 0
        for i, s in enumerate(spins):
            if s == -1:
                bits |= 1 << i
            elif s != 1:
                raise ValueError(f"spins must be +-1, got {s}")
            count += 1
        return cls(bits, count)

    def spins(self) -> np.ndarray:
        """Spin values +-1 per site, site 1 first."""
        bit = (self.bits >> np.arange(self.n_sites)) & 1
        return 1 - 2 * bit

    @property
    def magnetization(self) -> int:
        """Total magnetization m = sum_i sigma_i = N - 2 * (number of down spins)."""
        return self.n_sites - 2 * int(self.bits).bit_count()


def energy(cfg: SpinConfig, bath: BathParams) -> float:
    """Classical energy E(chi) of one configuration on the periodic ring."""
    if cfg.n_sites != bath.n_sites:
        raise ValueError(
            f"configuration has {cfg.n_sites} sites but bath has {bath.n_sites}")
    s = cfg.spins()
    bonds = int(np.sum(s * np.roll(s, -1)))
    return -bath.coupling * bonds - bath.field * int(s.sum())


# ---------------------------------------------------------------------------
# transfer matrix
# ---------------------------------------------------------------------------

def transfer_matrix(bath: BathParams, field: complex | None = None) -> np.ndarray:
    """2x2 transfer matrix T[s, s'] = exp(bJ s s' + b h (s + s')/2).

    Row/column index 0 is sigma = +1, index 1 is sigma = -1.  ``field``
    replaces the bath field (it may be complex); the matrix is symmetric and,
    for a real field, has strictly positive entries.  Entries are materialized
    directly, so extreme beta values can overflow; the partition-sum routines
    below use a rescaled internal variant instead.
    """
    h = bath.field if field is None else field
    k = bath.beta * bath.coupling
    b = bath.beta * h
    return np.array(
        [[np.exp(k + b), np.exp(-k)],
         [np.exp(-k), np.exp(k - b)]], dtype=complex)


def _log_power_sums(k_bond: float, b_fields: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """log magnitude and phase of lambda_+^n + lambda_-^n for a batch of fields.

    The transfer matrix for each complex field value b is rescaled by its
    largest entry magnitude before the 2x2 eigenproblem, and the dominant
    eigenvalue (|lambda_+| >= |lambda_-|) is factored out of the power sum,
    so the result is exact in log space for any n.
    """
    b_fields = np.asarray(b_fields, dtype=complex)
    shape = b_fields.shape
    b = b_fields.ravel()
    expo = np.stack([k_bond + b, np.full_like(b, -k_bond), k_bond - b], axis=-1)
    shift = np.max(expo.real, axis=-1)
    e_pp, e_pm, e_mm = (np.exp(expo[:, i] - shift) for i in range(3))
    mats = np.empty((b.size, 2, 2), dtype=complex)
    mats[:, 0, 0] = e_pp
    mats[:, 0, 1] = e_pm
    mats[:, 1, 0] = e_pm
    mats[:, 1, 1] = e_mm
    lam = np.linalg.eigvals(mats)
    order = np.argsort(np.abs(lam), axis=-1)
    lam_lo = np.take_along_axis(lam, order[:, :1], axis=-1)[:, 0]
    lam_hi = np.take_along_axis(lam, order[:, 1:], axis=-1)[:, 0]
    ratio = np.divide(lam_lo, lam_hi, out=np.zeros_like(lam_lo), where=lam_hi != 0)
    corr = 1.0 + ratio ** n
    with np.errstate(divide="ignore"):
        log_abs = n * (shift + np.log(np.abs(lam_hi))) + np.log(np.abs(corr))
    phase = n * np.angle(lam_hi) + np.angle(corr)
    return log_abs.reshape(shape), phase.reshape(shape)


def log_partition_function(bath: BathParams) -> float:
    """log Z for the real bath field, via the transfer-matrix eigenvalues.

    beta = 0 is a dedicated limit (uniform weights, Z = 2^N).
    """
    if bath.beta == 0.0:
        return bath.n_sites * _LOG2
    log_abs, _ = _log_power_sums(
        bath.beta * bath.coupling,
        np.array([bath.beta * bath.field], dtype=complex),
        bath.n_sites)
    return float(log_abs[0])


def log_complex_partition_function(bath: BathParams, field: complex) -> LogComplex:
    """Partition sum with the bath field replaced by an arbitrary complex one.

    Returns lambda_+^N + lambda_-^N in (log magnitude, phase) form.  At
    beta = 0 the Boltzmann exponent vanishes for any field, giving Z = 2^N.
    """
    if not (math.isfinite(field.real) and math.isfinite(complex(field).imag)):
        raise ValueError(f"field must be finite, got {field}")
    if bath.beta == 0.0:
        return LogComplex(bath.n_sites * _LOG2, 0.0)
    log_abs, phase = _log_power_sums(
        bath.beta * bath.coupling,
        np.array([bath.beta * field], dtype=complex),
        bath.n_sites)
    return LogComplex(float(log_abs[0]), float(phase[0]))


def gibbs_weight(cfg: SpinConfig, bath: BathParams) -> float:
    """Thermal occupation e^{-beta E(chi)} / Z, evaluated in log space."""
    return math.exp(-bath.beta * energy(cfg, bath) - log_partition_function(bath))


def bath_purity(bath: BathParams) -> float:
    """Tr rho_B^2 = Z(2 beta) / Z(beta)^2, both sides via transfer matrices."""
    doubled = replace(bath, beta=2.0 * bath.beta)
    return math.exp(log_partition_function(doubled) - 2.0 * log_partition_function(bath))


# ---------------------------------------------------------------------------
# full configuration enumeration (vectorized over all 2^N bit patterns)
# ---------------------------------------------------------------------------

def _check_enumerable(n_sites: int, limit: int = 26) -> None:
    if n_sites > limit:
        raise ValueError(f"enumeration over 2^{n_sites} configurations refused (limit {limit})")


def config_magnetizations(n_sites: int) -> np.ndarray:
    """m(chi) for every bit pattern 0 .. 2^N - 1, in index order."""
    _check_enumerable(n_sites)
    x = np.arange(1 << n_sites, dtype=np.uint64)
    return n_sites - 2 * np.bitwise_count(x).astype(np.int64)


def config_bond_sums(n_sites: int) -> np.ndarray:
    """sum_i sigma_i sigma_{i+1} on the ring for every bit pattern."""
    _check_enumerable(n_sites)
    x = np.arange(1 << n_sites, dtype=np.uint64)
    rotated = (x >> np.uint64(1)) | ((x & np.uint64(1)) << np.uint64(n_sites - 1))
    walls = np.bitwise_count(x ^ rotated).astype(np.int64)
    return n_sites - 2 * walls


def config_energies(bath: BathParams) -> np.ndarray:
    """E(chi) for every bit pattern, in index order."""
    return (-bath.coupling * config_bond_sums(bath.n_sites)
            - bath.field * config_magnetizations(bath.n_sites)).astype(float)
