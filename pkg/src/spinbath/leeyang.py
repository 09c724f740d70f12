"""Lee-Yang zeros of the bath partition function and the critical times of
the decoherence function.

In the fugacity z = e^{-2 beta h} the ring partition function is a degree-N
polynomial with positive coefficients,

    Z_B = e^{beta N h} sum_{n=0}^{N} p_n z^n,

where p_n collects the zero-field Boltzmann weight of all configurations
with exactly n down spins.  For ferromagnetic coupling the N roots lie on
the unit circle, z_n = e^{i theta_n}, and at h = 0 each angle maps to a real
time t_n = theta_n / (4 alpha) at which Gamma vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import BathParams, config_bond_sums
from .dephasing import recoherence_period
from .errors import InternalConsistencyError, NumericError

__all__ = [
    "LeeYangZero",
    "FugacityPolynomial",
    "fugacity_polynomial",
    "zeros_interacting",
    "zeros_numeric",
    "critical_times",
]

_ENUM_LIMIT = 24  # coefficient extraction walks all 2^N configurations


@dataclass(frozen=True)
class LeeYangZero:
    """One zero of the fugacity polynomial.

    value        : the complex fugacity z_n
    index        : position in angle order, starting at 1
    angle        : arg(z_n) folded into [0, 2 pi)
    multiplicity : algebraic multiplicity (N for the degenerate z = -1 case)
    """

    value: complex
    index: int
    angle: float
    multiplicity: int = 1


@dataclass(frozen=True)
class FugacityPolynomial:
    """Coefficients p_0 .. p_N, rescaled so the largest equals 1.

    The represented partition function is
    Z(h) = e^{beta N h} * e^{log_scale} * sum_n coefficients[n] z^n.
    Coefficients are strictly positive and palindromic (p_n = p_{N-n}),
    the latter exactly by construction via the spin-flip symmetry.
    """

    coefficients: np.ndarray
    log_scale: float
    n_sites: int

    def evaluate(self, z: complex) -> complex:
        """sum_n coefficients[n] z^n (the rescaled polynomial)."""
        return complex(np.polyval(self.coefficients[::-1], z))


def _logsumexp(values: np.ndarray) -> float:
    hi = float(np.max(values))
    return hi + math.log(float(np.sum(np.exp(values - hi))))


def fugacity_polynomial(bath: BathParams) -> FugacityPolynomial:
    """Extract p_n by grouping all 2^N configurations by their down-spin count.

    Accumulation runs in log space per class; classes n and N-n are mirror
    images under a global spin flip (which preserves every bond), so only the
    lower half is computed and the rest assigned by symmetry.
    """
    n = bath.n_sites
    if n > _ENUM_LIMIT:
        raise ValueError(f"fugacity polynomial needs 2^N enumeration; n_sites={n} > {_ENUM_LIMIT}")
    log_boltz = bath.beta * bath.coupling * config_bond_sums(n).astype(float)
    down = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)
    log_p = np.empty(n + 1)
    for k in range(n // 2 + 1):
        log_p[k] = _logsumexp(log_boltz[down == k])
        log_p[n - k] = log_p[k]
    scale = float(np.max(log_p))
    return FugacityPolynomial(np.exp(log_p - scale), scale, n)


def _validate_against_polynomial(zeros: list[complex], bath: BathParams,
                                 tol: float = 1e-8) -> None:
    poly = fugacity_polynomial(bath)
    budget = tol * float(np.sum(poly.coefficients))
    bad = [(z, abs(poly.evaluate(z))) for z in zeros if abs(poly.evaluate(z)) > budget]
    if bad:
        detail = ", ".join(f"z={z:.12g} |P(z)|={r:.3e}" for z, r in bad)
        raise InternalConsistencyError(
            f"closed-form roots fail polynomial validation (budget {budget:.3e}): {detail}")


def zeros_interacting(bath: BathParams, validate: bool | None = None) -> list[LeeYangZero]:
    """Closed-form zeros for ferromagnetic coupling, J > 0 and beta > 0.

    With c = e^{-4 beta J} and k_n = pi (2n - 1) / N the two candidate roots
    per mode are w_n +- sqrt(w_n^2 - 1) with w_n = -c + (1 - c) cos k_n.
    Since |w_n| <= 1 the square root is taken in the complex plane, which
    places every root on the unit circle.  Candidates from both signs are
    deduplicated and, when N is small enough to enumerate, each surviving
    root is checked against the fugacity polynomial.
    """
    if bath.coupling <= 0.0:
        raise ValueError(f"closed-form zeros need ferromagnetic coupling, got J={bath.coupling}")
    if bath.beta <= 0.0:
        raise ValueError(f"closed-form zeros need beta > 0, got beta={bath.beta}")
    n = bath.n_sites
    c = math.exp(-4.0 * bath.beta * bath.coupling)
    candidates: list[complex] = []
    for mode in range(1, n + 1):
        w = -c + (1.0 - c) * math.cos(math.pi * (2 * mode - 1) / n)
        root = np.sqrt(complex(w * w - 1.0))
        candidates.extend((w + root, w - root))
    distinct: list[complex] = []
    counts: list[int] = []
    for z in candidates:
        for i, u in enumerate(distinct):
            if abs(z - u) < 1e-10:
                counts[i] += 1
                break
        else:
            distinct.append(z)
            counts.append(1)
    if validate or (validate is None and n <= _ENUM_LIMIT):
        _validate_against_polynomial(distinct, bath)
    zeros = [
        LeeYangZero(z, 0, float(np.angle(z) % (2.0 * math.pi)), max(1, round(cnt / 2)))
        for z, cnt in zip(distinct, counts)
    ]
    zeros.sort(key=lambda zero: zero.angle)
    return [LeeYangZero(z.value, i + 1, z.angle, z.multiplicity) for i, z in enumerate(zeros)]


def zeros_numeric(bath: BathParams) -> list[LeeYangZero]:
    """Roots of the fugacity polynomial via companion-matrix eigenvalues.

    The degenerate case beta * J = 0 collapses to a single root z = -1 of
    multiplicity N (coefficients are exactly binomial); it is returned
    directly because companion-matrix roots of (1 + z)^N scatter over a disk
    of radius ~eps^(1/N) and cannot be matched to 1e-8.
    """
    poly = fugacity_polynomial(bath)
    n = bath.n_sites
    if bath.beta * bath.coupling == 0.0:
        binom = np.array([math.comb(n, k) for k in range(n + 1)], dtype=float)
        if not np.allclose(poly.coefficients * math.comb(n, n // 2), binom, rtol=1e-12, atol=0):
            raise InternalConsistencyError("free-spin coefficients are not binomial")
        return [LeeYangZero(complex(-1.0), 1, math.pi, n)]
    try:
        roots = np.roots(poly.coefficients[::-1])
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"companion-matrix root finding failed for N={n}, "
            f"beta*J={bath.beta * bath.coupling:.6g}: {exc}") from exc
    order = np.argsort(np.angle(roots) % (2.0 * math.pi))
    return [
        LeeYangZero(complex(z), i + 1, float(np.angle(z) % (2.0 * math.pi)))
        for i, z in enumerate(roots[order])
    ]


def critical_times(bath: BathParams, alpha: float) -> list[float]:
    """Real times in [0, T) at which Gamma vanishes, T = pi / (2 alpha).

    Real zeros of Gamma require h = 0 or beta = 0: the zero condition is
    e^{-2 beta h + 4 i alpha t} = z_n, and with the roots on the unit circle
    the modulus matches only when beta * h = 0.  For h = 0 each distinct
    root angle gives t_n = theta_n / (4 alpha); for beta = 0 the uniform
    average cos^N(2 alpha t) vanishes once per period, at t = pi / (4 alpha).
    For h != 0 (and beta > 0) the list is empty.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if bath.beta == 0.0:
        return [math.pi / (4.0 * alpha)]
    if bath.field != 0.0:
        return []
    if bath.coupling < 0.0:
        raise ValueError("critical times are defined for ferromagnetic coupling only")
    if bath.coupling == 0.0:
        zeros = [LeeYangZero(complex(-1.0), 1, math.pi, bath.n_sites)]
    else:
        zeros = zeros_interacting(bath)
    period = recoherence_period(alpha)
    times = sorted(z.angle / (4.0 * alpha) % period for z in zeros)
    out: list[float] = []
    for t in times:
        if not out or t - out[-1] > 1e-12 * period:
            out.append(t)
    return out
