"""Non-Markovianity witnesses: trace-distance (BLP) series and the
conditional past-future correlator (CPF).

The BLP witness tracks the trace distance between two evolved probe states;
any increase signals information flowing back from the bath.  For the
canonical |+>, |-> probe pair under pure dephasing the distance equals
|Gamma(t)| identically.

The CPF correlator conditions a three-measurement sequence (x at time 0,
y after an interval t, z after a further interval s, all along the x axis)
on the middle outcome and reports the conditional covariance of the outer
outcomes.  A closed formula in terms of f = Re Gamma exists; the exact
sequence oracle here evaluates the Born-rule probabilities configuration by
configuration and is the ground truth the formula is validated against.
The two agree (for either conditioning outcome) exactly when the state
entering the first measurement carries no x polarization; a fully
x-polarized input makes the first outcome deterministic and the conditional
covariance collapses to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import BathParams, config_energies, config_magnetizations, log_partition_function
from .dephasing import SystemParams, decoherence_function, evolve_qubit, recoherence_period
from .errors import UndefinedConditionalError

__all__ = [
    "WitnessSeries",
    "CPFResult",
    "trace_distance",
    "probe_pair",
    "default_blp_grid",
    "blp_witness_series",
    "cpf_formula",
    "cpf_sequence_distribution",
    "cpf_oracle",
]

_OUTCOMES = {"plus": +1, "minus": -1}


@dataclass(frozen=True)
class WitnessSeries:
    """Trace distance D(t), its rate sigma = dD/dt and the accumulated
    BLP measure (total positive variation of D over the grid)."""

    times: np.ndarray
    values: np.ndarray
    rates: np.ndarray
    blp_measure: float


@dataclass(frozen=True)
class CPFResult:
    """Conditional past-future correlator at intervals (t, s).

    value_formula uses the closed expression in Re Gamma; value_oracle is the
    exact measurement-sequence value (None when not computed).
    """

    t: float
    s: float
    value_formula: float | None = None
    value_oracle: float | None = None
    conditioning_outcome: str | None = None


def trace_distance(rho1: np.ndarray, rho2: np.ndarray, hermiticity_tol: float = 1e-9) -> float:
    """Half the trace norm of rho1 - rho2, from the eigenvalues of the
    Hermitian difference."""
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    if rho1.shape != rho2.shape or rho1.ndim != 2 or rho1.shape[0] != rho1.shape[1]:
        raise ValueError(f"need two equal square matrices, got {rho1.shape} and {rho2.shape}")
    diff = rho1 - rho2
    if np.max(np.abs(diff - diff.conj().T)) > hermiticity_tol:
        raise ValueError("difference is not Hermitian within tolerance")
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def probe_pair(alpha: float) -> tuple[SystemParams, SystemParams]:
    """The maximally distinguishable dephasing probes |+> and |->."""
    return SystemParams.plus(alpha), SystemParams.minus(alpha)


def default_blp_grid(alpha: float, steps: int = 5000) -> np.ndarray:
    """Uniform grid over one recoherence period with step T / steps."""
    return np.linspace(0.0, recoherence_period(alpha), steps + 1)


def blp_witness_series(sys1: SystemParams, sys2: SystemParams, bath: BathParams,
                       times: np.ndarray) -> WitnessSeries:
    """Trace-distance series for two probes on a uniform time grid.

    Rates come from central differences (one-sided at the endpoints); the
    BLP measure is the discrete positive variation sum_i max(D_{i+1}-D_i, 0),
    which is robust at the kinks where D touches zero.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 3:
        raise ValueError("need a 1-d grid with at least 3 points")
    if sys1.alpha != sys2.alpha:
        raise ValueError("probe states must share the coupling alpha")
    steps = np.diff(times)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ValueError("time grid must be uniform")
    gamma = np.atleast_1d(decoherence_function(bath, sys1.alpha, times))

    def evolved(sys: SystemParams) -> np.ndarray:
        rho = np.empty((times.size, 2, 2), dtype=complex)
        rho[:, 0, 0] = abs(sys.a) ** 2
        rho[:, 1, 1] = abs(sys.b) ** 2
        rho[:, 0, 1] = sys.a * np.conj(sys.b) * gamma
        rho[:, 1, 0] = np.conj(rho[:, 0, 1])
        return rho

    lam = np.linalg.eigvalsh(evolved(sys1) - evolved(sys2))
    values = 0.5 * np.abs(lam).sum(axis=1)
    rates = np.gradient(values, times)
    measure = float(np.sum(np.maximum(np.diff(values), 0.0)))
    return WitnessSeries(times, values, rates, measure)


def cpf_formula(bath: BathParams, alpha: float, t: float, s: float) -> CPFResult:
    """Closed-form correlator [f(t+s) + f(t-s)]/2 - f(t) f(s), f = Re Gamma."""
    if t < 0.0 or s < 0.0:
        raise ValueError(f"intervals must be non-negative, got t={t}, s={s}")
    f = decoherence_function(bath, alpha, np.array([t + s, t - s, t, s])).real
    value = 0.5 * (f[0] + f[1]) - f[2] * f[3]
    return CPFResult(t, s, value_formula=float(value))


def cpf_sequence_distribution(sys: SystemParams, bath: BathParams,
                              t: float, s: float) -> dict[tuple[int, int, int], float]:
    """Exact joint probability P(x, y, z) of the three-measurement sequence.

    The joint propagator is diagonal in the bath configuration basis, so each
    configuration chi drives a closed two-level evolution with phase
    2 alpha m(chi) per unit time.  Only the system is projectively collapsed;
    the bath configuration persists across the sequence and is averaged with
    its Gibbs weight at the end.  Keys are (x, y, z) with outcomes +-1 for
    the |+>/|-> projectors.
    """
    if bath.n_sites > 20:
        raise ValueError(f"sequence oracle enumerates 2^N configurations; n_sites={bath.n_sites} > 20")
    if t < 0.0 or s < 0.0:
        raise ValueError(f"intervals must be non-negative, got t={t}, s={s}")
    log_w = -bath.beta * config_energies(bath) - log_partition_function(bath)
    weights = np.exp(log_w)
    m = config_magnetizations(bath.n_sites)
    cos_t = np.cos(2.0 * sys.alpha * m * t)
    cos_s = np.cos(2.0 * sys.alpha * m * s)
    rho0 = sys.density()
    x_pol = 2.0 * rho0[0, 1].real  # <sigma_x> entering the first measurement
    dist: dict[tuple[int, int, int], float] = {}
    for x in (+1, -1):
        p_x = 0.5 * (1.0 + x * x_pol)
        for y in (+1, -1):
            p_yx = 0.5 * (1.0 + x * y * cos_t)
            for z in (+1, -1):
                p_zy = 0.5 * (1.0 + y * z * cos_s)
                dist[(x, y, z)] = p_x * float(np.sum(weights * p_yx * p_zy))
    return dist


def cpf_oracle(sys: SystemParams, bath: BathParams, t: float, s: float,
               outcome_y: str = "plus") -> CPFResult:
    """Measurement-sequence correlator conditioned on the middle outcome.

    Assigns observable values O = +-1 to the outer outcomes and returns
    <O_z O_x>_y - <O_z>_y <O_x>_y.  With s = 0 the final measurement repeats
    the middle one, O_z is deterministic given y and the correlator is 0 by
    definition.  Raises UndefinedConditionalError when the conditioning
    outcome has probability below 1e-12.
    """
    if outcome_y not in _OUTCOMES:
        raise ValueError(f"outcome_y must be 'plus' or 'minus', got {outcome_y!r}")
    if s == 0.0:
        return CPFResult(t, s, value_oracle=0.0, conditioning_outcome=outcome_y)
    y = _OUTCOMES[outcome_y]
    dist = cpf_sequence_distribution(sys, bath, t, s)
    p_y = sum(dist[(x, y, z)] for x in (+1, -1) for z in (+1, -1))
    if p_y < 1e-12:
        raise UndefinedConditionalError(
            f"conditioning outcome y={outcome_y} has probability {p_y:.3e}")
    mean_xz = sum(x * z * dist[(x, y, z)] for x in (+1, -1) for z in (+1, -1)) / p_y
    mean_x = sum(x * dist[(x, y, z)] for x in (+1, -1) for z in (+1, -1)) / p_y
    mean_z = sum(z * dist[(x, y, z)] for x in (+1, -1) for z in (+1, -1)) / p_y
    return CPFResult(t, s, value_oracle=mean_xz - mean_x * mean_z,
                     conditioning_outcome=outcome_y)
