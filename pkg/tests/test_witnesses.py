import math

import numpy as np
import pytest

from spinbath import (
    BathParams,
    SystemParams,
    UndefinedConditionalError,
    blp_witness_series,
    cpf_formula,
    cpf_oracle,
    cpf_sequence_distribution,
    decoherence_function,
    evolve_qubit,
    probe_pair,
    recoherence_period,
    trace_distance,
)
from spinbath.witnesses import default_blp_grid

ALPHA = 0.1
ZERO_STATE = SystemParams(ALPHA, 1.0 + 0j, 0j)  # no x polarization


def bath(coupling=1.0, field=0.1, beta=1.0, n_sites=10):
    return BathParams(coupling=coupling, field=field, beta=beta, n_sites=n_sites)


class TestTraceDistance:
    def test_zero_for_identical_states(self):
        rho = SystemParams.plus(ALPHA).density()
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pointer_states_stay_distance_one(self):
        up = SystemParams(ALPHA, 1.0 + 0j, 0j)
        down = SystemParams(ALPHA, 0j, 1.0 + 0j)
        for t in (0.0, 2.2, 8.8):
            d = trace_distance(evolve_qubit(up, bath(), t), evolve_qubit(down, bath(), t))
            assert d == pytest.approx(1.0, abs=1e-14)

    def test_probe_pair_distance_equals_gamma_modulus(self):
        sys1, sys2 = probe_pair(ALPHA)
        b = bath()
        for t in np.linspace(0.0, recoherence_period(ALPHA), 13):
            d = trace_distance(evolve_qubit(sys1, b, t), evolve_qubit(sys2, b, t))
            assert d == pytest.approx(abs(decoherence_function(b, ALPHA, t)), abs=1e-12)

    def test_rejects_non_hermitian_difference(self):
        with pytest.raises(ValueError):
            trace_distance(np.array([[1.0, 1.0], [0.0, 0.0]]), np.eye(2))


class TestBlpSeries:
    def test_decoupled_system_is_flat(self):
        sys1, sys2 = probe_pair(0.0)
        times = np.linspace(0.0, 10.0, 101)
        series = blp_witness_series(sys1, sys2, bath(), times)
        assert np.allclose(series.values, 1.0, atol=1e-14)
        assert np.allclose(series.rates, 0.0, atol=1e-12)
        assert series.blp_measure == 0.0

    def test_cold_bath_keeps_distance_pinned(self):
        # large beta freezes the bath: no revival structure, no measure
        sys1, sys2 = probe_pair(ALPHA)
        b = bath(coupling=1.0, field=0.1, beta=4.0, n_sites=50)
        series = blp_witness_series(sys1, sys2, b, default_blp_grid(ALPHA, steps=2000))
        assert float(np.min(series.values)) >= 0.95
        assert series.blp_measure <= 0.05

    def test_hot_bath_shows_revivals(self):
        sys1, sys2 = probe_pair(ALPHA)
        b = bath(coupling=1.0, field=0.1, beta=0.1, n_sites=50)
        series = blp_witness_series(sys1, sys2, b, default_blp_grid(ALPHA, steps=2000))
        interior = series.rates[1:-1]
        assert float(np.max(interior)) > 0.0
        assert series.blp_measure > 0.5  # full recoherence accumulates ~1

    def test_measure_beta_ordering(self):
        sys1, sys2 = probe_pair(ALPHA)
        grid = default_blp_grid(ALPHA, steps=1500)
        cold = blp_witness_series(sys1, sys2, bath(1.0, 0.1, 4.0, 50), grid).blp_measure
        hot = blp_witness_series(sys1, sys2, bath(1.0, 0.1, 0.1, 50), grid).blp_measure
        assert cold <= hot

    def test_measure_converges_under_grid_refinement(self):
        sys1, sys2 = probe_pair(ALPHA)
        b = bath(coupling=1.0, field=0.1, beta=0.1, n_sites=10)
        coarse = blp_witness_series(sys1, sys2, b, default_blp_grid(ALPHA, 2500)).blp_measure
        fine = blp_witness_series(sys1, sys2, b, default_blp_grid(ALPHA, 5000)).blp_measure
        assert abs(fine - coarse) <= 0.01 * fine

    def test_grid_validation(self):
        sys1, sys2 = probe_pair(ALPHA)
        with pytest.raises(ValueError):
            blp_witness_series(sys1, sys2, bath(), np.array([0.0, 1.0]))
        with pytest.raises(ValueError):
            blp_witness_series(sys1, sys2, bath(), np.array([0.0, 1.0, 5.0]))


class TestCpfFormula:
    def test_decoupled_system_vanishes(self):
        assert cpf_formula(bath(), 0.0, 1.0, 2.0).value_formula == pytest.approx(0.0, abs=1e-15)

    def test_rejects_negative_intervals(self):
        with pytest.raises(ValueError):
            cpf_formula(bath(), ALPHA, -1.0, 2.0)

    def test_cold_bath_is_nearly_cpf_independent(self):
        b = bath(coupling=1.0, field=0.1, beta=4.0, n_sites=10)
        grid = np.linspace(0.0, recoherence_period(ALPHA), 15)
        values = [abs(cpf_formula(b, ALPHA, t, t).value_formula) for t in grid]
        assert max(values) <= 0.05

    def test_hot_bath_breaks_cpf_independence(self):
        b = bath(coupling=1.0, field=0.1, beta=0.1, n_sites=10)
        grid = np.linspace(0.0, recoherence_period(ALPHA), 15)
        values = [abs(cpf_formula(b, ALPHA, t, t).value_formula) for t in grid]
        assert max(values) > 0.05

    def test_magnitude_bounded_by_one(self):
        b = bath(beta=0.1)
        rng = np.random.default_rng(5)
        for _ in range(50):
            t, s = rng.uniform(0, 30, size=2)
            assert abs(cpf_formula(b, ALPHA, float(t), float(s)).value_formula) <= 1.0 + 1e-12


class TestCpfOracle:
    def test_distribution_is_normalized(self):
        dist = cpf_sequence_distribution(ZERO_STATE, bath(), 3.0, 5.0)
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)
        assert all(-1e-15 <= p <= 1.0 + 1e-15 for p in dist.values())

    def test_decoupled_system_vanishes(self):
        sys = SystemParams(0.0, 1.0 + 0j, 0j)
        assert cpf_oracle(sys, bath(), 2.0, 3.0).value_oracle == pytest.approx(0.0, abs=1e-14)

    def test_zero_final_interval_is_degenerate(self):
        res = cpf_oracle(ZERO_STATE, bath(), 4.0, 0.0)
        assert res.value_oracle == 0.0

    @pytest.mark.parametrize("outcome", ["plus", "minus"])
    def test_formula_matches_oracle_for_unpolarized_input(self, outcome):
        b = bath(coupling=1.0, field=0.1, beta=1.0, n_sites=10)
        grid = np.linspace(0.0, recoherence_period(ALPHA), 6)
        for t in grid:
            for s in grid[1:]:
                formula = cpf_formula(b, ALPHA, float(t), float(s)).value_formula
                oracle = cpf_oracle(ZERO_STATE, b, float(t), float(s),
                                    outcome_y=outcome).value_oracle
                assert abs(formula - oracle) <= 1e-10

    def test_x_polarized_input_gives_zero_conditional_covariance(self):
        # |+> makes the first outcome deterministic, so the correlator
        # collapses; this is why the formula presumes an unpolarized input
        sys = SystemParams.plus(ALPHA)
        value = cpf_oracle(sys, bath(), 3.0, 5.0).value_oracle
        assert value == pytest.approx(0.0, abs=1e-14)

    def test_impossible_conditioning_outcome_raises(self):
        # deterministic first outcome plus a sign-flipping propagator makes
        # the y = plus branch unreachable: P(+|+) = (1 + f)/2 with f = -1
        sys = SystemParams.plus(ALPHA)
        b = BathParams(coupling=0.0, field=0.0, beta=0.0, n_sites=1)
        t_flip = math.pi / (2 * ALPHA)
        with pytest.raises(UndefinedConditionalError):
            cpf_oracle(sys, b, t_flip, 1.0, outcome_y="plus")

    def test_bad_outcome_label(self):
        with pytest.raises(ValueError):
            cpf_oracle(ZERO_STATE, bath(), 1.0, 1.0, outcome_y="up")

    def test_site_limit(self):
        with pytest.raises(ValueError):
            cpf_sequence_distribution(ZERO_STATE, bath(n_sites=21), 1.0, 1.0)
