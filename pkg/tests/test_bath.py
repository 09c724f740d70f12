import math

import numpy as np
import pytest

from spinbath import (
    BathParams,
    SpinConfig,
    bath_purity,
    energy,
    gibbs_weight,
    log_complex_partition_function,
    log_partition_function,
    transfer_matrix,
)
from spinbath.bath import config_bond_sums, config_energies, config_magnetizations

from oracles import gamma_enum, partition_sum, ring_energies


def bath(coupling=1.0, field=0.0, beta=1.0, n_sites=4):
    return BathParams(coupling=coupling, field=field, beta=beta, n_sites=n_sites)


class TestParams:
    def test_rejects_bad_sizes_and_temperatures(self):
        with pytest.raises(ValueError):
            BathParams(coupling=1.0, field=0.0, beta=1.0, n_sites=0)
        with pytest.raises(ValueError):
            BathParams(coupling=1.0, field=0.0, beta=-0.5, n_sites=4)
        with pytest.raises(ValueError):
            BathParams(coupling=math.inf, field=0.0, beta=1.0, n_sites=4)

    def test_rejects_open_boundary(self):
        with pytest.raises(ValueError):
            BathParams(coupling=1.0, field=0.0, beta=1.0, n_sites=4, boundary="open")

    def test_spin_config_magnetization_range_and_parity(self):
        rng = np.random.default_rng(7)
        for n in (1, 3, 8):
            for bits in rng.integers(0, 1 << n, size=20):
                m = SpinConfig(int(bits), n).magnetization
                assert -n <= m <= n
                assert (m - n) % 2 == 0

    def test_spin_config_roundtrip(self):
        cfg = SpinConfig.from_spins([1, -1, -1, 1])
        assert cfg.bits == 0b0110
        assert list(cfg.spins()) == [1, -1, -1, 1]
        with pytest.raises(ValueError):
            SpinConfig(16, 4)


class TestEnergy:
    def test_ground_configuration(self):
        assert energy(SpinConfig.all_up(4), bath(coupling=1.0, field=0.0)) == -4.0

    def test_pure_field(self):
        assert energy(SpinConfig.all_up(4), bath(coupling=0.0, field=1.0)) == -4.0

    def test_two_domain_walls(self):
        # up up down down: bond sum 0 on the ring, magnetization 0
        cfg = SpinConfig.from_spins([1, 1, -1, -1])
        assert energy(cfg, bath(coupling=1.0, field=0.5)) == 0.0

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            energy(SpinConfig.all_up(3), bath(n_sites=4))

    def test_enumeration_tables_match_scalar_energy(self):
        b = bath(coupling=0.7, field=-0.4, beta=1.0, n_sites=6)
        table = config_energies(b)
        for bits in range(1 << 6):
            assert table[bits] == pytest.approx(energy(SpinConfig(bits, 6), b), abs=1e-12)

    def test_enumeration_tables_match_oracle(self):
        assert np.array_equal(config_energies(bath(1.3, 0.2, 1.0, 8)),
                              ring_energies(8, 1.3, 0.2))
        s = 1 - 2 * ((np.arange(1 << 5)[:, None] >> np.arange(5)[None, :]) & 1)
        assert np.array_equal(config_magnetizations(5), s.sum(axis=1))
        assert np.array_equal(config_bond_sums(5),
                              np.sum(s * np.roll(s, -1, axis=1), axis=1))


class TestPartitionFunction:
    def test_infinite_temperature(self):
        assert log_partition_function(bath(beta=0.0, n_sites=7)) == pytest.approx(
            7 * math.log(2.0), rel=1e-14)

    def test_free_spins_factorize(self):
        # J = 0: Z = (2 cosh beta h)^N, and enumeration agrees
        for n in (3, 8, 12):
            b = bath(coupling=0.0, field=0.8, beta=1.3, n_sites=n)
            expected = n * math.log(2.0 * math.cosh(1.3 * 0.8))
            assert log_partition_function(b) == pytest.approx(expected, rel=1e-12)
            brute = math.log(partition_sum(n, 0.0, 0.8, 1.3).real)
            assert log_partition_function(b) == pytest.approx(brute, rel=1e-10)

    def test_zero_field_eigenvalues(self):
        # h = 0 eigenvalues are 2 cosh(beta J) and 2 sinh(beta J)
        expected = math.log((2 * math.cosh(1.0)) ** 4 + (2 * math.sinh(1.0)) ** 4)
        assert log_partition_function(bath(1.0, 0.0, 1.0, 4)) == pytest.approx(
            expected, rel=1e-13)

    @pytest.mark.parametrize("coupling,field,beta,n", [
        (1.0, 0.3, 0.5, 8), (2.0, -0.7, 1.5, 10), (-0.6, 0.2, 2.0, 9),
        (0.0, 0.0, 3.0, 12), (1.0, 1.0, 4.0, 12),
    ])
    def test_matches_enumeration(self, coupling, field, beta, n):
        brute = math.log(partition_sum(n, coupling, field, beta).real)
        value = log_partition_function(bath(coupling, field, beta, n))
        assert value == pytest.approx(brute, rel=1e-10)


class TestComplexPartitionFunction:
    def test_consistent_at_real_field(self):
        b = bath(1.2, 0.4, 0.9, 9)
        lz = log_complex_partition_function(b, 0.4)
        assert lz.log_abs == pytest.approx(log_partition_function(b), rel=1e-12)
        assert math.cos(lz.phase) == pytest.approx(1.0, abs=1e-12)

    def test_free_spins_complex_field(self):
        n = 8
        field = 0.37 - 0.52j
        lz = log_complex_partition_function(bath(0.0, 0.1, 1.1, n), field)
        expected = n * np.log(2.0 * np.cosh(1.1 * field))
        assert lz.log_abs == pytest.approx(expected.real, rel=1e-12)
        assert np.exp(1j * lz.phase) == pytest.approx(np.exp(1j * expected.imag), abs=1e-10)

    def test_displaced_field_matches_enumeration(self):
        # the decoherence-function field h - 2 i alpha t / beta, 50 time points
        n, coupling, field, beta, alpha = 10, 1.0, 0.3, 1.0, 0.1
        b = bath(coupling, field, beta, n)
        times = np.linspace(0.0, math.pi / (2 * alpha), 50)
        for t in times:
            shifted = field - 2j * alpha * t / beta
            brute = partition_sum(n, coupling, shifted, beta)
            lz = log_complex_partition_function(b, shifted)
            value = math.exp(lz.log_abs) * np.exp(1j * lz.phase)
            assert abs(value - brute) <= 1e-10 * abs(brute)

    def test_rejects_non_finite_field(self):
        with pytest.raises(ValueError):
            log_complex_partition_function(bath(), complex(math.nan, 0.0))


class TestTransferMatrix:
    def test_symmetric_and_positive_at_real_field(self):
        t = transfer_matrix(bath(0.8, 0.5, 1.2, 6))
        assert t[0, 1] == t[1, 0]
        assert np.all(t.real > 0) and np.allclose(t.imag, 0.0)

    def test_trace_power_equals_partition(self):
        b = bath(0.8, 0.5, 1.2, 6)
        lam = np.linalg.eigvalsh(transfer_matrix(b).real)
        assert math.log(float(np.sum(lam ** 6))) == pytest.approx(
            log_partition_function(b), rel=1e-12)


class TestGibbsWeights:
    def test_uniform_at_infinite_temperature(self):
        b = bath(beta=0.0, n_sites=6)
        for bits in (0, 17, 63):
            assert gibbs_weight(SpinConfig(bits, 6), b) == pytest.approx(2.0 ** -6, rel=1e-12)

    def test_ground_state_dominates_at_low_temperature(self):
        b = bath(coupling=1.0, field=0.5, beta=60.0, n_sites=6)
        assert gibbs_weight(SpinConfig.all_up(6), b) == pytest.approx(1.0, abs=1e-10)

    def test_normalization(self):
        rng = np.random.default_rng(3)
        for _ in range(3):
            b = bath(coupling=float(rng.uniform(-1, 2)), field=float(rng.uniform(-1, 1)),
                     beta=float(rng.uniform(0.05, 3.0)), n_sites=10)
            total = sum(gibbs_weight(SpinConfig(bits, 10), b) for bits in range(1 << 10))
            assert total == pytest.approx(1.0, abs=1e-12)


class TestPurity:
    def test_maximally_mixed_at_infinite_temperature(self):
        assert bath_purity(bath(beta=0.0, n_sites=9)) == pytest.approx(2.0 ** -9, rel=1e-12)

    def test_pure_ground_state_at_low_temperature(self):
        assert bath_purity(bath(0.0, 1.0, 50.0, 6)) == pytest.approx(1.0, abs=1e-10)

    def test_free_spin_closed_form_and_enumeration(self):
        for n in (4, 8, 12):
            b = bath(0.0, 0.6, 1.4, n)
            per_site = (1.0 + math.tanh(1.4 * 0.6) ** 2) / 2.0
            assert bath_purity(b) == pytest.approx(per_site ** n, rel=1e-11)
            brute = (partition_sum(n, 0.0, 0.6, 2.8).real
                     / partition_sum(n, 0.0, 0.6, 1.4).real ** 2)
            assert bath_purity(b) == pytest.approx(brute, rel=1e-10)

    def test_interacting_purity_matches_enumeration(self):
        b = bath(1.0, 0.3, 0.9, 10)
        brute = (partition_sum(10, 1.0, 0.3, 1.8).real
                 / partition_sum(10, 1.0, 0.3, 0.9).real ** 2)
        assert bath_purity(b) == pytest.approx(brute, rel=1e-10)

    def test_monotone_in_beta(self):
        betas = np.linspace(0.0, 4.0, 30)
        values = [bath_purity(bath(1.0, 0.4, float(v), 8)) for v in betas]
        assert np.all(np.diff(values) >= -1e-13)


def test_gamma_enumeration_oracle_self_check():
    # the oracle itself reproduces an analytic free-spin case
    times = np.array([0.0, 1.0, 2.5])
    got = gamma_enum(6, 0.0, 0.0, 0.7, 0.1, times)
    assert np.allclose(got, np.cos(0.2 * times) ** 6, atol=1e-13)
