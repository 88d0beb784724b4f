import math

import numpy as np
import pytest

from ergoshield import model
from ergoshield.errors import ConfigError, DomainError
from ergoshield.model import (EnvA, EnvB, EnvNone, SystemSpec, build_generator,
                              delta_star, dispersive_decay_rate,
                              effective_spectral_density, filtered_rate,
                              nonhermitian_eigenvalues, ohmic_density)


# ---------------------------------------------------------------- delta_star


def test_delta_star_table_values():
    expected = [0.3162, 0.4472, 0.5477, 0.6325]
    for n, want in zip((1, 2, 3, 4), expected):
        assert round(delta_star(n, 0.1, 0.05), 4) == want


def test_delta_star_zero_coupling():
    for n in (1, 3, 7):
        assert delta_star(n, 0.0, 0.05) == 0.0


def test_delta_star_sqrt_scaling_exact():
    for n in range(1, 12):
        ratio = delta_star(n, 0.1, 0.05) / delta_star(1, 0.1, 0.05)
        assert ratio == pytest.approx(math.sqrt(n), rel=1e-15)


def test_delta_star_monotone_in_n():
    vals = [delta_star(n, 0.07, 0.03) for n in range(1, 9)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_delta_star_domain_error():
    with pytest.raises(DomainError):
        delta_star(2, 0.1, 0.0)


def test_resonance_identity_machine_precision():
    # g^2 N / delta* == 2 gamma0 delta* at the optimum
    for n in (1, 2, 3, 4, 9):
        g, g0 = 0.1, 0.05
        ds = delta_star(n, g, g0)
        lhs = g**2 * n / ds
        rhs = 2.0 * g0 * ds
        assert lhs == pytest.approx(rhs, rel=1e-12)


# ---------------------------------------------------------------- filtered rate


def test_filtered_rate_resonant_limit():
    assert filtered_rate(0.0, 0.05, 5.0) == pytest.approx(0.05)


def test_filtered_rate_half_width():
    assert filtered_rate(5.0, 0.05, 5.0) == pytest.approx(0.025)


def test_filtered_rate_table_point():
    assert filtered_rate(0.4472, 0.05, 5.0) == pytest.approx(0.04960, abs=5e-6)


def test_filtered_rate_even_and_decreasing():
    vals = [filtered_rate(d, 0.05, 5.0) for d in (0.0, 0.5, 1.0, 2.0, 4.0)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert filtered_rate(-1.3, 0.05, 5.0) == filtered_rate(1.3, 0.05, 5.0)
    assert all(0 < v <= 0.05 for v in vals)


def test_filtered_rate_domain_error():
    with pytest.raises(DomainError):
        filtered_rate(0.1, 0.05, 0.0)


# ---------------------------------------------------------------- spectral density


def test_effective_density_on_resonance_peak():
    j = lambda w: 0.3
    assert effective_spectral_density(1.2, 1.2, 0.5, j) == pytest.approx(0.3 / 0.5)


def test_effective_density_lorentzian_symmetry():
    j = lambda w: 0.3
    d = 0.7
    for off in (0.1, 0.5, 2.0):
        left = effective_spectral_density(d - off, d, 0.4, j)
        right = effective_spectral_density(d + off, d, 0.4, j)
        assert left == pytest.approx(right)


def test_effective_density_ohmic_point():
    j = ohmic_density(eta=0.05, omega_cut=5.0)
    val = effective_spectral_density(1.0, 0.0, 1.0, j)
    assert val == pytest.approx(0.05 * math.exp(-0.2) / 2.0, rel=1e-12)
    assert round(val, 5) == 0.02047


def test_effective_density_domain_error():
    with pytest.raises(DomainError):
        effective_spectral_density(1.0, 0.0, 0.0, lambda w: 1.0)


# ---------------------------------------------------------------- generator


def test_generator_single_qubit_unfiltered():
    spec = SystemSpec(n_qubits=1)
    gen = build_generator(spec, EnvNone(), filter_on=False)
    assert len(gen.dissipators) == 1
    d = gen.dissipators[0]
    assert d.rate == pytest.approx(0.05)
    sm = np.array([[0, 0], [1, 0]], dtype=complex)
    assert np.array_equal(d.operator, sm)


def test_generator_filtered_rate_at_optimum():
    ds = delta_star(2, 0.1, 0.05)
    spec = SystemSpec(n_qubits=2, delta=ds)
    gen = build_generator(spec, EnvNone(), filter_on=True)
    assert gen.dissipators[0].rate == pytest.approx(0.04960, abs=5e-6)


def test_generator_env_b_absorption_rate_at_t0():
    spec = SystemSpec(n_qubits=1)
    gen = build_generator(spec, EnvB(), filter_on=False)
    absorb = gen.dissipators[1]
    assert absorb.rate_at(0.0) == pytest.approx(0.005)  # gamma0 * n0
    # driven occupation peaks at a quarter period of the sin^2 drive
    t_quarter = math.pi / (2 * EnvB().omega_drive)
    assert absorb.rate_at(t_quarter) == pytest.approx(0.05 * 0.2)


def test_generator_env_a_declares_offset_channel():
    spec = SystemSpec(n_qubits=2)
    gen = build_generator(spec, EnvA(), filter_on=False)
    assert gen.offset_op is not None
    assert np.allclose(np.diag(gen.offset_op), [1.0, 0.0, -1.0])


def test_generator_full_representation_structure():
    spec = SystemSpec(n_qubits=2, delta=0.3, representation="full", n_cav=4)
    gen = build_generator(spec, EnvNone(), filter_on=True)
    assert gen.h0.shape == (12, 12)
    # cavity loss at kappa (defaulting to gamma0)
    assert gen.dissipators[0].rate == pytest.approx(0.05)
    # hermitian by construction
    assert np.max(np.abs(gen.h0 - gen.h0.conj().T)) < 1e-12


def test_generator_full_detuning_enters_cavity_frequency():
    spec_on = SystemSpec(n_qubits=1, delta=0.4, representation="full", n_cav=3)
    gen_on = build_generator(spec_on, EnvNone(), filter_on=True)
    gen_off = build_generator(spec_on, EnvNone(), filter_on=False)
    # photon-number diagonal shifts by delta when the filter is on
    diff = np.diag(gen_on.h0 - gen_off.h0).real
    assert diff[1] == pytest.approx(0.4)


def test_generator_rejects_bad_cavity():
    spec = SystemSpec(n_qubits=1, representation="full", n_cav=1)
    with pytest.raises(ConfigError):
        build_generator(spec, EnvNone())


def test_spec_validation():
    with pytest.raises(DomainError):
        SystemSpec(n_qubits=0)
    with pytest.raises(DomainError):
        SystemSpec(n_qubits=1, gamma0=-0.1)
    with pytest.raises(ConfigError):
        SystemSpec(n_qubits=1, representation="hybrid")


# ---------------------------------------------------------------- appendix-A pieces


def test_nonhermitian_decoupled_limit():
    lam_b, lam_c = nonhermitian_eigenvalues(0.0, 0.7, 0.05)
    assert lam_b == pytest.approx(0.0)
    assert lam_c == pytest.approx(0.7 - 0.025j)


def test_nonhermitian_vieta_identities():
    rng = np.random.default_rng(9)
    for _ in range(50):
        omega, delta, gamma0 = rng.uniform(0.01, 2.0, size=3)
        lam_b, lam_c = nonhermitian_eigenvalues(omega, delta, gamma0)
        assert abs(lam_b * lam_c + omega**2) < 1e-12
        assert abs(lam_b + lam_c - (delta - 1j * gamma0 / 2.0)) < 1e-12


def test_nonhermitian_dispersive_imaginary_part():
    omega, delta, gamma0 = 0.2, 10.0, 0.05
    lam_b, _ = nonhermitian_eigenvalues(omega, delta, gamma0)
    approx = -gamma0 * omega**2 / (2.0 * delta**2)
    assert lam_b.imag == pytest.approx(approx, rel=0.05)


def test_dispersive_decay_rate_value_and_linearity():
    assert dispersive_decay_rate(0.1, 4, 1.0, 0.05) == pytest.approx(0.002)
    one = dispersive_decay_rate(0.1, 2, 0.8, 0.05)
    two = dispersive_decay_rate(0.1, 4, 0.8, 0.05)
    assert two == pytest.approx(2.0 * one)


def test_dispersive_decay_rate_matches_exact_branch():
    # -2 Im(lambda_B) within 5% relative once delta >= 10 g sqrt(N)
    for n in (1, 2, 3, 4):
        g, gamma0 = 0.1, 0.05
        omega = g * math.sqrt(n)
        for mult in (10.0, 20.0, 50.0):
            delta = mult * omega
            lam_b, _ = nonhermitian_eigenvalues(omega, delta, gamma0)
            exact = -2.0 * lam_b.imag
            approx = dispersive_decay_rate(g, n, delta, gamma0)
            assert approx == pytest.approx(exact, rel=0.05)


def test_dispersive_decay_rate_singularity():
    with pytest.raises(DomainError):
        dispersive_decay_rate(0.1, 2, 0.0, 0.05)
