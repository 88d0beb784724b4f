import itertools

import numpy as np
import pytest

from ergoshield import linalg, operators
from ergoshield.errors import DomainError, ShapeError
from ergoshield.operators import (BasisDescriptor, cavity_ops, collective_ops,
                                  dicke_mode, dicke_state, fock_mode, lift)

SM = np.array([[0, 0], [1, 0]], dtype=complex)  # sigma_- with |e> at index 0


def symmetric_sector_oracle(n):
    """Brute-force J_-, J_z in the 2^N space restricted to the normalized
    symmetric states with fixed excitation number (descending M order)."""
    dim = 2**n
    jm_full = np.zeros((dim, dim), dtype=complex)
    jz_full = np.zeros((dim, dim), dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    for site in range(n):
        ops_m = [np.eye(2, dtype=complex)] * n
        ops_m[site] = SM
        ops_z = [np.eye(2, dtype=complex)] * n
        ops_z[site] = sz / 2.0
        acc_m = acc_z = np.array([[1.0 + 0j]])
        for om, oz in zip(ops_m, ops_z):
            acc_m = np.kron(acc_m, om)
        for oz in ops_z:
            acc_z = np.kron(acc_z, oz)
        jm_full += acc_m
        jz_full += acc_z
    # symmetric basis vectors |J, M> with k = number of ground-state qubits
    basis = []
    for k in range(n + 1):  # k flips of |e> -> |g>, M = N/2 - k
        vec = np.zeros(dim, dtype=complex)
        for positions in itertools.combinations(range(n), k):
            idx = sum(2 ** (n - 1 - p) for p in positions)
            vec[idx] = 1.0
        basis.append(vec / np.linalg.norm(vec))
    basis = np.array(basis).T  # columns |J, J>, |J, J-1>, ...
    jm_sym = basis.conj().T @ jm_full @ basis
    jz_sym = basis.conj().T @ jz_full @ basis
    return jz_sym, jm_sym


# ---------------------------------------------------------------- collective ops


def test_single_spin_half():
    ops = collective_ops(1)
    assert np.allclose(np.diag(ops.jz), [0.5, -0.5])


def test_two_qubit_lowering_element():
    ops = collective_ops(2)
    # <1,0| J_- |1,1> with descending order: row 1, column 0
    assert ops.jminus[1, 0] == pytest.approx(np.sqrt(2.0))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_su2_commutator(n):
    ops = collective_ops(n)
    comm = ops.jplus @ ops.jminus - ops.jminus @ ops.jplus
    assert np.max(np.abs(comm - 2.0 * ops.jz)) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_matches_symmetric_sector_of_tensor_construction(n):
    ops = collective_ops(n)
    jz_sym, jm_sym = symmetric_sector_oracle(n)
    assert np.max(np.abs(ops.jz - jz_sym)) < 1e-12
    assert np.max(np.abs(ops.jminus - jm_sym)) < 1e-12


def test_ladder_annihilates_extremes():
    for n in (1, 3, 4):
        ops = collective_ops(n)
        top = dicke_state(n, n / 2.0)
        bottom = dicke_state(n, -n / 2.0)
        assert np.max(np.abs(ops.jplus @ top)) == 0.0
        assert np.max(np.abs(ops.jminus @ bottom)) == 0.0


def test_collective_ops_rejects_zero():
    with pytest.raises(DomainError):
        collective_ops(0)


# ---------------------------------------------------------------- cavity ops


def test_cavity_ladder_action():
    a, adag, number = cavity_ops(4)
    one = np.zeros(4, dtype=complex)
    one[1] = 1.0
    out = a @ one
    assert out[0] == pytest.approx(1.0)
    assert np.linalg.norm(out[1:]) == 0.0


def test_cavity_number_operator():
    _, _, number = cavity_ops(6)
    assert np.allclose(np.diag(number), np.arange(6))


def test_cavity_truncation_commutator():
    n_cav = 5
    a, adag, _ = cavity_ops(n_cav)
    comm = a @ adag - adag @ a
    expected = np.eye(n_cav, dtype=complex)
    expected[-1, -1] = 1.0 - n_cav
    assert np.max(np.abs(comm - expected)) < 1e-12


def test_cavity_rejects_small():
    with pytest.raises(DomainError):
        cavity_ops(1)


# ---------------------------------------------------------------- dicke states


def test_dicke_state_ordering():
    assert np.argmax(np.abs(dicke_state(2, 1.0))) == 0
    assert dicke_state(2, 1.0).shape == (3,)
    assert np.argmax(np.abs(dicke_state(4, -2.0))) == 4
    assert dicke_state(4, -2.0).shape == (5,)


def test_dicke_state_parity_constraint():
    with pytest.raises(DomainError):
        dicke_state(3, 0.0)  # J = 3/2 requires half-integral m


def test_dicke_states_orthonormal():
    n = 5
    vecs = [dicke_state(n, n / 2.0 - k) for k in range(n + 1)]
    gram = np.array([[v1 @ v2.conj() for v2 in vecs] for v1 in vecs])
    assert np.max(np.abs(gram - np.eye(n + 1))) == 0.0


# ---------------------------------------------------------------- lift


def test_lift_identity_any_slot():
    basis = BasisDescriptor((dicke_mode(2), fock_mode(3)))
    out = lift(np.eye(3, dtype=complex), 0, basis)
    assert np.array_equal(out, np.eye(9))


def test_lift_matches_kron_layout():
    basis = BasisDescriptor((dicke_mode(2), fock_mode(3)))
    jz = collective_ops(2).jz
    assert np.array_equal(lift(jz, 0, basis), np.kron(jz, np.eye(3)))


def test_lift_number_expectation_on_single_photon():
    basis = BasisDescriptor((dicke_mode(2), fock_mode(3)))
    a, adag, number = cavity_ops(3)
    top = dicke_state(2, 1.0)
    one = np.zeros(3, dtype=complex)
    one[1] = 1.0
    vec = np.kron(top, one)
    rho = np.outer(vec, vec.conj())
    n_lifted = lift(number, 1, basis)
    assert linalg.expectation(n_lifted, rho) == pytest.approx(1.0)


def test_lift_shape_error():
    basis = BasisDescriptor((dicke_mode(2), fock_mode(3)))
    with pytest.raises(ShapeError):
        lift(np.eye(2, dtype=complex), 0, basis)
