"""Collective angular-momentum operators on the symmetric Dicke ladder,
truncated cavity ladder operators, Dicke basis states and tensor embeddings.

Basis conventions
-----------------
* Dicke mode of N qubits: dimension N+1, states |J=N/2, M> ordered by
  descending M (fully excited |J, J> sits at index 0).
* Fock mode: dimension n_cav, number states |0>, ..., |n_cav-1>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DomainError, ShapeError


@dataclass(frozen=True)
class Mode:
    kind: str  # "dicke" | "fock"
    dim: int
    n_qubits: int | None = None


def dicke_mode(n_qubits: int) -> Mode:
    if n_qubits < 1:
        raise DomainError("n_qubits must be >= 1")
    return Mode(kind="dicke", dim=n_qubits + 1, n_qubits=n_qubits)


def fock_mode(n_cav: int) -> Mode:
    if n_cav < 1:
        raise DomainError("fock dimension must be >= 1")
    return Mode(kind="fock", dim=n_cav)


@dataclass(frozen=True)
class BasisDescriptor:
    """Ordered mode list of a tensor-product space."""

    modes: tuple[Mode, ...]

    @property
    def dim(self) -> int:
        return int(np.prod([m.dim for m in self.modes]))

    def mode_dims(self) -> tuple[int, ...]:
        return tuple(m.dim for m in self.modes)


@dataclass(frozen=True)
class CollectiveOps:
    jz: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray


def collective_ops(n_qubits: int) -> CollectiveOps:
    """J_z, J_+, J_- in the J = N/2 Dicke ladder (descending-M order).

    <J, M-1| J_- |J, M> = sqrt(J(J+1) - M(M-1)).
    """
    if n_qubits < 1:
        raise DomainError("n_qubits must be >= 1")
    j = n_qubits / 2.0
    m = j - np.arange(n_qubits + 1)  # descending M
    jz = np.diag(m.astype(complex))
    jminus = np.zeros((n_qubits + 1, n_qubits + 1), dtype=complex)
    for i in range(n_qubits):  # |M=m[i]> -> |M=m[i]-1> at row i+1
        mm = m[i]
        jminus[i + 1, i] = np.sqrt(j * (j + 1) - mm * (mm - 1))
    jplus = jminus.conj().T
    return CollectiveOps(jz=jz, jplus=jplus, jminus=jminus)


def cavity_ops(n_cav: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Truncated annihilation, creation and number operators.

    a|n> = sqrt(n)|n-1>; the commutator [a, a+] equals the identity except
    for the (n_cav-1, n_cav-1) entry, which is 1 - n_cav (truncation artifact).
    """
    if n_cav < 2:
        raise DomainError("n_cav must be >= 2")
    a = np.diag(np.sqrt(np.arange(1, n_cav)).astype(complex), k=1)
    adag = a.conj().T
    number = np.diag(np.arange(n_cav).astype(complex))
    return a, adag, number


def dicke_state(n_qubits: int, m: float) -> np.ndarray:
    """Unit vector |J=N/2, M=m> under descending-M ordering."""
    if n_qubits < 1:
        raise DomainError("n_qubits must be >= 1")
    j = n_qubits / 2.0
    if abs(m) > j + 1e-12:
        raise DomainError(f"|m|={abs(m)} exceeds J={j}")
    steps = j - m
    if abs(steps - round(steps)) > 1e-9:
        raise DomainError(f"m={m} is not reachable from J={j} by integer steps")
    vec = np.zeros(n_qubits + 1, dtype=complex)
    vec[int(round(steps))] = 1.0
    return vec


def lift(op: np.ndarray, slot: int, basis: BasisDescriptor) -> np.ndarray:
    """Embed a single-mode operator into the joint space (identity elsewhere)."""
    if slot < 0 or slot >= len(basis.modes):
        raise DomainError(f"slot {slot} out of range")
    if op.shape != (basis.modes[slot].dim, basis.modes[slot].dim):
        raise ShapeError(
            f"operator shape {op.shape} does not match mode dim "
            f"{basis.modes[slot].dim} at slot {slot}"
        )
    out = np.array([[1.0 + 0j]])
    for i, mode in enumerate(basis.modes):
        factor = op if i == slot else np.eye(mode.dim, dtype=complex)
        out = linalg.kron(out, factor)
    return out
