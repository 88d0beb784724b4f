"""Dense complex-matrix kernel: products, adjoints, Kronecker products,
Hermitian eigendecomposition, partial trace and expectation values.

Matrices are plain ``numpy`` arrays of dtype complex128.  Everything here is
pure and reentrant; nothing mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, HermiticityError, ShapeError


@dataclass(frozen=True)
class Tolerances:
    """Numerical gates used across the kernel, surfaced for tests."""

    hermiticity: float = 1e-9
    reconstruction: float = 1e-10
    trace: float = 1e-12
    expectation_imag: float = 1e-10


TOLERANCES = Tolerances()


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def hermiticity_deviation(a: np.ndarray) -> float:
    """Max-entry deviation from Hermitian symmetry."""
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def require_hermitian(a: np.ndarray, tol: float = TOLERANCES.hermiticity) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    dev = hermiticity_deviation(a)
    if dev > tol:
        raise HermiticityError(dev, tol)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product (A otimes B)."""
    if a.size == 0 or b.size == 0:
        raise ShapeError("kron operands must be non-empty")
    return np.kron(a, b)


def herm_eig(a: np.ndarray, tol: float = TOLERANCES.hermiticity) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come out ascending (LAPACK order, stable for identical
    input); the reconstruction V diag(w) V+ matches the input to
    ``TOLERANCES.reconstruction`` for well-conditioned inputs.
    """
    require_hermitian(a, tol)
    w, v = np.linalg.eigh(a)
    return Spectrum(eigenvalues=w, eigenvectors=v)


def partial_trace(rho: np.ndarray, dims: list[int] | tuple[int, ...],
                  keep: list[int] | tuple[int, ...] | set[int]) -> np.ndarray:
    """Trace out every subsystem not in ``keep``.

    ``dims`` lists the subsystem dimensions in tensor order; their product
    must equal the matrix dimension.
    """
    dims = tuple(int(d) for d in dims)
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if not keep:
        raise DomainError("keep must name at least one subsystem")
    if any(k < 0 or k >= n for k in keep):
        raise DomainError(f"keep indices out of range for {n} subsystems")
    d_total = int(np.prod(dims))
    if rho.shape != (d_total, d_total):
        raise ShapeError(
            f"matrix shape {rho.shape} does not match product of dims {dims}"
        )
    reshaped = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # contract traced row/col axis pairs back to front so indices stay valid
    for i in sorted(traced, reverse=True):
        reshaped = np.trace(reshaped, axis1=i, axis2=i + (reshaped.ndim // 2))
    d_keep = int(np.prod([dims[k] for k in keep]))
    return reshaped.reshape(d_keep, d_keep)


def expectation(op: np.ndarray, rho: np.ndarray,
                imag_tol: float = TOLERANCES.expectation_imag) -> float:
    """Re Tr(op rho) for Hermitian ``op``; raises if the imaginary residue
    exceeds the tolerance (a symptom of invalid inputs)."""
    require_hermitian(op)
    if op.shape != rho.shape:
        raise ShapeError(f"operator {op.shape} vs state {rho.shape}")
    val = complex(np.trace(op @ rho))
    if abs(val.imag) > imag_tol:
        raise DomainError(
            f"expectation has imaginary residue {val.imag:.3e} > {imag_tol:.1e}"
        )
    return val.real


def validate_density_matrix(rho: np.ndarray,
                            herm_tol: float = 1e-8,
                            trace_tol: float = 1e-8,
                            eig_floor: float = -1e-7) -> None:
    """Check Hermiticity, unit trace and positivity of a density matrix."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ShapeError(f"density matrix must be square, got {rho.shape}")
    dev = hermiticity_deviation(rho)
    if dev > herm_tol:
        raise HermiticityError(dev, herm_tol)
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise DomainError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    if w.min() < eig_floor:
        raise DomainError(f"negative eigenvalue {w.min():.3e} below {eig_floor:.1e}")
