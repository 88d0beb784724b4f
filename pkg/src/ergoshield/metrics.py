"""Work-extraction and memory metrics: ergotropy via the ordered-spectrum
passive state, trace distance, the BLP backflow measure, residual-ergotropy
summaries and the collective advantage ratio."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from . import linalg
from .errors import DomainError, GridError, ShapeError


@dataclass(frozen=True)
class ErgotropyBreakdown:
    total_energy: float
    passive_energy: float
    ergotropy: float


@dataclass(frozen=True)
class BlpResult:
    value: float
    positive_intervals: tuple[tuple[float, float], ...]


def ergotropy(rho: np.ndarray, h: np.ndarray) -> ErgotropyBreakdown:
    """Maximum unitarily extractable work.

    The passive energy pairs the state populations sorted descending with the
    Hamiltonian levels sorted ascending; ties inside degenerate blocks do not
    affect the scalar product, so a stable sort suffices.
    """
    if rho.shape != h.shape:
        raise ShapeError(f"state {rho.shape} vs hamiltonian {h.shape}")
    linalg.require_hermitian(h)
    total = linalg.expectation(h, rho)
    r = np.sort(np.linalg.eigvalsh(rho))[::-1]   # descending populations
    eps = np.sort(np.linalg.eigvalsh(h))         # ascending levels
    passive = float(np.dot(r, eps))
    work = total - passive
    if -1e-10 < work < 0.0:
        work = 0.0
    return ErgotropyBreakdown(total_energy=total, passive_energy=passive,
                              ergotropy=work)


def trace_distance(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """D(rho1, rho2) = (1/2) Tr |rho1 - rho2|."""
    if rho1.shape != rho2.shape:
        raise ShapeError(f"shapes differ: {rho1.shape} vs {rho2.shape}")
    diff = rho1 - rho2
    linalg.require_hermitian(diff, tol=1e-8)
    diff = (diff + diff.conj().T) / 2.0
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def blp_measure(d_series: np.ndarray, dt: float) -> BlpResult:
    """Integral of the positive part of dD/dt over the run (Simpson's rule).

    The derivative uses central differences in the interior and one-sided
    differences at the endpoints; the series must sit on a uniform grid with
    an odd number of points.
    """
    d_series = np.asarray(d_series, dtype=float)
    n = d_series.size
    if n < 3:
        raise GridError("series needs at least 3 points")
    if n % 2 == 0:
        raise GridError("Simpson integration needs an odd point count")
    if dt <= 0:
        raise GridError("dt must be > 0")
    sigma = np.empty(n)
    sigma[1:-1] = (d_series[2:] - d_series[:-2]) / (2.0 * dt)
    sigma[0] = (d_series[1] - d_series[0]) / dt
    sigma[-1] = (d_series[-1] - d_series[-2]) / dt
    positive = np.maximum(sigma, 0.0)
    value = float(simpson(positive, dx=dt))
    intervals = []
    mask = sigma > 0.0
    i = 0
    while i < n:
        if mask[i]:
            j = i
            while j + 1 < n and mask[j + 1]:
                j += 1
            intervals.append((i * dt, j * dt))
            i = j + 1
        else:
            i += 1
    return BlpResult(value=max(value, 0.0),
                     positive_intervals=tuple(intervals))


def residual_ergotropy(series: np.ndarray, dt: float,
                       mode: str = "integrated") -> float:
    """Scalar summary of an ergotropy time series.

    integrated: trapezoidal integral over the run; final: last sample;
    time-averaged: integral divided by the span.
    """
    series = np.asarray(series, dtype=float)
    if series.size == 0:
        raise DomainError("series must be non-empty")
    if mode == "integrated":
        return float(np.trapezoid(series, dx=dt))
    if mode == "final":
        return float(series[-1])
    if mode == "time-averaged":
        span = dt * (series.size - 1)
        if span <= 0:
            raise DomainError("time-averaged mode needs at least 2 points")
        return float(np.trapezoid(series, dx=dt)) / span
    raise DomainError(f"unknown residual-ergotropy mode {mode!r}")


def collective_advantage(e_n: float, e_1: float, n: int) -> float:
    """A(N) = E_N / (N * E_1); values above 1 signal superextensive storage."""
    if e_1 <= 0:
        raise DomainError("single-battery reference e_1 must be > 0")
    if n < 1:
        raise DomainError("n must be >= 1")
    return e_n / (n * e_1)
