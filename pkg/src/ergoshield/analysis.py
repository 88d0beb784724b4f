"""Survival-map sweeps, numerical optimal-detuning search, power-law scaling
fits, the rotating-wave validity report and the Table-style reproduction
harness comparing filtered and unfiltered runs in both environments."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .dynamics import TimeGrid, run_simulation
from .errors import DegenerateLandscapeWarning, DomainError, NumericalFailure
from .model import EnvironmentSpec, SystemSpec, delta_star

DEFAULT_GRID = TimeGrid(0.0, 20.0, 0.005)


# --------------------------------------------------------------------------
# survival maps


@dataclass(frozen=True)
class SurvivalMap:
    """Residual ergotropy over the (detuning, base decay rate) grid.

    ``e_res[i, j]`` belongs to (gamma_axis[i], delta_axis[j]);
    ``analytic_curve`` samples the closed-form optimal detuning on gamma_axis.
    """

    delta_axis: np.ndarray
    gamma_axis: np.ndarray
    e_res: np.ndarray
    analytic_curve: np.ndarray


def _sweep_cell(args) -> tuple[int, float]:
    idx, spec, env, grid, e_res_mode = args
    try:
        result = run_simulation(spec, env, filter_on=True, grid=grid,
                                e_res_mode=e_res_mode, blp_pair="none")
    except NumericalFailure as exc:
        raise NumericalFailure(
            exc.step, exc.invariant, exc.value, exc.tol,
            path_index=exc.path_index,
            context=f"cell(delta={spec.delta:g}, gamma0={spec.gamma0:g})",
        ) from exc
    return idx, result.e_res


def survival_map(spec_template: SystemSpec, env: EnvironmentSpec,
                 delta_range: tuple[float, float],
                 gamma_range: tuple[float, float],
                 resolution: int | tuple[int, int] = 8,
                 grid: TimeGrid = DEFAULT_GRID,
                 e_res_mode: str = "integrated",
                 jobs: int = 1) -> SurvivalMap:
    """One full simulation per grid cell; cells are independent, share the
    template's noise seed, and merge by index so worker count cannot change
    the result."""
    res_d, res_g = resolution if isinstance(resolution, tuple) else (resolution,) * 2
    if res_d < 2 or res_g < 2:
        raise DomainError("resolution must be >= 2 per axis")
    if not (delta_range[1] > delta_range[0]) or not (gamma_range[1] > gamma_range[0]):
        raise DomainError("axis ranges must be non-degenerate")
    delta_axis = np.linspace(delta_range[0], delta_range[1], res_d)
    gamma_axis = np.linspace(gamma_range[0], gamma_range[1], res_g)
    tasks = []
    for i, g0 in enumerate(gamma_axis):
        for j, d in enumerate(delta_axis):
            spec = replace(spec_template, delta=float(d), gamma0=float(g0))
            tasks.append((i * res_d + j, spec, env, grid, e_res_mode))
    flat = np.empty(res_g * res_d)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for idx, val in pool.map(_sweep_cell, tasks):
                flat[idx] = val
    else:
        for task in tasks:
            idx, val = _sweep_cell(task)
            flat[idx] = val
    curve = np.array([delta_star(spec_template.n_qubits, spec_template.g,
                                 float(g0)) for g0 in gamma_axis])
    return SurvivalMap(delta_axis=delta_axis, gamma_axis=gamma_axis,
                       e_res=flat.reshape(res_g, res_d),
                       analytic_curve=curve)


# --------------------------------------------------------------------------
# optimal detuning search


@dataclass(frozen=True)
class OptimalDetuning:
    delta_opt: float
    e_res_opt: float
    boundary: bool
    degenerate: bool = False


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section_max(f: Callable[[float], float], a: float, b: float,
                        tol: float) -> tuple[float, float]:
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def optimal_detuning(n_qubits: int, env: EnvironmentSpec,
                     spec_template: SystemSpec,
                     window: tuple[float, float] | None = None,
                     coarse_resolution: int = 9,
                     grid: TimeGrid = DEFAULT_GRID,
                     e_res_mode: str = "integrated",
                     objective: Callable[[float], float] | None = None,
                     refine_tol: float = 1e-4) -> OptimalDetuning:
    """Argmax of residual ergotropy over a detuning window: coarse scan plus
    golden-section refinement around the best cell.  Maxima at the window
    edge carry a boundary flag; an all-equal landscape warns and returns the
    midpoint.  ``objective`` overrides the simulation (test hook)."""
    if window is None:
        window = (0.0, 3.0 * delta_star(n_qubits, spec_template.g,
                                        spec_template.gamma0))
    lo, hi = float(window[0]), float(window[1])
    if not hi > lo:
        raise DomainError(f"degenerate search window [{lo}, {hi}]")
    if coarse_resolution < 3:
        raise DomainError("coarse_resolution must be >= 3")

    if objective is None:
        base = replace(spec_template, n_qubits=n_qubits)

        def objective(d: float) -> float:
            spec = replace(base, delta=float(d))
            return run_simulation(spec, env, filter_on=True, grid=grid,
                                  e_res_mode=e_res_mode, blp_pair="none").e_res

    xs = np.linspace(lo, hi, coarse_resolution)
    ys = np.array([objective(float(x)) for x in xs])
    span = float(ys.max() - ys.min())
    if span <= 1e-12 * max(1.0, abs(float(ys.max()))):
        warnings.warn("objective is flat across the window",
                      DegenerateLandscapeWarning)
        mid = (lo + hi) / 2.0
        return OptimalDetuning(delta_opt=mid, e_res_opt=objective(mid),
                               boundary=False, degenerate=True)
    i = int(np.argmax(ys))
    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, coarse_resolution - 1)])
    tol = max((hi - lo) * refine_tol, 1e-12)
    x_opt, y_opt = _golden_section_max(objective, a, b, tol)
    if ys[i] > y_opt:
        x_opt, y_opt = float(xs[i]), float(ys[i])
    half_cell = (hi - lo) / (coarse_resolution - 1) / 2.0
    boundary = (x_opt - lo) < half_cell or (hi - x_opt) < half_cell
    return OptimalDetuning(delta_opt=x_opt, e_res_opt=y_opt,
                           boundary=boundary)


# --------------------------------------------------------------------------
# power-law fitting


@dataclass(frozen=True)
class FitResult:
    beta: float
    log_intercept: float
    beta_stderr: float
    r_squared: float


def power_law_fit(points: Sequence[tuple[float, float]]) -> FitResult:
    """Ordinary least squares of ln(delta) on ln(n)."""
    if len(points) < 2:
        raise DomainError("power-law fit needs at least 2 points")
    n = np.asarray([p[0] for p in points], dtype=float)
    d = np.asarray([p[1] for p in points], dtype=float)
    if np.any(n <= 0) or np.any(d <= 0):
        raise DomainError("power-law fit needs strictly positive inputs")
    x = np.log(n)
    y = np.log(d)
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise DomainError("all abscissae coincide")
    beta = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = ym - beta * xm
    resid = y - (intercept + beta * x)
    ssr = float(np.sum(resid**2))
    sst = float(np.sum((y - ym) ** 2))
    m = len(points)
    stderr = math.sqrt(ssr / (m - 2) / sxx) if m > 2 else 0.0
    r2 = 1.0 if sst < 1e-300 else max(0.0, min(1.0, 1.0 - ssr / sst))
    return FitResult(beta=beta, log_intercept=float(intercept),
                     beta_stderr=stderr, r_squared=r2)


@dataclass(frozen=True)
class ScalingStudy:
    fit: FitResult
    rows: tuple[tuple[int, float, float, bool], ...]  # (n, d_opt, e_opt, boundary)
    analytic_beta: float = 0.5


def scaling_study(env: EnvironmentSpec, n_list: Sequence[int],
                  spec_template: SystemSpec,
                  grid: TimeGrid = DEFAULT_GRID,
                  coarse_resolution: int = 9,
                  e_res_mode: str = "integrated",
                  refine_tol: float = 1e-4) -> ScalingStudy:
    """Optimal detuning per N with the power-law fit of the optima; boundary
    flags are carried per row rather than hidden."""
    if len(n_list) < 2:
        raise DomainError("scaling study needs at least 2 system sizes")
    rows = []
    for n in n_list:
        opt = optimal_detuning(n, env, spec_template, grid=grid,
                               coarse_resolution=coarse_resolution,
                               e_res_mode=e_res_mode, refine_tol=refine_tol)
        rows.append((int(n), opt.delta_opt, opt.e_res_opt, opt.boundary))
    fit = power_law_fit([(n, d) for n, d, _, _ in rows])
    return ScalingStudy(fit=fit, rows=tuple(rows))


# --------------------------------------------------------------------------
# rotating-wave validity ceiling


@dataclass(frozen=True)
class RwaReport:
    rows: tuple[tuple[int, float, bool], ...]  # (n, ratio, usc_flag)
    n_max: int
    threshold: float


def rwa_report(g: float, omega_b: float, n_max_scan: int = 100,
               threshold: float = 0.1) -> RwaReport:
    """Effective coupling ratio g*sqrt(N)/omega_b per N and the largest N
    still below the ultra-strong-coupling threshold."""
    if g <= 0 or omega_b <= 0 or threshold <= 0:
        raise DomainError("g, omega_b and threshold must be > 0")
    if n_max_scan < 1:
        raise DomainError("n_max_scan must be >= 1")
    ratios = [(n, g * math.sqrt(n) / omega_b) for n in range(1, n_max_scan + 1)]
    rows = tuple((n, r, r > threshold) for n, r in ratios)
    n_max = int((threshold * omega_b / g) ** 2)
    while g * math.sqrt(n_max + 1) / omega_b <= threshold:
        n_max += 1
    while n_max >= 1 and g * math.sqrt(n_max) / omega_b > threshold:
        n_max -= 1
    return RwaReport(rows=rows, n_max=n_max, threshold=threshold)


# --------------------------------------------------------------------------
# Table-style comparison harness


@dataclass(frozen=True)
class EnvColumns:
    e_res_unfiltered: float
    e_res_filtered: float
    improvement: float
    blp_unfiltered: float
    blp_filtered: float


@dataclass(frozen=True)
class Table1Row:
    n: int
    delta_star: float
    columns: dict[str, EnvColumns]


def delta_star_column(n_list: Sequence[int], g: float,
                      gamma0: float) -> list[float]:
    """The analytic detuning column alone (formula path, no simulation)."""
    return [delta_star(n, g, gamma0) for n in n_list]


def table1_harness(spec_template: SystemSpec,
                   envs: dict[str, EnvironmentSpec],
                   n_list: Sequence[int] = (1, 2, 3, 4),
                   grid: TimeGrid = DEFAULT_GRID,
                   e_res_mode: str = "integrated") -> list[Table1Row]:
    """Filtered (delta = delta_star) versus unfiltered (delta = 0) residual
    ergotropy and BLP for each system size and environment; the improvement
    column is (filtered - unfiltered)/unfiltered."""
    rows = []
    for n in n_list:
        ds = delta_star(n, spec_template.g, spec_template.gamma0)
        cols = {}
        for name, env in envs.items():
            spec = replace(spec_template, n_qubits=int(n), delta=ds)
            fil = run_simulation(spec, env, filter_on=True, grid=grid,
                                 e_res_mode=e_res_mode)
            non = run_simulation(spec, env, filter_on=False, grid=grid,
                                 e_res_mode=e_res_mode)
            cols[name] = EnvColumns(
                e_res_unfiltered=non.e_res,
                e_res_filtered=fil.e_res,
                improvement=(fil.e_res - non.e_res) / non.e_res,
                blp_unfiltered=non.blp,
                blp_filtered=fil.blp,
            )
        rows.append(Table1Row(n=int(n), delta_star=ds, columns=cols))
    return rows
