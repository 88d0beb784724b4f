"""Fixed-step master-equation integration, RTN path sampling, trajectory
ensembles and shared-noise pair evolution.

The integrator is classic RK4 with a uniform step.  Operators that are
diagonal or generalized permutations (every ladder operator in this model)
are applied through elementwise products and index gathers instead of dense
matmuls, which keeps 200-trajectory ensembles at interactive cost; anything
unstructured falls back to dense matrix products.  Trajectories are batched
along a leading axis, and per-path seeds derive from the master seed by path
index, so results do not depend on scheduling or batch layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import metrics, operators
from .errors import DomainError, GridError, NumericalFailure, ShapeError
from .model import (Dissipator, EnvA, EnvB, EnvironmentSpec, Generator,
                    SystemSpec, build_generator)

__all__ = [
    "TimeGrid", "RtnPath", "SimulationResult", "CheckPolicy",
    "evolve", "sample_rtn_path", "rtn_stream", "rtn_ensemble_evolve",
    "evolve_pair_shared_noise", "run_simulation",
    "initial_charge_state", "canonical_pair", "battery_hamiltonian",
]


# --------------------------------------------------------------------------
# time grid and noise paths


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on [t_start, t_end] with step dt."""

    t_start: float
    t_end: float
    dt: float

    def __post_init__(self):
        if self.dt <= 0:
            raise GridError("dt must be > 0")
        if self.t_end <= self.t_start:
            raise GridError("t_end must exceed t_start")
        n = (self.t_end - self.t_start) / self.dt
        if abs(n - round(n)) > 1e-9:
            raise GridError(
                f"(t_end - t_start)/dt = {n} is not integral within 1e-9"
            )

    @property
    def n_steps(self) -> int:
        return int(round((self.t_end - self.t_start) / self.dt))

    @property
    def n_points(self) -> int:
        return self.n_steps + 1

    @property
    def times(self) -> np.ndarray:
        return self.t_start + self.dt * np.arange(self.n_points)


@dataclass(frozen=True)
class RtnPath:
    """Telegraph-noise values (+-1) on the grid points; the value at point i
    is held constant over the step [t_i, t_{i+1})."""

    values: np.ndarray


@dataclass(frozen=True)
class CheckPolicy:
    """State-validity tolerances enforced during integration."""

    trace_tol: float = 1e-8
    herm_tol: float = 1e-8
    eig_floor: float = -1e-7
    stride: int = 200


@dataclass
class SimulationResult:
    """Per-time observables of one configured run plus scalar summaries."""

    times: np.ndarray
    ergotropy_series: np.ndarray
    energy_series: np.ndarray
    population_series: np.ndarray
    trace_distance_series: np.ndarray | None
    e_res: float
    blp: float | None


def rtn_stream(master_seed: int, path_index: int) -> np.random.Generator:
    """Independent generator for one noise path, derived from the master seed
    by path index (schedule-independent)."""
    ss = np.random.SeedSequence(entropy=int(master_seed) & ((1 << 64) - 1),
                                spawn_key=(int(path_index),))
    return np.random.default_rng(ss)


def sample_rtn_path(lambda_switch: float, grid: TimeGrid,
                    stream: np.random.Generator) -> RtnPath:
    """Telegraph path: start +-1 equiprobable, per-step flip probability
    1 - exp(-lambda*dt)."""
    if lambda_switch <= 0:
        raise DomainError("lambda_switch must be > 0")
    start = 1 if stream.random() < 0.5 else -1
    p_flip = 1.0 - math.exp(-lambda_switch * grid.dt)
    flips = stream.random(grid.n_steps) < p_flip
    parity = np.concatenate(([0], np.cumsum(flips))) % 2
    values = np.where(parity == 0, start, -start).astype(np.int8)
    return RtnPath(values=values)


# --------------------------------------------------------------------------
# structured Liouvillian compilation

_MAX_H_LAYERS = 4


def _diag_vector(mat: np.ndarray) -> np.ndarray | None:
    off = mat - np.diag(np.diag(mat))
    if mat.size and np.max(np.abs(off)) == 0.0:
        return np.diag(mat).copy()
    return None


def _mono_views(mat: np.ndarray):
    """Row/column gather views of a generalized permutation matrix
    (at most one nonzero per row and per column, none on the diagonal);
    None when the matrix has no such structure."""
    rows, cols = np.nonzero(mat)
    if len(rows) == 0:
        return None  # zero matrix: caller drops the term
    if np.any(rows == cols):
        return None
    if len(set(rows.tolist())) != len(rows) or len(set(cols.tolist())) != len(cols):
        return None
    d = mat.shape[0]
    src = np.zeros(d, dtype=np.intp)
    cr = np.zeros(d, dtype=complex)
    csrc = np.zeros(d, dtype=np.intp)
    cc = np.zeros(d, dtype=complex)
    for i, j in zip(rows, cols):
        src[i] = j
        cr[i] = mat[i, j]
        csrc[j] = i
        cc[j] = mat[i, j]
    return src, cr, csrc, cc


def _offdiag_layers(mat: np.ndarray):
    """Greedy split of an off-diagonal matrix into generalized-permutation
    layers; None when more than _MAX_H_LAYERS are needed."""
    rows, cols = np.nonzero(mat)
    layers: list[list[tuple[int, int]]] = []
    used: list[tuple[set, set]] = []
    order = np.argsort(np.abs(mat[rows, cols]))[::-1]
    for k in order:
        i, j = int(rows[k]), int(cols[k])
        for layer, (ur, uc) in zip(layers, used):
            if i not in ur and j not in uc:
                layer.append((i, j))
                ur.add(i)
                uc.add(j)
                break
        else:
            if len(layers) >= _MAX_H_LAYERS:
                return None
            layers.append([(i, j)])
            used.append(({i}, {j}))
    out = []
    for layer in layers:
        m = np.zeros_like(mat)
        for i, j in layer:
            m[i, j] = mat[i, j]
        views = _mono_views(m)
        if views is None:
            return None
        out.append(views)
    return out


class _Plan:
    """Compiled right-hand side of the master equation for one generator.

    Splits every term into elementwise weights (diagonal commutators,
    anticommutators with diagonal L+L, diagonal sandwiches), gather layers
    (ladder operators) and dense fallbacks.
    """

    def __init__(self, gen: Generator):
        d = gen.h0.shape[0]
        self.dim = d
        self.w_const = np.zeros((d, d), dtype=complex)
        self.w_tdep: list[tuple[Callable[[float], float], np.ndarray]] = []
        self.h_layers: list[tuple] = []
        self.h_dense: np.ndarray | None = None
        # (rate_or_fn, row_src, sandwich_coeff (d,d), is_const)
        self.gathers: list[tuple] = []
        self.dense_diss: list[tuple] = []
        self.wz: np.ndarray | None = None

        hdiag = np.diag(gen.h0)
        self.w_const += -1j * (hdiag[:, None] - hdiag[None, :])
        hoff = gen.h0 - np.diag(hdiag)
        if np.max(np.abs(hoff)) > 0:
            layers = _offdiag_layers(hoff)
            if layers is None:
                self.h_dense = hoff
            else:
                self.h_layers = layers

        if gen.offset_op is not None:
            z = _diag_vector(gen.offset_op)
            if z is None:
                raise ShapeError("frequency-offset channel must be diagonal")
            self.wz = -1j * (z[:, None] - z[None, :])

        for diss in gen.dissipators:
            self._add_dissipator(diss)

    def _add_dissipator(self, diss: Dissipator) -> None:
        op = diss.operator
        const = not callable(diss.rate)
        rate = diss.rate
        dvec = _diag_vector(op)
        if dvec is not None:
            w = (np.outer(dvec, dvec.conj())
                 - 0.5 * (np.abs(dvec) ** 2)[:, None]
                 - 0.5 * (np.abs(dvec) ** 2)[None, :])
            if const:
                self.w_const += rate * w
            else:
                self.w_tdep.append((rate, w))
            return
        views = _mono_views(op)
        if views is not None:
            src, cr, _, _ = views
            p = np.zeros(self.dim)
            np.add.at(p, src, np.abs(cr) ** 2)
            w = -0.5 * (p[:, None] + p[None, :])
            sandwich = np.outer(cr, cr.conj())
            if const:
                self.w_const += rate * w
                self.gathers.append((rate, src, sandwich, True))
            else:
                self.w_tdep.append((rate, w))
                self.gathers.append((rate, src, sandwich, False))
            return
        ld = op.conj().T
        ldl = ld @ op
        self.dense_diss.append((rate, op, ld, ldl, const))

    def apply(self, t: float, rho: np.ndarray,
              offset: np.ndarray | None) -> np.ndarray:
        """d(rho)/dt for a (B, d, d) batch; ``offset`` holds the per-path
        frequency-offset coefficients (already including the amplitude)."""
        if self.w_tdep:
            w = self.w_const.copy()
            for fn, wk in self.w_tdep:
                w += fn(t) * wk
        else:
            w = self.w_const
        out = w * rho
        if offset is not None and self.wz is not None:
            out += offset[:, None, None] * (self.wz * rho)
        for src, cr, csrc, cc in self.h_layers:
            # -i(L rho - rho L) for each ladder layer of the Hamiltonian
            out += (-1j * cr)[:, None] * rho[:, src, :]
            out += rho[:, :, csrc] * (1j * cc)[None, :]
        if self.h_dense is not None:
            out += -1j * (self.h_dense @ rho - rho @ self.h_dense)
        for rate, src, sandwich, const in self.gathers:
            gam = rate if const else rate(t)
            out += gam * (sandwich * rho[:, src[:, None], src[None, :]])
        for rate, op, ld, ldl, const in self.dense_diss:
            gam = rate if const else rate(t)
            out += gam * (op @ rho @ ld - 0.5 * (ldl @ rho + rho @ ldl))
        return out


# --------------------------------------------------------------------------
# RK4 core


def _check_batch(rho: np.ndarray, step: int, policy: CheckPolicy) -> None:
    multi = rho.shape[0] > 1
    tr_dev = np.abs(np.einsum("bii->b", rho) - 1.0)
    k = int(np.argmax(tr_dev))
    if tr_dev[k] > policy.trace_tol:
        raise NumericalFailure(step, "trace", float(tr_dev[k]),
                               policy.trace_tol,
                               path_index=k if multi else None)
    herm = np.abs(rho - rho.conj().transpose(0, 2, 1)).reshape(rho.shape[0], -1).max(axis=1)
    k = int(np.argmax(herm))
    if herm[k] > policy.herm_tol:
        raise NumericalFailure(step, "hermiticity", float(herm[k]),
                               policy.herm_tol,
                               path_index=k if multi else None)
    wmin = np.min(np.linalg.eigvalsh(rho), axis=1)
    k = int(np.argmin(wmin))
    if wmin[k] < policy.eig_floor:
        raise NumericalFailure(step, "positivity", float(wmin[k]),
                               policy.eig_floor,
                               path_index=k if multi else None)


def _rk4_run(rho: np.ndarray, plan: _Plan, grid: TimeGrid,
             offsets: np.ndarray | None,
             on_point: Callable[[int, np.ndarray], None],
             policy: CheckPolicy | None) -> np.ndarray:
    dt = grid.dt
    half = 0.5 * dt
    sixth = dt / 6.0
    if policy is not None:
        _check_batch(rho, 0, policy)
    on_point(0, rho)
    for s in range(grid.n_steps):
        t = grid.t_start + s * dt
        c = offsets[:, s] if offsets is not None else None
        k1 = plan.apply(t, rho, c)
        k2 = plan.apply(t + half, rho + half * k1, c)
        k3 = plan.apply(t + half, rho + half * k2, c)
        k4 = plan.apply(t + dt, rho + dt * k3, c)
        rho = rho + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if policy is not None and ((s + 1) % policy.stride == 0
                                   or s + 1 == grid.n_steps):
            _check_batch(rho, s + 1, policy)
        on_point(s + 1, rho)
    return rho


def evolve(rho0: np.ndarray, gen: Generator, grid: TimeGrid,
           observer: Callable[[int, float, np.ndarray], None] | None = None,
           policy: CheckPolicy | None = None,
           offset_series: np.ndarray | None = None,
           collect: bool = True) -> np.ndarray | None:
    """Integrate one density matrix with classic RK4.

    ``offset_series`` holds one frequency-offset coefficient per step (held
    constant across the RK4 stages of that step).  Every ``policy.stride``
    steps the state must stay within the trace/Hermiticity/positivity
    tolerances or a NumericalFailure is raised.  Returns the state series
    (n_points, d, d) when ``collect`` is true.
    """
    if rho0.ndim != 2 or rho0.shape[0] != rho0.shape[1]:
        raise ShapeError(f"rho0 must be square, got {rho0.shape}")
    if rho0.shape[0] != gen.h0.shape[0]:
        raise ShapeError("rho0 dimension does not match the generator")
    policy = policy or CheckPolicy()
    plan = _Plan(gen)
    times = grid.times
    offs = None
    if offset_series is not None:
        offs = np.asarray(offset_series, dtype=float)
        if offs.shape != (grid.n_steps,):
            raise ShapeError(
                f"offset_series must have one value per step "
                f"({grid.n_steps}), got {offs.shape}"
            )
        offs = offs[None, :]
    series = (np.empty((grid.n_points,) + rho0.shape, dtype=complex)
              if collect else None)

    def on_point(i: int, rho: np.ndarray) -> None:
        if series is not None:
            series[i] = rho[0]
        if observer is not None:
            observer(i, float(times[i]), rho[0])

    _rk4_run(rho0[None, :, :].astype(complex), plan, grid, offs,
             on_point, policy)
    return series


# --------------------------------------------------------------------------
# initial states and battery-level observables


def battery_hamiltonian(spec: SystemSpec) -> np.ndarray:
    return spec.omega_b * operators.collective_ops(spec.n_qubits).jz


def _embed_battery_state(vec_b: np.ndarray, spec: SystemSpec) -> np.ndarray:
    if spec.representation == "full":
        vac = np.zeros(spec.n_cav, dtype=complex)
        vac[0] = 1.0
        vec = np.kron(vec_b, vac)
    else:
        vec = vec_b
    return np.outer(vec, vec.conj())


def initial_charge_state(spec: SystemSpec) -> np.ndarray:
    """Fully excited Dicke state |J, J> (tensored with cavity vacuum in the
    full representation)."""
    j = spec.n_qubits / 2.0
    return _embed_battery_state(operators.dicke_state(spec.n_qubits, j), spec)


def canonical_pair(spec: SystemSpec) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonal superpositions (|J,J> +- |J,-J>)/sqrt(2), the default
    coherence-sensitive pair for the trace-distance series."""
    n = spec.n_qubits
    j = n / 2.0
    top = operators.dicke_state(n, j)
    bot = operators.dicke_state(n, -j)
    plus = (top + bot) / math.sqrt(2.0)
    minus = (top - bot) / math.sqrt(2.0)
    return (_embed_battery_state(plus, spec), _embed_battery_state(minus, spec))


class _BatteryReducer:
    """Maps joint states (any leading batch shape) to battery-level states
    (identity in the reduced representation)."""

    def __init__(self, spec: SystemSpec, keep_idx: np.ndarray | None):
        self.spec = spec
        self.dim_b = spec.n_qubits + 1
        self.keep_idx = keep_idx

    def reduce(self, states: np.ndarray) -> np.ndarray:
        spec = self.spec
        if spec.representation == "reduced":
            return states
        lead = states.shape[:-2]
        flat = states.reshape((-1,) + states.shape[-2:])
        nb = flat.shape[0]
        if self.keep_idx is None:
            shaped = flat.reshape(nb, self.dim_b, spec.n_cav,
                                  self.dim_b, spec.n_cav)
            out = np.einsum("tanbn->tab", shaped)
        else:
            out = np.zeros((nb, self.dim_b, self.dim_b), dtype=complex)
            bat = self.keep_idx // spec.n_cav
            pho = self.keep_idx % spec.n_cav
            for n in np.unique(pho):
                sel = np.nonzero(pho == n)[0]
                bi = bat[sel]
                out[:, bi[:, None], bi[None, :]] += flat[:, sel[:, None],
                                                         sel[None, :]]
        return out.reshape(lead + (self.dim_b, self.dim_b))


def _excitation_projection(spec: SystemSpec, gen: Generator,
                           states: Sequence[np.ndarray]):
    """Exact restriction of a full-cavity generator to the subspace with at
    most N total excitations, valid when no channel raises the excitation
    number and all initial states live inside it."""
    n, nc = spec.n_qubits, spec.n_cav
    bat = np.repeat(np.arange(n + 1), nc)      # ladder index i: m_b = N - i
    pho = np.tile(np.arange(nc), n + 1)
    exc = (n - bat) + pho
    keep = np.nonzero(exc <= n)[0]
    drop = np.nonzero(exc > n)[0]

    def closed(mat: np.ndarray) -> bool:
        return drop.size == 0 or float(
            np.max(np.abs(mat[np.ix_(drop, keep)]))) == 0.0

    ops = [gen.h0] + [d.operator for d in gen.dissipators]
    if not all(closed(m) for m in ops):
        return None, None
    for st in states:
        if drop.size and float(np.max(np.abs(st[drop][:, drop]))) > 0:
            return None, None
        if drop.size and float(np.max(np.abs(st[np.ix_(drop, keep)]))) > 0:
            return None, None
    sub = np.ix_(keep, keep)
    gen_p = Generator(
        h0=gen.h0[sub],
        dissipators=tuple(Dissipator(d.operator[sub], d.rate)
                          for d in gen.dissipators),
        basis=gen.basis,
        offset_op=None if gen.offset_op is None else gen.offset_op[sub],
    )
    return gen_p, keep


def _battery_metrics(series_b: np.ndarray, spec: SystemSpec) -> dict:
    """Vectorized ergotropy/energy/excitation series on a battery series."""
    h_b = battery_hamiltonian(spec)
    energies = np.sort(np.diag(h_b).real)          # ascending eigenvalues
    energy = np.einsum("tij,ji->t", series_b, h_b).real
    pops = np.linalg.eigvalsh(series_b)            # ascending per time
    passive = pops[:, ::-1] @ energies             # descending pops x asc e
    erg = energy - passive
    erg[(erg < 0) & (erg > -1e-9)] = 0.0
    j = spec.n_qubits / 2.0
    jz_diag = np.diag(operators.collective_ops(spec.n_qubits).jz).real
    excitation = np.einsum("tii,i->t", series_b, jz_diag).real + j
    return {"energy": energy, "ergotropy": erg, "excitation": excitation}


def _trace_distance_series(s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
    diff = s1 - s2
    diff = (diff + diff.conj().transpose(0, 2, 1)) / 2.0
    return 0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff)), axis=1)


# --------------------------------------------------------------------------
# ensemble machinery


class _MeanSink:
    """Accumulates group means of the trajectory batch per grid point."""

    def __init__(self, groups: list[slice], n_points: int, dim: int):
        self.groups = groups
        self.means = [np.empty((n_points, dim, dim), dtype=complex)
                      for _ in groups]

    def __call__(self, i: int, rho: np.ndarray) -> None:
        for mean, grp in zip(self.means, self.groups):
            block = rho[grp]
            if block.shape[0] == 1:
                mean[i] = block[0]
            else:
                mean[i] = block.mean(axis=0)


class _DistanceSink:
    """Streams the ensemble mean of per-trajectory trace distances computed
    from evolving difference states."""

    def __init__(self, reducer: _BatteryReducer, n_points: int):
        self.reducer = reducer
        self.d_series = np.empty(n_points)

    def __call__(self, i: int, diff: np.ndarray) -> None:
        red = self.reducer.reduce(diff)
        red = (red + red.conj().transpose(0, 2, 1)) / 2.0
        dists = 0.5 * np.sum(np.abs(np.linalg.eigvalsh(red)), axis=1)
        self.d_series[i] = float(dists.mean())


def _prepare(states: list[np.ndarray], spec: SystemSpec,
             env: EnvironmentSpec, filter_on: bool):
    """Generator, optional exact excitation-sector projection and batch
    layout shared by the state and difference evolutions."""
    gen = build_generator(spec, env, filter_on)
    keep_idx = None
    if spec.representation == "full" and not isinstance(env, EnvB):
        gen_p, keep = _excitation_projection(spec, gen, states)
        if gen_p is not None:
            states = [st[np.ix_(keep, keep)] for st in states]
            gen, keep_idx = gen_p, keep
    return gen, states, _BatteryReducer(spec, keep_idx)


def _rtn_offsets(env: EnvA, grid: TimeGrid) -> np.ndarray:
    offsets = np.empty((env.n_traj, grid.n_steps), dtype=float)
    for k in range(env.n_traj):
        path = sample_rtn_path(env.lambda_switch, grid,
                               rtn_stream(env.seed, k))
        offsets[k] = env.delta_amp * path.values[:-1]
    return offsets


def _mean_state_series(rho0: np.ndarray, spec: SystemSpec,
                       env: EnvironmentSpec, filter_on: bool, grid: TimeGrid,
                       policy: CheckPolicy | None
                       ) -> tuple[np.ndarray, _BatteryReducer]:
    gen, (rho_p,), reducer = _prepare([rho0], spec, env, filter_on)
    plan = _Plan(gen)
    policy = policy or CheckPolicy()
    if isinstance(env, EnvA):
        offs = _rtn_offsets(env, grid)
        batch = np.broadcast_to(rho_p, (env.n_traj,) + rho_p.shape
                                ).astype(complex)
    else:
        offs = None
        batch = rho_p[None].astype(complex)
    sink = _MeanSink([slice(None)], grid.n_points, gen.h0.shape[0])
    _rk4_run(batch, plan, grid, offs, sink, policy)
    return sink.means[0], reducer


def rtn_ensemble_evolve(rho0: np.ndarray, spec: SystemSpec, env: EnvA,
                        filter_on: bool, grid: TimeGrid,
                        e_res_mode: str = "integrated",
                        pair: tuple[np.ndarray, np.ndarray] | None = None,
                        policy: CheckPolicy | None = None) -> SimulationResult:
    """Average the master equation over the telegraph-noise ensemble and
    report metrics of the averaged state.

    Every path k evolves with H(t) = (omega_b + delta_amp*chi_k(t)) Jz (plus
    the exchange term in the full representation) under identical dissipators;
    per-path seeds derive from env.seed by path index.  The trace-distance
    pair, when requested, rides the same noise paths.
    """
    mean_series, reducer = _mean_state_series(rho0, spec, env, filter_on,
                                              grid, policy)
    d_series = None
    if pair is not None:
        d_series = evolve_pair_shared_noise(pair[0], pair[1], spec, env,
                                            filter_on, grid, policy)
    return _assemble_result(mean_series, reducer, d_series, spec, grid,
                            e_res_mode)


def evolve_pair_shared_noise(rho1: np.ndarray, rho2: np.ndarray,
                             spec: SystemSpec, env: EnvironmentSpec,
                             filter_on: bool, grid: TimeGrid,
                             policy: CheckPolicy | None = None) -> np.ndarray:
    """Trace-distance series of a state pair under shared noise.

    Both states of every trajectory see the identical noise realization
    (paired ensembles); the reported series is the ensemble mean of the
    per-trajectory battery-level trace distances.  By linearity each paired
    distance is computed from the evolved difference rho1 - rho2.
    """
    if rho1.shape != rho2.shape:
        raise ShapeError("pair states must share a basis")
    diff0 = rho1 - rho2
    if float(np.max(np.abs(diff0))) == 0.0:
        return np.zeros(grid.n_points)
    gen, (diff_p,), reducer = _prepare([diff0], spec, env, filter_on)
    plan = _Plan(gen)
    if isinstance(env, EnvA):
        offs = _rtn_offsets(env, grid)
        batch = np.broadcast_to(diff_p, (env.n_traj,) + diff_p.shape
                                ).astype(complex)
    else:
        offs = None
        batch = diff_p[None].astype(complex)
    sink = _DistanceSink(reducer, grid.n_points)
    # difference states are traceless carriers, not density matrices, so the
    # state-validity policy does not apply here
    _rk4_run(batch, plan, grid, offs, sink, None)
    return sink.d_series


def _assemble_result(mean_series: np.ndarray, reducer: _BatteryReducer,
                     d_series: np.ndarray | None, spec: SystemSpec,
                     grid: TimeGrid, e_res_mode: str) -> SimulationResult:
    obs = _battery_metrics(reducer.reduce(mean_series), spec)
    blp = (metrics.blp_measure(d_series, grid.dt).value
           if d_series is not None else None)
    e_res = metrics.residual_ergotropy(obs["ergotropy"], grid.dt,
                                       mode=e_res_mode)
    return SimulationResult(
        times=grid.times,
        ergotropy_series=obs["ergotropy"],
        energy_series=obs["energy"],
        population_series=obs["excitation"],
        trace_distance_series=d_series,
        e_res=e_res,
        blp=blp,
    )


def run_simulation(spec: SystemSpec, env: EnvironmentSpec, filter_on: bool,
                   grid: TimeGrid, e_res_mode: str = "integrated",
                   blp_pair: str = "superposition",
                   policy: CheckPolicy | None = None) -> SimulationResult:
    """One configured run: charge decay from |J, J> plus, unless disabled,
    the canonical-pair trace-distance series and its BLP summary."""
    rho0 = initial_charge_state(spec)
    pair = canonical_pair(spec) if blp_pair == "superposition" else None
    if isinstance(env, EnvA):
        return rtn_ensemble_evolve(rho0, spec, env, filter_on, grid,
                                   e_res_mode=e_res_mode, pair=pair,
                                   policy=policy)
    mean_series, reducer = _mean_state_series(rho0, spec, env, filter_on,
                                              grid, policy)
    d_series = None
    if pair is not None:
        d_series = evolve_pair_shared_noise(pair[0], pair[1], spec, env,
                                            filter_on, grid, policy)
    return _assemble_result(mean_series, reducer, d_series, spec, grid,
                            e_res_mode)
