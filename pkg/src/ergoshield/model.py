"""Physical model builders: Hamiltonians, dissipator sets, the Lorentzian
filtered decay rate, the analytic optimal detuning and the dispersive-limit
cross-checks.

Two representations are supported:

* ``reduced``   -- battery-only Dicke ladder; the cavity has been adiabatically
  eliminated and the environment acts through a collective decay channel whose
  rate is the stationary Lorentzian-filtered value.
* ``full``      -- battery plus a truncated cavity mode coupled by the
  excitation-conserving exchange term; the environment damps the cavity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import operators
from .errors import ConfigError, DomainError
from .operators import BasisDescriptor, dicke_mode, fock_mode

RateLike = Union[float, Callable[[float], float]]


# --------------------------------------------------------------------------
# environment variants


@dataclass(frozen=True)
class EnvNone:
    """No stochastic or thermal channels beyond collective decay."""


@dataclass(frozen=True)
class EnvA:
    """Random-telegraph frequency noise: omega_b(t) = omega_b + delta_amp*chi(t).

    ``chi`` flips between +1 and -1 at switching rate ``lambda_switch``; an
    ensemble of ``n_traj`` seeded paths is averaged.
    """

    lambda_switch: float = 0.05
    delta_amp: float = 0.1
    n_traj: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.lambda_switch <= 0:
            raise DomainError("lambda_switch must be > 0")
        if self.n_traj < 1:
            raise DomainError("n_traj must be >= 1")


@dataclass(frozen=True)
class EnvB:
    """Driven thermal bath with mean photon number n0*(1+sin^2(omega_drive*t))
    plus collective dephasing at rate gamma_phi."""

    n0: float = 0.1
    omega_drive: float = math.pi / 5.0
    gamma_phi: float = 0.02

    def __post_init__(self):
        if self.n0 < 0:
            raise DomainError("n0 must be >= 0")
        if self.gamma_phi < 0:
            raise DomainError("gamma_phi must be >= 0")

    def thermal_occupation(self, t: float) -> float:
        return self.n0 * (1.0 + math.sin(self.omega_drive * t) ** 2)


EnvironmentSpec = Union[EnvNone, EnvA, EnvB]


# --------------------------------------------------------------------------
# system specification


@dataclass(frozen=True)
class SystemSpec:
    """Physical constants of the battery(+cavity) system, natural units."""

    n_qubits: int
    omega_b: float = 1.0
    delta: float = 0.0
    g: float = 0.1
    gamma0: float = 0.05
    kappa: float | None = None     # cavity linewidth; defaults to gamma0
    eta: float | None = None       # filter prefactor; defaults to gamma0
    omega_cut: float = 5.0
    n_cav: int = 6
    representation: str = "reduced"

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DomainError("n_qubits must be >= 1")
        if self.gamma0 <= 0:
            raise DomainError("gamma0 must be > 0")
        if self.g < 0:
            raise DomainError("g must be >= 0")
        if self.representation not in ("reduced", "full"):
            raise ConfigError("system.representation",
                              f"unknown representation {self.representation!r}")
        for name in ("omega_b", "delta", "g", "gamma0", "omega_cut"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @property
    def kappa_resolved(self) -> float:
        return self.gamma0 if self.kappa is None else self.kappa

    @property
    def eta_resolved(self) -> float:
        return self.gamma0 if self.eta is None else self.eta


@dataclass(frozen=True)
class Dissipator:
    """Lindblad channel: operator L and a non-negative rate (possibly t-dependent)."""

    operator: np.ndarray
    rate: RateLike

    def rate_at(self, t: float) -> float:
        return self.rate(t) if callable(self.rate) else self.rate


@dataclass(frozen=True)
class Generator:
    """Right-hand side data of the master equation.

    ``offset_op`` is the frequency-offset channel: the effective Hamiltonian
    is h0 + c(t)*offset_op where the coefficient stream c(t) is supplied by
    the evolution routine (zero when absent).
    """

    h0: np.ndarray
    dissipators: tuple[Dissipator, ...]
    basis: BasisDescriptor
    offset_op: np.ndarray | None = None

    def __post_init__(self):
        dev = float(np.max(np.abs(self.h0 - self.h0.conj().T)))
        if dev > 1e-9:
            raise DomainError(f"hamiltonian not Hermitian (deviation {dev:.2e})")


# --------------------------------------------------------------------------
# closed-form pieces


def delta_star(n_qubits: int, g: float, gamma0: float) -> float:
    """Optimal operational detuning g*sqrt(N/(2*gamma0)).

    Factored so that delta_star(N)/delta_star(1) == sqrt(N) exactly in
    floating point.
    """
    if gamma0 <= 0:
        raise DomainError("gamma0 must be > 0")
    if g < 0:
        raise DomainError("g must be >= 0")
    if n_qubits < 1:
        raise DomainError("n_qubits must be >= 1")
    return g * math.sqrt(n_qubits) / math.sqrt(2.0 * gamma0)


def filtered_rate(delta: float, eta: float, omega_cut: float) -> float:
    """Stationary Lorentzian-filtered decay rate eta*wc^2/(wc^2 + delta^2)."""
    if omega_cut <= 0:
        raise DomainError("omega_cut must be > 0")
    if eta < 0:
        raise DomainError("eta must be >= 0")
    return eta * omega_cut**2 / (omega_cut**2 + delta**2)


def effective_spectral_density(omega: float, delta: float, kappa: float,
                               j_bare: Callable[[float], float]) -> float:
    """Cavity-filtered spectral density kappa*J(omega)/((omega-delta)^2 + kappa^2)."""
    if kappa <= 0:
        raise DomainError("kappa must be > 0")
    return kappa * j_bare(omega) / ((omega - delta) ** 2 + kappa**2)


def ohmic_density(eta: float, omega_cut: float) -> Callable[[float], float]:
    """Ohmic bare spectral density J(w) = eta*w*exp(-w/omega_cut)."""
    return lambda omega: eta * omega * math.exp(-omega / omega_cut)


def nonhermitian_eigenvalues(omega_eff: float, delta: float,
                             gamma0: float) -> tuple[complex, complex]:
    """Both roots of lambda^2 - (delta - i*gamma0/2)*lambda - omega_eff^2 = 0.

    Returned (battery branch, cavity branch); the battery branch is the root
    of smaller modulus, which tends to -Omega^2/(delta - i*gamma0/2) in the
    dispersive limit.
    """
    s = complex(delta, -gamma0 / 2.0)
    disc = np.sqrt(s * s + 4.0 * omega_eff**2 + 0j)
    r1 = (s + disc) / 2.0
    r2 = (s - disc) / 2.0
    return (r2, r1) if abs(r2) <= abs(r1) else (r1, r2)


def dispersive_decay_rate(g: float, n_qubits: int, delta: float,
                          gamma0: float) -> float:
    """Superradiant effective decay gamma0*g^2*N/delta^2 (dispersive limit)."""
    if delta == 0:
        raise DomainError("dispersive decay rate is singular at delta = 0")
    return gamma0 * g**2 * n_qubits / delta**2


# --------------------------------------------------------------------------
# generator assembly


def build_generator(spec: SystemSpec, env: EnvironmentSpec,
                    filter_on: bool = True) -> Generator:
    """Assemble the master-equation generator for a system/environment pair.

    Reduced representation: H = omega_b*Jz; collective decay J- at the
    stationary filtered rate (eta defaulting to gamma0); environment B adds
    thermal absorption J+ at gamma0*n(t), scales emission by (n(t)+1) and adds
    Jz dephasing; environment A declares the Jz frequency-offset channel.

    Full representation: H = omega_b*Jz + omega_c*n + g*(J+ a + J- a+) with
    omega_c = omega_b + delta (delta dropped when the filter is off) and
    cavity damping at kappa; environment B damps/pumps the cavity with the
    driven thermal occupation and dephases the battery.
    """
    delta_eff = spec.delta if filter_on else 0.0
    col = operators.collective_ops(spec.n_qubits)

    if spec.representation == "reduced":
        basis = BasisDescriptor((dicke_mode(spec.n_qubits),))
        h0 = spec.omega_b * col.jz
        rate = filtered_rate(delta_eff, spec.eta_resolved, spec.omega_cut)
        offset_op = None
        if isinstance(env, EnvNone):
            dissipators = (Dissipator(col.jminus, rate),)
        elif isinstance(env, EnvA):
            dissipators = (Dissipator(col.jminus, rate),)
            offset_op = col.jz
        elif isinstance(env, EnvB):
            nbar = env.thermal_occupation
            dissipators = (
                Dissipator(col.jminus, lambda t, r=rate, f=nbar: r * (f(t) + 1.0)),
                Dissipator(col.jplus, lambda t, g0=spec.gamma0, f=nbar: g0 * f(t)),
                Dissipator(col.jz, env.gamma_phi),
            )
        else:
            raise ConfigError("environment.type", f"unsupported environment {env!r}")
        return Generator(h0=h0, dissipators=dissipators, basis=basis,
                         offset_op=offset_op)

    # full-cavity representation
    if spec.n_cav < 2:
        raise ConfigError("system.n_cav", "full representation needs n_cav >= 2")
    basis = BasisDescriptor((dicke_mode(spec.n_qubits), fock_mode(spec.n_cav)))
    a, adag, number = operators.cavity_ops(spec.n_cav)
    jz_l = operators.lift(col.jz, 0, basis)
    jp_l = operators.lift(col.jplus, 0, basis)
    jm_l = operators.lift(col.jminus, 0, basis)
    a_l = operators.lift(a, 1, basis)
    adag_l = operators.lift(adag, 1, basis)
    n_l = operators.lift(number, 1, basis)
    omega_c = spec.omega_b + delta_eff
    h0 = spec.omega_b * jz_l + omega_c * n_l + spec.g * (jp_l @ a_l + jm_l @ adag_l)
    kappa = spec.kappa_resolved

    offset_op = None
    if isinstance(env, EnvNone):
        dissipators = (Dissipator(a_l, kappa),)
    elif isinstance(env, EnvA):
        dissipators = (Dissipator(a_l, kappa),)
        offset_op = jz_l
    elif isinstance(env, EnvB):
        nbar = env.thermal_occupation
        dissipators = (
            Dissipator(a_l, lambda t, k=kappa, f=nbar: k * (f(t) + 1.0)),
            Dissipator(adag_l, lambda t, k=kappa, f=nbar: k * f(t)),
            Dissipator(jz_l, env.gamma_phi),
        )
    else:
        raise ConfigError("environment.type", f"unsupported environment {env!r}")
    return Generator(h0=h0, dissipators=dissipators, basis=basis,
                     offset_op=offset_op)
