"""ergoshield: collective open quantum battery simulator.

Reproduces the detuning-protection pipeline: collective Lindblad decay under
telegraph-noise and driven-thermal environments, ergotropy and BLP metrics,
survival maps over (detuning, decay rate), the sqrt(N) detuning scaling law,
the collective advantage ratio and the rotating-wave validity ceiling.
"""

__version__ = "0.1.0"

from .dynamics import (RtnPath, SimulationResult, TimeGrid, evolve,
                       evolve_pair_shared_noise, rtn_ensemble_evolve,
                       run_simulation, sample_rtn_path)
from .metrics import (blp_measure, collective_advantage, ergotropy,
                      residual_ergotropy, trace_distance)
from .model import (Dissipator, EnvA, EnvB, EnvNone, Generator, SystemSpec,
                    build_generator, delta_star, dispersive_decay_rate,
                    effective_spectral_density, filtered_rate,
                    nonhermitian_eigenvalues)
from .operators import (BasisDescriptor, CollectiveOps, cavity_ops,
                        collective_ops, dicke_state, lift)

__all__ = [
    "__version__",
    "TimeGrid", "RtnPath", "SimulationResult",
    "evolve", "sample_rtn_path", "rtn_ensemble_evolve",
    "evolve_pair_shared_noise", "run_simulation",
    "ergotropy", "trace_distance", "blp_measure", "residual_ergotropy",
    "collective_advantage",
    "SystemSpec", "EnvNone", "EnvA", "EnvB", "Dissipator", "Generator",
    "delta_star", "filtered_rate", "effective_spectral_density",
    "build_generator", "nonhermitian_eigenvalues", "dispersive_decay_rate",
    "BasisDescriptor", "CollectiveOps", "collective_ops", "cavity_ops",
    "dicke_state", "lift",
]
