"""Ergotropy survival over the (detuning, decay-rate) plane.

Each cell integrates the charge decay of a single-qubit battery and scores
the surviving ergotropy; the printed map shows the Lorentzian-filter
landscape of the reduced representation together with the analytic
delta*(gamma0) ridge samples.
"""

import numpy as np

from ergoshield import EnvNone, SystemSpec
from ergoshield.analysis import survival_map
from ergoshield.dynamics import TimeGrid

spec = SystemSpec(n_qubits=1)
out = survival_map(spec, EnvNone(), delta_range=(0.0, 1.2),
                   gamma_range=(0.02, 0.1), resolution=6,
                   grid=TimeGrid(0.0, 20.0, 0.01))

header = "gamma0 \\ delta | " + " ".join(f"{d:7.3f}" for d in out.delta_axis)
print(header)
print("-" * len(header))
for i, g0 in enumerate(out.gamma_axis):
    cells = " ".join(f"{v:7.3f}" for v in out.e_res[i])
    print(f"{g0:13.3f} | {cells}")

print("\nanalytic optimum delta*(gamma0):")
for g0, ds in zip(out.gamma_axis, out.analytic_curve):
    print(f"  gamma0={g0:.3f} -> delta*={ds:.4f}")
