"""Charge decay of a two-qubit collective battery, filtered vs unfiltered.

The battery starts fully charged.  Without detuning the cavity funnels the
stored energy straight into the environment; at the analytic operating point
delta* the exchange is dispersively suppressed and most of the ergotropy
survives the run.  The canonical-pair trace distance shows the backflow
picture: strong oscillations on resonance, nearly monotone decay when
detuned.
"""

import numpy as np

from ergoshield import EnvA, SystemSpec, delta_star, run_simulation
from ergoshield.dynamics import TimeGrid

N = 2
grid = TimeGrid(0.0, 20.0, 0.005)
ds = delta_star(N, g=0.1, gamma0=0.05)
env = EnvA(n_traj=40, seed=1)

print(f"two-qubit battery, analytic detuning delta* = {ds:.4f}")
for label, filter_on in (("unfiltered (delta = 0)", False),
                         (f"filtered (delta = {ds:.4f})", True)):
    spec = SystemSpec(n_qubits=N, delta=ds, representation="full")
    res = run_simulation(spec, env, filter_on, grid)
    checkpoints = np.searchsorted(grid.times, [0.0, 5.0, 10.0, 20.0])
    line = "  ".join(f"E(t={grid.times[i]:.0f})={res.ergotropy_series[i]:.3f}"
                     for i in checkpoints)
    print(f"{label}:")
    print(f"  {line}")
    print(f"  integrated ergotropy = {res.e_res:.4f},"
          f" backflow measure = {res.blp:.4f}")
