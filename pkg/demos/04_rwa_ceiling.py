"""How many qubits before the excitation-conserving model breaks down.

Collective coupling grows as g*sqrt(N); once g_eff/omega_b crosses the 10%
line the counter-rotating terms stop being negligible and the simulator's
Hamiltonian is no longer trustworthy.  The report tabulates the ratio and
the last safe array size for two coupling strengths.
"""

from ergoshield.analysis import rwa_report

for g in (0.1, 0.01):
    report = rwa_report(g=g, omega_b=1.0, n_max_scan=12, threshold=0.1)
    print(f"g = {g}: largest valid array N_max = {report.n_max}")
    for n, ratio, usc in report.rows[:8]:
        tag = "USC" if usc else "ok"
        print(f"  N={n:3d}  g_eff/omega_b = {ratio:.4f}  [{tag}]")
    print()
