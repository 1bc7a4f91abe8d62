"""From electron to dust grain: the mass / constituent-number plane.

Composite systems of N constituents radiate coherently, so the rate picks
up N^2 on top of the 1/m_f^2 single-particle scaling. Along the physical
line N = M / m_nucleon this gives tau_dec ~ 1/M^2: heavier objects lose
coherence quadratically faster. The table below is a coarse version of the
full sweep (`gravidec sweep` writes the complete CSV).
"""

import numpy as np

from gravidec import CODATA, classify_regime, paper_electron_params, sweep_grid

params, spectrum, kernel = paper_electron_params()

masses = np.logspace(-30, -12, 7)
counts = np.logspace(0, 15, 6)
rows = sweep_grid(masses, counts, params, spectrum, kernel, horizon=1.0)

print(f"{'M (kg)':>10} {'N':>8} {'Gamma_N (Hz)':>14} {'tau (s)':>12}  regime")
for row in rows:
    mark = " <- physical line" if row.on_physical_line else ""
    print(f"{row.m_kg:>10.1e} {row.n:>8.0e} {row.gamma_hz:>14.3e} "
          f"{row.tau_s:>12.3e}  {row.regime}{mark}")

# Single-constituent landmarks, nucleon composites per the mass-scaling law.
print("\nlandmarks (horizon 1 s):")
gamma_e = 1e-2
for label, n in (("electron", 1), ("large molecule", 1e2), ("virus", 1e6)):
    gamma1 = gamma_e * (CODATA.m_e / CODATA.m_N) ** 2 if n > 1 else gamma_e
    gamma_n = n * n * gamma1
    print(f"  {label:>15}: Gamma = {gamma_n:.2e} Hz -> {classify_regime(gamma_n)}")
