"""Pure dephasing of the two-branch qubit.

The reduced dynamics has no Hamiltonian part: coherences decay as
exp(-Gamma t), the population gap as exp(-2 Gamma t), and everything
relaxes to the maximally mixed state. The fixed-step integrator is only a
cross-check of the analytic map; both are shown side by side.
"""

import numpy as np

from gravidec import QubitState, evolve_populations, evolve_populations_rk4

gamma = 0.25  # Hz
state0 = QubitState(0.9, 0.1, 0.25 + 0.1j)

print(f"Gamma = {gamma} Hz, half-life of the coherence: {np.log(2) / gamma:.3f} s\n")
print(f"{'t (s)':>7} {'rho11':>9} {'rho22':>9} {'|rho12|':>9} {'gap':>10} {'rk4 dev':>10}")
for t in np.linspace(0.0, 24.0, 9):
    exact = evolve_populations(state0, gamma, float(t))
    numeric, _ = evolve_populations_rk4(state0, gamma, float(t))
    dev = max(abs(numeric.rho11 - exact.rho11), abs(numeric.rho12 - exact.rho12))
    print(f"{t:>7.1f} {exact.rho11:>9.5f} {exact.rho22:>9.5f} "
          f"{abs(exact.rho12):>9.5f} {exact.population_gap:>10.2e} {dev:>10.1e}")

late = evolve_populations(state0, gamma, 200.0)
print(f"\nt = 200 s: rho = [[{late.rho11:.9f}, {abs(late.rho12):.2e}], "
      f"[., {late.rho22:.9f}]]  -> maximally mixed")
