"""Audit the angular-integration identities behind the rate formula.

The angular reduction rests on a handful of sphere integrals: the
plane-wave average (giving the sinc), the transverse-traceless projector
average (the 8 pi/5 isotropic tensor), the polarization completeness sum,
and the scalar kernel average. This script recomputes each one by
quadrature and prints what actually holds.

Two claims are flagged on purpose:
  * the scalar kernel integrates to 10 pi/3, not the quoted 4 pi;
  * the linear basis e (x) e does not satisfy the completeness relation;
    the plus/cross combinations do (against the half-convention projector).
"""

from gravidec import verify_identities

records = verify_identities()

width = max(len(r.name) for r in records)
print(f"{'identity':<{width}}  {'status':<8} {'computed':>14} {'quoted':>14} {'residual':>10}")
for r in records:
    print(f"{r.name:<{width}}  {r.status:<8} {r.computed:>14.6g} "
          f"{r.paper_value:>14.6g} {r.residual:>10.3g}")

flagged = [r.name for r in records if r.status == "flagged"]
print(f"\n{len(records) - len(flagged)} identities pass; {len(flagged)} flagged:")
for name in flagged:
    print(f"  - {name}")
