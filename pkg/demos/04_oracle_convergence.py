"""Brute-force validation: a discretized bath converging to the exact solution.

Replace the continuum by a finite comb of levels, build the full Lindblad
generator with no elimination at all, and solve its steady state exactly.
As the band widens and the comb refines, the populations converge to the
effective-generator result, which quantifies the accuracy of the wideband
solution (and of this discretization class).

Run:  python demos/04_oracle_convergence.py
"""

from fanosolve import (DiscretizationSpec, FanoParams, convergence_study,
                       fano_model, steady_state, transport_rate)

params = FanoParams(epsilon=0.5, q=1.0, Omega=0.05, Gamma_e=0.1, Gamma_cg=2.0)
ss = steady_state(params)
nc_ref = ss.continuum_pops[0]
r_ref = transport_rate(params)
print(f"effective solution: continuum population {nc_ref:.6e}, "
      f"transfer rate {r_ref:.6e}")

ladder = [
    DiscretizationSpec(bandwidth=25.0, levels_per_continuum=26),
    DiscretizationSpec(bandwidth=50.0, levels_per_continuum=51),
    DiscretizationSpec(bandwidth=100.0, levels_per_continuum=101),
    DiscretizationSpec(bandwidth=200.0, levels_per_continuum=201),
]
study = convergence_study(fano_model(params), ladder, params.epsilon,
                          nc_ref, r_ref)

print()
print("  bandwidth  levels   population      rel.error    rate rel.error")
for w, mk, nc, enc, er in zip(study.bandwidths, study.levels,
                              study.nc_oracle, study.nc_errors,
                              study.r_errors):
    print(f"  {w:9.0f}  {mk:6d}   {nc:.6e}   {enc:10.2e}   {er:10.2e}")
print()
print(f"errors decrease along the ladder: {study.decreasing}")
print(f"fitted error order (in inverse bandwidth here): {study.fitted_order:.2f}")
