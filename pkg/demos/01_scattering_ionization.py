"""Ionization profiles of a driven resonance: weak, intermediate, strong field.

The ground state empties into the continuum through two interfering routes
(direct photoionization and via the discrete excited state).  At weak field
the ionization probability divided by time reproduces the classic
asymmetric profile; at strong field the profile flattens out.

Run:  python demos/01_scattering_ionization.py
Makes ionization_profiles.png when matplotlib is available.
"""

import pathlib

import numpy as np

from fanosolve import FanoParams, fano_profile, ionization_sweep, poles, weak_field_rate

eps = np.linspace(-10, 10, 401)
times = np.array([1.0, 30.0, 300.0])

print("Pole structure at the profile maximum (q = 1, Omega = 0.01):")
pd = poles(FanoParams(epsilon=1.0, q=1.0, Omega=0.01))
print(f"  slow decay  Gamma0 = {pd.Gamma0:.3e}   (the observable rate)")
print(f"  fast decays Gamma1 = {pd.Gamma1:.4f}, Gamma2 = {pd.Gamma2:.4f}")
print(f"  weak-field formula 2 Omega^2 (eps+q)^2/(1+eps^2) = "
      f"{weak_field_rate(1.0, 1.0, 0.01):.3e}")
print()

profiles = {}
for omega in (0.01, 0.1, 5.0):
    profiles[omega] = ionization_sweep(eps, times, q=1.0, Omega=omega)
    p = profiles[omega][1]  # T = 30
    print(f"Omega = {omega:<5}: P(T=30) spans [{p.min():.3e}, {p.max():.3e}], "
          f"max/min = {p.max() / p.min():.2f}")

print()
print("Weak field, T = 30: peak-normalized profile against the ideal shape")
ideal = fano_profile(eps, 1.0)
ideal /= ideal.max()
p = profiles[0.01][1] / profiles[0.01][1].max()
print(f"  largest deviation: {np.abs(p - ideal).max():.3f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping the figure")
else:
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.2), sharex=True)
    for ax, omega in zip(axes, profiles):
        for i, t in enumerate(times):
            ax.plot(eps, profiles[omega][i], label=f"T = {t:g}")
        ax.set_title(f"$\\Omega = {omega}$")
        ax.set_xlabel(r"$\epsilon$")
    axes[0].set_ylabel("ionization probability")
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    out = pathlib.Path(__file__).parent / "ionization_profiles.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
