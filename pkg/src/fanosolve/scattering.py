"""Hilbert-space solution of the driven discrete-continuum scattering problem.

In units of the continuum-induced width (``gamma = n*pi*V**2``, times in
``1/gamma``) the ground/excited dynamics after eliminating the flat
continuum is generated by the non-Hermitian 2x2 effective Hamiltonian

    H_eff = [[-i Omega^2,   Omega (q - i)],
             [Omega (q - i), -epsilon - i]].

The ground-state survival amplitude is a two-pole sum
``U_gg(t) = a1 exp(-i z1 t) + a2 exp(-i z2 t)`` whose poles are the
eigenvalues of ``H_eff``; everything observable (ionization probability,
weak-field rate, rate hierarchy) follows from the pole data.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .models import FanoParams

__all__ = [
    "build_heff",
    "PoleData",
    "poles",
    "survival_probability",
    "survival_rate",
    "weak_field_rate",
    "ionization_sweep",
    "n_ionized",
]

#: |omega| / |omega_0| below which the two poles are treated as confluent.
_DEGENERATE_TOL = 1e-9


def build_heff(p: FanoParams) -> np.ndarray:
    """Effective 2x2 Hamiltonian on the (ground, excited) subspace."""
    w = p.Omega * (p.q - 1j)
    return np.array([[-1j * p.Omega**2, w],
                     [w, -p.epsilon - 1j]], dtype=complex)


@dataclass(frozen=True)
class PoleData:
    """Poles and residues of the ground-ground resolvent element.

    ``z1`` is the slow pole (decay rate ``Gamma0``), ``z2`` the fast one
    (``Gamma2``); the square-root branch of ``omega`` is fixed to
    ``Im(omega) >= 0`` so the labels are deterministic.  ``a1 + a2 = 1``.
    A confluent pair (``omega ~ 0``) is flagged ``degenerate``; the
    amplitude then carries a linear secular term handled by
    :func:`survival_probability`.
    """

    z1: complex
    z2: complex
    omega0: complex
    omega: complex
    a1: complex
    a2: complex
    Gamma0: float
    Gamma1: float
    Gamma2: float
    degenerate: bool = False


def poles(p: FanoParams) -> PoleData:
    """Resolvent poles ``z_{1,2} = -(omega0 -+ omega)/2`` and their residues.

    ``omega0 = epsilon + i(1 + Omega^2)`` and ``omega`` is the square root
    of ``(epsilon+i)^2 - 2 Omega^2 [1 - 2q^2 + i(4q + epsilon)] - Omega^4``.
    Either square-root determination describes the same dynamics (it only
    swaps the pole labels); the branch with ``Im(omega) >= 0`` is chosen so
    that ``Gamma0 <= Gamma2`` always holds.
    """
    eps, q, Om = p.epsilon, p.q, p.Omega
    omega0 = eps + 1j * (1.0 + Om**2)
    radicand = (eps + 1j) ** 2 - 2.0 * Om**2 * (1.0 - 2.0 * q**2 + 1j * (4.0 * q + eps)) - Om**4
    omega = cmath.sqrt(radicand)
    if omega.imag < 0 or (omega.imag == 0 and omega.real < 0):
        omega = -omega

    gamma1 = 1.0 + Om**2
    gamma0 = gamma1 - omega.imag
    gamma2 = gamma1 + omega.imag

    if abs(omega) < _DEGENERATE_TOL * abs(omega0):
        z = -omega0 / 2.0
        # Confluent double pole: G_gg = 1/(z - z1) + (z1 + eps + i)/(z - z1)^2,
        # so U_gg(t) = (1 - i (z1 + eps + i) t) exp(-i z1 t).  Residues are
        # stored as the t-independent weight plus the secular coefficient.
        return PoleData(z, z, omega0, omega, 1.0 + 0.0j, 0.0j,
                        gamma0, gamma1, gamma2, degenerate=True)

    z1 = -(omega0 - omega) / 2.0
    z2 = -(omega0 + omega) / 2.0
    a1 = (z1 + eps + 1j) / (z1 - z2)
    a2 = (z2 + eps + 1j) / (z2 - z1)
    return PoleData(z1, z2, omega0, omega, a1, a2, gamma0, gamma1, gamma2)


def _amplitude(pd: PoleData, p: FanoParams, t: np.ndarray) -> np.ndarray:
    if pd.degenerate:
        c = -1j * (pd.z1 + p.epsilon + 1j)
        return (1.0 + c * t) * np.exp(-1j * pd.z1 * t)
    return pd.a1 * np.exp(-1j * pd.z1 * t) + pd.a2 * np.exp(-1j * pd.z2 * t)


def survival_probability(p: FanoParams, t):
    """Probability ``|U_gg(t)|**2`` of remaining in the ground state.

    ``t >= 0`` in units of the inverse reference width; accepts arrays.
    The ionization probability is ``P(t) = 1 - survival_probability(p, t)``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    pd = poles(p)
    out = np.abs(_amplitude(pd, p, t)) ** 2
    return out if out.ndim else float(out)


def survival_rate(p: FanoParams, t):
    """Time derivative ``d|U_gg|^2/dt`` (so ``dP/dt`` is its negative)."""
    t = np.asarray(t, dtype=float)
    pd = poles(p)
    u = _amplitude(pd, p, t)
    if pd.degenerate:
        c = -1j * (pd.z1 + p.epsilon + 1j)
        du = (c + (1.0 + c * t) * (-1j * pd.z1)) * np.exp(-1j * pd.z1 * t)
    else:
        du = (-1j * pd.z1 * pd.a1 * np.exp(-1j * pd.z1 * t)
              - 1j * pd.z2 * pd.a2 * np.exp(-1j * pd.z2 * t))
    out = 2.0 * np.real(np.conj(u) * du)
    return out if out.ndim else float(out)


def weak_field_rate(epsilon, q, Omega):
    """Weak-field ionization rate ``2 Omega^2 (epsilon + q)^2 / (1 + epsilon^2)``.

    Valid fragmentation rate for ``Omega^2 (1 + q^2) << 1`` on the window
    ``1 << t << 1/Gamma0``; callers own that check.
    """
    epsilon = np.asarray(epsilon, dtype=float)
    out = 2.0 * Omega**2 * (epsilon + q) ** 2 / (1.0 + epsilon**2)
    return out if out.ndim else float(out)


def ionization_sweep(epsilons, times, q: float, Omega: float) -> np.ndarray:
    """Ionization probability ``P = 1 - |U_gg|^2`` on a (time, detuning) grid.

    Returns an array of shape ``(len(times), len(epsilons))`` with values in
    [0, 1].  Grid points are independent; the loop is plain and
    deterministic.
    """
    epsilons = np.asarray(epsilons, dtype=float)
    times = np.asarray(times, dtype=float)
    out = np.empty((times.size, epsilons.size))
    for j, eps in enumerate(epsilons):
        pd = poles(FanoParams(epsilon=float(eps), q=q, Omega=Omega))
        u = _amplitude(pd, FanoParams(epsilon=float(eps), q=q, Omega=Omega), times)
        out[:, j] = 1.0 - np.abs(u) ** 2
    return out


def n_ionized(p: FanoParams, T: float, flux: float = 1.0,
              method: str = "exact") -> float:
    """Number of detected ions after an interaction window of length T.

    ``method="exact"`` integrates the pole solution, ``flux * P(T)``.
    ``method="fano-linear"`` is the linear-in-T approximation
    ``flux * T * weak_field_rate`` whose detuning dependence is an exact
    Fano profile.
    """
    if method == "exact":
        return flux * (1.0 - survival_probability(p, T))
    if method == "fano-linear":
        return flux * T * weak_field_rate(p.epsilon, p.q, p.Omega)
    raise ValueError(f"unknown method {method!r}")
