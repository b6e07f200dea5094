"""Dissipative steady state of the single resonance: 4x4 effective Liouvillian.

Eliminating the flat continuum from the Lindblad dynamics leaves a closed
generator on the four components (gg, eg, ge, ee) of the discrete-subspace
density matrix.  With ``K = 1 + iq`` and
``A = -Gamma_e - Omega^2 - i epsilon - gamma_eg - 1`` it reads

    L_eff = [[ 2 W^2 (b-1),  (2b-1+iq) W,  (2b-1-iq) W,  2b + 2 Ge ],
             [ -K* W,         A,            0,           -K  W     ],
             [ -K  W,         0,            A*,          -K* W     ],
             [ 2 W^2 (1-b),  (1-2b-iq) W,  (1-2b+iq) W,  2(1-b) - 2 - 2 Ge ]]

(W = Omega, b = beta, Ge = Gamma_e), which for beta = 1 reduces to the
standard closed-form matrix with first row ``[0, K W, K* W, 2 Ge + 2]`` and
last row ``[0, -K W, -K* W, -2 - 2 Ge]``.  The decomposition
``L_eff = hamiltonian_superop(H_eff) + L_QJ + TLS dissipators`` with the
scattering H_eff holds entrywise; the quantum-jump matrix L_QJ returns the
continuum flux to the populations, fraction beta to gg and 1-beta to ee.
The ee diagonal necessarily carries ``-2 Gamma_e`` (the gg and ee rows of
the generator cancel exactly, which is what makes the kernel
one-dimensional and the 3x3 Cramer reduction exact).

The integrated continuum population follows from the steady state through
the coefficient vector ``C = (2/Gamma_c) [Omega^2, Omega, Omega, 1]``,
which is the flux-balance normalization (the jump row divided by the total
continuum relaxation rate); it is validated against the brute-force
discretized solver in the test suite.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .lineshape import FitResult, LineshapeDecomposition, decompose, fit_rational_quadratic
from .models import DensityMatrixP, FanoParams
from .scattering import build_heff
from .superop import basis_jump_superop, dephasing_superop, hamiltonian_superop

__all__ = [
    "EffectiveLiouvillian4",
    "build_effective_liouvillian",
    "CramerSystem",
    "cramer_system",
    "steady_state",
    "steady_state_cramer",
    "SteadyStateError",
    "transport_rate",
    "continuum_coherence",
    "absorption_rate",
    "SweepResult",
    "lineshape_sweep",
]

logger = logging.getLogger("fanosolve")


class SteadyStateError(RuntimeError):
    """No unique physical steady state for the requested parameters."""


@dataclass(frozen=True)
class EffectiveLiouvillian4:
    """Effective generator on (gg, eg, ge, ee) and its building blocks.

    ``matrix`` is the full 4x4 generator; ``heff`` the scattering effective
    Hamiltonian, ``Ltilde`` the quantum-jump part restoring continuum flux,
    and ``C`` the coefficient vector contracting the steady state into the
    integrated continuum population.
    """

    matrix: np.ndarray
    heff: np.ndarray
    Ltilde: np.ndarray
    C: np.ndarray
    K: complex
    A: complex


def _quantum_jump_matrix(Omega: float, beta: float) -> np.ndarray:
    row = 2.0 * np.array([Omega**2, Omega, Omega, 1.0])
    lqj = np.zeros((4, 4))
    lqj[0] = beta * row
    lqj[3] = (1.0 - beta) * row
    return lqj


def build_effective_liouvillian(p: FanoParams) -> EffectiveLiouvillian4:
    """Assemble the 4x4 effective Liouvillian for the given parameters.

    Built entrywise from the closed-form matrix elements; the test suite
    checks it against the independent superoperator construction
    ``hamiltonian_superop(H_eff) + L_QJ + jump(e->g, 2 Gamma_e) +
    dephasing(gamma_eg)`` to 1e-14.

    Continuum-level pure dephasings (``gamma_kg``, ``gamma_ke``) do not
    enter: in the wideband limit they only shift widths of eliminated
    coherences.  They are accepted and ignored with a logged notice.
    """
    if p.gamma_kg != 0 or p.gamma_ke != 0:
        logger.info(
            "continuum pure dephasings gamma_kg=%g, gamma_ke=%g have no effect "
            "on the wideband effective generator and are ignored",
            p.gamma_kg, p.gamma_ke,
        )
    if p.Gamma_c <= 0:
        raise ValueError("Gamma_cg + Gamma_ce must be positive")
    q, Om, Ge, geg, beta = p.q, p.Omega, p.Gamma_e, p.gamma_eg, p.beta
    K = 1.0 + 1j * q
    A = -Ge - Om**2 - 1j * p.epsilon - geg - 1.0

    L = np.zeros((4, 4), dtype=complex)
    L[0] = [2.0 * Om**2 * (beta - 1.0), (2 * beta - 1 + 1j * q) * Om,
            (2 * beta - 1 - 1j * q) * Om, 2.0 * beta + 2.0 * Ge]
    L[1] = [-K.conjugate() * Om, A, 0.0, -K * Om]
    L[2] = [-K * Om, 0.0, A.conjugate(), -K.conjugate() * Om]
    L[3] = [2.0 * Om**2 * (1.0 - beta), (1 - 2 * beta - 1j * q) * Om,
            (1 - 2 * beta + 1j * q) * Om, 2.0 * (1.0 - beta) - 2.0 - 2.0 * Ge]

    C = (2.0 / p.Gamma_c) * np.array([Om**2, Om, Om, 1.0])
    return EffectiveLiouvillian4(L, build_heff(p), _quantum_jump_matrix(Om, beta), C, K, A)


def discrete_dissipator_superop(p: FanoParams) -> np.ndarray:
    """Two-level-system dissipators: e->g jump (rate 2 Gamma_e) plus dephasing."""
    out = basis_jump_superop(1, 0, 2.0 * p.Gamma_e, 2)
    out = out + dephasing_superop(0, 1, p.gamma_eg, 2)
    return out


@dataclass(frozen=True)
class CramerSystem:
    """3x3 reduction ``M v = b`` of the kernel problem.

    Unknowns ``v = (rho'_gg, rho'_eg, rho'_ge)`` with ``rho'_ee = 1``; rows
    are the gg, eg and ge rows of the effective Liouvillian (its ee row is
    the exact negative of the gg row, hence redundant).  For beta = 1 this
    is the standard closed-form system ``M = [[0, K W, K* W], [-K* W, A, 0],
    [-K W, 0, A*]]``, ``b = (-2 Gamma_e - 2, K W, K* W)``.
    """

    M: np.ndarray
    b: np.ndarray


def cramer_system(p: FanoParams) -> CramerSystem:
    L = build_effective_liouvillian(p).matrix
    return CramerSystem(L[:3, :3].copy(), -L[:3, 3].copy())


def _normalize(vec4: np.ndarray, C: np.ndarray) -> tuple[np.ndarray, float]:
    nc = float(np.real(C @ vec4))
    z = float(np.real(vec4[0] + vec4[3])) + nc
    if not np.isfinite(z) or abs(z) < 1e-300:
        raise SteadyStateError("steady state has vanishing total weight")
    vec4 = vec4 / z
    return vec4, nc / z


def _as_density(vec4: np.ndarray, nc: float) -> DensityMatrixP:
    rho = np.array([[vec4[0], vec4[2]], [vec4[1], vec4[3]]], dtype=complex)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrixP(rho, (nc,))


def steady_state(p: FanoParams) -> DensityMatrixP:
    """Unique steady state of the effective generator, trace-plus-continuum normalized.

    Solves the three independent generator rows with the normalization
    constraint appended (numerically safer than dividing by det(M) when the
    latter is small; the Cramer route is kept as a cross-check in
    :func:`steady_state_cramer`).  Raises :class:`SteadyStateError` when the
    kernel is not one-dimensional, e.g. with all relaxation channels and the
    drive switched off.
    """
    eff = build_effective_liouvillian(p)
    A = np.zeros((4, 4), dtype=complex)
    A[:3] = eff.matrix[:3]
    A[3] = np.array([1.0, 0.0, 0.0, 1.0]) + eff.C
    rhs = np.array([0.0, 0.0, 0.0, 1.0], dtype=complex)
    try:
        x = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SteadyStateError(f"no unique steady state: {exc}") from exc
    resid = np.max(np.abs(A @ x - rhs))
    if not np.isfinite(resid) or resid > 1e-8:
        raise SteadyStateError(f"steady-state solve residual {resid:.2e}; "
                               "kernel degenerate or ill-conditioned")
    nc = float(np.real(eff.C @ x))
    return _as_density(x, nc)


def steady_state_cramer(p: FanoParams) -> DensityMatrixP:
    """Steady state via Cramer determinants; cross-check path.

    ``(rho'_gg, rho'_eg, rho'_ge, rho'_ee) = (det M1, det M2, det M3, det M)``
    up to the common normalization.  Rejects ``det(M) = 0`` (either no
    steady state or a degenerate kernel).
    """
    eff = build_effective_liouvillian(p)
    sys_ = cramer_system(p)
    det_m = np.linalg.det(sys_.M)
    scale = np.max(np.abs(sys_.M), initial=0.0) ** 3
    if abs(det_m) <= 1e-14 * max(scale, 1e-300):
        raise SteadyStateError("det(M) = 0: no unique steady state")
    vec4 = np.empty(4, dtype=complex)
    for i in range(3):
        mi = sys_.M.copy()
        mi[:, i] = sys_.b
        vec4[i] = np.linalg.det(mi)
    vec4[3] = det_m
    vec4, nc = _normalize(vec4, eff.C)
    return _as_density(vec4, nc)


def transport_rate(p: FanoParams) -> float:
    """Stationary ground-to-continuum transfer rate ``r = Gamma_c n_c / rho_gg``.

    Independent of the continuum relaxation rate, which only sets the time
    scale on which the stationary regime is reached.  Undefined for a fully
    saturated ground state.
    """
    ss = steady_state(p)
    rho_gg = float(np.real(ss.rho[0, 0]))
    if rho_gg <= 1e-12:
        raise SteadyStateError("rho_gg = 0 at steady state; transfer rate undefined")
    return p.Gamma_c * ss.continuum_pops[0] / rho_gg


def continuum_coherence(p: FanoParams, ss: DensityMatrixP) -> complex:
    """Coupling-weighted continuum-ground coherence integral.

    First-order reconstruction of the eliminated subspace at stationarity:
    every surviving single-pole integral contributes the same
    energy-independent constant, so the integral collapses to
    ``i (rho_eg + Omega rho_gg)`` in reference-coupling units (the sign of
    the constant follows the phase convention of :mod:`fanosolve.superop`).
    """
    return 1j * (ss.rho[1, 0] + p.Omega * ss.rho[0, 0])


def absorption_rate(p: FanoParams, ss: DensityMatrixP | None = None) -> float:
    """Stationary photon absorption rate of the driven system.

    Dipole-weighted imaginary part of the optical coherences,
    ``2 Omega Im[q rho_eg + i(rho_eg + Omega rho_gg)]``.  At steady state
    this equals the total dissipative return flux into the ground state,
    ``beta Gamma_c n_c + 2 Gamma_e rho_ee`` (checked in the tests), and at
    weak field it reduces to the Fano rate.
    """
    if ss is None:
        ss = steady_state(p)
    rho_eg = ss.rho[1, 0]
    val = p.q * rho_eg + 1j * (rho_eg + p.Omega * ss.rho[0, 0])
    return 2.0 * p.Omega * float(np.imag(val))


_OBSERVABLES = ("continuum_pop", "transport_rate", "absorption")


@dataclass(frozen=True)
class SweepResult:
    """Detuning sweep of one steady-state observable plus its rational fit.

    ``decomposition`` and the fit fields are None when the fit was not
    attempted (fewer than 6 points) or failed; ``fit_residual`` is the
    largest relative misfit over the sweep, so a value well above float
    noise flags a lineshape outside the Fano-plus-Lorentzian family (seen
    for branching beta < 1).
    """

    epsilons: np.ndarray
    values: np.ndarray
    observable: str
    fit: FitResult | None = None
    decomposition: LineshapeDecomposition | None = None

    @property
    def fit_residual(self) -> float:
        return self.fit.max_rel_residual if self.fit is not None else np.nan


def lineshape_sweep(p: FanoParams, epsilons, observable: str = "continuum_pop",
                    fit: bool = True) -> SweepResult:
    """Sweep the detuning and summarize the lineshape.

    ``observable`` is one of ``continuum_pop``, ``transport_rate`` or
    ``absorption``.  When ``fit`` is true and the grid has at least six
    points, the sweep is least-squares fitted by a rational quadratic and
    decomposed into (Delta, sigma, q, D); fit failure is recorded, not
    raised.  Errors from individual steady-state solves propagate.
    """
    if observable not in _OBSERVABLES:
        raise ValueError(f"observable must be one of {_OBSERVABLES}")
    epsilons = np.asarray(epsilons, dtype=float)
    values = np.empty_like(epsilons)
    for i, eps in enumerate(epsilons):
        pi = p.with_epsilon(eps)
        ss = steady_state(pi)
        if observable == "continuum_pop":
            values[i] = ss.continuum_pops[0]
        elif observable == "transport_rate":
            rho_gg = float(np.real(ss.rho[0, 0]))
            if rho_gg <= 1e-12:
                raise SteadyStateError("rho_gg = 0 during sweep; rate undefined")
            values[i] = pi.Gamma_c * ss.continuum_pops[0] / rho_gg
        else:
            values[i] = absorption_rate(pi, ss)

    fit_res = None
    dec = None
    if fit and np.unique(epsilons).size >= 6 and np.any(values != 0):
        try:
            fit_res = fit_rational_quadratic(epsilons, values)
            dec = decompose(fit_res.rq)
        except ValueError as exc:
            logger.info("lineshape fit failed: %s", exc)
    return SweepResult(epsilons, values, observable, fit_res, dec)
