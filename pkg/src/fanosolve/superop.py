"""Vectorization helpers shared by the effective and brute-force generators.

Convention, fixed project-wide
------------------------------
A density matrix element ``rho_ij = <i|rho|j>`` maps to the flat component
``j * N + i`` (bra index slow), so for two levels (g, e) the vector reads
``(rho_gg, rho_eg, rho_ge, rho_ee)``.  The generator of the coherent part of
the evolution under a (possibly non-Hermitian) effective Hamiltonian H is

    hamiltonian_superop(H) = -i (H (x) 1  -  1 (x) conj(H)),

with ``(x)`` the Kronecker product in the flat-index order above.  This is
the phase convention under which the single-resonance effective Liouvillian
takes the standard closed form with ``A = -Gamma_e - Omega^2 - i epsilon
- gamma_eg - 1`` on the (eg, eg) diagonal; the alternative convention is its
elementwise conjugate with the two coherence labels swapped and carries
identical populations and observables.

Dissipation enters through :func:`jump_superop` (population relaxation
``from -> to`` at a given rate) and :func:`dephasing_superop` (pure decay of
the (i, j) coherence pair), both trace annihilating.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

__all__ = [
    "flat_index",
    "vec",
    "unvec",
    "hamiltonian_superop",
    "jump_superop",
    "dephasing_superop",
    "trace_row",
]


def flat_index(ket: int, bra: int, n: int) -> int:
    """Flat position of rho[ket, bra] in the vectorized density matrix."""
    return bra * n + ket


def vec(rho: np.ndarray) -> np.ndarray:
    """Vectorize with the bra index slow (column stacking)."""
    return np.asarray(rho).T.reshape(-1)


def unvec(x: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(x).reshape(n, n).T


def _kron(a, b, sparse: bool):
    if sparse:
        return sp.kron(sp.csr_matrix(a), sp.csr_matrix(b), format="csr")
    return np.kron(np.asarray(a), np.asarray(b))


def hamiltonian_superop(h: np.ndarray, sparse: bool = False):
    """Coherent part ``-i (H (x) 1 - 1 (x) conj(H))`` of the generator.

    For Hermitian H this is the commutator superoperator; an anti-Hermitian
    part of H (continuum-induced decay) shows up as loss that a jump term
    must restore for the physical trace bookkeeping to close.
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    eye = sp.identity(n, format="csr") if sparse else np.eye(n)
    return -1j * (_kron(h, eye, sparse) - _kron(eye, h.conj(), sparse))


def jump_superop(c: np.ndarray, rate: float, sparse: bool = False):
    """Relaxation generator for a jump operator c at the given rate.

    ``rate * (c (x) conj(c) - (1/2)(c^dag c (x) 1 + 1 (x) (c^dag c)^T))`` in
    the project convention; for the real basis-state jumps used throughout
    this equals the textbook form.
    """
    c = np.asarray(c, dtype=complex)
    n = c.shape[0]
    cc = c.conj().T @ c
    eye = sp.identity(n, format="csr") if sparse else np.eye(n)
    out = _kron(c, c.conj(), sparse) - 0.5 * (_kron(cc, eye, sparse)
                                              + _kron(eye, cc.T, sparse))
    return rate * out


def basis_jump_superop(from_state: int, to_state: int, rate: float, n: int,
                       sparse: bool = False):
    """Jump ``|to><from|`` between basis states at the given population rate."""
    c = np.zeros((n, n))
    c[to_state, from_state] = 1.0
    return jump_superop(c, rate, sparse=sparse)


def dephasing_superop(i: int, j: int, rate: float, n: int, sparse: bool = False):
    """Pure decay of the (i, j) and (j, i) coherences at the given rate.

    Diagonal generator subtracting ``rate`` from exactly those two flat
    components; populations and other coherences are untouched.
    """
    d = np.zeros(n * n)
    d[flat_index(i, j, n)] = -rate
    d[flat_index(j, i, n)] = -rate
    return sp.diags(d, format="csr") if sparse else np.diag(d)


def trace_row(n: int) -> np.ndarray:
    """Row vector extracting the trace from a vectorized density matrix."""
    row = np.zeros(n * n)
    row[(np.arange(n)) * n + np.arange(n)] = 1.0
    return row
