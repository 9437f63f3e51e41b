"""U(N) gauge extension: 2N-dimensional coins and their generator couplings.

The coin factors as (2x2 unitary) x 1_N followed by block exponentials
exp(-i tau sum_q w^q Lambda_q) acting on the N-dimensional gauge factor,
with independent weights w on the up and down coin blocks.  At tau = 0 the
exponentials are the identity, so the modified-step correction involves only
the 2x2 part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .coins import LinearOperator, RestrictedCoinField, _eval, build_shift, coin_blocks
from .hamiltonian import HamiltonianCoefficients, momentum_operator
from .lattice import Lattice
from .pauli import SIGMA


@dataclass
class GeneratorSet:
    """Identity plus N^2 - 1 traceless Hermitian generators.

    Normalization: Tr(Lambda_p Lambda_q) = 2 delta_pq for p, q >= 1
    (generalized Gell-Mann convention); Lambda_0 is the identity.
    """

    N: int
    matrices: np.ndarray  # (N^2, N, N)


def make_generators(N: int) -> GeneratorSet:
    if N < 1:
        raise ValueError("N must be at least 1")
    mats = [np.eye(N, dtype=complex)]
    # symmetric and antisymmetric off-diagonal generators
    for j in range(N):
        for k in range(j + 1, N):
            sym = np.zeros((N, N), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            mats.append(sym)
            anti = np.zeros((N, N), dtype=complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            mats.append(anti)
    # diagonal generators
    for l in range(1, N):
        diag = np.zeros(N)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag * np.sqrt(2.0 / (l * (l + 1)))).astype(complex))
    return GeneratorSet(N, np.array(mats))


@dataclass
class GaugeCoinField:
    """A 2x2 coin field dressed with up/down-block generator weights.

    omega and Omega are sequences of N^2 scalar fields (x, t) -> real, one
    per generator, for the up and down coin blocks respectively.
    """

    base: object  # CoinField or RestrictedCoinField
    omega: Sequence[Callable]
    Omega: Sequence[Callable]

    def __post_init__(self):
        from .coins import as_field

        self.omega = [as_field(w) for w in self.omega]
        self.Omega = [as_field(w) for w in self.Omega]


def _block_exponentials(field: GaugeCoinField, gens: GeneratorSet, t, tau, x):
    """Per-site matrix exponentials for the up and down blocks, (n, N, N)."""
    n_sites = x.size
    N = gens.N
    w_up = np.zeros((n_sites, N, N), dtype=complex)
    w_dn = np.zeros((n_sites, N, N), dtype=complex)
    for q in range(N * N):
        wq = np.asarray(_eval(field.omega[q], x, t), dtype=float)
        Wq = np.asarray(_eval(field.Omega[q], x, t), dtype=float)
        w_up += wq[:, None, None] * gens.matrices[q]
        w_dn += Wq[:, None, None] * gens.matrices[q]

    def expm_hermitian(h):
        vals, vecs = np.linalg.eigh(h)
        phases = np.exp(-1j * tau * vals)
        return np.einsum("nij,nj,nkj->nik", vecs, phases, vecs.conj())

    return expm_hermitian(w_up), expm_hermitian(w_dn)


def build_coin_un(field: GaugeCoinField, gens: GeneratorSet, t: float, tau: float,
                  lattice: Lattice) -> LinearOperator:
    """Dense 2N-dimensional coin operator, unitary by construction."""
    n = lattice.n_sites
    N = gens.N
    base_blocks, defect = coin_blocks(field.base, t, tau, lattice)
    exp_up, exp_dn = _block_exponentials(field, gens, t, tau, lattice.positions)
    dim = 2 * N
    mat = np.zeros((dim * n, dim * n), dtype=complex)
    eyeN = np.eye(N, dtype=complex)
    diag = np.arange(n)
    for site in range(n):
        u2 = base_blocks[:, :, site]
        block = np.kron(u2, eyeN) @ np.block([
            [exp_up[site], np.zeros((N, N))],
            [np.zeros((N, N)), exp_dn[site]],
        ])
        for i in range(dim):
            for j in range(dim):
                mat[i * n + site, j * n + site] = block[i, j]
    return LinearOperator(mat, dim, n, defect)


def gauge_step(field1: GaugeCoinField, field2: GaugeCoinField, gens: GeneratorSet,
               lattice: Lattice, mode: str, t: float, tau: float) -> LinearOperator:
    """Dense one-step operator for the U(N)-dressed walk."""
    dim = 2 * gens.N
    s_plus = build_shift(lattice, "plus", dim).matrix
    s_minus = build_shift(lattice, "minus", dim).matrix
    c1 = build_coin_un(field1, gens, t, tau, lattice)
    c2 = build_coin_un(field2, gens, t, tau, lattice)
    mat = s_plus @ c2.matrix @ s_minus @ c1.matrix
    if mode == "modified":
        c1_0 = build_coin_un(field1, gens, t, 0.0, lattice)
        c2_0 = build_coin_un(field2, gens, t, 0.0, lattice)
        mat = c1_0.matrix.conj().T @ c2_0.matrix.conj().T @ mat
    return LinearOperator(mat, dim, lattice.n_sites,
                          max(c1.renorm_defect, c2.renorm_defect))


def numeric_generator_un(field1, field2, gens, lattice, t: float, tau=None) -> np.ndarray:
    tau = lattice.spacing if tau is None else float(tau)
    u = gauge_step(field1, field2, gens, lattice, "modified", t, tau).matrix
    return 1j * (u - np.eye(u.shape[0])) / tau


def chi_coefficients(field1: GaugeCoinField, field2: GaugeCoinField,
                     lattice: Lattice, t: float) -> np.ndarray:
    """Generator-coupling grids chi[r, q, site] for Pauli channel r.

    chi_0 collects the sum of all block weights; chi_3 their up/down
    imbalance weighted by |F_1|^2 - |G_1|^2 for the second coin;
    chi_1 and chi_2 couple through Re/Im of G_1 F_1^*.
    """
    x = lattice.positions
    base1 = field1.base
    if isinstance(base1, RestrictedCoinField):
        base1 = base1.to_general()
    F1 = np.asarray(_eval(base1.F, x, t), dtype=complex)
    G1 = np.asarray(_eval(base1.G, x, t), dtype=complex)
    balance = np.abs(F1) ** 2 - np.abs(G1) ** 2
    gf = G1 * np.conj(F1)
    n_gen = len(field1.omega)
    chi = np.zeros((4, n_gen, lattice.n_sites))
    for q in range(n_gen):
        w1 = np.asarray(_eval(field1.omega[q], x, t), dtype=float)
        W1 = np.asarray(_eval(field1.Omega[q], x, t), dtype=float)
        w2 = np.asarray(_eval(field2.omega[q], x, t), dtype=float)
        W2 = np.asarray(_eval(field2.Omega[q], x, t), dtype=float)
        chi[0, q] = 0.5 * (w1 + W1 + w2 + W2)
        chi[3, q] = 0.5 * (w1 - W1 + (w2 - W2) * balance)
        chi[1, q] = np.real(gf) * (w2 - W2)
        chi[2, q] = -np.imag(gf) * (w2 - W2)
    return chi


def assemble_un(base: HamiltonianCoefficients, chi: np.ndarray,
                gens: GeneratorSet, lattice: Lattice) -> np.ndarray:
    """Dense Hermitian generator for the U(N)-dressed walk.

    The 2x2 channels act as sigma_r x 1_N; the gauge part adds
    sigma_r x Lambda_q x diag(chi[r, q]).
    """
    n = lattice.n_sites
    N = gens.N
    p_op = momentum_operator(lattice)
    eyeN = np.eye(N, dtype=complex)
    h = np.zeros((2 * N * n, 2 * N * n), dtype=complex)
    for r in range(4):
        block = np.diag(base.potential[r].real.astype(complex))
        if r >= 1 and np.any(base.velocity[r]):
            vel = np.diag(base.velocity[r].astype(complex))
            block = block + 0.5 * (vel @ p_op + p_op @ vel)
        h += np.kron(SIGMA[r], np.kron(eyeN, block))
        for q in range(N * N):
            if np.any(chi[r, q]):
                h += np.kron(SIGMA[r], np.kron(gens.matrices[q],
                                               np.diag(chi[r, q].astype(complex))))
    return h
