"""Two-walker split-step evolution with an entangling spin-x (x) spin-x coin.

States live on coin1 x coin2 x position1 x position2 and are stored as
arrays of shape (2, 2, n, n).  The coin rotates by theta(x1, x2, t) about
the sigma_x (x) sigma_x axis; shifts act separately on each particle, so all
interaction comes from the coin.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .coins import LinearOperator, as_field
from .hamiltonian import momentum_operator
from .lattice import Lattice
from .pauli import SIGMA

DENSE_SITE_CAP = 64


@dataclass
class TwoCoinField:
    """Rotation angle field theta(x1, x2, t) and its tau-derivative."""

    theta: Callable
    vartheta: Callable
    d_theta_dx1: Optional[Callable] = None
    d_theta_dx2: Optional[Callable] = None
    label: int = 1

    def __post_init__(self):
        self.theta = _as_pair_field(self.theta)
        self.vartheta = _as_pair_field(self.vartheta)


def _as_pair_field(value):
    if callable(value):
        return value
    const = float(value)

    def fn(x1, x2, t):
        return np.broadcast_to(const, np.shape(x1)).copy()

    return fn


def pair_grid(lattice: Lattice):
    x = lattice.positions
    return np.meshgrid(x, x, indexing="ij")


def _angle_grids(field: TwoCoinField, t, tau, lattice):
    x1, x2 = pair_grid(lattice)
    return np.asarray(field.theta(x1, x2, t)) + tau * np.asarray(field.vartheta(x1, x2, t))


def _partial_grids(field: TwoCoinField, lattice: Lattice, t: float):
    """(d theta / d x1, d theta / d x2) grids; periodic central differences
    along each axis when no analytic derivative is supplied."""
    x1, x2 = pair_grid(lattice)
    theta = np.asarray(field.theta(x1, x2, t))
    a = lattice.spacing
    if field.d_theta_dx1 is not None:
        d1 = np.asarray(field.d_theta_dx1(x1, x2, t))
    else:
        d1 = (np.roll(theta, -1, axis=0) - np.roll(theta, 1, axis=0)) / (2 * a)
    if field.d_theta_dx2 is not None:
        d2 = np.asarray(field.d_theta_dx2(x1, x2, t))
    else:
        d2 = (np.roll(theta, -1, axis=1) - np.roll(theta, 1, axis=1)) / (2 * a)
    return d1, d2


def _coin_blocks_two(field: TwoCoinField, t, tau, lattice):
    """(4, 4, n, n) per-site-pair blocks of exp(-i theta sigma_x (x) sigma_x)."""
    theta = _angle_grids(field, t, tau, lattice)
    n = lattice.n_sites
    blocks = np.zeros((4, 4, n, n), dtype=complex)
    cos, msin = np.cos(theta), -1j * np.sin(theta)
    for i in range(4):
        blocks[i, i] = cos
        blocks[i, 3 - i] = msin
    return blocks


def build_two_coin(field: TwoCoinField, t: float, tau: float,
                   lattice: Lattice) -> LinearOperator:
    """Dense entangling coin operator; exactly unitary."""
    _guard_dense(lattice)
    n = lattice.n_sites
    blocks = _coin_blocks_two(field, t, tau, lattice)
    dim_pos = n * n
    mat = np.zeros((4 * dim_pos, 4 * dim_pos), dtype=complex)
    diag = np.arange(dim_pos)
    for i in range(4):
        for j in range(4):
            mat[i * dim_pos + diag, j * dim_pos + diag] = blocks[i, j].ravel()
    return LinearOperator(mat, 4, n)


def _guard_dense(lattice: Lattice):
    if lattice.n_sites > DENSE_SITE_CAP:
        raise MemoryError(
            f"dense two-particle operators are capped at {DENSE_SITE_CAP} sites "
            f"(requested {lattice.n_sites}); use the state-vector path"
        )


def _dense_pair_shift(lattice: Lattice, direction: str) -> np.ndarray:
    from .coins import cyclic_shift_matrix

    n = lattice.n_sites
    roll = cyclic_shift_matrix(n, direction)
    eye = np.eye(n)
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    if direction == "plus":
        pieces = [(p0, p0, roll, roll), (p0, p1, roll, eye),
                  (p1, p0, eye, roll), (p1, p1, eye, eye)]
    else:
        pieces = [(p0, p0, eye, eye), (p0, p1, eye, roll),
                  (p1, p0, roll, eye), (p1, p1, roll, roll)]
    out = np.zeros((4 * n * n, 4 * n * n), dtype=complex)
    for c1, c2, r1, r2 in pieces:
        out += np.kron(np.kron(c1, c2), np.kron(r1, r2))
    return out


def two_particle_step(field1: TwoCoinField, field2: TwoCoinField, lattice: Lattice,
                      mode: str, t: float, tau: float) -> LinearOperator:
    """Dense one-step operator (S+ x S+) C2 (S- x S-) C1, optionally modified."""
    _guard_dense(lattice)
    c1 = build_two_coin(field1, t, tau, lattice).matrix
    c2 = build_two_coin(field2, t, tau, lattice).matrix
    mat = _dense_pair_shift(lattice, "plus") @ c2 \
        @ _dense_pair_shift(lattice, "minus") @ c1
    if mode == "modified":
        c1_0 = build_two_coin(field1, t, 0.0, lattice).matrix
        c2_0 = build_two_coin(field2, t, 0.0, lattice).matrix
        mat = c1_0.conj().T @ c2_0.conj().T @ mat
    return LinearOperator(mat, 4, lattice.n_sites)


def _apply_coin_two(blocks, amps):
    flat = amps.reshape(4, *amps.shape[2:])
    out = np.einsum("abxy,bxy->axy", blocks, flat)
    return out.reshape(amps.shape)


def _apply_pair_shift(amps, direction):
    out = amps.copy()
    if direction == "plus":
        out[0, 0] = np.roll(out[0, 0], 1, axis=(0, 1))
        out[0, 1] = np.roll(out[0, 1], 1, axis=0)
        out[1, 0] = np.roll(out[1, 0], 1, axis=1)
    else:
        out[0, 1] = np.roll(out[0, 1], -1, axis=1)
        out[1, 0] = np.roll(out[1, 0], -1, axis=0)
        out[1, 1] = np.roll(out[1, 1], -1, axis=(0, 1))
    return out


def apply_two_step(field1: TwoCoinField, field2: TwoCoinField, amps: np.ndarray,
                   lattice: Lattice, mode: str, t: float, tau: float) -> np.ndarray:
    """Matrix-free application of one two-particle step to (2, 2, n, n) amps."""
    out = _apply_coin_two(_coin_blocks_two(field1, t, tau, lattice), amps)
    out = _apply_pair_shift(out, "minus")
    out = _apply_coin_two(_coin_blocks_two(field2, t, tau, lattice), out)
    out = _apply_pair_shift(out, "plus")
    if mode == "modified":
        b1 = _coin_blocks_two(field1, t, 0.0, lattice)
        b2 = _coin_blocks_two(field2, t, 0.0, lattice)
        out = _apply_coin_two(np.conj(np.swapaxes(b2, 0, 1)), out)
        out = _apply_coin_two(np.conj(np.swapaxes(b1, 0, 1)), out)
    return out


def evolve_two(field1, field2, lattice, amps: np.ndarray, n_steps: int,
               mode: str = "modified", tau=None) -> np.ndarray:
    tau = lattice.spacing if tau is None else float(tau)
    out = amps.copy()
    for k in range(n_steps):
        out = apply_two_step(field1, field2, out, lattice, mode, k * tau, tau)
    return out


def joint_probability(amps: np.ndarray) -> np.ndarray:
    """p(x1, x2) traced over both coins."""
    return np.sum(np.abs(amps) ** 2, axis=(0, 1))


def export_joint_probability_csv(amps: np.ndarray, lattice: Lattice, path):
    p = joint_probability(amps)
    x = lattice.positions
    with open(path, "w") as fh:
        fh.write("x1_index,x2_index,x1,x2,p\n")
        for i in range(lattice.n_sites):
            for j in range(lattice.n_sites):
                fh.write(f"{i},{j},{x[i]:.17g},{x[j]:.17g},{p[i, j]:.17g}\n")


@dataclass
class TwoParticleCoefficients:
    """Coefficient grids of the two-particle generator, one per live channel.

    Channel names use Pauli letters for (coin1, coin2): pot_iz is the
    potential grid of the identity x sigma_z channel, vel2_iz its coupling
    to p2, and so on.  pot grids on the iz/zi/xy/yx channels are purely
    imaginary (derivative pieces); pot_xx is real.
    """

    pot_iz: np.ndarray
    vel2_iz: np.ndarray
    pot_zi: np.ndarray
    vel1_zi: np.ndarray
    pot_xy: np.ndarray
    vel2_xy: np.ndarray
    pot_yx: np.ndarray
    vel1_yx: np.ndarray
    pot_xx: np.ndarray


def two_coefficients(field1: TwoCoinField, field2: TwoCoinField,
                     lattice: Lattice, t: float) -> TwoParticleCoefficients:
    """Closed-form coefficient grids over the (x1, x2) lattice."""
    x1, x2 = pair_grid(lattice)
    th1 = np.asarray(field1.theta(x1, x2, t))
    th2 = np.asarray(field2.theta(x1, x2, t))
    vt1 = np.asarray(field1.vartheta(x1, x2, t))
    vt2 = np.asarray(field2.vartheta(x1, x2, t))
    d1th1, d2th1 = _partial_grids(field1, lattice, t)
    d1th2, d2th2 = _partial_grids(field2, lattice, t)

    both = 2.0 * th1 + 2.0 * th2
    half = 2.0 * th1 + th2
    vel_diag = np.cos(th2) * np.cos(half)
    vel_cross = np.cos(th2) * np.sin(half)

    pot_iz = 0.5j * np.sin(both) * d2th2 + 1j * np.cos(th2) * np.sin(half) * d2th1
    pot_zi = 0.5j * np.sin(both) * d1th2 + 1j * np.cos(th2) * np.sin(half) * d1th1
    pot_xy = -0.5j * np.cos(both) * d2th2 - 1j * np.cos(th2) * np.cos(half) * d2th1
    pot_yx = -0.5j * np.cos(both) * d1th2 - 1j * np.cos(th2) * np.cos(half) * d1th1
    pot_xx = -0.5 * (d1th2 + d2th2) + (vt1 + vt2)

    return TwoParticleCoefficients(
        pot_iz=pot_iz, vel2_iz=vel_diag,
        pot_zi=pot_zi, vel1_zi=vel_diag,
        pot_xy=pot_xy, vel2_xy=vel_cross,
        pot_yx=pot_yx, vel1_yx=vel_cross,
        pot_xx=pot_xx.astype(complex),
    )


def _sym_momentum(grid: np.ndarray, p_op: np.ndarray, axis: int, n: int) -> np.ndarray:
    """Symmetrized diag(grid) . p_axis on the n^2 position space."""
    eye = np.eye(n, dtype=complex)
    p_full = np.kron(p_op, eye) if axis == 1 else np.kron(eye, p_op)
    g = np.diag(grid.ravel().astype(complex))
    return 0.5 * (g @ p_full + p_full @ g)


def assemble_two(coeffs: TwoParticleCoefficients, lattice: Lattice) -> np.ndarray:
    """Dense Hermitian two-particle generator from the coefficient grids."""
    _guard_dense(lattice)
    n = lattice.n_sites
    p_op = momentum_operator(lattice)
    h1, h2, inter = hamiltonian_split(coeffs, lattice, _p_op=p_op)
    return h1 + h2 + inter


def hamiltonian_split(coeffs: TwoParticleCoefficients, lattice: Lattice,
                      _p_op=None):
    """Split into single-particle-like parts and the coin-coin interaction.

    Returns (H1, H2, H_inter) on the full space; their sum is the assembled
    generator, exactly.  H1 and H2 carry no sigma_x or sigma_y single-coin
    channel: the local parts are massless.
    """
    _guard_dense(lattice)
    n = lattice.n_sites
    p_op = momentum_operator(lattice) if _p_op is None else _p_op

    def chan(r1, r2, block):
        return np.kron(np.kron(SIGMA[r1], SIGMA[r2]), block)

    def diag_real(grid):
        return np.diag(grid.ravel().real.astype(complex))

    h1 = chan(3, 0, diag_real(coeffs.pot_zi) + _sym_momentum(coeffs.vel1_zi, p_op, 1, n))
    h2 = chan(0, 3, diag_real(coeffs.pot_iz) + _sym_momentum(coeffs.vel2_iz, p_op, 2, n))
    inter = chan(1, 2, diag_real(coeffs.pot_xy) + _sym_momentum(coeffs.vel2_xy, p_op, 2, n))
    inter += chan(2, 1, diag_real(coeffs.pot_yx) + _sym_momentum(coeffs.vel1_yx, p_op, 1, n))
    inter += chan(1, 1, diag_real(coeffs.pot_xx))
    return h1, h2, inter


def apply_assembled_two(coeffs: TwoParticleCoefficients, lattice: Lattice,
                        amps: np.ndarray) -> np.ndarray:
    """Matrix-free action of the assembled generator on (2, 2, n, n) amps.

    Used for large lattices where the dense assembly would not fit; agrees
    with assemble_two exactly on small ones.
    """
    n = lattice.n_sites
    p_op = momentum_operator(lattice)

    def p1(grid):
        return np.einsum("ij,jk->ik", p_op, grid)

    def p2(grid):
        return np.einsum("kj,ij->ik", p_op, grid)

    def sym(vel, grid, apply_p):
        return 0.5 * (vel * apply_p(grid) + apply_p(vel * grid))

    flat = amps.reshape(4, n, n)
    out = np.zeros_like(flat)
    channels = [
        (0, 3, coeffs.pot_iz, coeffs.vel2_iz, p2),
        (3, 0, coeffs.pot_zi, coeffs.vel1_zi, p1),
        (1, 2, coeffs.pot_xy, coeffs.vel2_xy, p2),
        (2, 1, coeffs.pot_yx, coeffs.vel1_yx, p1),
        (1, 1, coeffs.pot_xx, None, None),
    ]
    for r1, r2, pot, vel, apply_p in channels:
        kmat = np.kron(SIGMA[r1], SIGMA[r2])
        for c in range(4):
            acted = pot.real * flat[c]
            if vel is not None:
                acted = acted + sym(vel, flat[c], apply_p)
            for cp in range(4):
                if kmat[cp, c] != 0:
                    out[cp] += kmat[cp, c] * acted
    return out.reshape(amps.shape)


def generator_action_two(field1, field2, lattice, amps, t: float, tau=None):
    """Action of the numeric two-particle generator, matrix-free."""
    tau = lattice.spacing if tau is None else float(tau)
    stepped = apply_two_step(field1, field2, amps, lattice, "modified", t, tau)
    return 1j * (stepped - amps) / tau


def swap_operator(lattice: Lattice) -> np.ndarray:
    """Joint particle exchange |c1 c2 x1 x2> -> |c2 c1 x2 x1> as a matrix."""
    n = lattice.n_sites
    dim = 4 * n * n
    out = np.zeros((dim, dim))
    for c1 in range(2):
        for c2 in range(2):
            for j1 in range(n):
                for j2 in range(n):
                    src = ((c1 * 2 + c2) * n + j1) * n + j2
                    dst = ((c2 * 2 + c1) * n + j2) * n + j1
                    out[dst, src] = 1.0
    return out
