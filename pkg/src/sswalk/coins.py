"""Coin and shift operators on the coin x position Hilbert space.

Coin parameter fields are callables of physical position and time,
vectorized over x.  Every coin is a U(2) block per site,

    exp(i xi) [[F, G], [-conj(G), conj(F)]],

with the tau-dependence modeled to first order: F -> F + tau * f, etc.
Restricted coins are rotations about the spin-x axis, F = cos(theta),
G = -i sin(theta).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .lattice import Lattice

COIN_NORM_TOL = 1e-6  # pre-renormalization defect gate


def as_field(value) -> Callable:
    """Coerce a scalar into a constant (x, t) field; pass callables through."""
    if callable(value):
        return value
    const = complex(value) if isinstance(value, complex) else float(value)

    def fn(x, t):
        return np.broadcast_to(const, np.shape(x)).copy() if np.ndim(x) else const

    return fn


def _eval(fn, x, t):
    out = np.asarray(fn(x, t))
    return np.broadcast_to(out, np.shape(x)) if out.shape != np.shape(x) else out


@dataclass
class CoinField:
    """General U(2) coin parameters and their first tau-derivatives.

    F, G, f, g map (x, t) to complex; xi, lam map (x, t) to real.
    Optional analytic x-derivatives of the tau = 0 parts may be supplied;
    otherwise a periodic central difference on the lattice is used.
    """

    F: Callable
    G: Callable
    f: Callable
    g: Callable
    xi: Callable
    lam: Callable
    dF_dx: Optional[Callable] = None
    dG_dx: Optional[Callable] = None
    dxi_dx: Optional[Callable] = None
    label: int = 1

    def __post_init__(self):
        for name in ("F", "G", "f", "g", "xi", "lam"):
            setattr(self, name, as_field(getattr(self, name)))

    def has_analytic_derivatives(self) -> bool:
        return all(d is not None for d in (self.dF_dx, self.dG_dx, self.dxi_dx))


@dataclass
class RestrictedCoinField:
    """Spin-x rotation coin: theta plus first tau-derivative vartheta."""

    theta: Callable
    vartheta: Callable
    xi: Callable = 0.0
    lam: Callable = 0.0
    dtheta_dx: Optional[Callable] = None
    dxi_dx: Optional[Callable] = None
    label: int = 1

    def __post_init__(self):
        for name in ("theta", "vartheta", "xi", "lam"):
            setattr(self, name, as_field(getattr(self, name)))

    def has_analytic_derivatives(self) -> bool:
        return self.dtheta_dx is not None and self.dxi_dx is not None

    def to_general(self) -> CoinField:
        """Induced general coin: F = cos(theta), G = -i sin(theta)."""
        th, vt = self.theta, self.vartheta
        dth = self.dtheta_dx
        return CoinField(
            F=lambda x, t: np.cos(_eval(th, x, t)) + 0j,
            G=lambda x, t: -1j * np.sin(_eval(th, x, t)),
            f=lambda x, t: -_eval(vt, x, t) * np.sin(_eval(th, x, t)) + 0j,
            g=lambda x, t: -1j * _eval(vt, x, t) * np.cos(_eval(th, x, t)),
            xi=self.xi,
            lam=self.lam,
            dF_dx=None if dth is None else (
                lambda x, t: -np.sin(_eval(th, x, t)) * _eval(dth, x, t) + 0j
            ),
            dG_dx=None if dth is None else (
                lambda x, t: -1j * np.cos(_eval(th, x, t)) * _eval(dth, x, t)
            ),
            dxi_dx=self.dxi_dx,
            label=self.label,
        )


def grid_derivative(fn, lattice: Lattice, t: float) -> np.ndarray:
    """Central difference of fn over the lattice, wrapped periodically."""
    x = lattice.positions
    vals = _eval(fn, x, t)
    return (np.roll(vals, -1) - np.roll(vals, 1)) / (2.0 * lattice.spacing)


def field_derivative_grid(fn, dfn, lattice: Lattice, t: float):
    """Derivative grid plus a flag for how it was obtained."""
    if dfn is not None:
        return _eval(dfn, lattice.positions, t), "analytic"
    return grid_derivative(fn, lattice, t), "finite-difference"


@dataclass
class LinearOperator:
    """Dense operator on coin x position with unitarity metadata."""

    matrix: np.ndarray
    coin_dim: int
    n_sites: int
    renorm_defect: float = 0.0
    meta: dict = field(default_factory=dict)

    def unitarity_defect(self) -> float:
        m = self.matrix
        return float(
            np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0], dtype=complex)))
        )

    def dagger(self) -> "LinearOperator":
        return LinearOperator(
            self.matrix.conj().T, self.coin_dim, self.n_sites, self.renorm_defect
        )


def cyclic_shift_matrix(n_sites: int, direction: str) -> np.ndarray:
    """Cyclic one-site translation: 'plus' is sum_x |x+a><x|."""
    if direction not in ("plus", "minus"):
        raise ValueError(f"direction must be 'plus' or 'minus', got {direction!r}")
    eye = np.eye(n_sites)
    return np.roll(eye, 1 if direction == "plus" else -1, axis=0)


def build_shift(lattice: Lattice, direction: str, coin_dim: int = 2) -> LinearOperator:
    """Coin-conditioned shift: first half of coin indices move, second half hold.

    'plus': moving block is |x+a><x|, holding block identity.
    'minus': holding first, |x-a><x| on the second half.
    """
    if coin_dim % 2 != 0:
        raise ValueError(f"coin dimension must be even, got {coin_dim}")
    n = lattice.n_sites
    half = coin_dim // 2
    up = np.zeros((coin_dim, coin_dim))
    up[np.arange(half), np.arange(half)] = 1.0
    down = np.eye(coin_dim) - up
    roll = cyclic_shift_matrix(n, direction)
    eye = np.eye(n)
    if direction == "plus":
        mat = np.kron(up, roll) + np.kron(down, eye)
    else:
        mat = np.kron(up, eye) + np.kron(down, roll)
    return LinearOperator(mat.astype(complex), coin_dim, n)


def coin_entries(coin: CoinField, t: float, tau: float, lattice: Lattice):
    """Per-site (F, G, phase) at parameter tau, polar-renormalized to unitarity.

    Returns (F, G, phase, defect) where defect is the largest norm error
    before renormalization.  Raises if the field is inconsistent (defect
    beyond COIN_NORM_TOL).
    """
    x = lattice.positions
    F = _eval(coin.F, x, t).astype(complex) + tau * _eval(coin.f, x, t)
    G = _eval(coin.G, x, t).astype(complex) + tau * _eval(coin.g, x, t)
    phase = _eval(coin.xi, x, t) + tau * _eval(coin.lam, x, t)
    norm = np.abs(F) ** 2 + np.abs(G) ** 2
    defect = float(np.max(np.abs(norm - 1.0)))
    if defect > COIN_NORM_TOL:
        raise ValueError(
            f"coin field norm defect {defect:.3e} exceeds {COIN_NORM_TOL:.0e}; "
            "|F|^2 + |G|^2 must stay near 1"
        )
    scale = np.sqrt(norm)
    return F / scale, G / scale, phase, defect


def restricted_coin_entries(coin: RestrictedCoinField, t, tau, lattice: Lattice):
    """Per-site (F, G, phase) for a spin-x rotation coin; exactly unitary."""
    x = lattice.positions
    angle = _eval(coin.theta, x, t) + tau * _eval(coin.vartheta, x, t)
    phase = _eval(coin.xi, x, t) + tau * _eval(coin.lam, x, t)
    return np.cos(angle) + 0j, -1j * np.sin(angle), phase, 0.0


def coin_blocks_from_entries(F, G, phase) -> np.ndarray:
    """Stack per-site 2x2 blocks exp(i phase) [[F, G], [-G*, F*]] -> (2, 2, n)."""
    ph = np.exp(1j * phase)
    blocks = np.empty((2, 2, F.size), dtype=complex)
    blocks[0, 0] = F
    blocks[0, 1] = G
    blocks[1, 0] = -np.conj(G)
    blocks[1, 1] = np.conj(F)
    return blocks * ph


def blocks_to_operator(blocks: np.ndarray, lattice: Lattice,
                       renorm_defect: float = 0.0) -> LinearOperator:
    """Assemble per-site coin blocks into the dense block-diagonal operator."""
    dim_c = blocks.shape[0]
    n = lattice.n_sites
    mat = np.zeros((dim_c * n, dim_c * n), dtype=complex)
    diag = np.arange(n)
    for i in range(dim_c):
        for j in range(dim_c):
            mat[i * n + diag, j * n + diag] = blocks[i, j]
    return LinearOperator(mat, dim_c, n, renorm_defect)


def validate_coin_field(coin: CoinField, lattice: Lattice, t: float,
                        norm_tol: float = 1e-12, slope_tol: float = 1e-10):
    """Check the unitarity conditions of a general coin field on the grid.

    |F|^2 + |G|^2 = 1 and Re[F f* + G g*] = 0 at tau = 0.
    """
    x = lattice.positions
    F, G = _eval(coin.F, x, t), _eval(coin.G, x, t)
    f, g = _eval(coin.f, x, t), _eval(coin.g, x, t)
    norm_err = np.max(np.abs(np.abs(F) ** 2 + np.abs(G) ** 2 - 1.0))
    if norm_err > norm_tol:
        raise ValueError(f"|F|^2 + |G|^2 deviates from 1 by {norm_err:.3e}")
    slope_err = np.max(np.abs(np.real(F * np.conj(f) + G * np.conj(g))))
    if slope_err > slope_tol:
        raise ValueError(
            f"first-order unitarity violated: Re[F f* + G g*] = {slope_err:.3e}"
        )


def build_coin(coin: CoinField, t: float, tau: float, lattice: Lattice) -> LinearOperator:
    """Dense general coin operator at time t, step parameter tau."""
    F, G, phase, defect = coin_entries(coin, t, tau, lattice)
    return blocks_to_operator(coin_blocks_from_entries(F, G, phase), lattice, defect)


def build_coin_restricted(coin: RestrictedCoinField, t: float, tau: float,
                          lattice: Lattice) -> LinearOperator:
    """Dense spin-x rotation coin operator; unitary by construction."""
    F, G, phase, _ = restricted_coin_entries(coin, t, tau, lattice)
    return blocks_to_operator(coin_blocks_from_entries(F, G, phase), lattice)


def coin_blocks(coin, t: float, tau: float, lattice: Lattice):
    """Per-site (2, 2, n) blocks for either coin flavor, plus renorm defect."""
    if isinstance(coin, RestrictedCoinField):
        F, G, phase, defect = restricted_coin_entries(coin, t, tau, lattice)
    else:
        F, G, phase, defect = coin_entries(coin, t, tau, lattice)
    return coin_blocks_from_entries(F, G, phase), defect
