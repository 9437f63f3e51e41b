"""One-dimensional periodic lattice, walker states, and momentum grids.

Units: hbar = c = 1 throughout; positions are physical, x_j = (j - origin) * a.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-10


@dataclass(frozen=True)
class Lattice:
    """Periodic 1-D position lattice."""

    n_sites: int
    spacing: float
    origin_index: int

    @property
    def positions(self) -> np.ndarray:
        return (np.arange(self.n_sites) - self.origin_index) * self.spacing

    @property
    def width(self) -> float:
        return self.n_sites * self.spacing


def make_lattice(n_sites: int, spacing: float) -> Lattice:
    """Build a periodic lattice with the origin at site floor(n/2)."""
    n_sites = int(n_sites)
    if n_sites < 2:
        raise ValueError(f"need at least 2 lattice sites, got {n_sites}")
    if spacing <= 0:
        raise ValueError(f"lattice spacing must be positive, got {spacing}")
    return Lattice(n_sites, float(spacing), n_sites // 2)


@dataclass(frozen=True)
class MomentumGrid:
    """Discrete momenta of the periodic lattice, ascending, first Brillouin zone."""

    values: np.ndarray
    spacing: float

    def __post_init__(self):
        dk = np.diff(self.values)
        if not np.allclose(dk, self.spacing, rtol=0, atol=1e-12 * self.spacing):
            raise ValueError("momentum grid must be equally spaced")


def momentum_values(lattice: Lattice) -> MomentumGrid:
    """Momenta k_n = 2 pi n / (N a) chosen inside (-pi/a, pi/a].

    For odd N the set is symmetric about zero; for even N it ends at +pi/a.
    """
    n_sites = lattice.n_sites
    n = np.arange(n_sites) - (n_sites - 1) // 2
    dk = 2.0 * np.pi / (n_sites * lattice.spacing)
    return MomentumGrid(n * dk, dk)


@dataclass
class WalkState:
    """Complex amplitude field over coin x position, coin index major."""

    amplitudes: np.ndarray  # shape (coin_dim, n_sites)
    lattice: Lattice

    @property
    def coin_dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def copy(self) -> "WalkState":
        return WalkState(self.amplitudes.copy(), self.lattice)


def initial_state(coin_amplitudes, site_index: int, lattice: Lattice) -> WalkState:
    """Product state (coin vector) x |x_site>."""
    coin = np.asarray(coin_amplitudes, dtype=complex)
    if coin.ndim != 1 or coin.size < 2:
        raise ValueError("coin amplitudes must be a vector of length >= 2")
    if abs(np.sum(np.abs(coin) ** 2) - 1.0) > NORM_TOL:
        raise ValueError("coin amplitudes are not normalized")
    if not 0 <= site_index < lattice.n_sites:
        raise ValueError(f"site index {site_index} out of range")
    amps = np.zeros((coin.size, lattice.n_sites), dtype=complex)
    amps[:, site_index] = coin
    return WalkState(amps, lattice)


def probability_profile(state: WalkState) -> np.ndarray:
    """Position probability p(j) = sum_c |amplitude(c, j)|^2."""
    return np.sum(np.abs(state.amplitudes) ** 2, axis=0)
