"""Pauli matrices and small tensor helpers shared across the package."""

import numpy as np

# sigma_0 .. sigma_3 in the conventional basis
SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

LABELS = "IXYZ"


def kron_all(*mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def coin_channel(matrix, r, n_sites):
    """Project a (2*n) x (2*n) operator onto coin channel sigma_r.

    Returns the position-space operator T_r with
    matrix = sum_r kron(sigma_r, T_r).
    """
    blocks = matrix.reshape(2, n_sites, 2, n_sites)
    s = SIGMA[r]
    return 0.5 * (
        s[0, 0].conjugate() * blocks[0, :, 0, :]
        + s[0, 1].conjugate() * blocks[0, :, 1, :]
        + s[1, 0].conjugate() * blocks[1, :, 0, :]
        + s[1, 1].conjugate() * blocks[1, :, 1, :]
    )


def two_coin_channel(matrix, r1, r2, n_sites):
    """Project a (4*n^2) x (4*n^2) operator onto channel sigma_r1 x sigma_r2."""
    dim_pos = n_sites * n_sites
    blocks = matrix.reshape(4, dim_pos, 4, dim_pos)
    s = np.kron(SIGMA[r1], SIGMA[r2])
    out = np.zeros((dim_pos, dim_pos), dtype=complex)
    for i in range(4):
        for j in range(4):
            if s[i, j] != 0:
                out += s[i, j].conjugate() * blocks[i, :, j, :]
    return out / 4.0
