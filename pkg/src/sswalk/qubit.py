"""Pauli-string compilation of shift and coin operators on qubit registers.

Positions on a 2^n-site periodic lattice are encoded in n qubits by the
binary value of the site index (most significant qubit first); one extra
qubit carries the coin.  Operators are expanded in the Hilbert-Schmidt
Pauli basis, c_P = Tr(P M) / 2^m.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .coins import RestrictedCoinField, _eval
from .lattice import Lattice
from .pauli import LABELS, SIGMA, kron_all

DROP_TOL = 1e-14


def qubit_lattice(n_qubits: int, spacing: float = 1.0) -> Lattice:
    """2^n-site lattice with x = j * a, so site 0 <-> bitstring 00..0 <-> x = 0."""
    return Lattice(2**n_qubits, float(spacing), 0)


@dataclass(frozen=True)
class PauliString:
    coefficient: complex
    factors: tuple  # indices into sigma_0..sigma_3, one per qubit

    @property
    def label(self) -> str:
        return "".join(LABELS[i] for i in self.factors)

    def matrix(self) -> np.ndarray:
        return self.coefficient * kron_all(*(SIGMA[i] for i in self.factors))


@dataclass
class PauliDecomposition:
    terms: list
    n_position_qubits: int
    has_coin_qubit: bool

    @property
    def n_qubits(self) -> int:
        return self.n_position_qubits + (1 if self.has_coin_qubit else 0)

    def reconstruct(self) -> np.ndarray:
        dim = 2**self.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for term in self.terms:
            out += term.matrix()
        return out

    def coefficient_map(self) -> dict:
        return {t.factors: t.coefficient for t in self.terms}


def encode_positions(n_qubits: int) -> dict:
    """Site index -> qubit bitstring, e.g. site 2 -> '10' on two qubits."""
    if n_qubits < 1:
        raise ValueError("need at least one position qubit")
    return {j: format(j, f"0{n_qubits}b") for j in range(2**n_qubits)}


def decompose(matrix: np.ndarray, has_coin_qubit: bool = False,
              drop_tol: float = DROP_TOL) -> PauliDecomposition:
    """Hilbert-Schmidt expansion of a 2^m x 2^m matrix into Pauli strings."""
    matrix = np.asarray(matrix, dtype=complex)
    dim = matrix.shape[0]
    if matrix.shape != (dim, dim) or dim & (dim - 1) or dim < 2:
        raise ValueError("matrix dimension must be a power of two")
    m = dim.bit_length() - 1
    terms = []
    mt = matrix.T
    for factors in product(range(4), repeat=m):
        p = kron_all(*(SIGMA[i] for i in factors))
        coeff = np.sum(p * mt) / dim  # Tr(P M) / 2^m
        if abs(coeff) >= drop_tol:
            terms.append(PauliString(complex(coeff), factors))
    n_pos = m - 1 if has_coin_qubit else m
    return PauliDecomposition(terms, n_pos, has_coin_qubit)


def position_shift_matrix(n_qubits: int, direction: str) -> np.ndarray:
    """Cyclic shift sum_x |x+-a><x| on the 2^n position register."""
    from .coins import cyclic_shift_matrix

    return cyclic_shift_matrix(2**n_qubits, direction).astype(complex)


def shift_with_coin(n_qubits: int, direction: str) -> PauliDecomposition:
    """Decomposition of the coin-conditioned shift on n+1 qubits (coin first)."""
    from .coins import build_shift

    mat = build_shift(qubit_lattice(n_qubits), direction).matrix
    return decompose(mat, has_coin_qubit=True)


@dataclass(frozen=True)
class ProjectedRotation:
    """One site term of a rotation coin: projector onto a bitstring, a phase
    and a spin-x rotation angle on the coin qubit."""

    site: int
    bits: str
    phase: float
    angle: float

    def matrix(self, n_qubits: int) -> np.ndarray:
        coin = np.exp(1j * self.phase) * (
            np.cos(self.angle) * SIGMA[0] - 1j * np.sin(self.angle) * SIGMA[1]
        )
        # projector |bits><bits| as a product of (sigma_0 +- sigma_3) / 2
        proj = [0.5 * (SIGMA[0] + (1 if b == "0" else -1) * SIGMA[3]) for b in self.bits]
        return kron_all(coin, *proj)


def coin_as_projected_rotations(field: RestrictedCoinField, t: float, tau: float,
                                n_qubits: int, spacing: float = 1.0):
    """Site-projected rotation terms whose sum is the coin operator."""
    lat = qubit_lattice(n_qubits, spacing)
    x = lat.positions
    angles = np.asarray(_eval(field.theta, x, t) + tau * _eval(field.vartheta, x, t))
    phases = np.asarray(_eval(field.xi, x, t) + tau * _eval(field.lam, x, t))
    bits = encode_positions(n_qubits)
    return [
        ProjectedRotation(j, bits[j], float(phases[j]), float(angles[j]))
        for j in range(lat.n_sites)
    ]


def reconstruct_projected_rotations(terms, n_qubits: int) -> np.ndarray:
    dim = 2 ** (n_qubits + 1)
    out = np.zeros((dim, dim), dtype=complex)
    for term in terms:
        out += term.matrix(n_qubits)
    return out


def export_text(decomp: PauliDecomposition) -> str:
    """One line per term: coeff_re coeff_im label."""
    lines = []
    for term in sorted(decomp.terms, key=lambda t: t.factors):
        c = term.coefficient
        lines.append(f"{c.real:.17g} {c.imag:.17g} {term.label}")
    return "\n".join(lines) + "\n"
