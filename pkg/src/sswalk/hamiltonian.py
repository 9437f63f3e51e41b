"""Closed-form generator coefficients and their numerical verification.

The first-order generator of the modified step has the channel form

    H = sum_r sigma_r (x) diag(pot_r) + sum_{r>=1} sigma_r (x) diag(vel_r) p

with position/time dependent grids: pot_r are potential-like, vel_r are
velocity-like.  The raw pot_2 and pot_3 grids carry imaginary parts equal to
-(1/2) d(vel_r)/dx; assembling with the symmetrized ordering
(diag(vel) P + P diag(vel)) / 2 supplies exactly those derivative pieces, so
the assembled matrix uses Re(pot) and is Hermitian by construction.

Comparisons between the numeric generator and the assembled matrix are made
through their action on a bank of smooth wave packets, not entrywise: the
one-step difference operator and the spectral momentum operator necessarily
disagree in the lattice-scale (high-k) sector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .coins import (
    CoinField,
    RestrictedCoinField,
    _eval,
    field_derivative_grid,
)
from .evolution import StepBuilder, apply_step, modified_step
from .lattice import Lattice, make_lattice, momentum_values
from .pauli import SIGMA


@dataclass
class HamiltonianCoefficients:
    """Pauli-channel coefficient grids of the first-order generator.

    potential[r] may be complex (see module docstring); velocity[r] is real
    and velocity[0] is identically zero.
    """

    potential: np.ndarray  # (4, n_sites) complex
    velocity: np.ndarray  # (4, n_sites) real
    provenance: str
    derivative_mode: str = "analytic"

    def __post_init__(self):
        if np.max(np.abs(self.velocity[0])) > 0:
            raise ValueError("the identity channel has no momentum coupling")


def _derivatives_general(coin: CoinField, lattice, t):
    dF, mode_f = field_derivative_grid(coin.F, coin.dF_dx, lattice, t)
    dG, mode_g = field_derivative_grid(coin.G, coin.dG_dx, lattice, t)
    dxi, mode_x = field_derivative_grid(coin.xi, coin.dxi_dx, lattice, t)
    modes = {mode_f, mode_g, mode_x}
    return dF, dG, dxi, ("analytic" if modes == {"analytic"} else "finite-difference")


def coefficients_general(coin1: CoinField, coin2: CoinField,
                         lattice: Lattice, t: float) -> HamiltonianCoefficients:
    """Coefficient grids for a general pair of U(2) coin fields."""
    x = lattice.positions
    F1 = _eval(coin1.F, x, t).astype(complex)
    G1 = _eval(coin1.G, x, t).astype(complex)
    F2 = _eval(coin2.F, x, t).astype(complex)
    G2 = _eval(coin2.G, x, t).astype(complex)
    f1 = _eval(coin1.f, x, t).astype(complex)
    g1 = _eval(coin1.g, x, t).astype(complex)
    f2 = _eval(coin2.f, x, t).astype(complex)
    g2 = _eval(coin2.g, x, t).astype(complex)
    lam1 = _eval(coin1.lam, x, t).real
    lam2 = _eval(coin2.lam, x, t).real
    dF1, dG1, dxi1, mode1 = _derivatives_general(coin1, lattice, t)
    dF2, dG2, dxi2, mode2 = _derivatives_general(coin2, lattice, t)
    mode = "analytic" if (mode1 == mode2 == "analytic") else "finite-difference"

    aF1, aG1 = np.abs(F1) ** 2, np.abs(G1) ** 2
    aF2, aG2 = np.abs(F2) ** 2, np.abs(G2) ** 2
    cF1, cG1, cF2, cG2 = np.conj(F1), np.conj(G1), np.conj(F2), np.conj(G2)
    dcF1, dcG1 = np.conj(dF1), np.conj(dG1)

    vel3 = -(aF2 * aG1 - aF2 * aF1 + 2.0 * np.real(F1 * F2 * G1 * cG2))
    mixed = 2.0 * aF2 * cG1 * F1 - cF2 * G2 * np.conj(G1) ** 2 + F2 * F1**2 * cG2
    vel1 = np.real(mixed)
    vel2 = np.imag(mixed)

    pot0 = (
        -(lam1 + lam2)
        + 0.5 * np.imag(cF2 * dF2 + cG2 * dG2)
        - aF2 * np.imag(F1 * dcF1 + G1 * dcG1)
        - np.imag(cF1 * cF2 * G2 * dcG1 + F2 * G1 * cG2 * dF1)
        + 0.5 * dxi2
    )

    pot3 = (
        -np.imag(cF1 * f1 + np.conj(g1) * G1 + cG2 * g2 + F2 * np.conj(f2))
        - 2.0 * np.imag(f2 * cF2 * aF1 - f2 * G1 * F1 * cG2
                        + np.conj(g2) * G2 * aF1 + np.conj(g2) * F2 * F1 * G1)
        + 0.5j * dF2 * (2.0 * F1 * G1 * cG2 + cF2 * aG1 - aF1 * cF2)
        + 1j * aF2 * np.real(G1 * dcG1 - F1 * dcF1)
        + 0.5j * dG2 * (2.0 * cF2 * cF1 * cG1 + aF1 * cG2 - aG1 * cG2)
        + 1j * np.real(F2 * G1 * cG2 * dF1 + F1 * F2 * cG2 * dG1)
        + 0.5 * dxi1 * (2.0 * aF2 * (aF1 - aG1)
                        - 4.0 * np.real(F2 * F1 * G1 * cG2))
        + 0.5 * dxi2 * ((aG2 - aF2) * (aG1 - aF1)
                        - 4.0 * np.real(F2 * F1 * G1 * cG2))
    )

    slope_mix = (
        np.conj(g2) * F2 * G1**2 + np.conj(g2) * cF1 * G1 * G2
        - np.conj(f2) * G2 * cF1**2 - np.conj(f2) * G1 * F2 * cF1
        + g2 * cF1**2 * cF2 - g2 * cF1 * G1 * cG2
        + f2 * G1 * cF1 * cF2 - f2 * G1**2 * cG2
    )
    pot1 = (
        -np.imag(slope_mix)
        - 1j * np.real(cF1 * aF2 * dG1 - cG2 * G1 * F2 * dG1
                       + cF1 * cF2 * G2 * dcF1 + G1 * aF2 * dcF1)
        - 1j * np.real(cF1 * G1) * (cF2 * dF2 - cG2 * dG2)
        - 0.5j * cG2 * dF2 * (F1**2 - G1**2)
        - 0.5j * cF2 * dG2 * (cF1**2 - cG1**2)
        + 0.5 * dxi1 * (4.0 * aF2 * np.real(G1 * cF1)
                        - 2.0 * np.real(cG2 * F2 * G1**2)
                        + 2.0 * np.real(G2 * cF2 * cF1**2))
        + 0.5 * dxi2 * (2.0 * (aF2 - aG2) * np.real(G1 * cF1)
                        + 2.0 * np.real(F1**2 * F2 * cG2)
                        - 2.0 * np.real(F2 * cG2 * G1**2))
        - np.imag(g1 * cF1 - np.conj(f1) * G1)
    )

    pot2 = (
        1j * np.imag(dG1 * (aF2 * cF1 - cG2 * G1 * F2))
        + 1j * np.imag(dcF1 * (G2 * cF1 * cF2 + G1 * aF2))
        + 0.5 * dF2 * (2j * cF2 * np.imag(cF1 * G1) - cG2 * F1**2 - cG2 * G1**2)
        + 0.5 * dG2 * (-2j * cG2 * np.imag(cF1 * G1) + cF2 * (cF1**2 + cG1**2))
        - np.real(g1 * cF1 - np.conj(f1) * G1 + slope_mix)
        - dxi1 * (2.0 * aF2 * np.imag(G1 * cF1)
                  + np.imag(G2 * cF2 * cF1**2 - cG2 * F2 * G1**2))
        - dxi2 * ((aF2 - aG2) * np.imag(G1 * cF1)
                  + np.imag(G2 * cF2 * cF1**2 - F2 * cG2 * G1**2))
    )

    potential = np.stack([pot0.astype(complex), pot1, pot2, pot3])
    velocity = np.stack([np.zeros_like(vel3), vel1, vel2, vel3]).real
    return HamiltonianCoefficients(potential, velocity, "general-u2", mode)


def coefficients_restricted(field1: RestrictedCoinField, field2: RestrictedCoinField,
                            lattice: Lattice, t: float) -> HamiltonianCoefficients:
    """Coefficient grids for spin-x rotation coins (closed forms)."""
    x = lattice.positions
    th1 = _eval(field1.theta, x, t)
    th2 = _eval(field2.theta, x, t)
    vt1 = _eval(field1.vartheta, x, t)
    vt2 = _eval(field2.vartheta, x, t)
    lam1 = _eval(field1.lam, x, t)
    lam2 = _eval(field2.lam, x, t)
    dth1, mode_a = field_derivative_grid(field1.theta, field1.dtheta_dx, lattice, t)
    dth2, mode_b = field_derivative_grid(field2.theta, field2.dtheta_dx, lattice, t)
    dxi1, mode_c = field_derivative_grid(field1.xi, field1.dxi_dx, lattice, t)
    dxi2, mode_d = field_derivative_grid(field2.xi, field2.dxi_dx, lattice, t)
    modes = {mode_a, mode_b, mode_c, mode_d}
    mode = "analytic" if modes == {"analytic"} else "finite-difference"

    two1 = 2.0 * th1
    both = 2.0 * th1 + 2.0 * th2
    half = 2.0 * th1 + th2

    vel1 = np.zeros_like(th1)
    vel2 = np.cos(th2) * np.sin(half)
    vel3 = 0.5 * np.cos(two1) + 0.5 * np.cos(both)

    pot0 = -(lam1 + lam2) + 0.5 * dxi2
    pot1 = (vt1 + vt2) - 0.5 * dth2
    pot3 = (
        0.5j * np.sin(both) * dth2
        + 1j * np.cos(th2) * np.sin(half) * dth1
        + 0.5 * dxi1 * (np.cos(two1) + np.cos(both))
        + 0.5 * dxi2 * np.cos(both)
    )
    pot2 = (
        -1j * np.cos(th2) * np.cos(half) * dth1
        - 0.5j * np.cos(both) * dth2
        + dxi1 * np.cos(th2) * np.sin(half)
        + 0.5 * dxi2 * np.sin(both)
    )

    potential = np.stack([pot0.astype(complex), pot1.astype(complex), pot2, pot3])
    velocity = np.stack([vel1, vel1, vel2, vel3])
    return HamiltonianCoefficients(potential, velocity, "restricted", mode)


def momentum_operator(lattice: Lattice) -> np.ndarray:
    """Spectral momentum operator: diagonal k in the discrete Fourier basis."""
    k = momentum_values(lattice).values
    x = lattice.positions
    w = np.exp(1j * np.outer(x, k)) / np.sqrt(lattice.n_sites)
    return (w * k) @ w.conj().T


def assemble(coeffs: HamiltonianCoefficients, lattice: Lattice) -> np.ndarray:
    """Dense Hermitian matrix from coefficient grids.

    Momentum couplings enter symmetrized, (diag(vel) P + P diag(vel)) / 2,
    which supplies the derivative terms carried by Im(pot); only Re(pot)
    enters the diagonal.
    """
    n = lattice.n_sites
    p_op = momentum_operator(lattice)
    h = np.zeros((2 * n, 2 * n), dtype=complex)
    for r in range(4):
        block = np.diag(coeffs.potential[r].real.astype(complex))
        if r >= 1 and np.any(coeffs.velocity[r]):
            vel = np.diag(coeffs.velocity[r].astype(complex))
            block = block + 0.5 * (vel @ p_op + p_op @ vel)
        h += np.kron(SIGMA[r], block)
    return h


def numeric_generator(builder: StepBuilder, t: float, tau=None) -> np.ndarray:
    """First-order generator (i / tau) (U_mod(t, tau) - 1) as a dense matrix."""
    if builder.mode != "modified":
        raise ValueError("the numeric generator is defined for the modified step")
    tau = builder.tau(tau)
    u = modified_step(builder, t, tau).matrix
    return 1j * (u - np.eye(u.shape[0])) / tau


def generator_action(builder: StepBuilder, amps: np.ndarray, t: float,
                     tau=None) -> np.ndarray:
    """Action of the numeric generator on an amplitude array, matrix-free."""
    tau = builder.tau(tau)
    stepped = apply_step(builder, amps, t, tau)
    return 1j * (stepped - amps) / tau


def gaussian_state(lattice: Lattice, sigma: float, x0: float = 0.0,
                   k0: float = 0.0, spinor=(1.0, 0.0)) -> np.ndarray:
    """Normalized Gaussian wave packet (coin_dim, n_sites)."""
    x = lattice.positions
    envelope = np.exp(-((x - x0) ** 2) / (4.0 * sigma**2)) * np.exp(1j * k0 * x)
    spin = np.asarray(spinor, dtype=complex)
    amps = spin[:, None] * envelope[None, :]
    return amps / np.linalg.norm(amps)


def smooth_state_bank(lattice: Lattice, sigma: float, k_values: Sequence[float] = (0.0, 3.0, -5.0)):
    """Fixed bank of smooth test packets used for operator comparisons."""
    bank = []
    spinors = [(1.0, 0.0), (1.0 / np.sqrt(2), 1j / np.sqrt(2))]
    for k0, spinor in zip(k_values, spinors * len(k_values)):
        bank.append(gaussian_state(lattice, sigma, 0.0, k0, spinor))
    return bank


def action_error(matrix: np.ndarray, builder: StepBuilder, bank, t: float,
                 tau=None) -> float:
    """max_psi || (H_num - matrix) psi || over the test bank."""
    err = 0.0
    for amps in bank:
        num = generator_action(builder, amps, t, tau).reshape(-1)
        ana = matrix @ amps.reshape(-1)
        err = max(err, float(np.linalg.norm(num - ana)))
    return err


@dataclass
class ConvergenceReport:
    """Error-vs-step-size study of the numeric generator."""

    L_values: np.ndarray
    errors: np.ndarray
    hermiticity_defects: np.ndarray
    slope: float  # fitted d log(error) / d log(1/L); ~1 means first order
    monotone: bool
    degenerate: bool
    notes: str = ""

    def rows(self):
        return list(zip(self.L_values, self.errors, self.hermiticity_defects))


def write_convergence_csv(report: ConvergenceReport, path):
    with open(path, "w") as fh:
        fh.write("L,error,hermiticity_defect\n")
        for L, err, herm in report.rows():
            fh.write(f"{int(L)},{err:.17g},{herm:.17g}\n")


DEGENERATE_ERROR = 1e-13


def convergence_order(field_factory: Callable[[Lattice], tuple],
                      L_values: Sequence[int],
                      base_n_sites: int = 128,
                      base_L: int = 100,
                      coefficient_fn=None,
                      t: float = 0.0,
                      sigma: float = 0.08,
                      k_values: Sequence[float] = (0.0, 3.0, -5.0)) -> ConvergenceReport:
    """Fit the order of convergence of the numeric generator.

    The physical domain is held fixed (width base_n_sites / base_L) while the
    lattice refines with L, so the same smooth test packets probe every
    resolution.  field_factory(lattice) must return the coin-field pair for
    that lattice.  Returns the slope of log(error) against log(1/L); a clean
    first-order generator gives slope near 1.
    """
    if len(L_values) < 3:
        raise ValueError("need at least three L values for a slope fit")
    if coefficient_fn is None:
        coefficient_fn = coefficients_restricted
    width = base_n_sites / base_L
    errors, defects = [], []
    for L in L_values:
        a = 1.0 / L
        n_sites = int(round(width * L))
        lat = make_lattice(n_sites, a)
        f1, f2 = field_factory(lat)
        builder = StepBuilder(f1, f2, lat, mode="modified")
        coeffs = coefficient_fn(f1, f2, lat, t)
        h_ana = assemble(coeffs, lat)
        bank = smooth_state_bank(lat, sigma, k_values)
        errors.append(action_error(h_ana, builder, bank, t))
        herm = 0.0
        for amps in bank:
            num = generator_action(builder, amps, t)
            # defect of Hermiticity measured through <psi|H|psi> asymmetry
            num_dag = _generator_adjoint_action(builder, amps, t)
            herm = max(herm, float(np.linalg.norm((num - num_dag).reshape(-1))))
        defects.append(herm)
    errors = np.asarray(errors)
    defects = np.asarray(defects)
    l_arr = np.asarray(L_values, dtype=float)
    degenerate = bool(np.all(errors < DEGENERATE_ERROR))
    if degenerate:
        return ConvergenceReport(l_arr, errors, defects, float("nan"),
                                 True, True, "errors at rounding floor")
    slope = float(np.polyfit(np.log(1.0 / l_arr), np.log(errors), 1)[0])
    monotone = bool(np.all(np.diff(errors) < 0))
    notes = "" if monotone else "error sequence is not monotone"
    return ConvergenceReport(l_arr, errors, defects, slope, monotone, degenerate, notes)


def _generator_adjoint_action(builder: StepBuilder, amps, t, tau=None):
    """Action of H_num^dagger via the inverse step: (i/tau)(1 - U^dag) = -i/tau (U^dag - 1)."""
    tau = builder.tau(tau)
    # U^dag psi: run the step factors in reverse with daggered blocks
    from .coins import coin_blocks

    lat = builder.lattice
    b1, _ = coin_blocks(builder.coin1, t, tau, lat)
    b2, _ = coin_blocks(builder.coin2, t, tau, lat)
    out = amps
    if builder.mode == "modified":
        b1_0, _ = coin_blocks(builder.coin1, t, 0.0, lat)
        b2_0, _ = coin_blocks(builder.coin2, t, 0.0, lat)
        out = np.einsum("abn,bn->an", b1_0, out)
        out = np.einsum("abn,bn->an", b2_0, out)
    half = out.shape[0] // 2
    out = out.copy()
    out[:half] = np.roll(out[:half], -1, axis=-1)  # S_+^dag
    out = np.einsum("abn,bn->an", np.conj(np.swapaxes(b2, 0, 1)), out)
    out2 = out.copy()
    out2[half:] = np.roll(out2[half:], 1, axis=-1)  # S_-^dag
    out2 = np.einsum("abn,bn->an", np.conj(np.swapaxes(b1, 0, 1)), out2)
    return -1j * (out2 - amps) / tau
