import numpy as np
import pytest

from sswalk.coins import CoinField, RestrictedCoinField
from sswalk.evolution import StepBuilder
from sswalk.hamiltonian import (
    HamiltonianCoefficients,
    assemble,
    coefficients_general,
    coefficients_restricted,
    convergence_order,
    momentum_operator,
    numeric_generator,
    write_convergence_csv,
)
from sswalk.lattice import make_lattice, momentum_values
from sswalk.pauli import SIGMA
from sswalk.verify import fig3_fields, fig4_fields, random_general_field, random_restricted_pair


def _zeros(x, t):
    return np.zeros(np.shape(x))


def test_general_coefficients_trivial_coin():
    # F = 1, G = 0, no slopes: only the velocity of the sigma_z channel survives
    lat = make_lattice(16, 0.1)
    f = CoinField(F=1.0 + 0j, G=0.0j, f=0.0j, g=0.0j, xi=0.0, lam=0.0,
                  dF_dx=lambda x, t: np.zeros(np.shape(x), dtype=complex),
                  dG_dx=lambda x, t: np.zeros(np.shape(x), dtype=complex),
                  dxi_dx=_zeros)
    co = coefficients_general(f, f, lat, 0.0)
    assert np.max(np.abs(co.potential)) == 0.0
    assert np.allclose(co.velocity[3], 1.0)
    assert np.max(np.abs(co.velocity[1])) == 0.0
    assert np.max(np.abs(co.velocity[2])) == 0.0


def test_restricted_coefficients_flat_case():
    lat = make_lattice(32, 1.0 / 250.0)
    f1, f2 = fig3_fields(lat)
    co = coefficients_restricted(f1, f2, lat, 0.0)
    assert np.allclose(co.velocity[3], 1.0, atol=1e-14)
    assert np.allclose(co.potential[1].real, 0.04, atol=1e-14)
    assert np.max(np.abs(co.potential[[0, 2, 3]])) < 1e-14
    assert np.max(np.abs(co.velocity[[1, 2]])) < 1e-14


def test_restricted_family_theta2_minus_two_theta1():
    # theta2 = -2 theta1 kills the sigma_y velocity and gives vel_z = cos(2 theta1)
    lat = make_lattice(64, 0.01)

    def th1(x, t):
        return 0.3 + 0.2 * np.sin(3.0 * np.asarray(x))

    def dth1(x, t):
        return 0.6 * np.cos(3.0 * np.asarray(x))

    f1 = RestrictedCoinField(theta=th1, vartheta=0.0, dtheta_dx=dth1, dxi_dx=_zeros)
    f2 = RestrictedCoinField(theta=lambda x, t: -2.0 * th1(x, t), vartheta=0.0,
                             dtheta_dx=lambda x, t: -2.0 * dth1(x, t), dxi_dx=_zeros)
    co = coefficients_restricted(f1, f2, lat, 0.0)
    assert np.max(np.abs(co.velocity[2])) < 1e-14
    assert np.allclose(co.velocity[3], np.cos(2.0 * th1(lat.positions, 0.0)), atol=1e-14)


def test_velocity_y_closed_form_random_fields():
    # vel_y = cos(theta2) sin(2 theta1 + theta2) for spin-x rotation coins
    rng = np.random.default_rng(6)
    lat = make_lattice(64, 0.02)
    f1, f2 = random_restricted_pair(rng, lat.width)
    co = coefficients_restricted(f1, f2, lat, 0.7)
    th1 = f1.theta(lat.positions, 0.7)
    th2 = f2.theta(lat.positions, 0.7)
    assert np.allclose(co.velocity[2], np.cos(th2) * np.sin(2 * th1 + th2), atol=1e-13)
    # the sigma_x channel never couples to momentum for spin-x rotation coins
    assert np.max(np.abs(co.velocity[1])) == 0.0
    assert np.isrealobj(co.velocity)


def test_static_curved_mass_channel_is_constant():
    # the vartheta_1 choice cancels the theta_1 derivative term exactly
    lat = make_lattice(128, 1.0 / 250.0)
    f1, f2 = fig4_fields(lat)
    co = coefficients_restricted(f1, f2, lat, 0.0)
    assert np.allclose(co.potential[1].real, 0.04, atol=1e-12)
    assert np.max(np.abs(co.potential[1].imag)) < 1e-14


def test_assemble_flat_matrix():
    lat = make_lattice(16, 1.0 / 250.0)
    f1, f2 = fig3_fields(lat)
    co = coefficients_restricted(f1, f2, lat, 0.0)
    h = assemble(co, lat)
    p_op = momentum_operator(lat)
    expected = 0.04 * np.kron(SIGMA[1], np.eye(16)) + np.kron(SIGMA[3], p_op)
    assert np.max(np.abs(h - expected)) < 1e-12


def test_assemble_zero_coefficients():
    lat = make_lattice(8, 1.0)
    co = HamiltonianCoefficients(np.zeros((4, 8), complex), np.zeros((4, 8)), "restricted")
    assert np.max(np.abs(assemble(co, lat))) == 0.0


def test_assemble_hermitian_and_momentum_operator():
    rng = np.random.default_rng(12)
    lat = make_lattice(48, 0.03)
    p_op = momentum_operator(lat)
    assert np.max(np.abs(p_op - p_op.conj().T)) < 1e-12
    k = momentum_values(lat).values
    vals = np.sort(np.linalg.eigvalsh(p_op))
    assert np.allclose(vals, np.sort(k), atol=1e-10)
    f1, f2 = random_restricted_pair(rng, lat.width)
    h = assemble(coefficients_restricted(f1, f2, lat, 0.1), lat)
    assert np.max(np.abs(h - h.conj().T)) < 1e-12


def test_imaginary_potentials_are_velocity_derivatives():
    # Hermiticity ties Im(pot_r) to -(1/2) d vel_r / dx; check spectrally
    rng = np.random.default_rng(42)
    g1 = random_general_field(rng, 1.28, label=1)
    g2 = random_general_field(rng, 1.28, label=2)
    lat = make_lattice(512, 1.28 / 512)
    co = coefficients_general(g1, g2, lat, 0.0)
    k = np.fft.fftfreq(lat.n_sites, d=lat.spacing) * 2 * np.pi
    for r in (1, 2, 3):
        dvel = np.real(np.fft.ifft(1j * k * np.fft.fft(co.velocity[r])))
        assert np.max(np.abs(co.potential[r].imag + 0.5 * dvel)) < 1e-10
    assert np.max(np.abs(co.potential[0].imag)) == 0.0


def test_numeric_generator_identity_step():
    lat = make_lattice(8, 0.25)
    z = RestrictedCoinField(theta=0.0, vartheta=0.0)
    builder = StepBuilder(z, z, lat, mode="modified")
    h_num = numeric_generator(builder, 0.0)
    from sswalk.coins import build_shift

    shifts = build_shift(lat, "plus").matrix @ build_shift(lat, "minus").matrix
    expected = 1j * (shifts - np.eye(16)) / lat.spacing
    assert np.allclose(h_num, expected, atol=1e-13)


def test_numeric_generator_requires_modified_mode():
    lat = make_lattice(8, 0.25)
    z = RestrictedCoinField(theta=0.0, vartheta=0.0)
    with pytest.raises(ValueError):
        numeric_generator(StepBuilder(z, z, lat, mode="conventional"), 0.0)


def test_convergence_order_flat_and_degenerate(tmp_path):
    rep = convergence_order(fig3_fields, (100, 200, 400), base_n_sites=128)
    assert 0.8 <= rep.slope <= 1.2
    assert rep.monotone and not rep.degenerate
    # hermiticity defect halves (+-25%) under L doubling
    ratios = rep.hermiticity_defects[:-1] / rep.hermiticity_defects[1:]
    assert np.all(ratios > 1.5) and np.all(ratios < 2.5)
    path = tmp_path / "conv.csv"
    write_convergence_csv(rep, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "L,error,hermiticity_defect"
    assert len(lines) == 4

    # identity-step configuration: theta = pi/2 coins undo both shifts, so the
    # numeric and analytic generators both vanish and the fit is degenerate
    swap = RestrictedCoinField(theta=np.pi / 2, vartheta=0.0)
    rep0 = convergence_order(lambda lat: (swap, swap), (100, 200, 400),
                             base_n_sites=128)
    assert rep0.degenerate and np.isnan(rep0.slope)


def test_convergence_order_needs_three_points():
    with pytest.raises(ValueError):
        convergence_order(fig3_fields, (100, 200))


def test_hermiticity_defect_first_order_curved():
    rep = convergence_order(fig4_fields, (100, 200, 400), base_n_sites=128)
    ratios = rep.hermiticity_defects[:-1] / rep.hermiticity_defects[1:]
    assert np.all(ratios > 1.5) and np.all(ratios < 2.5)
