import numpy as np
import pytest

from sswalk.coins import (
    CoinField,
    RestrictedCoinField,
    build_coin,
    build_coin_restricted,
    build_shift,
    cyclic_shift_matrix,
    validate_coin_field,
)
from sswalk.lattice import make_lattice
from sswalk.pauli import SIGMA
from sswalk.verify import random_general_field, random_restricted_pair


def test_cyclic_shift_four_sites():
    roll = cyclic_shift_matrix(4, "plus")
    expected = np.zeros((4, 4))
    for row, col in [(1, 0), (2, 1), (3, 2), (0, 3)]:
        expected[row, col] = 1.0
    assert np.array_equal(roll, expected)
    assert np.array_equal(cyclic_shift_matrix(4, "minus"), expected.T)


def test_shift_block_action():
    lat = make_lattice(6, 1.0)
    s_plus = build_shift(lat, "plus").matrix
    s_minus = build_shift(lat, "minus").matrix
    # down-coin state at site 3: S- moves it to site 2, S+ leaves it there
    vec = np.zeros(12, dtype=complex)
    vec[6 + 3] = 1.0
    moved = s_plus @ (s_minus @ vec)
    assert moved[6 + 2] == 1.0 + 0j
    assert np.count_nonzero(moved) == 1


def test_shift_exact_unitarity_and_validation():
    lat = make_lattice(5, 2.0)
    s = build_shift(lat, "plus")
    assert s.unitarity_defect() == 0.0
    with pytest.raises(ValueError):
        build_shift(lat, "plus", coin_dim=3)
    with pytest.raises(ValueError):
        build_shift(lat, "sideways")


def test_coin_identity_at_zero_angle():
    lat = make_lattice(4, 1.0)
    f = RestrictedCoinField(theta=0.0, vartheta=0.0)
    op = build_coin_restricted(f, 0.0, 0.0, lat)
    assert np.allclose(op.matrix, np.eye(8), atol=0)


def test_flat_mass_coin_is_small_x_rotation():
    # second coin of the flat run: rotation by 0.04 tau about spin-x per site
    lat = make_lattice(4, 1.0 / 250.0)
    tau = lat.spacing
    f = RestrictedCoinField(theta=0.0, vartheta=0.04)
    op = build_coin_restricted(f, 0.0, tau, lat)
    angle = 0.04 * tau
    block = op.matrix[np.ix_([0, 4], [0, 4])]
    expected = np.cos(angle) * SIGMA[0] - 1j * np.sin(angle) * SIGMA[1]
    assert np.allclose(block, expected, atol=1e-15)


def test_restricted_coin_is_spin_x_exponential():
    lat = make_lattice(3, 1.0)
    theta = 0.7
    f = RestrictedCoinField(theta=theta, vartheta=0.0)
    op = build_coin_restricted(f, 0.0, 0.0, lat)
    block = op.matrix[np.ix_([0, 3], [0, 3])]
    from scipy.linalg import expm

    assert np.allclose(block, expm(-1j * theta * SIGMA[1]), atol=1e-14)
    # theta = pi/2 gives -i sigma_x
    g = RestrictedCoinField(theta=np.pi / 2, vartheta=0.0)
    opg = build_coin_restricted(g, 0.0, 0.0, lat)
    assert np.allclose(opg.matrix[np.ix_([0, 3], [0, 3])], -1j * SIGMA[1], atol=1e-15)


def test_same_axis_rotations_compose():
    lat = make_lattice(4, 1.0)
    fa = RestrictedCoinField(theta=0.4, vartheta=0.0)
    fb = RestrictedCoinField(theta=-0.9, vartheta=0.0)
    fab = RestrictedCoinField(theta=0.4 - 0.9, vartheta=0.0)
    prod = build_coin_restricted(fa, 0, 0, lat).matrix @ build_coin_restricted(fb, 0, 0, lat).matrix
    assert np.allclose(prod, build_coin_restricted(fab, 0, 0, lat).matrix, atol=1e-14)


def test_static_curved_coin_angle_value():
    # first coin angle at x = 0 equals arccos(5a)/2 for the published spacing
    a = 1.0 / 250.0
    lat = make_lattice(8, a)

    def theta1(x, t):
        return 0.5 * np.arccos(np.asarray(x) + 5 * a)

    f = RestrictedCoinField(theta=theta1, vartheta=0.0)
    op = build_coin_restricted(f, 0.0, 0.0, lat)
    j = lat.origin_index
    expected = np.cos(0.5 * np.arccos(5 * a))
    assert op.matrix[j, j] == pytest.approx(expected, abs=1e-15)


def test_general_coin_matches_restricted_at_tau_zero():
    rng = np.random.default_rng(8)
    lat = make_lattice(32, 0.05)
    f1, _ = random_restricted_pair(rng, lat.width)
    a = build_coin_restricted(f1, 0.3, 0.0, lat).matrix
    b = build_coin(f1.to_general(), 0.3, 0.0, lat).matrix
    assert np.max(np.abs(a - b)) < 1e-14


def test_unitarity_of_built_operators():
    rng = np.random.default_rng(9)
    lat = make_lattice(128, 1.0 / 128.0)
    f1, f2 = random_restricted_pair(rng, lat.width)
    g = random_general_field(rng, lat.width)
    tau = lat.spacing
    for op in (build_coin_restricted(f1, 0.0, tau, lat),
               build_coin_restricted(f2, 0.5, tau, lat),
               build_coin(g, 0.0, tau, lat),
               build_shift(lat, "plus"), build_shift(lat, "minus")):
        assert op.unitarity_defect() < 1e-12


def test_coin_norm_defect_gate():
    lat = make_lattice(4, 0.1)
    bad = CoinField(F=1.0, G=0.0, f=5.0, g=0.0, xi=0.0, lam=0.0)
    with pytest.raises(ValueError, match="norm defect"):
        build_coin(bad, 0.0, 0.1, lat)


def test_validate_coin_field_invariants():
    rng = np.random.default_rng(10)
    lat = make_lattice(32, 0.04)
    good = random_general_field(rng, lat.width)
    validate_coin_field(good, lat, 0.2)
    broken = CoinField(F=0.9, G=0.0, f=0.0, g=0.0, xi=0.0, lam=0.0)
    with pytest.raises(ValueError, match=r"\|F\|\^2"):
        validate_coin_field(broken, lat, 0.0)
    drifting = CoinField(F=1.0, G=0.0, f=1.0, g=0.0, xi=0.0, lam=0.0)
    with pytest.raises(ValueError, match="first-order"):
        validate_coin_field(drifting, lat, 0.0)


def test_finite_difference_fallback_flagged():
    from sswalk.hamiltonian import coefficients_restricted

    lat = make_lattice(64, 0.01)
    f = RestrictedCoinField(theta=lambda x, t: 0.2 * np.sin(x), vartheta=0.0)
    g = RestrictedCoinField(theta=0.0, vartheta=0.04)
    coeffs = coefficients_restricted(f, g, lat, 0.0)
    assert coeffs.derivative_mode == "finite-difference"
