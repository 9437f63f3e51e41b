import numpy as np
import pytest

from sswalk.coins import build_shift, coin_blocks, RestrictedCoinField
from sswalk.lattice import (
    initial_state,
    make_lattice,
    momentum_values,
    probability_profile,
)


def test_positions_four_sites():
    lat = make_lattice(4, 1.0)
    assert np.array_equal(lat.positions, [-2.0, -1.0, 0.0, 1.0])
    assert np.all(np.diff(lat.positions) > 0)


def test_scenario_lattices():
    static = make_lattice(400, 1.0 / 250.0)
    assert static.positions[0] == pytest.approx(-0.8)
    assert static.positions[-1] == pytest.approx(0.796)
    nonstatic = make_lattice(200, 1.0 / 150.0)
    assert nonstatic.n_sites == 200
    assert nonstatic.spacing == pytest.approx(1.0 / 150.0)


def test_make_lattice_validation():
    with pytest.raises(ValueError):
        make_lattice(1, 1.0)
    with pytest.raises(ValueError):
        make_lattice(8, 0.0)
    with pytest.raises(ValueError):
        make_lattice(8, -0.3)


def test_momentum_even_four_sites():
    grid = momentum_values(make_lattice(4, 1.0))
    assert np.allclose(grid.values, [-np.pi / 2, 0.0, np.pi / 2, np.pi])


def test_momentum_odd_three_sites():
    grid = momentum_values(make_lattice(3, 1.0))
    assert np.allclose(grid.values, [-2 * np.pi / 3, 0.0, 2 * np.pi / 3])


@pytest.mark.parametrize("n,a", [(4, 1.0), (5, 0.5), (64, 0.01), (127, 2.0)])
def test_momentum_brillouin_zone(n, a):
    grid = momentum_values(make_lattice(n, a))
    k = grid.values
    # full zone width, equal spacing, and every value inside (-pi/a, pi/a]
    assert k.max() - k.min() + grid.spacing == pytest.approx(2 * np.pi / a)
    assert np.allclose(np.diff(k), 2 * np.pi / (n * a))
    assert np.all(k > -np.pi / a) and np.all(k <= np.pi / a + 1e-12)


def test_initial_state_paper_coin():
    lat = make_lattice(16, 1.0)
    coin = np.array([1.0, 1j]) / np.sqrt(2.0)
    state = initial_state(coin, lat.origin_index, lat)
    assert state.norm_sq() == pytest.approx(1.0, abs=1e-12)
    p = probability_profile(state)
    assert p[lat.origin_index] == pytest.approx(1.0)
    assert np.count_nonzero(p) == 1


def test_initial_state_basis_and_real_coin():
    lat = make_lattice(8, 0.5)
    basis = initial_state([1.0, 0.0], lat.origin_index, lat)
    assert basis.amplitudes[0, lat.origin_index] == 1.0 + 0j
    shifted = initial_state([0.6, 0.8], lat.origin_index + 1, lat)
    assert shifted.norm_sq() == pytest.approx(1.0, abs=1e-12)
    assert np.count_nonzero(probability_profile(shifted)) == 1


def test_initial_state_rejects_bad_input():
    lat = make_lattice(8, 1.0)
    with pytest.raises(ValueError):
        initial_state([1.0, 1.0], 0, lat)  # not normalized
    with pytest.raises(ValueError):
        initial_state([1.0, 0.0], 8, lat)  # site out of range


def test_probability_profile_superposition_and_phase():
    lat = make_lattice(4, 1.0)
    state = initial_state([1.0, 0.0], 0, lat)
    state.amplitudes[0, 0] = 1.0 / np.sqrt(2.0)
    state.amplitudes[1, 2] = 1j / np.sqrt(2.0)
    p = probability_profile(state)
    assert p[0] == pytest.approx(0.5) and p[2] == pytest.approx(0.5)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    state.amplitudes *= np.exp(0.73j)
    assert np.allclose(probability_profile(state), p)


def test_support_confined_by_brute_force_steps():
    # shifts move support by at most one site per sub-step
    lat = make_lattice(16, 1.0)
    f = RestrictedCoinField(theta=0.3, vartheta=0.1)
    s_minus = build_shift(lat, "minus").matrix
    s_plus = build_shift(lat, "plus").matrix
    blocks, _ = coin_blocks(f, 0.0, 1.0, lat)
    coin = np.zeros((32, 32), dtype=complex)
    idx = np.arange(16)
    for i in range(2):
        for j in range(2):
            coin[i * 16 + idx, j * 16 + idx] = blocks[i, j]
    step = s_plus @ coin @ s_minus @ coin
    vec = initial_state([1.0, 0.0], lat.origin_index, lat).amplitudes.reshape(-1)
    for n_steps in range(1, 6):
        vec = step @ vec
        p = np.abs(vec.reshape(2, 16)) ** 2
        profile = p.sum(axis=0)
        d = np.abs(np.arange(16) - lat.origin_index)
        dist = np.minimum(d, 16 - d)
        assert np.all(profile[dist > n_steps] == 0.0)
