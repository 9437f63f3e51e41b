import numpy as np
import pytest

from sswalk.coins import RestrictedCoinField, build_shift, _eval
from sswalk.evolution import (
    StepBuilder,
    apply_step,
    conventional_step,
    evolve,
    modified_step,
)
from sswalk.hamiltonian import gaussian_state
from sswalk.lattice import initial_state, make_lattice, momentum_values
from sswalk.verify import (
    _fit_slope,
    fig4_fields,
    random_general_field,
    random_restricted_pair,
)


def _zero_fields():
    z = RestrictedCoinField(theta=0.0, vartheta=0.0)
    return z, RestrictedCoinField(theta=0.0, vartheta=0.0)


def test_zero_coin_step_is_pure_shift():
    lat = make_lattice(6, 1.0)
    f1, f2 = _zero_fields()
    expected = build_shift(lat, "plus").matrix @ build_shift(lat, "minus").matrix
    for mode in ("conventional", "modified"):
        b = StepBuilder(f1, f2, lat, mode=mode)
        op = conventional_step(b, 0.0) if mode == "conventional" else modified_step(b, 0.0)
        assert np.allclose(op.matrix, expected, atol=1e-15)


def test_homogeneous_step_block_diagonal_in_momentum():
    lat = make_lattice(8, 1.0)
    f1 = RestrictedCoinField(theta=0.31, vartheta=0.0)
    f2 = RestrictedCoinField(theta=-0.77, vartheta=0.0)
    u = conventional_step(StepBuilder(f1, f2, lat, mode="conventional"), 0.0).matrix
    k = momentum_values(lat).values
    w = np.exp(1j * np.outer(lat.positions, k)) / np.sqrt(lat.n_sites)
    w_full = np.kron(np.eye(2), w)
    u_k = w_full.conj().T @ u @ w_full
    n = lat.n_sites
    off_block = u_k.copy()
    for i in range(n):
        for ci in range(2):
            for cj in range(2):
                off_block[ci * n + i, cj * n + i] = 0.0
    assert np.max(np.abs(off_block)) < 1e-12


def test_conventional_matrix_elements_match_closed_form():
    rng = np.random.default_rng(4)
    lat = make_lattice(16, 0.01)
    g1 = random_general_field(rng, lat.width, label=1)
    g2 = random_general_field(rng, lat.width, label=2)
    t, tau = 0.4, lat.spacing
    u = conventional_step(StepBuilder(g1, g2, lat, mode="conventional"), t, tau).matrix
    x = lat.positions
    n = lat.n_sites
    F1 = _eval(g1.F, x, t) + tau * _eval(g1.f, x, t)
    G1 = _eval(g1.G, x, t) + tau * _eval(g1.g, x, t)
    F2 = _eval(g2.F, x, t) + tau * _eval(g2.f, x, t)
    G2 = _eval(g2.G, x, t) + tau * _eval(g2.g, x, t)
    # the build path projects each site to the nearest unitary
    s1 = np.sqrt(np.abs(F1) ** 2 + np.abs(G1) ** 2)
    s2 = np.sqrt(np.abs(F2) ** 2 + np.abs(G2) ** 2)
    F1, G1, F2, G2 = F1 / s1, G1 / s1, F2 / s2, G2 / s2
    xi1 = _eval(g1.xi, x, t) + tau * _eval(g1.lam, x, t)
    xi2 = _eval(g2.xi, x, t) + tau * _eval(g2.lam, x, t)
    for j in (0, 3, n - 1):
        jp = (j + 1) % n
        # up-up: |x+a><x| coupling and the on-site back-scattering term
        up_shift = np.exp(1j * (xi1[j] + xi2[j])) * F2[j] * F1[j]
        assert u[jp, j] == pytest.approx(up_shift, abs=1e-12)
        jm = (j - 1) % n
        on_site = -np.exp(1j * (xi1[j] + xi2[jm])) * G2[jm] * np.conj(G1[j])
        assert u[j, j] == pytest.approx(on_site, abs=1e-12)
        # up-down coupling of |x+a><x|
        up_down = np.exp(1j * (xi1[j] + xi2[j])) * F2[j] * G1[j]
        assert u[jp, n + j] == pytest.approx(up_down, abs=1e-12)


def test_flat_scenario_modified_equals_conventional():
    lat = make_lattice(12, 1.0 / 250.0)
    f1 = RestrictedCoinField(theta=0.0, vartheta=0.0)
    f2 = RestrictedCoinField(theta=0.0, vartheta=0.04)
    conv = conventional_step(StepBuilder(f1, f2, lat, mode="conventional"), 0.0)
    modf = modified_step(StepBuilder(f1, f2, lat, mode="modified"), 0.0)
    assert np.allclose(conv.matrix, modf.matrix, atol=1e-15)


def test_curved_fields_modified_differs_but_stays_unitary():
    lat = make_lattice(8, 1.0 / 250.0)
    f1, f2 = fig4_fields(lat)
    conv = conventional_step(StepBuilder(f1, f2, lat, mode="conventional"), 0.0)
    modf = modified_step(StepBuilder(f1, f2, lat, mode="modified"), 0.0)
    assert np.max(np.abs(conv.matrix - modf.matrix)) > 1e-3
    assert conv.unitarity_defect() < 1e-12
    assert modf.unitarity_defect() < 1e-12


def test_evolve_zero_steps_returns_initial_profile():
    lat = make_lattice(8, 1.0)
    f1, f2 = _zero_fields()
    state = initial_state([1.0, 0.0], 2, lat)
    traj = evolve(StepBuilder(f1, f2, lat), state, 0)
    assert traj.profiles.shape == (1, 8)
    assert traj.profiles[0, 2] == 1.0


def test_light_cone_support_any_fields():
    rng = np.random.default_rng(14)
    lat = make_lattice(32, 1.0 / 64.0)
    f1, f2 = random_restricted_pair(rng, lat.width)
    builder = StepBuilder(f1, f2, lat, mode="modified")
    state = initial_state([0.8, 0.6j], lat.origin_index, lat)
    traj = evolve(builder, state, 10)
    d = np.abs(np.arange(32) - lat.origin_index)
    dist = np.minimum(d, 32 - d)
    for step in range(11):
        assert np.all(traj.profiles[step][dist > step] == 0.0)


def test_fast_path_matches_dense_path():
    rng = np.random.default_rng(2)
    lat = make_lattice(64, 1.0 / 64.0)
    f1, f2 = random_restricted_pair(rng, lat.width)
    builder = StepBuilder(f1, f2, lat, mode="modified")
    state = initial_state([0.6, 0.8j], lat.origin_index, lat)
    fast = evolve(builder, state.copy(), 50)
    dense = evolve(builder, state.copy(), 50, dense=True)
    diff = np.max(np.abs(fast.metadata["final_state"].amplitudes
                         - dense.metadata["final_state"].amplitudes))
    assert diff < 1e-12


def test_first_order_identity_limit():
    # ||U_mod(0, 1/L) - 1|| on smooth packets falls like 1/L
    rng = np.random.default_rng(5)
    f1, f2 = random_restricted_pair(rng, 1.28)
    L_values = (100, 200, 400, 800)
    errors = []
    for L in L_values:
        lat = make_lattice(int(1.28 * L), 1.0 / L)
        builder = StepBuilder(f1, f2, lat, mode="modified")
        psi = gaussian_state(lat, 0.08, spinor=(1 / np.sqrt(2), 1j / np.sqrt(2)))
        errors.append(float(np.linalg.norm(apply_step(builder, psi, 0.0) - psi)))
    slope_vs_logL = -_fit_slope(L_values, errors)
    assert -1.2 <= slope_vs_logL <= -0.8
    # prefactor K = L * error stays stable under doubling
    ks = np.asarray(L_values) * np.asarray(errors)
    assert np.max(ks) / np.min(ks) < 1.05


def test_wrap_warning_recorded():
    lat = make_lattice(8, 1.0)
    f1, f2 = _zero_fields()
    state = initial_state([1.0, 0.0], lat.origin_index, lat)
    with pytest.warns(UserWarning, match="boundary"):
        traj = evolve(StepBuilder(f1, f2, lat), state, 6)
    assert traj.metadata["wrap_step"] == 3  # origin site 4, right edge site 7
    assert traj.metadata["max_norm_drift"] < 1e-12


def test_norm_conservation_long_run():
    rng = np.random.default_rng(21)
    lat = make_lattice(512, 1.0 / 512.0)
    f1, f2 = random_restricted_pair(rng, lat.width)
    state = initial_state([1.0, 0.0], lat.origin_index, lat)
    traj = evolve(StepBuilder(f1, f2, lat), state, 1000)
    assert traj.metadata["max_norm_drift"] < 1e-10
