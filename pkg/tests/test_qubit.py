import numpy as np
import pytest

from sswalk import qubit
from sswalk.coins import RestrictedCoinField, build_coin_restricted, build_shift
from sswalk.pauli import SIGMA, kron_all


def test_encode_positions():
    two = qubit.encode_positions(2)
    assert two == {0: "00", 1: "01", 2: "10", 3: "11"}
    assert qubit.encode_positions(1) == {0: "0", 1: "1"}
    assert qubit.encode_positions(3)[5] == "101"
    with pytest.raises(ValueError):
        qubit.encode_positions(0)


def test_decompose_cyclic_shift_terms():
    plus = qubit.decompose(qubit.position_shift_matrix(2, "plus"))
    assert plus.coefficient_map() == {
        (0, 1): 0.5, (0, 2): -0.5j, (1, 1): 0.5, (1, 2): 0.5j,
    }
    minus = qubit.decompose(qubit.position_shift_matrix(2, "minus"))
    assert minus.coefficient_map() == {
        (0, 1): 0.5, (0, 2): 0.5j, (1, 1): 0.5, (1, 2): -0.5j,
    }
    ident = qubit.decompose(np.eye(4, dtype=complex))
    assert ident.coefficient_map() == {(0, 0): 1.0}


def test_decompose_rejects_bad_dimension():
    with pytest.raises(ValueError):
        qubit.decompose(np.eye(3))
    with pytest.raises(ValueError):
        qubit.decompose(np.ones((4, 2)))


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
def test_decompose_reconstruction_round_trip(m):
    rng = np.random.default_rng(100 + m)
    mat = rng.normal(size=(2**m, 2**m)) + 1j * rng.normal(size=(2**m, 2**m))
    rec = qubit.decompose(mat).reconstruct()
    assert np.max(np.abs(rec - mat)) < 1e-12


def test_hermitian_target_gives_real_coefficients():
    rng = np.random.default_rng(33)
    raw = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    herm = raw + raw.conj().T
    decomp = qubit.decompose(herm)
    assert max(abs(t.coefficient.imag) for t in decomp.terms) < 1e-12


def test_shift_with_coin_two_qubits_term_set():
    swc = qubit.shift_with_coin(2, "plus")
    expected = {
        (0, 0, 0): 0.5, (3, 0, 0): -0.5,
        (0, 0, 1): 0.25, (0, 0, 2): -0.25j, (0, 1, 1): 0.25, (0, 1, 2): 0.25j,
        (3, 0, 1): 0.25, (3, 0, 2): -0.25j, (3, 1, 1): 0.25, (3, 1, 2): 0.25j,
    }
    assert swc.coefficient_map() == expected
    assert swc.n_position_qubits == 2 and swc.has_coin_qubit


@pytest.mark.parametrize("n,direction", [(1, "plus"), (2, "minus"), (3, "plus"), (4, "minus")])
def test_shift_with_coin_reconstruction(n, direction):
    target = build_shift(qubit.qubit_lattice(n), direction).matrix
    rec = qubit.shift_with_coin(n, direction).reconstruct()
    assert np.max(np.abs(rec - target)) < 1e-12
    # the target is unitary, so the reconstruction is too
    assert np.max(np.abs(rec.conj().T @ rec - np.eye(rec.shape[0]))) < 1e-12


def test_projected_rotations_uniform_angle():
    field = RestrictedCoinField(theta=np.pi / 5, vartheta=0.0)
    terms = qubit.coin_as_projected_rotations(field, 0.0, 0.0, 2)
    assert len(terms) == 4
    rec = qubit.reconstruct_projected_rotations(terms, 2)
    global_rot = np.cos(np.pi / 5) * SIGMA[0] - 1j * np.sin(np.pi / 5) * SIGMA[1]
    assert np.allclose(rec, kron_all(global_rot, np.eye(4)), atol=1e-14)


def test_projected_rotation_single_site():
    def theta(x, t):
        x = np.asarray(x, dtype=float)
        return np.where(x == 0.0, np.pi / 4, 0.0)

    field = RestrictedCoinField(theta=theta, vartheta=0.0)
    terms = qubit.coin_as_projected_rotations(field, 0.0, 0.0, 2)
    nontrivial = [t for t in terms if abs(t.angle) > 0]
    assert len(nontrivial) == 1
    assert nontrivial[0].bits == "00"  # x = 0 encodes to |00>
    assert nontrivial[0].angle == pytest.approx(np.pi / 4)


def test_projected_rotations_match_coin_operator():
    # position-dependent static curved angle sampled on four sites
    a = 1.0 / 250.0

    def theta1(x, t):
        return 0.5 * np.arccos(np.asarray(x) + 5 * a)

    field = RestrictedCoinField(theta=theta1, vartheta=0.5,
                                xi=lambda x, t: 0.2 * np.asarray(x), lam=0.1)
    lat = qubit.qubit_lattice(2, a)
    for tau in (0.0, a):
        terms = qubit.coin_as_projected_rotations(field, 0.0, tau, 2, spacing=a)
        rec = qubit.reconstruct_projected_rotations(terms, 2)
        target = build_coin_restricted(field, 0.0, tau, lat).matrix
        # reorder: coin operator is coin (x) position already; compare directly
        assert np.max(np.abs(rec - target)) < 1e-12


def test_export_text_round_trip_format():
    decomp = qubit.decompose(qubit.position_shift_matrix(2, "plus"))
    text = qubit.export_text(decomp)
    lines = text.strip().splitlines()
    assert len(lines) == 4
    first = lines[0].split()
    assert len(first) == 3
    float(first[0]), float(first[1])  # parsable coefficients
    assert set(first[2]) <= set("IXYZ")
