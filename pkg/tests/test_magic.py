"""One-qubit state zoo: Clifford enumeration, catalogs, fidelities, dephasing."""

import math

import numpy as np
import pytest

from magicsim.magic import HADAMARD, MagicError, PHASE_K, Qubit1State, SX, SY, SZ, \
    T_AXIS, T_GATE, H_AXIS, best_alignment, bloch_rotation, canonical_orientation, \
    catalog, dephase_H, dephase_T, enumerate_c1, epsilon_of, \
    epsilon_to_polarization, fidelity_H, fidelity_T, h_state_vector, \
    in_octahedron, t_eigenstates

T_FIDELITY_CAP = math.sqrt(0.5 * (1 + math.sqrt(1 / 3)))     # ~0.888
H_FIDELITY_CAP = math.sqrt(0.5 * (1 + math.sqrt(1 / 2)))     # ~0.924
T_THRESHOLD_FIDELITY = math.sqrt(0.5 * (1 + math.sqrt(3 / 7)))  # ~0.910


def _phase_free_equal(a, b):
    return abs(abs(np.trace(a.conj().T @ b)) - 2) < 1e-9


def test_clifford_group_has_24_elements_with_identity():
    group = enumerate_c1()
    assert len(group) == 24
    assert _phase_free_equal(group[0], np.eye(2))


def test_clifford_group_contains_cycling_gate():
    group = enumerate_c1()
    assert any(_phase_free_equal(u, T_GATE) for u in group)
    # and that gate cycles X -> Z -> Y -> X
    assert np.allclose(T_GATE @ SX @ T_GATE.conj().T, SZ, atol=1e-12)
    assert np.allclose(T_GATE @ SZ @ T_GATE.conj().T, SY, atol=1e-12)
    assert np.allclose(T_GATE @ SY @ T_GATE.conj().T, SX, atol=1e-12)


def test_group_closed_under_multiplication():
    group = enumerate_c1()
    rng = np.random.default_rng(0)
    for _ in range(40):
        a, b = rng.integers(0, 24, size=2)
        prod = group[a] @ group[b]
        assert any(_phase_free_equal(prod, u) for u in group)


def test_orbit_sizes():
    cat = catalog()
    assert cat.t_vectors.shape == (8, 3)
    assert cat.h_vectors.shape == (12, 3)
    want_t = {tuple(np.sign(v)) for v in cat.t_vectors}
    assert len(want_t) == 8
    for v in cat.t_vectors:
        assert np.allclose(np.abs(v), 1 / math.sqrt(3), atol=1e-12)
    for v in cat.h_vectors:
        mags = sorted(np.round(np.abs(v), 12))
        assert mags == pytest.approx([0.0, 1 / math.sqrt(2), 1 / math.sqrt(2)])


def test_catalog_closed_under_cliffords():
    cat = catalog()
    for u in enumerate_c1():
        rot = bloch_rotation(u)
        for v in cat.t_vectors:
            image = rot @ v
            assert any(np.allclose(image, w, atol=1e-9) for w in cat.t_vectors)
        for v in cat.h_vectors:
            image = rot @ v
            assert any(np.allclose(image, w, atol=1e-9) for w in cat.h_vectors)


def test_octahedron_membership():
    assert in_octahedron(Qubit1State(0, 0, 0))
    assert in_octahedron(Qubit1State(1, 0, 0))
    s3 = 1 / math.sqrt(3)
    assert not in_octahedron(Qubit1State(s3, s3, s3))  # L1 norm sqrt(3) > 1


def test_bloch_ball_positivity_enforced():
    with pytest.raises(MagicError):
        Qubit1State(1.0, 0.5, 0.0)


def test_fidelity_examples():
    s3 = 1 / math.sqrt(3)
    assert fidelity_T(Qubit1State(s3, s3, s3)) == pytest.approx(1.0, abs=1e-12)
    assert fidelity_T(Qubit1State(0, 0, 0)) == pytest.approx(math.sqrt(0.5), abs=1e-12)
    s2 = 1 / math.sqrt(2)
    assert fidelity_H(Qubit1State(s2, 0, s2)) == pytest.approx(1.0, abs=1e-12)


def test_octahedron_fidelity_caps():
    # the cap is attained at a face center (T) / a vertex (H)
    assert fidelity_T(Qubit1State(1 / 3, 1 / 3, 1 / 3)) == pytest.approx(
        T_FIDELITY_CAP, abs=1e-12)
    assert fidelity_H(Qubit1State(1, 0, 0)) == pytest.approx(H_FIDELITY_CAP, abs=1e-12)
    assert T_FIDELITY_CAP == pytest.approx(0.888, abs=5e-4)
    assert H_FIDELITY_CAP == pytest.approx(0.924, abs=5e-4)
    rng = np.random.default_rng(1)
    for _ in range(300):
        raw = rng.normal(size=3)
        raw /= np.abs(raw).sum() / rng.uniform(0, 1)  # random point with L1 <= 1
        s = Qubit1State.from_vector(raw)
        assert in_octahedron(s)
        assert fidelity_T(s) <= T_FIDELITY_CAP + 1e-9
        assert fidelity_H(s) <= H_FIDELITY_CAP + 1e-9


def test_threshold_fidelity_epsilon_relation():
    thr_pol = math.sqrt(3 / 7)
    s = epsilon_to_polarization(0.5 * (1 - thr_pol), "T")
    assert fidelity_T(s) == pytest.approx(T_THRESHOLD_FIDELITY, abs=1e-12)
    assert T_THRESHOLD_FIDELITY == pytest.approx(0.910, abs=5e-4)


def test_closed_form_matches_explicit_maximization():
    group = enumerate_c1()
    t0, _ = t_eigenstates()
    h_vec = h_state_vector()
    rng = np.random.default_rng(2)
    for _ in range(1000):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 1) / np.linalg.norm(v)
        s = Qubit1State.from_vector(v)
        rho = s.to_matrix()
        for family, target, closed in (
                ("T", t0, fidelity_T(s)), ("H", h_vec, fidelity_H(s))):
            explicit = max(
                math.sqrt(max((target.conj() @ (u.conj().T @ rho @ u) @ target).real, 0.0))
                for u in group)
            assert abs(explicit - closed) < 1e-12


def test_dephase_t_examples():
    s3 = 1 / math.sqrt(3)
    pure = Qubit1State(s3, s3, s3)
    assert np.allclose(dephase_T(pure).vector(), pure.vector(), atol=1e-12)
    moved = dephase_T(Qubit1State(1, 0, 0))
    assert np.allclose(moved.vector(), [1 / 3, 1 / 3, 1 / 3], atol=1e-12)


def test_dephase_channel_matrix_oracle():
    rng = np.random.default_rng(3)
    for _ in range(50):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 1) / np.linalg.norm(v)
        s = Qubit1State.from_vector(v)
        rho = s.to_matrix()
        t_chan = (rho + T_GATE @ rho @ T_GATE.conj().T
                  + T_GATE.conj().T @ rho @ T_GATE) / 3
        assert np.allclose(dephase_T(s).to_matrix(), t_chan, atol=1e-12)
        h_chan = (rho + HADAMARD @ rho @ HADAMARD) / 2
        assert np.allclose(dephase_H(s).to_matrix(), h_chan, atol=1e-12)


def test_dephase_kills_cross_terms():
    t0, t1 = t_eigenstates()
    cross = np.outer(t0, t1.conj())
    image = (cross + T_GATE @ cross @ T_GATE.conj().T
             + T_GATE.conj().T @ cross @ T_GATE) / 3
    assert np.max(np.abs(image)) < 1e-12


def test_dephase_idempotent_and_axis_preserving():
    rng = np.random.default_rng(4)
    for dephase, axis in ((dephase_T, T_AXIS), (dephase_H, H_AXIS)):
        for _ in range(30):
            v = rng.normal(size=3)
            v *= rng.uniform(0, 1) / np.linalg.norm(v)
            s = Qubit1State.from_vector(v)
            once = dephase(s)
            assert np.allclose(dephase(once).vector(), once.vector(), atol=1e-12)
            assert float(axis @ once.vector()) == pytest.approx(
                float(axis @ s.vector()), abs=1e-12)
            assert np.trace(once.to_matrix()).real == pytest.approx(1.0, abs=1e-12)


def test_epsilon_examples():
    s3 = 1 / math.sqrt(3)
    assert epsilon_of(Qubit1State(s3, s3, s3), "T") == pytest.approx(0.0, abs=1e-12)
    assert epsilon_of(Qubit1State(0, 0, 0), "T") == pytest.approx(0.5, abs=1e-12)
    rng = np.random.default_rng(5)
    for _ in range(100):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 1) / np.linalg.norm(v)
        eps = epsilon_of(Qubit1State.from_vector(v), "T")
        assert -1e-12 <= eps <= 0.5 + 1e-12


def test_canonical_orientation_aligns_with_axis():
    rng = np.random.default_rng(6)
    for family, axis in (("T", T_AXIS), ("H", H_AXIS)):
        for _ in range(40):
            v = rng.normal(size=3)
            v *= rng.uniform(0.1, 1) / np.linalg.norm(v)
            s = Qubit1State.from_vector(v)
            rotated = canonical_orientation(s, family)
            assert epsilon_of(rotated, family) == pytest.approx(
                epsilon_of(s, family), abs=1e-9)
            # the best catalog direction of the rotated state is the family axis
            best = float(axis @ rotated.vector())
            vecs = catalog().vectors(family)
            assert best >= float(np.max(vecs @ rotated.vector())) - 1e-9


def test_best_alignment_returns_lowest_index():
    s = Qubit1State.from_vector(T_AXIS * 0.9)
    u, idx = best_alignment(s, "T")
    assert idx == 0  # identity already aligns the axis with itself


def test_matrix_roundtrip():
    rng = np.random.default_rng(8)
    for _ in range(30):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 1) / np.linalg.norm(v)
        s = Qubit1State.from_vector(v)
        assert np.allclose(Qubit1State.from_matrix(s.to_matrix()).vector(),
                           s.vector(), atol=1e-12)


def test_pure_state_constructor():
    t0, _ = t_eigenstates()
    s = Qubit1State.pure(t0)
    assert np.allclose(s.vector(), T_AXIS, atol=1e-12)
    h = Qubit1State.pure(h_state_vector())
    assert np.allclose(h.vector(), H_AXIS, atol=1e-12)


def test_k_matrix_is_phase_gate():
    assert np.allclose(PHASE_K, np.diag([1, 1j]))
