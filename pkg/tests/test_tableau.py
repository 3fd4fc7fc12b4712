"""Stabilizer tableau: gate conjugation, measurement, octahedron sampling,
and the circuit text format."""

import numpy as np
import pytest

from magicsim.pauli import PauliString
from magicsim.statevec import StateVector
from magicsim.tableau import CNOT, CliffordGate, H, K, MeasureOp, \
    StabilizerTableau, TableauError, X, parse_circuit, sample_octahedron_prep


def test_hadamard_maps_z_to_x():
    tab = StabilizerTableau(1)
    tab.apply_gate(H(0))
    assert str(tab.stabilizer(0)) == "+X"


def test_phase_gate_conjugates_x_to_y():
    # matrix oracle: K sx K^dag = sy
    kmat = np.diag([1, 1j])
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    assert np.allclose(kmat @ sx @ kmat.conj().T, sy)
    tab = StabilizerTableau(1)
    tab.apply_gate(H(0)).apply_gate(K(0))
    assert str(tab.stabilizer(0)) == "+Y"


def test_kh_sequence_cycles_xzy():
    # conjugation by KH: X -> Z, Z -> Y, Y -> X (global phase invisible here)
    for start_gates, start, want in [
        ([H(0)], "+X", "+Z"),
        ([], "+Z", "+Y"),
        ([H(0), K(0)], "+Y", "+X"),
    ]:
        tab = StabilizerTableau(1)
        tab.apply_circuit(start_gates)
        assert str(tab.stabilizer(0)) == start
        tab.apply_gate(H(0)).apply_gate(K(0))
        assert str(tab.stabilizer(0)) == want


def test_gate_sequence_identities():
    # sz = K^2 and sx = H K^2 H as tableau-level identities
    rng = np.random.default_rng(9)

    def random_tableau():
        tab = StabilizerTableau(2)
        for _ in range(30):
            kind = rng.choice(["H", "K", "CNOT"])
            if kind == "CNOT":
                q = rng.choice(2, size=2, replace=False)
                tab.apply_gate(CNOT(int(q[0]), int(q[1])))
            else:
                tab.apply_gate(CliffordGate(kind, (int(rng.integers(0, 2)),)))
        return tab

    def rows(tab):
        return [(tab._x[i], tab._z[i], tab._r[i]) for i in range(4)]

    for _ in range(10):
        base = random_tableau()
        via_z = base.copy().apply_gate(CliffordGate("Z", (0,)))
        via_kk = base.copy().apply_gate(K(0)).apply_gate(K(0))
        assert rows(via_z) == rows(via_kk)
        via_x = base.copy().apply_gate(X(1))
        via_hkkh = base.copy().apply_gate(H(1)).apply_gate(K(1)) \
            .apply_gate(K(1)).apply_gate(H(1))
        assert rows(via_x) == rows(via_hkkh)


def test_pauli_gates_flip_signs():
    tab = StabilizerTableau(1)
    tab.apply_gate(X(0))
    assert str(tab.stabilizer(0)) == "-Z"
    tab.apply_gate(CliffordGate("Z", (0,)))
    assert str(tab.stabilizer(0)) == "-Z"
    tab.apply_gate(CliffordGate("Y", (0,)))
    assert str(tab.stabilizer(0)) == "+Z"


def test_cnot_propagates_x_and_z():
    tab = StabilizerTableau(2)
    tab.apply_gate(H(0)).apply_gate(CNOT(0, 1))
    stabs = {str(s) for s in tab.stabilizers()}
    assert stabs == {"+XX", "+ZZ"}


def test_measure_z_on_zero_state_deterministic():
    tab = StabilizerTableau(1)
    before = [str(s) for s in tab.stabilizers()]
    outcome, prob = tab.measure_pauli(PauliString.from_string("+Z"),
                                      np.random.default_rng(0))
    assert (outcome, prob) == (1, 1.0)
    assert [str(s) for s in tab.stabilizers()] == before


def test_measure_x_on_zero_state_uniform():
    hits = 0
    trials = 2000
    rng = np.random.default_rng(1)
    for _ in range(trials):
        tab = StabilizerTableau(1)
        outcome, prob = tab.measure_pauli(PauliString.from_string("+X"), rng)
        assert prob == 0.5
        hits += outcome == 1
        # measured operator (with its sign) is now a stabilizer row
        repeat, p2 = tab.measure_pauli(PauliString.from_string("+X"), rng)
        assert repeat == outcome and p2 == 1.0
    assert abs(hits / trials - 0.5) < 3 * 0.5 / trials ** 0.5


def test_five_code_syndrome_probabilities_match_oracle():
    stabs = [PauliString.from_string(s)
             for s in ("+XZZXI", "+IXZZX", "+XIXZZ", "+ZXIXZ")]
    rng = np.random.default_rng(2)
    tab = StabilizerTableau(5)
    sv = StateVector.zero(5)
    for s in stabs:
        p_plus = 0.5 * (1 + sv.expectation(s))
        outcome, prob = tab.measure_pauli(s, rng)
        assert prob == 0.5 and abs(p_plus - 0.5) < 1e-9
        sv.measure_pauli(s, rng, force=outcome)


def test_measure_syndrome_empty_and_bell():
    tab = StabilizerTableau(2)
    assert tab.measure_syndrome([], np.random.default_rng(0)) == []
    rng = np.random.default_rng(3)
    lam = tab.measure_syndrome([PauliString.from_string("+ZZ"),
                                PauliString.from_string("+XX")], rng)
    assert lam[0] == 1  # ZZ is already a stabilizer of |00>
    assert lam[1] in (1, -1)


def test_measure_syndrome_rejects_anticommuting():
    tab = StabilizerTableau(1)
    with pytest.raises(TableauError):
        tab.measure_syndrome([PauliString.from_string("+X"),
                              PauliString.from_string("+Z")],
                             np.random.default_rng(0))


def test_measure_rejects_non_hermitian():
    tab = StabilizerTableau(1)
    with pytest.raises(TableauError):
        tab.measure_pauli(PauliString.from_string("+iX"), np.random.default_rng(0))


def test_determinism_same_seed_same_outcomes():
    def run(seed):
        rng = np.random.default_rng(seed)
        tab = StabilizerTableau(3)
        tab.apply_circuit([H(0), CNOT(0, 1), K(2), H(2)])
        return [tab.measure_pauli(PauliString.from_string(p), rng)[0]
                for p in ("+XII", "+IZI", "+IIY", "+ZZI")]

    assert run(42) == run(42)
    tab = StabilizerTableau(3)
    tab.apply_circuit([H(0), CNOT(0, 1)])
    tab.check_frame()


def test_frame_invariants_after_random_circuit():
    rng = np.random.default_rng(7)
    tab = StabilizerTableau(4)
    for _ in range(120):
        kind = rng.choice(["H", "K", "X", "Y", "Z", "CNOT", "M"])
        if kind == "CNOT":
            q = rng.choice(4, size=2, replace=False)
            tab.apply_gate(CNOT(int(q[0]), int(q[1])))
        elif kind == "M":
            p = PauliString(4, int(rng.integers(0, 16)), int(rng.integers(0, 16)), 0)
            p = p.with_phase(p.y_count % 2)
            if p.weight():
                tab.measure_pauli(p, rng)
        else:
            tab.apply_gate(CliffordGate(kind, (int(rng.integers(0, 4)),)))
    tab.check_frame()


def test_gate_index_out_of_range():
    tab = StabilizerTableau(2)
    with pytest.raises(TableauError):
        tab.apply_gate(H(2))
    with pytest.raises(TableauError):
        CliffordGate("CNOT", (0, 0))
    with pytest.raises(TableauError):
        CliffordGate("H", (0, 1))
    with pytest.raises(TableauError):
        CliffordGate("Q", (0,))


# -- octahedron sampling ------------------------------------------------------


def _mean_polarization(r, trials, seed):
    rng = np.random.default_rng(seed)
    paulis = [PauliString.from_string("+" + c) for c in "XYZ"]
    acc = np.zeros(3)
    for _ in range(trials):
        tab = sample_octahedron_prep(r, rng)
        for k, p in enumerate(paulis):
            outcome, prob = tab.copy().measure_pauli(p, rng)
            acc[k] += outcome if prob == 1.0 else 0.0
    return acc / trials


def test_octahedron_vertex_is_deterministic():
    rng = np.random.default_rng(0)
    for _ in range(50):
        tab = sample_octahedron_prep((0.0, 0.0, 1.0), rng)
        assert str(tab.stabilizer(0)) == "+Z"


def test_octahedron_center_averages_to_zero():
    mean = _mean_polarization((0.0, 0.0, 0.0), 4000, seed=5)
    assert np.all(np.abs(mean) < 3 * 1.0 / np.sqrt(4000))


def test_octahedron_interior_mean_matches_target():
    r = (1 / 3, 1 / 3, 1 / 3)
    trials = 20000
    mean = _mean_polarization(r, trials, seed=6)
    # per-axis deterministic contribution is a +-1 bernoulli mixture
    sigma = 1.0 / np.sqrt(trials)
    assert np.all(np.abs(mean - np.array(r)) < 3 * sigma)


def test_octahedron_rejects_outside():
    with pytest.raises(TableauError):
        sample_octahedron_prep((0.6, 0.6, 0.2), np.random.default_rng(0))


# -- circuit text format ------------------------------------------------------


def test_parse_circuit_golden():
    text = """
    # prepare a bell pair and probe it
    H 0
    CNOT 0 1
    MEASURE +ZZ
    MEASURE +XX
    """
    n, ops = parse_circuit(text)
    assert n == 2
    assert isinstance(ops[0], CliffordGate) and ops[0].kind == "H"
    assert isinstance(ops[2], MeasureOp) and str(ops[2].pauli) == "+ZZ"


def test_parse_circuit_infers_width_from_gates():
    n, ops = parse_circuit("H 3")
    assert n == 4


def test_parse_circuit_errors():
    with pytest.raises(TableauError):
        parse_circuit("H x")
    with pytest.raises(TableauError):
        parse_circuit("FROB 0")
    with pytest.raises(TableauError):
        parse_circuit("MEASURE +ZZ\nH 5")
    with pytest.raises(TableauError):
        parse_circuit("MEASURE +Z +Z")
    with pytest.raises(TableauError):
        parse_circuit("H 0\nMEASURE +ZZZ\nMEASURE +ZZ")
