"""Gottesman-Knill stabilizer simulation with adaptive syndrome measurement.

The tableau keeps n stabilizer and n destabilizer rows in the symplectic
(x-bits, z-bits, phase) storage of :mod:`.pauli`. Gates act by row-wise
conjugation; measurement uses the standard destabilizer bookkeeping (the row
replacement rule), which the underlying theory asserts exists but does not
spell out. All randomness comes from an explicitly passed generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString

GATE_KINDS = ("H", "K", "CNOT", "X", "Y", "Z")


class TableauError(ValueError):
    pass


@dataclass(frozen=True)
class CliffordGate:
    """One of H(i), K(i), CNOT(i,j), X(i), Y(i), Z(i)."""

    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise TableauError(f"unknown gate kind {self.kind!r}")
        want = 2 if self.kind == "CNOT" else 1
        if len(self.qubits) != want:
            raise TableauError(f"{self.kind} takes {want} qubit(s)")
        if self.kind == "CNOT" and self.qubits[0] == self.qubits[1]:
            raise TableauError("CNOT control and target must differ")

    def __str__(self) -> str:
        return f"{self.kind} {' '.join(map(str, self.qubits))}"

    def matrix(self) -> np.ndarray:
        """Unitary matrix (2x2, or 4x4 for CNOT in (control, target) order)."""
        s2 = 1 / np.sqrt(2)
        mats = {
            "H": np.array([[s2, s2], [s2, -s2]], dtype=complex),
            "K": np.array([[1, 0], [0, 1j]], dtype=complex),
            "X": np.array([[0, 1], [1, 0]], dtype=complex),
            "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
            "Z": np.array([[1, 0], [0, -1]], dtype=complex),
            "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0],
                              [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
        }
        return mats[self.kind]


def H(q: int) -> CliffordGate:
    return CliffordGate("H", (q,))


def K(q: int) -> CliffordGate:
    return CliffordGate("K", (q,))


def CNOT(c: int, t: int) -> CliffordGate:
    return CliffordGate("CNOT", (c, t))


def X(q: int) -> CliffordGate:
    return CliffordGate("X", (q,))


def Y(q: int) -> CliffordGate:
    return CliffordGate("Y", (q,))


def Z(q: int) -> CliffordGate:
    return CliffordGate("Z", (q,))


class StabilizerTableau:
    """Destabilizer/stabilizer frame for |0...0>, mutated by gates and measurements."""

    def __init__(self, n: int):
        if not 1 <= n <= 16:
            raise TableauError("tableau supports 1..16 qubits")
        self.n = n
        # rows 0..n-1 destabilizers (+X_i), rows n..2n-1 stabilizers (+Z_i)
        self._x = [1 << i for i in range(n)] + [0] * n
        self._z = [0] * n + [1 << i for i in range(n)]
        self._r = [0] * (2 * n)

    # -- row access -----------------------------------------------------------

    def stabilizer(self, i: int) -> PauliString:
        return PauliString(self.n, self._x[self.n + i], self._z[self.n + i],
                           self._r[self.n + i])

    def destabilizer(self, i: int) -> PauliString:
        return PauliString(self.n, self._x[i], self._z[i], self._r[i])

    def stabilizers(self) -> list[PauliString]:
        return [self.stabilizer(i) for i in range(self.n)]

    def copy(self) -> "StabilizerTableau":
        t = StabilizerTableau(self.n)
        t._x = list(self._x)
        t._z = list(self._z)
        t._r = list(self._r)
        return t

    def _row_mul(self, i: int, k: int):
        """row_i <- row_i * row_k with exact phase."""
        self._r[i] = (self._r[i] + self._r[k]
                      + 2 * (self._z[i] & self._x[k]).bit_count()) % 4
        self._x[i] ^= self._x[k]
        self._z[i] ^= self._z[k]

    # -- gates ------------------------------------------------------------------

    def apply_gate(self, g: CliffordGate) -> "StabilizerTableau":
        if any(not 0 <= q < self.n for q in g.qubits):
            raise TableauError(f"gate {g} out of range for n={self.n}")
        kind = g.kind
        if kind == "CNOT":
            c, t = g.qubits
            bc, bt = 1 << c, 1 << t
            for i in range(2 * self.n):
                if self._x[i] & bc:
                    self._x[i] ^= bt
                if self._z[i] & bt:
                    self._z[i] ^= bc
            return self
        (q,) = g.qubits
        b = 1 << q
        for i in range(2 * self.n):
            x = self._x[i] & b
            z = self._z[i] & b
            if kind == "H":
                # X <-> Z, XZ -> -XZ
                if x and z:
                    self._r[i] = (self._r[i] + 2) % 4
                elif x:
                    self._x[i] ^= b
                    self._z[i] |= b
                elif z:
                    self._z[i] ^= b
                    self._x[i] |= b
            elif kind == "K":
                # X -> iXZ, XZ -> iX
                if x:
                    self._r[i] = (self._r[i] + 1) % 4
                    self._z[i] ^= b
            elif kind == "X":
                if z:
                    self._r[i] = (self._r[i] + 2) % 4
            elif kind == "Z":
                if x:
                    self._r[i] = (self._r[i] + 2) % 4
            elif kind == "Y":
                if bool(x) != bool(z):
                    self._r[i] = (self._r[i] + 2) % 4
        return self

    def apply_circuit(self, gates) -> "StabilizerTableau":
        for g in gates:
            self.apply_gate(g)
        return self

    # -- measurement -----------------------------------------------------------

    def _anticommutes(self, i: int, p: PauliString) -> bool:
        sym = (self._x[i] & p.z_bits).bit_count() + (self._z[i] & p.x_bits).bit_count()
        return sym % 2 == 1

    def measure_pauli(self, p: PauliString, rng: np.random.Generator
                      ) -> tuple[int, float]:
        """Non-destructive eigenvalue measurement of a stabilizer P.

        Returns (outcome, probability), probability in {1/2, 1}. The tableau
        is updated in place on the random branch so that outcome*P joins the
        stabilizer group.
        """
        if p.n != self.n:
            raise TableauError("size mismatch")
        if not p.is_hermitian():
            raise TableauError(f"cannot measure non-Hermitian {p}")
        n = self.n
        pivot = next((i for i in range(n, 2 * n) if self._anticommutes(i, p)), None)
        if pivot is not None:
            # outcome genuinely random, uniform +-1
            outcome = 1 if rng.random() < 0.5 else -1
            for i in range(2 * n):
                if i != pivot and self._anticommutes(i, p):
                    self._row_mul(i, pivot)
            d = pivot - n
            self._x[d] = self._x[pivot]
            self._z[d] = self._z[pivot]
            self._r[d] = self._r[pivot]
            self._x[pivot] = p.x_bits
            self._z[pivot] = p.z_bits
            self._r[pivot] = p.phase_exp if outcome == 1 else (p.phase_exp + 2) % 4
            return outcome, 0.5
        # deterministic: express +-P as a product of stabilizer rows, selected
        # by which destabilizers anticommute with P
        acc = PauliString.identity(n)
        for i in range(n):
            if self._anticommutes(i, p):
                acc = acc * self.stabilizer(i)
        if (acc.x_bits, acc.z_bits) != (p.x_bits, p.z_bits):
            raise TableauError("internal error: frame does not span measured Pauli")
        outcome = 1 if acc.phase_exp == p.phase_exp else -1
        return outcome, 1.0

    def measure_syndrome(self, stabs: list[PauliString], rng: np.random.Generator
                         ) -> list[int]:
        """Sequential joint measurement of pairwise-commuting stabilizers."""
        for i, p in enumerate(stabs):
            for q in stabs[i + 1:]:
                if not p.commutes(q):
                    raise TableauError(f"{p} and {q} do not commute")
        return [self.measure_pauli(p, rng)[0] for p in stabs]

    # -- debug invariants ---------------------------------------------------------

    def check_frame(self):
        """Assert the symplectic-frame invariants; raises on violation."""
        n = self.n
        for i in range(n, 2 * n):
            row = self.stabilizer(i - n)
            if not row.is_hermitian():
                raise TableauError(f"stabilizer row {i - n} not Hermitian")
        for i in range(2 * n):
            pi = PauliString(n, self._x[i], self._z[i], 0)
            for j in range(i + 1, 2 * n):
                pj = PauliString(n, self._x[j], self._z[j], 0)
                paired = (j - i == n)
                if pi.commutes(pj) == paired:
                    raise TableauError(f"rows {i},{j} break the commutation frame")
        # full rank over F2: 2n x 2n bit matrix built from (x|z) rows
        rows = [self._x[i] | (self._z[i] << n) for i in range(2 * n)]
        rank = 0
        for bit in range(2 * n):
            piv = next((k for k in range(rank, 2 * n) if rows[k] >> bit & 1), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            for k in range(2 * n):
                if k != rank and rows[k] >> bit & 1:
                    rows[k] ^= rows[rank]
            rank += 1
        if rank != 2 * n:
            raise TableauError("tableau rows are not independent over F2")


def sample_octahedron_prep(r: tuple[float, float, float],
                           rng: np.random.Generator) -> StabilizerTableau:
    """Sample a Pauli eigenstate so the average density matrix is (I + r.sigma)/2.

    Requires |r_x| + |r_y| + |r_z| <= 1 (the octahedron of stabilizer
    mixtures): weight |r_a| goes to the vertex sign(r_a)*e_a and the remainder
    spreads uniformly over all six vertices.
    """
    rx, ry, rz = r
    s = abs(rx) + abs(ry) + abs(rz)
    if s > 1.0 + 1e-12:
        raise TableauError(f"polarization {r} lies outside the octahedron")
    leftover = max(1.0 - s, 0.0)
    verts = []
    weights = []
    for axis, comp in enumerate((rx, ry, rz)):
        for sign in (1, -1):
            w = leftover / 6.0 + (abs(comp) if np.sign(comp) == sign and comp != 0 else 0.0)
            verts.append((axis, sign))
            weights.append(w)
    axis, sign = verts[rng.choice(6, p=np.asarray(weights) / sum(weights))]
    t = StabilizerTableau(1)
    prep = {
        (0, 1): [H(0)],
        (0, -1): [X(0), H(0)],
        (1, 1): [H(0), K(0)],
        (1, -1): [X(0), H(0), K(0)],
        (2, 1): [],
        (2, -1): [X(0)],
    }
    return t.apply_circuit(prep[(axis, sign)])


# -- circuit text format --------------------------------------------------------


@dataclass(frozen=True)
class MeasureOp:
    pauli: PauliString


def parse_circuit(text: str, n: int | None = None
                  ) -> tuple[int, list[CliffordGate | MeasureOp]]:
    """Parse the one-op-per-line format: ``H 0``, ``CNOT 0 1``, ``MEASURE +ZZIXI``.

    Blank lines and ``#`` comments are skipped. Returns (n, ops); n is inferred
    from the largest qubit index and measured string lengths unless given.
    """
    ops: list[CliffordGate | MeasureOp] = []
    max_q = -1
    pauli_n = n
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kw = fields[0].upper()
        if kw == "MEASURE":
            if len(fields) != 2:
                raise TableauError(f"line {lineno}: MEASURE takes one Pauli string")
            p = PauliString.from_string(fields[1])
            if pauli_n is None:
                pauli_n = p.n
            elif p.n != pauli_n:
                raise TableauError(f"line {lineno}: Pauli length {p.n} != {pauli_n}")
            ops.append(MeasureOp(p))
        elif kw in GATE_KINDS:
            try:
                qubits = tuple(int(f) for f in fields[1:])
            except ValueError as exc:
                raise TableauError(f"line {lineno}: bad qubit index") from exc
            try:
                gate = CliffordGate(kw, qubits)
            except TableauError as exc:
                raise TableauError(f"line {lineno}: {exc}") from exc
            ops.append(gate)
            max_q = max(max_q, *qubits)
        else:
            raise TableauError(f"line {lineno}: unknown op {fields[0]!r}")
    total_n = pauli_n if pauli_n is not None else (n if n is not None else max_q + 1)
    if total_n < 1 or total_n <= max_q:
        raise TableauError(f"qubit index {max_q} out of range for n={total_n}")
    return total_n, ops
