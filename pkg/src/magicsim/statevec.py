"""Dense statevector oracle for up to 16 qubits.

This is the ground truth the tableau simulator and every closed-form error
map are validated against. Amplitudes are a dense complex128 vector with
qubit 0 in the most significant index bit; kernels are dispatched through
``_accel`` (numba or numpy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .pauli import MAX_QUBITS, PauliString

NORM_TOL = 1e-9
UNITARY_TOL = 1e-12

# i**phase_exp times (-1)**popcount, folded into one 16-entry table
_PAULI_LUT_CACHE: dict[int, np.ndarray] = {}


class StateVectorError(ValueError):
    pass


def _pauli_lut(phase_exp: int) -> np.ndarray:
    lut = _PAULI_LUT_CACHE.get(phase_exp)
    if lut is None:
        k = np.arange(16)
        lut = (1j ** phase_exp) * np.where(k % 2 == 0, 1.0, -1.0).astype(complex)
        _PAULI_LUT_CACHE[phase_exp] = lut
    return lut


def _pauli_masks(p: PauliString) -> tuple[int, int, np.ndarray]:
    """(xmask, zmask, lut) of a PauliString in index-bit convention.

    P = i**phase_exp X(x)Z(z) acts as P|j> = i**phase_exp (-1)**(z.j) |j^x>,
    so the coefficient landing at index i is lut[popcount((i^x) & z)].
    """
    n = p.n
    xm = zm = 0
    for q in range(n):
        bit = 1 << (n - 1 - q)
        if (p.x_bits >> q) & 1:
            xm |= bit
        if (p.z_bits >> q) & 1:
            zm |= bit
    return xm, zm, _pauli_lut(p.phase_exp)


@dataclass(frozen=True)
class BitmaskOp:
    """Generalized permutation operator O|j> = lut[popcount(j & pmask)] |j ^ xmask>.

    Covers Pauli strings, bitwise involutions like ((sx+sy)/sqrt2)(u), and
    diagonal bitwise phase gates; masks are in index-bit convention (qubit 0 is
    the most significant bit). ``hermitian`` must be set truthfully by the
    builder for measurement to be meaningful.
    """

    n: int
    xmask: int
    pmask: int
    lut: np.ndarray
    hermitian: bool = True

    @classmethod
    def from_pauli(cls, p: PauliString) -> "BitmaskOp":
        xm, zm, lut = _pauli_masks(p)
        return cls(p.n, xm, zm, lut, p.is_hermitian())

    # raw-array forms, used on unnormalized intermediates

    def apply_raw(self, amps: np.ndarray) -> np.ndarray:
        out = np.empty_like(amps)
        _accel.phased_xor_apply(amps, out, self.xmask, self.pmask, self.lut)
        return out

    def expect_raw(self, amps: np.ndarray) -> complex:
        return complex(_accel.phased_xor_expect(amps, self.xmask, self.pmask,
                                                self.lut))

    def project_raw(self, amps: np.ndarray, sign: int):
        """In place, unnormalized: psi <- (I + sign*O) psi / 2."""
        _accel.phased_xor_collapse(amps, self.xmask, self.pmask, self.lut,
                                   float(sign), 0.5)

    # StateVector forms

    def apply(self, sv: "StateVector") -> "StateVector":
        sv.amps = self.apply_raw(sv.amps)
        return sv

    def expectation(self, sv: "StateVector") -> complex:
        return self.expect_raw(sv.amps)

    def measure(self, sv: "StateVector", rng: np.random.Generator,
                force: int | None = None) -> tuple[int, float]:
        """Projective +-1 measurement; collapses sv in place."""
        if not self.hermitian:
            raise StateVectorError("cannot measure a non-Hermitian operator")
        exp = self.expect_raw(sv.amps).real
        p_plus = min(max(0.5 * (1.0 + exp), 0.0), 1.0)
        outcome = (1 if rng.random() < p_plus else -1) if force is None else force
        prob = p_plus if outcome == 1 else 1.0 - p_plus
        if prob < 1e-12:
            raise StateVectorError("requested a zero-probability measurement branch")
        _accel.phased_xor_collapse(sv.amps, self.xmask, self.pmask, self.lut,
                                   float(outcome), 0.5 / math.sqrt(prob))
        return outcome, prob


@dataclass
class ProjectorSpec:
    """Product projector prod_j (I + lambda_j S_j)/2 over commuting stabilizers."""

    terms: list[tuple[PauliString, int]]

    def __post_init__(self):
        for p, sign in self.terms:
            if sign not in (-1, 1):
                raise StateVectorError(f"projector sign must be +-1, got {sign}")
            if not p.is_hermitian():
                raise StateVectorError(f"projector term {p} is not Hermitian")
        for i, (p, _) in enumerate(self.terms):
            for q, _ in self.terms[i + 1:]:
                if not p.commutes(q):
                    raise StateVectorError(f"projector terms {p} and {q} do not commute")

    def to_matrix(self) -> np.ndarray:
        """Dense matrix, for small-n idempotence checks."""
        n = self.terms[0][0].n
        out = np.eye(2 ** n, dtype=complex)
        for p, sign in self.terms:
            out = out @ (np.eye(2 ** n) + sign * p.to_matrix()) / 2
        return out


@dataclass
class StateVector:
    """Normalized pure state on n qubits; single-owner mutable amplitudes."""

    n: int
    amps: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise StateVectorError(f"qubit count must be in 1..{MAX_QUBITS}")
        if self.amps is None:
            self.amps = np.zeros(2 ** self.n, dtype=np.complex128)
            self.amps[0] = 1.0
        else:
            self.amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
            if self.amps.shape != (2 ** self.n,):
                raise StateVectorError("amplitude vector has wrong length")
            nrm = math.sqrt(self.norm_sq())
            if abs(nrm - 1.0) > NORM_TOL:
                raise StateVectorError(f"state not normalized: |psi| = {nrm}")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        return cls(n)

    @classmethod
    def from_qubit_states(cls, vecs: list[np.ndarray]) -> "StateVector":
        """Product state of per-qubit 2-vectors (qubit 0 first)."""
        arr = np.ascontiguousarray(np.stack(vecs), dtype=np.complex128)
        return cls(arr.shape[0], _accel.product_state(arr))

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())

    # -- basics ----------------------------------------------------------------

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def overlap(self, other: "StateVector") -> complex:
        if self.n != other.n:
            raise StateVectorError("size mismatch")
        return complex(np.vdot(self.amps, other.amps))

    def equiv(self, other: "StateVector", tol: float = NORM_TOL) -> bool:
        """Equality up to global phase: |<self|other>| = 1 within tol."""
        return abs(abs(self.overlap(other)) - 1.0) <= tol

    def _bit(self, q: int) -> int:
        return 1 << (self.n - 1 - q)

    # -- unitary evolution -------------------------------------------------------

    def apply_unitary(self, u: np.ndarray, targets: tuple[int, ...] | list[int]) -> "StateVector":
        u = np.asarray(u, dtype=complex)
        targets = tuple(targets)
        if len(set(targets)) != len(targets):
            raise StateVectorError("targets must be distinct")
        if any(not 0 <= t < self.n for t in targets):
            raise StateVectorError("target out of range")
        dim = 2 ** len(targets)
        if u.shape != (dim, dim) or len(targets) not in (1, 2):
            raise StateVectorError("unitary must be 2x2 on one target or 4x4 on two")
        if np.max(np.abs(u.conj().T @ u - np.eye(dim))) > UNITARY_TOL:
            raise StateVectorError("matrix is not unitary within 1e-12")
        if len(targets) == 1:
            _accel.apply_1q(self.amps, np.ascontiguousarray(u), self._bit(targets[0]))
        else:
            _accel.apply_2q(self.amps, np.ascontiguousarray(u),
                            self._bit(targets[0]), self._bit(targets[1]))
        return self

    def apply_pauli(self, p: PauliString) -> "StateVector":
        if p.n != self.n:
            raise StateVectorError("size mismatch")
        return BitmaskOp.from_pauli(p).apply(self)

    # -- measurement ---------------------------------------------------------------

    def expectation(self, p: PauliString) -> float:
        """<psi|P|psi> for Hermitian P; imaginary part must vanish."""
        if p.n != self.n:
            raise StateVectorError("size mismatch")
        if not p.is_hermitian():
            raise StateVectorError(f"{p} is not Hermitian")
        xm, zm, lut = _pauli_masks(p)
        val = _accel.phased_xor_expect(self.amps, xm, zm, lut)
        if abs(val.imag) > NORM_TOL:
            raise StateVectorError(f"expectation not real: {val}")
        return float(val.real)

    def measure_pauli(self, p: PauliString, rng: np.random.Generator,
                      force: int | None = None) -> tuple[int, float]:
        """Projectively measure stabilizer P; returns (outcome, p(outcome)).

        Collapses in place. ``force=+1/-1`` demands a branch and raises if that
        branch has (numerically) zero probability.
        """
        if not p.is_hermitian():
            raise StateVectorError(f"cannot measure non-Hermitian {p}")
        return BitmaskOp.from_pauli(p).measure(self, rng, force)

    def measure_projector(self, spec: ProjectorSpec, rng: np.random.Generator,
                          force: bool | None = None) -> tuple[bool, "StateVector", float]:
        """Two-outcome measurement of Pi = prod (I + lambda_j S_j)/2.

        Returns (hit, collapsed state, probability of hit). The miss branch
        collapses onto (I - Pi). Forcing a zero-probability branch raises.
        """
        proj = self.amps.copy()
        for p, sign in spec.terms:
            if p.n != self.n:
                raise StateVectorError("size mismatch")
            xm, zm, lut = _pauli_masks(p)
            _accel.phased_xor_collapse(proj, xm, zm, lut, float(sign), 0.5)
        prob = float(np.vdot(proj, proj).real)
        prob = min(max(prob, 0.0), 1.0)
        hit = (rng.random() < prob) if force is None else force
        if hit:
            if prob < 1e-12:
                raise StateVectorError("projector hit branch has zero probability")
            out = proj / math.sqrt(prob)
        else:
            if 1.0 - prob < 1e-12:
                raise StateVectorError("projector miss branch has zero probability")
            out = (self.amps - proj) / math.sqrt(1.0 - prob)
        return hit, StateVector(self.n, out), prob
