"""One-qubit state zoo: polarization vectors, the octahedron test, magic-state
catalogs, fidelities, error probabilities, and the two dephasing channels.

States live as Bloch polarization vectors; the 2x2 density matrix
(I + r.sigma)/2 is generated on demand. The cube-diagonal family (eigenstates
of the XYZ-cycling Clifford) peaks at (+-1,+-1,+-1)/sqrt(3); the face-diagonal
family peaks at the twelve vectors with two components +-1/sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PHASE_K = np.array([[1, 0], [0, 1j]], dtype=complex)

# T = e^{i pi/4} K H cycles X -> Z -> Y -> X and fixes the cube diagonal
T_GATE = np.exp(1j * math.pi / 4) * PHASE_K @ HADAMARD

T_AXIS = np.ones(3) / math.sqrt(3)
H_AXIS = np.array([1.0, 0.0, 1.0]) / math.sqrt(2)

OCTAHEDRON_SLACK = 1e-12


class MagicError(ValueError):
    pass


@dataclass(frozen=True)
class Qubit1State:
    """One-qubit mixed state as a Bloch polarization vector."""

    rx: float
    ry: float
    rz: float

    def __post_init__(self):
        if self.bloch_norm() > 1.0 + 1e-12:
            raise MagicError(f"polarization {self.vector()} leaves the Bloch ball")

    @classmethod
    def from_vector(cls, r) -> "Qubit1State":
        rx, ry, rz = (float(v) for v in r)
        return cls(rx, ry, rz)

    @classmethod
    def from_matrix(cls, rho: np.ndarray) -> "Qubit1State":
        return cls(float(np.trace(rho @ SX).real), float(np.trace(rho @ SY).real),
                   float(np.trace(rho @ SZ).real))

    @classmethod
    def pure(cls, psi: np.ndarray) -> "Qubit1State":
        psi = np.asarray(psi, dtype=complex)
        return cls.from_matrix(np.outer(psi, psi.conj()))

    def vector(self) -> np.ndarray:
        return np.array([self.rx, self.ry, self.rz])

    def bloch_norm(self) -> float:
        return math.sqrt(self.rx ** 2 + self.ry ** 2 + self.rz ** 2)

    def to_matrix(self) -> np.ndarray:
        return (np.eye(2) + self.rx * SX + self.ry * SY + self.rz * SZ) / 2


def _phase_canonical(u: np.ndarray) -> bytes:
    flat = u.reshape(-1)
    k = next(i for i, a in enumerate(flat) if abs(a) > 1e-8)
    v = u * (flat[k].conjugate() / abs(flat[k]))
    return (np.round(v, 9) + (0.0 + 0.0j)).tobytes()  # +0.0 folds -0.0 away


@lru_cache(maxsize=1)
def enumerate_c1() -> tuple[np.ndarray, ...]:
    """The 24 one-qubit Clifford unitaries (up to phase), closure of {H, K}.

    Deterministic breadth-first order: identity first, then by word length in
    the generators. This order is the tie-break used for canonical rotations.
    """
    seen = {_phase_canonical(np.eye(2, dtype=complex))}
    out = [np.eye(2, dtype=complex)]
    frontier = [np.eye(2, dtype=complex)]
    while frontier:
        nxt = []
        for u in frontier:
            for g in (HADAMARD, PHASE_K):
                v = g @ u
                key = _phase_canonical(v)
                if key not in seen:
                    seen.add(key)
                    out.append(v)
                    nxt.append(v)
        frontier = nxt
    if len(out) != 24:
        raise MagicError(f"Clifford closure has {len(out)} elements, expected 24")
    return tuple(out)


def bloch_rotation(u: np.ndarray) -> np.ndarray:
    """SO(3) action of a unitary on polarization vectors."""
    rot = np.empty((3, 3))
    for a, sa in enumerate((SX, SY, SZ)):
        for b, sb in enumerate((SX, SY, SZ)):
            rot[a, b] = 0.5 * np.trace(sa @ u @ sb @ u.conj().T).real
    return rot


def _orbit(axis: np.ndarray) -> np.ndarray:
    vecs = []
    for u in enumerate_c1():
        v = bloch_rotation(u) @ axis
        if not any(np.allclose(v, w, atol=1e-9) for w in vecs):
            vecs.append(v)
    return np.array(vecs)


@dataclass(frozen=True)
class MagicStateCatalog:
    """The 8 cube-diagonal and 12 face-diagonal pure magic states."""

    t_vectors: np.ndarray
    h_vectors: np.ndarray

    def vectors(self, family: str) -> np.ndarray:
        if family == "T":
            return self.t_vectors
        if family == "H":
            return self.h_vectors
        raise MagicError(f"family must be 'T' or 'H', got {family!r}")


@lru_cache(maxsize=1)
def catalog() -> MagicStateCatalog:
    t_vecs = _orbit(T_AXIS)
    h_vecs = _orbit(H_AXIS)
    if len(t_vecs) != 8 or len(h_vecs) != 12:
        raise MagicError("magic-state orbits have unexpected sizes")
    return MagicStateCatalog(t_vecs, h_vecs)


def in_octahedron(s: Qubit1State) -> bool:
    """True iff |r_x| + |r_y| + |r_z| <= 1, i.e. the state is a mixture of
    Pauli eigenstates and classically simulable."""
    return abs(s.rx) + abs(s.ry) + abs(s.rz) <= 1.0 + OCTAHEDRON_SLACK


def fidelity(s: Qubit1State, family: str) -> float:
    """Best fidelity against the family catalog: max sqrt((1 + r.m)/2)."""
    best = float(np.max(catalog().vectors(family) @ s.vector()))
    return math.sqrt(max(0.5 * (1.0 + best), 0.0))


def fidelity_T(s: Qubit1State) -> float:
    return fidelity(s, "T")


def fidelity_H(s: Qubit1State) -> float:
    return fidelity(s, "H")


def best_alignment(s: Qubit1State, family: str) -> tuple[np.ndarray, int]:
    """Clifford (and its catalog index) maximizing the family fidelity.

    Returns the lowest-index element of :func:`enumerate_c1` whose rotation
    carries the family axis to the best-aligned catalog direction.
    """
    axis = T_AXIS if family == "T" else H_AXIS
    vecs = catalog().vectors(family)
    target = vecs[int(np.argmax(vecs @ s.vector()))]
    for idx, u in enumerate(enumerate_c1()):
        if np.allclose(bloch_rotation(u) @ axis, target, atol=1e-9):
            return u, idx
    raise MagicError("no Clifford aligns the requested direction")  # pragma: no cover


def canonical_orientation(s: Qubit1State, family: str) -> Qubit1State:
    """Rotate so the polarization aligns with the distillation axis of the family
    ((1,1,1)/sqrt(3) for T, (1,0,1)/sqrt(2) for H)."""
    u, _ = best_alignment(s, family)
    rot = bloch_rotation(u)
    return Qubit1State.from_vector(rot.T @ s.vector())


def dephase_T(s: Qubit1State) -> Qubit1State:
    """Twirl over {1, C, C^2} for the cube-diagonal Clifford C: projects the
    polarization onto the (1,1,1)/sqrt(3) axis."""
    return Qubit1State.from_vector(T_AXIS * float(T_AXIS @ s.vector()))


def dephase_H(s: Qubit1State) -> Qubit1State:
    """Twirl over {1, H} for the Hadamard involution: projects the polarization
    onto the (1,0,1)/sqrt(2) axis. The face-diagonal protocol's twirl with
    (sx+sy)/sqrt(2) is this channel conjugated by the fixed Clifford that maps
    the two axes onto each other."""
    return Qubit1State.from_vector(H_AXIS * float(H_AXIS @ s.vector()))


def epsilon_of(s: Qubit1State, family: str) -> float:
    """Error probability 1 - F^2 against the best catalog state; in [0, 1/2]."""
    f = fidelity(s, family)
    return 1.0 - f * f


def epsilon_to_polarization(eps: float, family: str) -> Qubit1State:
    """Canonically oriented state with the given error probability."""
    if not 0.0 <= eps <= 0.5:
        raise MagicError(f"epsilon must be in [0, 1/2], got {eps}")
    axis = T_AXIS if family == "T" else H_AXIS
    return Qubit1State.from_vector(axis * (1.0 - 2.0 * eps))


@lru_cache(maxsize=1)
def t_eigenstates() -> tuple[np.ndarray, np.ndarray]:
    """Amplitude 2-vectors of the cube-diagonal pair: the e^{+i pi/3}
    eigenstate of the XYZ-cycling Clifford (first component real positive,
    i.e. cos(b)|0> + e^{i pi/4} sin(b)|1> with cos(2b) = 1/sqrt(3)) and its
    antipode sy H applied to it."""
    vals, vecs = np.linalg.eig(T_GATE)
    i0 = int(np.argmin(np.abs(vals - np.exp(1j * math.pi / 3))))
    t0 = vecs[:, i0]
    t0 = t0 * np.exp(-1j * np.angle(t0[0]))
    t0.setflags(write=False)
    t1 = SY @ HADAMARD @ t0
    t1.setflags(write=False)
    return t0, t1


def h_state_vector() -> np.ndarray:
    """cos(pi/8)|0> + sin(pi/8)|1>, the face-diagonal Hadamard eigenstate."""
    return np.array([math.cos(math.pi / 8), math.sin(math.pi / 8)], dtype=complex)
