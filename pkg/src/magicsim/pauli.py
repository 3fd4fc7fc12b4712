"""Phase-exact n-qubit Pauli operators in symplectic (x-bits, z-bits, phase) form.

A ``PauliString`` stores the operator ``i**phase_exp * prod_j sx**x_j sz**z_j``
with qubit 0 the leftmost tensor factor. In this storage a single ``sigma_y``
is ``x = z = 1, phase_exp = 1`` (``sy = i sx sz``), so the sign printed in
front of the letter form is ``i**(phase_exp - #Y)``. Hermiticity is the parity
check ``phase_exp + |x & z| even``, which is equivalent to the letter-form
sign being +1 or -1, i.e. to membership in the set of stabilizers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 16

_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_PHASE_CHARS = {0: "+", 1: "+i", 2: "-", 3: "-i"}


class PauliError(ValueError):
    pass


@dataclass(frozen=True)
class PauliString:
    """Immutable phase-tracked Pauli operator on ``n <= 16`` qubits."""

    n: int
    x_bits: int
    z_bits: int
    phase_exp: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise PauliError(f"qubit count must be in 1..{MAX_QUBITS}, got {self.n}")
        mask = (1 << self.n) - 1
        object.__setattr__(self, "x_bits", self.x_bits & mask)
        object.__setattr__(self, "z_bits", self.z_bits & mask)
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_string(cls, text: str) -> "PauliString":
        """Parse "+XZZXI" / "-iYY" style notation (sign, optional i, letters)."""
        s = text.strip().replace("−", "-")
        sign = 1
        if s.startswith(("+", "-")):
            sign = -1 if s[0] == "-" else 1
            s = s[1:]
        imag = False
        if s.startswith(("i", "j")):
            imag = True
            s = s[1:]
        if not s or any(c not in "IXYZ" for c in s):
            raise PauliError(f"cannot parse Pauli string {text!r}")
        phase = (0 if sign == 1 else 2) + (1 if imag else 0)
        x = z = 0
        for q, c in enumerate(s):
            if c in "XY":
                x |= 1 << q
            if c in "ZY":
                z |= 1 << q
            if c == "Y":
                phase += 1  # sy = i sx sz
        return cls(len(s), x, z, phase % 4)

    @classmethod
    def single(cls, n: int, q: int, letter: str) -> "PauliString":
        """Single-qubit sx/sy/sz (letter in "XYZ") embedded at qubit q."""
        return cls.from_string("I" * q + letter + "I" * (n - q - 1))

    # -- inspection ----------------------------------------------------------

    def letter(self, q: int) -> str:
        x = (self.x_bits >> q) & 1
        z = (self.z_bits >> q) & 1
        return "IXZY"[x + 2 * z]

    def letters(self) -> str:
        return "".join(self.letter(q) for q in range(self.n))

    @property
    def y_count(self) -> int:
        return (self.x_bits & self.z_bits).bit_count()

    @property
    def sign_exp(self) -> int:
        """Exponent s of the letter-form prefactor i**s (0..3)."""
        return (self.phase_exp - self.y_count) % 4

    def is_hermitian(self) -> bool:
        return (self.phase_exp + self.y_count) % 2 == 0

    def is_stabilizer(self) -> bool:
        """Hermitian element of the Pauli group, i.e. letter-form sign is +-1."""
        return self.is_hermitian()

    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    def commutes(self, other: "PauliString") -> bool:
        if self.n != other.n:
            raise PauliError(f"size mismatch: {self.n} vs {other.n}")
        sym = (self.x_bits & other.z_bits).bit_count() \
            + (self.z_bits & other.x_bits).bit_count()
        return sym % 2 == 0

    # -- algebra -------------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise PauliError(f"size mismatch: {self.n} vs {other.n}")
        # Z^z1 X^x2 = (-1)^{z1 x2} X^x2 Z^z1 per qubit
        phase = self.phase_exp + other.phase_exp \
            + 2 * (self.z_bits & other.x_bits).bit_count()
        return PauliString(self.n, self.x_bits ^ other.x_bits,
                           self.z_bits ^ other.z_bits, phase % 4)

    def adjoint(self) -> "PauliString":
        ph = (-self.phase_exp + 2 * self.y_count) % 4
        return PauliString(self.n, self.x_bits, self.z_bits, ph)

    def with_phase(self, phase_exp: int) -> "PauliString":
        return PauliString(self.n, self.x_bits, self.z_bits, phase_exp % 4)

    def negated(self) -> "PauliString":
        return self.with_phase(self.phase_exp + 2)

    def phase_factor(self) -> complex:
        return 1j ** self.phase_exp

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix (intended for n <= 8 cross-checks)."""
        out = np.array([[1.0 + 0.0j]])
        for q in range(self.n):
            out = np.kron(out, _MATS[self.letter(q)])
        return (1j ** self.sign_exp) * out

    def __str__(self) -> str:
        return _PHASE_CHARS[self.sign_exp] + self.letters()

    __repr__ = __str__


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Exact group product including the i**k phase."""
    return p * q


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic product x_p.z_q + z_p.x_q vanishes mod 2."""
    return p.commutes(q)


def weight(p: PauliString) -> int:
    """Number of qubits acted on non-trivially."""
    return p.weight()
