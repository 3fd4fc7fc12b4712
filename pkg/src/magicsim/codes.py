"""The two stabilizer codes behind the distillation protocols.

Five-qubit code: cyclic stabilizers, transversal cube-diagonal symmetry, and
the projection table that maps weight classes of input error patterns onto the
two logical states. Fifteen-qubit code: the punctured Reed-Muller CSS
construction from the degree-1 and degree-2 truth-table subspaces, with its
non-Clifford transversal automorphism. Everything here is verified against
the dense statevector oracle; the binary-subspace layer provides exhaustive
enumeration, duals, weight enumerators, and the MacWilliams transform.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .magic import SX, SY, SZ, T_GATE, enumerate_c1, t_eigenstates
from .pauli import PauliString
from .statevec import BitmaskOp, ProjectorSpec, StateVector

ENUM_LIMIT = 1 << 20


class CodesError(ValueError):
    pass


# ---------------------------------------------------------------------------
# binary subspaces of F_2^n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinarySubspace:
    """Linear subspace of F_2^n; basis held in reduced row-echelon form.

    Vectors are ints with bit j = coordinate j (coordinate 0 is the first
    position, matching qubit 0 of the Pauli layer).
    """

    n: int
    basis: tuple[int, ...]

    @classmethod
    def from_vectors(cls, n: int, vectors) -> "BinarySubspace":
        pending = [int(v) for v in vectors]
        if any(v >> n for v in pending):
            raise CodesError(f"vector does not fit in F_2^{n}")
        pending = [v for v in pending if v]
        rref: list[int] = []
        for bit in range(n):
            idx = next((i for i, r in enumerate(pending) if (r >> bit) & 1), None)
            if idx is None:
                continue
            piv = pending.pop(idx)
            pending = [r ^ piv if (r >> bit) & 1 else r for r in pending]
            pending = [r for r in pending if r]
            rref.append(piv)
        for i in range(len(rref)):
            p = (rref[i] & -rref[i]).bit_length() - 1
            for j in range(len(rref)):
                if j != i and (rref[j] >> p) & 1:
                    rref[j] ^= rref[i]
        return cls(n, tuple(rref))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def size(self) -> int:
        return 1 << self.dim

    def contains(self, v: int) -> bool:
        for b in self.basis:
            pivot_bit = (b & -b).bit_length() - 1
            if (v >> pivot_bit) & 1:
                v ^= b
        return v == 0

    def vectors(self):
        """All 2^dim elements (requires size <= 2^20)."""
        if self.size() > ENUM_LIMIT:
            raise CodesError(f"subspace of dimension {self.dim} too large to enumerate")
        for bits in itertools.product((0, 1), repeat=self.dim):
            v = 0
            for take, b in zip(bits, self.basis):
                if take:
                    v ^= b
            yield v

    def dual(self) -> "BinarySubspace":
        """All vectors orthogonal to this subspace under the binary inner product."""
        pivots = [(b & -b).bit_length() - 1 for b in self.basis]
        free = [j for j in range(self.n) if j not in pivots]
        kernel = []
        for f in free:
            v = 1 << f
            for b, p in zip(self.basis, pivots):
                if (b >> f) & 1:
                    v |= 1 << p
            kernel.append(v)
        return BinarySubspace.from_vectors(self.n, kernel)

    def extend(self, extra: int) -> "BinarySubspace":
        return BinarySubspace.from_vectors(self.n, list(self.basis) + [int(extra)])

    def weight_distribution(self) -> np.ndarray:
        counts = np.zeros(self.n + 1, dtype=np.int64)
        for v in self.vectors():
            counts[v.bit_count()] += 1
        return counts


def weight_enumerator(space: BinarySubspace, x: float, y: float) -> float:
    """W_L(x, y) = sum over codewords of x^(n-|u|) y^|u|, by exact enumeration."""
    dist = space.weight_distribution()
    return float(sum(int(c) * x ** (space.n - w) * y ** w
                     for w, c in enumerate(dist) if c))


def macwilliams(space: BinarySubspace) -> np.ndarray:
    """Weight distribution of the dual space via the enumerator transform
    W_dual(x, y) = W_L(x + y, x - y) / |L|; exact in integer arithmetic."""
    dist = space.weight_distribution()
    n = space.n
    out = []
    for j in range(n + 1):
        acc = 0
        for i, a in enumerate(dist):
            if a == 0:
                continue
            kraw = sum((-1) ** k * math.comb(i, k) * math.comb(n - i, j - k)
                       for k in range(max(0, j - (n - i)), min(i, j) + 1))
            acc += int(a) * kraw
        q, rem = divmod(acc, space.size())
        if rem:
            raise CodesError("MacWilliams transform did not yield integers")
        out.append(q)
    return np.array(out, dtype=np.int64)


# ---------------------------------------------------------------------------
# punctured Reed-Muller subspaces on 15 coordinates
# ---------------------------------------------------------------------------


def _indicator(var_mask: int) -> int:
    """Truth table of the monomial prod x_i over set bits, f(0000) punctured.

    Coordinate p (0-based) holds f at the assignment with (x1,x2,x3,x4) equal
    to the 4-bit binary expansion of p+1, x1 most significant.
    """
    vec = 0
    for m in range(1, 16):
        if (m & var_mask) == var_mask:
            vec |= 1 << (m - 1)
    return vec


ALL_ONES_15 = (1 << 15) - 1


@lru_cache(maxsize=1)
def reed_muller_spaces() -> tuple[BinarySubspace, BinarySubspace]:
    """(degree-1 subspace, dim 4; degree-2 subspace, dim 10) over F_2^15."""
    lin = [_indicator(1 << (3 - j)) for j in range(4)]  # [x1], [x2], [x3], [x4]
    quad = [_indicator((1 << (3 - i)) | (1 << (3 - j)))
            for i, j in itertools.combinations(range(4), 2)]
    l1 = BinarySubspace.from_vectors(15, lin)
    l2 = BinarySubspace.from_vectors(15, lin + quad)
    return l1, l2


@dataclass(frozen=True)
class WeightDualityReport:
    weights_mod8: bool
    weights_mod2: bool
    duality: bool
    product_mod4_inner: bool
    product_mod4_dual: bool

    def all_pass(self) -> bool:
        return all((self.weights_mod8, self.weights_mod2, self.duality,
                    self.product_mod4_inner, self.product_mod4_dual))

    def as_dict(self) -> dict[str, bool]:
        return {
            "degree-1 weights = 0 mod 8": self.weights_mod8,
            "degree-2 weights = 0 mod 2": self.weights_mod2,
            "dual pairing with the all-ones vector": self.duality,
            "|u.v| = 0 mod 4 within degree-1": self.product_mod4_inner,
            "|u.v| = 0 mod 4 against the degree-2 dual": self.product_mod4_dual,
        }


def verify_weight_duality(l1: BinarySubspace | None = None,
                  l2: BinarySubspace | None = None) -> WeightDualityReport:
    """Exhaustive check of the five weight/duality properties (16 + 1024 + 32
    vectors); pass either subspace explicitly to run negative controls."""
    default_l1, default_l2 = reed_muller_spaces()
    l1 = l1 if l1 is not None else default_l1
    l2 = l2 if l2 is not None else default_l2
    l1_vecs = list(l1.vectors())
    l2_vecs = list(l2.vectors())
    l2perp_vecs = list(l2.dual().vectors())
    c1 = all(u.bit_count() % 8 == 0 for u in l1_vecs)
    c2 = all(v.bit_count() % 2 == 0 for v in l2_vecs)
    c3 = (l1.dual() == l2.extend(ALL_ONES_15)
          and l2.dual() == l1.extend(ALL_ONES_15))
    c4 = all((u & v).bit_count() % 4 == 0 for u in l1_vecs for v in l1_vecs)
    c5 = all((u & v).bit_count() % 4 == 0 for u in l1_vecs for v in l2perp_vecs)
    return WeightDualityReport(c1, c2, c3, c4, c5)


# ---------------------------------------------------------------------------
# the 5-qubit code
# ---------------------------------------------------------------------------

_FIVE_QUBIT_STABILIZERS = ("+XZZXI", "+IXZZX", "+XIXZZ", "+ZXIXZ")


class FiveQubitCode:
    """Cyclic [[5,1,3]] code with the transversal cube-diagonal symmetry."""

    def __init__(self):
        self.stabilizers = [PauliString.from_string(s) for s in _FIVE_QUBIT_STABILIZERS]
        self.s5 = self.stabilizers[0] * self.stabilizers[1] \
            * self.stabilizers[2] * self.stabilizers[3]
        self.logical_x = PauliString.from_string("+XXXXX")
        self.logical_y = PauliString.from_string("+YYYYY")
        self.logical_z = PauliString.from_string("+ZZZZZ")
        self.t0, self.t1 = t_eigenstates()
        self.logical_t1 = self._normalized_projection(0)
        self.logical_t0 = self._normalized_projection(0b11111)

    def projector_spec(self) -> ProjectorSpec:
        return ProjectorSpec([(s, 1) for s in self.stabilizers])

    def tx_state(self, x: int) -> StateVector:
        """Product state with eigenstate 0/1 of the cube-diagonal operator on
        qubit q per bit q of x."""
        vecs = [self.t1 if (x >> q) & 1 else self.t0 for q in range(5)]
        return StateVector.from_qubit_states(vecs)

    def project_amps(self, sv: StateVector) -> np.ndarray:
        """Unnormalized code projection (1/16) prod (I + S_j) applied to sv."""
        amps = sv.amps.copy()
        for s in self.stabilizers:
            BitmaskOp.from_pauli(s).project_raw(amps, 1)
        return amps

    def _normalized_projection(self, x: int) -> StateVector:
        amps = self.project_amps(self.tx_state(x))
        nrm = float(np.linalg.norm(amps))
        if abs(nrm - 1 / math.sqrt(6)) > 1e-9:
            raise CodesError("projected basis state does not have norm 1/sqrt(6)")
        return StateVector(5, amps / nrm)

    def apply_transversal_t(self, sv: StateVector) -> StateVector:
        for q in range(5):
            sv.apply_unitary(T_GATE, (q,))
        return sv


@dataclass(frozen=True)
class ProjectionEntry:
    x: int
    weight: int
    norm_sq: float
    kind: str  # "zero" | "logical0" | "logical1"


def classify_projection(x: int, code: FiveQubitCode | None = None
                        ) -> ProjectionEntry:
    """Project the 5-bit input pattern through the code projector on the
    oracle and classify the result: annihilated, or proportional to one of
    the two logical states."""
    if not 0 <= x < 32:
        raise CodesError("input pattern must be a 5-bit value")
    code = code or FiveQubitCode()
    amps = code.project_amps(code.tx_state(x))
    nrm2 = float(np.vdot(amps, amps).real)
    if nrm2 < 1e-18:
        kind = "zero"
    else:
        ov0 = abs(np.vdot(code.logical_t0.amps, amps)) ** 2
        ov1 = abs(np.vdot(code.logical_t1.amps, amps)) ** 2
        if abs(ov0 - nrm2) < 1e-12 and ov1 < 1e-12:
            kind = "logical0"
        elif abs(ov1 - nrm2) < 1e-12 and ov0 < 1e-12:
            kind = "logical1"
        else:  # pragma: no cover - would indicate a broken projector
            raise CodesError(f"projection of x={x:05b} is not a logical state")
    return ProjectionEntry(x, x.bit_count(), nrm2, kind)


def five_qubit_projection_table(code: FiveQubitCode | None = None
                                ) -> list[ProjectionEntry]:
    """Classification of all 32 product inputs: weight 1 and 4 patterns are
    annihilated; weights 0/5 land on the logical states with norm 1/sqrt(6);
    weights 2/3 land on logical 0/1 respectively."""
    code = code or FiveQubitCode()
    return [classify_projection(x, code) for x in range(32)]


@dataclass(frozen=True)
class OverlapReport:
    group_order: int
    group_all_positive: bool
    group_sum: float
    overlap_all_zeros: float
    overlap_all_ones: float


def codespace_overlap(code: FiveQubitCode | None = None) -> OverlapReport:
    """The 1/6 overlap computed two independent ways: the 16-element group sum
    (1/16) sum 3^(-|g|/2), and the statevector norm of the projected state."""
    code = code or FiveQubitCode()
    elements = []
    for bits in itertools.product((0, 1), repeat=4):
        g = PauliString.identity(5)
        for take, s in zip(bits, code.stabilizers):
            if take:
                g = g * s
        elements.append(g)
    all_positive = all(g.sign_exp == 0 for g in elements)
    group_sum = sum(3.0 ** (-g.weight() / 2) for g in elements) / 16.0
    ov0 = float(np.linalg.norm(code.project_amps(code.tx_state(0))) ** 2)
    ov1 = float(np.linalg.norm(code.project_amps(code.tx_state(0b11111))) ** 2)
    return OverlapReport(len({(g.x_bits, g.z_bits) for g in elements}),
                          all_positive, group_sum, ov0, ov1)


# ---------------------------------------------------------------------------
# the 15-qubit CSS code
# ---------------------------------------------------------------------------

A_INVOLUTION = (SX + SY) / math.sqrt(2)
W_AUTOMORPHISM = np.diag([1.0, np.exp(1j * math.pi / 4)])


def _index_mask(vec: int, n: int) -> int:
    m = 0
    for q in range(n):
        if (vec >> q) & 1:
            m |= 1 << (n - 1 - q)
    return m


def pauli_z(n: int, vec: int) -> PauliString:
    return PauliString(n, 0, vec, 0)


def pauli_x(n: int, vec: int) -> PauliString:
    return PauliString(n, vec, 0, 0)


def a_bitmask_op(n: int, vec: int) -> BitmaskOp:
    """((sx+sy)/sqrt2) applied on the support of vec; Hermitian involution."""
    w = vec.bit_count()
    lut = np.exp(1j * math.pi / 4 * (w - 2 * np.arange(16, dtype=float)))
    m = _index_mask(vec, n)
    return BitmaskOp(n, m, m, lut, True)


def w_bitmask_op(n: int, vec: int) -> BitmaskOp:
    """diag(1, e^{i pi/4}) applied on the support of vec (not Hermitian)."""
    lut = np.exp(1j * math.pi / 4 * np.arange(16, dtype=float))
    return BitmaskOp(n, 0, _index_mask(vec, n), lut, False)


class CssCode:
    """CSS decomposition from two anticommuting involutions and orthogonal
    binary subspaces; instantiated below for the 15-qubit Reed-Muller pair."""

    def __init__(self, n: int, op_mu: np.ndarray, space_mu: BinarySubspace,
                 op_eta: np.ndarray, space_eta: BinarySubspace):
        if not np.allclose(op_mu @ op_mu, np.eye(2), atol=1e-12) \
                or not np.allclose(op_eta @ op_eta, np.eye(2), atol=1e-12):
            raise CodesError("code operators must be involutions")
        if not np.allclose(op_mu @ op_eta, -op_eta @ op_mu, atol=1e-12):
            raise CodesError("code operators must anticommute")
        for u in space_mu.basis:
            for v in space_eta.basis:
                if (u & v).bit_count() % 2:
                    raise CodesError("code subspaces are not orthogonal")
        self.n = n
        self.op_mu = op_mu
        self.op_eta = op_eta
        self.space_mu = space_mu
        self.space_eta = space_eta

    @property
    def k(self) -> int:
        """Logical qubit count n - dim(L_mu) - dim(L_eta)."""
        return self.n - self.space_mu.dim - self.space_eta.dim


class ReedMuller15(CssCode):
    """The 15-qubit code: sigma_z over the degree-2 space, (sx+sy)/sqrt2 over
    the degree-1 space; logical X = sx^15 and logical Z = -sz^15."""

    def __init__(self):
        l1, l2 = reed_muller_spaces()
        super().__init__(15, SZ, l2, A_INVOLUTION, l1)
        self.l1 = l1
        self.l2 = l2
        self.logical_x = PauliString(15, ALL_ONES_15, 0, 0)
        self.logical_z = PauliString(15, 0, ALL_ONES_15, 2)  # minus sz^15
        self.a0 = np.array([1.0, np.exp(1j * math.pi / 4)]) / math.sqrt(2)
        self.a1 = np.array([1.0, -np.exp(1j * math.pi / 4)]) / math.sqrt(2)
        self._logical_states: tuple[StateVector, StateVector] | None = None
        self._syndrome_classes: np.ndarray | None = None
        self._rep_table: tuple[int, ...] | None = None

    def stabilizer_generators(self) -> list[PauliString]:
        """{sz(v): 10 degree-2 generators} + {sx(u): 4 degree-1 generators},
        the frame measured by the tableau route."""
        return [pauli_z(15, v) for v in self.l2.basis] \
            + [pauli_x(15, u) for u in self.l1.basis]

    def au_state(self, u: int) -> StateVector:
        """Product of the two involution eigenstates per bit of u."""
        vecs = [self.a1 if (u >> q) & 1 else self.a0 for q in range(15)]
        return StateVector.from_qubit_states(vecs)

    def project_z(self, amps: np.ndarray,
                  mu: tuple[int, ...] | None = None) -> np.ndarray:
        """In place: signed projector factors for all 10 z-type generators."""
        mu = mu if mu is not None else (0,) * self.l2.dim
        if len(mu) != self.l2.dim:
            raise CodesError("z-syndrome length does not match generator count")
        for sign_bit, v in zip(mu, self.l2.basis):
            BitmaskOp.from_pauli(pauli_z(15, v)).project_raw(
                amps, -1 if sign_bit else 1)
        return amps

    def project_eta(self, amps: np.ndarray, use_pauli_x: bool,
                    eta: tuple[int, ...] = (0, 0, 0, 0)) -> np.ndarray:
        """In place: signed projector factors for the 4 eta-type generators,
        in either the involution code (A-type) or the plain stabilizer code."""
        if len(eta) != self.l1.dim:
            raise CodesError("eta-syndrome length does not match generator count")
        for sign_bit, u in zip(eta, self.l1.basis):
            op = BitmaskOp.from_pauli(pauli_x(15, u)) if use_pauli_x \
                else a_bitmask_op(15, u)
            op.project_raw(amps, -1 if sign_bit else 1)
        return amps

    def logical_states(self) -> tuple[StateVector, StateVector]:
        """(logical |A0>, logical |A1>): normalized z-projections of the all-0
        and all-1 product states."""
        if self._logical_states is None:
            states = []
            for u in (0, ALL_ONES_15):
                amps = self.project_z(self.au_state(u).amps)
                nrm = float(np.linalg.norm(amps))
                if abs(nrm - 1.0 / math.sqrt(self.l2.size())) > 1e-9:
                    raise CodesError("logical state norm is not 1/sqrt(|L2|)")
                states.append(StateVector(15, amps / nrm))
            self._logical_states = (states[0], states[1])
        return self._logical_states

    def z_syndrome_classes(self) -> np.ndarray:
        """Per basis index, the 10-bit z-syndrome class (bit k set when the
        k-th degree-2 generator has eigenvalue -1). Measuring all ten
        commuting diagonal generators jointly means sampling this class."""
        if self._syndrome_classes is None:
            from ._accel import POP16

            idx = np.arange(1 << 15)
            classes = np.zeros(1 << 15, dtype=np.int64)
            for k, v in enumerate(self.l2.basis):
                classes |= (POP16[idx & _index_mask(v, 15)] & 1) << k
            self._syndrome_classes = classes
        return self._syndrome_classes

    def syndrome_rep_table(self) -> tuple[int, ...]:
        """Canonical representative for each unit syndrome; the rep of any
        syndrome is the XOR of the entries at its set bits (the canonical
        solution is linear in mu because free coordinates are pinned to 0)."""
        if self._rep_table is None:
            reps = []
            for k in range(self.l2.dim):
                unit = tuple(1 if i == k else 0 for i in range(self.l2.dim))
                reps.append(self.solve_syndrome_rep(unit))
            self._rep_table = tuple(reps)
        return self._rep_table

    def solve_syndrome_rep(self, mu: tuple[int, ...]) -> int:
        """w with (w, g_i) = mu_i for every degree-2 generator g_i.

        Deterministic Gaussian elimination, pivoting from coordinate 0; free
        coordinates are set to zero (the canonical representative).
        """
        if len(mu) != self.l2.dim:
            raise CodesError("syndrome length does not match generator count")
        rows = [(g, m & 1) for g, m in zip(self.l2.basis, mu)]
        piv: list[tuple[int, int]] = []
        taken: set[int] = set()
        for bit in range(15):
            cand = next((r for r in range(len(rows))
                         if r not in taken and (rows[r][0] >> bit) & 1), None)
            if cand is None:
                continue
            piv.append((cand, bit))
            taken.add(cand)
            for r in range(len(rows)):
                if r != cand and (rows[r][0] >> bit) & 1:
                    rows[r] = (rows[r][0] ^ rows[cand][0], rows[r][1] ^ rows[cand][1])
        w = 0
        for r, bit in piv:
            if rows[r][1]:
                w |= 1 << bit
        for g, m in zip(self.l2.basis, mu):
            if (w & g).bit_count() % 2 != (m & 1):
                raise CodesError("syndrome system is inconsistent")
        return w


@lru_cache(maxsize=1)
def build_15qubit_css() -> ReedMuller15:
    return ReedMuller15()


# ---------------------------------------------------------------------------
# oracle verification routines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CodeEquivalenceReport:
    probes: int
    max_residual_trivial: float
    max_residual_rotated: float
    logical_fixed_residual: float

    def all_pass(self, tol: float = 1e-6) -> bool:
        return (self.max_residual_trivial < tol
                and self.max_residual_rotated < tol
                and self.logical_fixed_residual < tol)


def _random_state(n: int, rng: np.random.Generator) -> StateVector:
    amps = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return StateVector(n, amps / np.linalg.norm(amps))


def verify_code_equivalence(probes: int = 50, syndrome_samples: int = 4,
                  rng: np.random.Generator | None = None,
                  code: ReedMuller15 | None = None) -> CodeEquivalenceReport:
    """Check that the involution code and the plain stabilizer code share
    their trivial-z-syndrome eigenspaces, and that nontrivial-syndrome spaces
    are the bitmask-involution rotations of the trivial ones."""
    rng = rng if rng is not None else np.random.default_rng(0)
    code = code or build_15qubit_css()
    max_triv = 0.0
    for _ in range(probes):
        zamps = code.project_z(_random_state(15, rng).amps)
        h_proj = code.project_eta(zamps.copy(), use_pauli_x=False)
        g_proj = code.project_eta(zamps, use_pauli_x=True)
        max_triv = max(max_triv, float(np.linalg.norm(h_proj - g_proj)))

    a0l = code.logical_states()[0]
    fixed = code.project_eta(code.project_z(a0l.amps.copy()), use_pauli_x=False)
    logical_resid = float(np.linalg.norm(fixed - a0l.amps))

    max_rot = 0.0
    for _ in range(syndrome_samples):
        mu = tuple(int(b) for b in rng.integers(0, 2, size=code.l2.dim))
        eta = tuple(int(b) for b in rng.integers(0, 2, size=code.l1.dim))
        w = code.solve_syndrome_rep(mu)
        a_w = a_bitmask_op(15, w)
        psi = _random_state(15, rng)
        # projector onto the (mu, eta) eigenspace of the involution code
        lhs = code.project_eta(code.project_z(psi.amps.copy(), mu=mu),
                               use_pauli_x=False, eta=eta)
        # A(w) P_G(0, eta) A(w)^dagger; A(w) is a Hermitian involution
        rhs = a_w.apply_raw(psi.amps)
        rhs = code.project_eta(code.project_z(rhs), use_pauli_x=True, eta=eta)
        rhs = a_w.apply_raw(rhs)
        max_rot = max(max_rot, float(np.linalg.norm(lhs - rhs)))
    return CodeEquivalenceReport(probes, max_triv, max_rot, logical_resid)


@dataclass(frozen=True)
class AutomorphismReport:
    conjugates_x_to_involution: bool
    fixes_z: bool
    clifford_member: bool
    code_preservation_residual: float

    def all_pass(self, tol: float = 1e-6) -> bool:
        return (self.conjugates_x_to_involution and self.fixes_z
                and not self.clifford_member
                and self.code_preservation_residual < tol)


def verify_transversal_automorphism(probes: int = 10,
                                    rng: np.random.Generator | None = None
                                    ) -> AutomorphismReport:
    """diag(1, e^{i pi/4}) applied bitwise preserves the 15-qubit code space
    even though it is not a Clifford operation."""
    rng = rng if rng is not None else np.random.default_rng(1)
    code = build_15qubit_css()
    w = W_AUTOMORPHISM
    conj_ok = bool(np.allclose(w @ SX @ w.conj().T, A_INVOLUTION, atol=1e-12))
    z_ok = bool(np.allclose(w @ SZ @ w.conj().T, SZ, atol=1e-12))

    def phase_free_equal(a, b):
        return abs(abs(np.trace(a.conj().T @ b)) - 2) < 1e-9

    member = any(phase_free_equal(w, u) for u in enumerate_c1())

    w15 = w_bitmask_op(15, ALL_ONES_15)
    resid = 0.0
    for _ in range(probes):
        psi = _random_state(15, rng)
        in_code = code.project_eta(code.project_z(psi.amps), use_pauli_x=True)
        rotated = w15.apply_raw(in_code)
        back = code.project_eta(code.project_z(rotated.copy()), use_pauli_x=True)
        resid = max(resid, float(np.linalg.norm(back - rotated)))
    return AutomorphismReport(conj_ok, z_ok, member, resid)
