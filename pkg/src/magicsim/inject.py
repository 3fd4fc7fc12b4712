"""Gate injection: phase-kickback circuits driven by a random walk, the
two-copy conversion of cube-diagonal states into phase ancillas, and the
budgeted resource model tying distillation quality to circuit size.

Each injection round entangles the target with one phase ancilla
(|0> + e^{i theta}|1>)/sqrt(2), measures the two-qubit zz stabilizer, and
un-computes the ancilla, applying the controlled phase with a uniformly
random sign. The cumulative exponent performs a fair +-1 walk; success means
reaching net exponent +1. Because the measurement probabilities are exactly
1/2 regardless of the target state, walk statistics can be sampled without
touching amplitudes; that fast path is regression-tested against the circuit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distill import ancilla_count, threshold
from .magic import HADAMARD, PHASE_K, t_eigenstates
from .pauli import PauliString
from .statevec import StateVector

ZZ = PauliString.from_string("+ZZ")
CNOT_MATRIX = np.array([[1, 0, 0, 0], [0, 1, 0, 0],
                        [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

GAMMA_H = math.log(15.0) / math.log(3.0)


class InjectError(ValueError):
    pass


def a_theta_state(theta: float) -> StateVector:
    """Phase ancilla (|0> + e^{i theta}|1>)/sqrt(2)."""
    return StateVector(1, np.array([1.0, np.exp(1j * theta)]) / math.sqrt(2))


@dataclass(frozen=True)
class InjectionRound:
    theta: float
    sign: int
    position: int  # cumulative phase exponent after this round


def inject_phase_round(psi: StateVector, ancilla: StateVector,
                       rng: np.random.Generator) -> tuple[int, StateVector]:
    """One kickback round; returns (sign, new 1-qubit state).

    sign +1 applied the controlled e^{+i theta}, sign -1 the conjugate; both
    occur with probability exactly 1/2. The ancilla must be an equal-weight
    superposition (checked), since that is what makes the sign a fair coin and
    the leftover qubit separable.
    """
    if psi.n != 1 or ancilla.n != 1:
        raise InjectError("injection acts on one-qubit states")
    a0, a1 = ancilla.amps
    if abs(abs(a0) - 1 / math.sqrt(2)) > 1e-9 or abs(abs(a1) - 1 / math.sqrt(2)) > 1e-9:
        raise InjectError("malformed ancilla: not an equal-weight phase state")
    pair = StateVector(2, np.kron(psi.amps, ancilla.amps))
    outcome, _ = pair.measure_pauli(ZZ, rng)
    pair.apply_unitary(CNOT_MATRIX, (0, 1))
    cols = pair.amps.reshape(2, 2)
    keep = 0 if outcome == 1 else 1
    residual = float(np.linalg.norm(cols[:, 1 - keep]))
    if residual > 1e-9:  # pragma: no cover - separability is exact here
        raise InjectError("ancilla failed to disentangle")
    return outcome, StateVector(1, np.ascontiguousarray(cols[:, keep]))


def random_walk_inject(psi: StateVector, theta: float, budget: int,
                       rng: np.random.Generator, ancilla_error: float = 0.0,
                       cyclic_q: int | None = None
                       ) -> tuple[bool, list[InjectionRound], StateVector]:
    """Repeat injection rounds until the cumulative exponent reaches +1 or the
    ancilla budget runs out; returns (success, per-round history, state).

    ``ancilla_error`` consumes faulty ancillas (the sz-flipped phase state)
    with that probability, modeling distilled-but-imperfect inputs.
    ``cyclic_q`` accepts success at any exponent = 1 mod q, the shortcut
    available when theta is the corresponding rational multiple of 2 pi.
    """
    if budget < 1:
        raise InjectError("budget must be >= 1")
    pos = 0
    rounds: list[InjectionRound] = []
    for _ in range(budget):
        anc = a_theta_state(theta)
        if ancilla_error and rng.random() < ancilla_error:
            anc = a_theta_state(theta + math.pi)  # sz-flipped component
        sign, psi = inject_phase_round(psi, anc, rng)
        pos += sign
        rounds.append(InjectionRound(theta, sign, pos))
        hit = (pos % cyclic_q == 1 % cyclic_q) if cyclic_q else pos == 1
        if hit:
            return True, rounds, psi
    return False, rounds, psi


# ---------------------------------------------------------------------------
# state conversions
# ---------------------------------------------------------------------------


def t_pair_to_A(first: StateVector | None = None,
                second: StateVector | None = None,
                rng: np.random.Generator | None = None
                ) -> StateVector | None:
    """Convert two cube-diagonal magic states into the theta = -pi/6 phase
    ancilla: measure zz (success probability 2/3 on ideal inputs), XOR, drop
    the second qubit, Hadamard. Returns None when the measurement rejects."""
    rng = rng if rng is not None else np.random.default_rng()
    t0, _ = t_eigenstates()
    first = first if first is not None else StateVector(1, t0.copy())
    second = second if second is not None else StateVector(1, t0.copy())
    pair = StateVector(2, np.kron(first.amps, second.amps))
    outcome, _ = pair.measure_pauli(ZZ, rng)
    if outcome != 1:
        return None
    pair.apply_unitary(CNOT_MATRIX, (0, 1))
    cols = pair.amps.reshape(2, 2)
    if float(np.linalg.norm(cols[:, 1])) > 1e-9:  # pragma: no cover
        raise InjectError("conversion failed to disentangle")
    out = StateVector(1, np.ascontiguousarray(cols[:, 0]))
    return out.apply_unitary(HADAMARD, (0,))


def h_to_A0(h: StateVector) -> StateVector:
    """Clifford route from the Hadamard eigenstate to the theta = -pi/4 phase
    ancilla (up to the global phase e^{i pi/8})."""
    if h.n != 1:
        raise InjectError("expected a one-qubit state")
    return h.copy().apply_unitary(PHASE_K, (0,)).apply_unitary(HADAMARD, (0,))


# ---------------------------------------------------------------------------
# fast walk statistics (no amplitudes; provably the same coin)
# ---------------------------------------------------------------------------


def sample_hitting_times(trials: int, max_steps: int, rng: np.random.Generator,
                         cyclic_q: int | None = None) -> np.ndarray:
    """First-passage times to net exponent +1 for `trials` fair +-1 walks.

    Entries that never hit within max_steps are reported as max_steps + 1
    (censored). Vectorized in blocks; uses one rng stream, so results are
    reproducible for a fixed generator state.
    """
    if trials < 1 or max_steps < 1:
        raise InjectError("trials and max_steps must be >= 1")
    pos = np.zeros(trials, dtype=np.int64)
    times = np.full(trials, max_steps + 1, dtype=np.int64)
    active = np.ones(trials, dtype=bool)
    step = 0
    block = 256
    while step < max_steps and active.any():
        k = min(block, max_steps - step)
        idx = np.flatnonzero(active)
        signs = rng.integers(0, 2, size=(idx.size, k), dtype=np.int64) * 2 - 1
        walk = pos[idx, None] + np.cumsum(signs, axis=1)
        hit = (walk % cyclic_q == 1 % cyclic_q) if cyclic_q else (walk == 1)
        any_hit = hit.any(axis=1)
        first = hit.argmax(axis=1)
        times[idx[any_hit]] = step + first[any_hit] + 1
        active[idx[any_hit]] = False
        pos[idx[~any_hit]] = walk[~any_hit, -1]
        step += k
    return times


def survival_curve(times: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """P(T > N) over the given N grid (censored entries count as alive)."""
    return np.array([(times > n).mean() for n in grid])


def fit_tail_exponent(times: np.ndarray, n_lo: int = 10, n_hi: int = 1000,
                      points: int = 12) -> float:
    """Log-log slope of the survival tail over [n_lo, n_hi]; ~-1/2 for the
    free walk."""
    grid = np.unique(np.geomspace(n_lo, n_hi, points).astype(np.int64))
    surv = survival_curve(times, grid)
    keep = surv > 0
    if keep.sum() < 3:
        raise InjectError("not enough surviving mass to fit a tail exponent")
    slope = np.polyfit(np.log(grid[keep]), np.log(surv[keep]), 1)[0]
    return float(slope)


def measure_walk_alpha(cyclic_q: int, trials: int, max_steps: int,
                       rng: np.random.Generator) -> float:
    """Exponential decay rate of the cyclic-walk survival, fitted on the
    window where the survival lies in (1e-3, 0.7)."""
    times = sample_hitting_times(trials, max_steps, rng, cyclic_q=cyclic_q)
    grid = np.arange(1, max_steps, max(max_steps // 200, 1))
    surv = survival_curve(times, grid)
    keep = (surv > 1e-3) & (surv < 0.7)
    if keep.sum() < 4:
        raise InjectError("survival window too narrow to fit alpha")
    slope = np.polyfit(grid[keep], np.log(surv[keep]), 1)[0]
    if slope >= 0:
        raise InjectError("cyclic walk survival is not decaying")  # pragma: no cover
    return float(-slope)


# ---------------------------------------------------------------------------
# resource model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResourceEstimate:
    """Raw-ancilla budget for a circuit with L non-Clifford gates.

    n_per_state counts raw ancillas per injection-ready phase ancilla,
    including the expected 3x pair-conversion overhead for the cube-diagonal
    family; total_raw = budget_per_gate * gate_count * n_per_state.
    """

    family: str
    gate_count: int
    eps_raw: float
    feasible: bool
    eps_out_required: float | None = None
    cascade_levels: int | None = None
    n_per_state: int | None = None
    budget_per_gate: int | None = None
    alpha: float | None = None
    p_abort: float | None = None
    total_raw: int | None = None
    gamma_reference: float = GAMMA_H
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "gate_count": self.gate_count,
            "eps_raw": self.eps_raw,
            "feasible": self.feasible,
            "eps_out_required": self.eps_out_required,
            "cascade_levels": self.cascade_levels,
            "n_per_state": self.n_per_state,
            "budget_per_gate": self.budget_per_gate,
            "alpha": self.alpha,
            "p_abort": self.p_abort,
            "total_raw": self.total_raw,
            "gamma_reference": self.gamma_reference,
            "note": self.note,
        }


def resource_estimate(gate_count: int, family: str, eps_raw: float,
                      target_constant: float = 1.0,
                      p_abort_target: float = 1e-2,
                      alpha: float | None = None,
                      walk_trials: int = 20000, walk_max_steps: int = 4000,
                      seed: int = 0) -> ResourceEstimate:
    """Size the distill-and-inject pipeline for a circuit of L non-Clifford
    phase gates: required output error c/(L log L), cascade depth to reach it,
    and per-gate ancilla budget from the measured cyclic-walk decay."""
    if gate_count < 1:
        raise InjectError("gate_count must be >= 1")
    if not 0.0 <= eps_raw <= 0.5:
        raise InjectError("eps_raw must be in [0, 1/2]")
    if eps_raw >= threshold(family, tol=1e-9):
        return ResourceEstimate(
            family, gate_count, eps_raw, feasible=False,
            note="raw error rate at or above the distillation threshold; "
                 "no finite estimate exists")
    eps_req = min(0.5, target_constant / (gate_count * max(math.log(gate_count), 1.0)))
    levels, n_raw = ancilla_count(family, eps_raw, eps_req)
    per_state = 3 * n_raw if family == "T" else n_raw
    if alpha is None:
        q = 12 if family == "T" else 8
        alpha = measure_walk_alpha(q, walk_trials, walk_max_steps,
                                   np.random.default_rng((seed, 101)))
    budget = max(1, math.ceil(math.log(gate_count / p_abort_target) / alpha))
    p_abort = gate_count * math.exp(-alpha * budget)
    return ResourceEstimate(
        family, gate_count, eps_raw, True, eps_req, levels, per_state,
        budget, alpha, p_abort, budget * gate_count * per_state,
        note="alpha measured from the cyclic-walk survival unless supplied; "
             "target constant in eps_out = c/(L log L) is user-settable")
