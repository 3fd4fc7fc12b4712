"""Low-level amplitude kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time from the ``MAGICSIM_BACKEND``
environment variable: ``numba`` (default when numba is importable), or
``numpy``. Both implementations are kept importable side by side so they can
be benchmarked and differentially tested against each other; see
``benchmarks/bench_backends.py``.

All kernels operate on a dense complex128 amplitude vector of length 2**n
with qubit 0 stored in the most significant index bit. The workhorse is the
"phased XOR" operator family

    O|j> = lut[popcount(j & pmask)] * |j ^ xmask>

which covers every Pauli string, the (sigma_x + sigma_y)/sqrt(2) bitmask
operators of the 15-qubit code, and diagonal bitwise phase gates, so one
kernel triple (apply / expectation / projective collapse) serves all of them.
"""

from __future__ import annotations

import os

import numpy as np

# popcount lookup for 16-bit masks (n is capped at 16 qubits everywhere)
POP16 = np.zeros(1 << 16, dtype=np.int64)
for _i in range(1, 1 << 16):
    POP16[_i] = POP16[_i >> 1] + (_i & 1)

_ENV_VAR = "MAGICSIM_BACKEND"


def _select_backend() -> str:
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower() or "auto"
    if choice == "auto":
        try:
            import numba  # noqa: F401
        except ImportError:
            return "numpy"
        return "numba"
    if choice in ("numba", "numpy"):
        return choice
    raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {choice!r}")


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

_INDEX_CACHE: dict[int, np.ndarray] = {}


def _indices(size: int) -> np.ndarray:
    idx = _INDEX_CACHE.get(size)
    if idx is None:
        idx = np.arange(size)
        _INDEX_CACHE[size] = idx
    return idx


def np_product_state(vecs: np.ndarray) -> np.ndarray:
    out = np.array([1.0 + 0.0j])
    for q in range(vecs.shape[0]):
        out = (out[:, None] * vecs[q][None, :]).reshape(-1)
    return out


def np_apply_1q(amps, u, bit):
    half = amps.reshape(-1, 2 * bit)
    lo = half[:, :bit].copy()
    hi = half[:, bit:]
    half[:, :bit] = u[0, 0] * lo + u[0, 1] * hi
    half[:, bit:] = u[1, 0] * lo + u[1, 1] * hi


def np_apply_2q(amps, u, bit1, bit2):
    idx = _indices(amps.shape[0])
    base = idx[(idx & bit1 == 0) & (idx & bit2 == 0)]
    cols = np.stack([amps[base], amps[base | bit2], amps[base | bit1],
                     amps[base | bit1 | bit2]])
    new = u @ cols
    amps[base] = new[0]
    amps[base | bit2] = new[1]
    amps[base | bit1] = new[2]
    amps[base | bit1 | bit2] = new[3]


def np_phased_xor_apply(amps, out, xmask, pmask, lut):
    idx = _indices(amps.shape[0])
    j = idx ^ xmask
    out[:] = lut[POP16[j & pmask]] * amps[j]


def np_phased_xor_expect(amps, xmask, pmask, lut):
    idx = _indices(amps.shape[0])
    j = idx ^ xmask
    return complex(np.vdot(amps, lut[POP16[j & pmask]] * amps[j]))


def np_phased_xor_collapse(amps, xmask, pmask, lut, sign, scale):
    idx = _indices(amps.shape[0])
    j = idx ^ xmask
    op = lut[POP16[j & pmask]] * amps[j]
    amps += sign * op
    amps *= scale


def np_class_probs(amps, classes, nclasses):
    return np.bincount(classes, weights=np.abs(amps) ** 2, minlength=nclasses)


def np_select_class(amps, classes, chosen, scale):
    amps *= np.where(classes == chosen, scale, 0.0)


# ---------------------------------------------------------------------------
# numba implementations (same semantics, explicit loops)
# ---------------------------------------------------------------------------

BACKEND = _select_backend()

if BACKEND == "numba":
    from numba import njit

    @njit(cache=True)
    def nb_product_state(vecs):
        n = vecs.shape[0]
        out = np.empty(1 << n, dtype=np.complex128)
        out[0] = vecs[n - 1, 0]
        out[1] = vecs[n - 1, 1]
        size = 2
        for q in range(n - 2, -1, -1):
            v0 = vecs[q, 0]
            v1 = vecs[q, 1]
            for i in range(size - 1, -1, -1):
                a = out[i]
                out[size + i] = v1 * a
                out[i] = v0 * a
            size *= 2
        return out

    @njit(cache=True)
    def nb_apply_1q(amps, u, bit):
        u00 = u[0, 0]
        u01 = u[0, 1]
        u10 = u[1, 0]
        u11 = u[1, 1]
        for i in range(amps.shape[0]):
            if i & bit == 0:
                j = i | bit
                a = amps[i]
                b = amps[j]
                amps[i] = u00 * a + u01 * b
                amps[j] = u10 * a + u11 * b

    @njit(cache=True)
    def nb_apply_2q(amps, u, bit1, bit2):
        for i in range(amps.shape[0]):
            if i & bit1 == 0 and i & bit2 == 0:
                i01 = i | bit2
                i10 = i | bit1
                i11 = i10 | bit2
                a = amps[i]
                b = amps[i01]
                c = amps[i10]
                d = amps[i11]
                amps[i] = u[0, 0] * a + u[0, 1] * b + u[0, 2] * c + u[0, 3] * d
                amps[i01] = u[1, 0] * a + u[1, 1] * b + u[1, 2] * c + u[1, 3] * d
                amps[i10] = u[2, 0] * a + u[2, 1] * b + u[2, 2] * c + u[2, 3] * d
                amps[i11] = u[3, 0] * a + u[3, 1] * b + u[3, 2] * c + u[3, 3] * d

    @njit(cache=True)
    def nb_phased_xor_apply(amps, out, xmask, pmask, lut):
        for i in range(amps.shape[0]):
            j = i ^ xmask
            out[i] = lut[POP16[j & pmask]] * amps[j]

    @njit(cache=True)
    def nb_phased_xor_expect(amps, xmask, pmask, lut):
        acc = 0.0 + 0.0j
        for i in range(amps.shape[0]):
            j = i ^ xmask
            acc += np.conj(amps[i]) * (lut[POP16[j & pmask]] * amps[j])
        return acc

    @njit(cache=True)
    def nb_phased_xor_collapse(amps, xmask, pmask, lut, sign, scale):
        # amps <- scale * (amps + sign * O amps), O assumed Hermitian
        if xmask == 0:
            for i in range(amps.shape[0]):
                amps[i] = (amps[i] + sign * lut[POP16[i & pmask]] * amps[i]) * scale
            return
        # pair loop: iterate i with the top xmask bit clear, j = i ^ xmask
        h = xmask
        while h & (h - 1):
            h &= h - 1
        step = h << 1
        for base in range(0, amps.shape[0], step):
            for i in range(base, base + h):
                j = i ^ xmask
                a = amps[i]
                b = amps[j]
                amps[i] = (a + sign * lut[POP16[j & pmask]] * b) * scale
                amps[j] = (b + sign * lut[POP16[i & pmask]] * a) * scale

    @njit(cache=True)
    def nb_class_probs(amps, classes, nclasses):
        probs = np.zeros(nclasses)
        for i in range(amps.shape[0]):
            a = amps[i]
            probs[classes[i]] += a.real * a.real + a.imag * a.imag
        return probs

    @njit(cache=True)
    def nb_select_class(amps, classes, chosen, scale):
        for i in range(amps.shape[0]):
            if classes[i] == chosen:
                amps[i] *= scale
            else:
                amps[i] = 0.0

    product_state = nb_product_state
    apply_1q = nb_apply_1q
    apply_2q = nb_apply_2q
    phased_xor_apply = nb_phased_xor_apply
    phased_xor_expect = nb_phased_xor_expect
    phased_xor_collapse = nb_phased_xor_collapse
    class_probs = nb_class_probs
    select_class = nb_select_class
else:
    product_state = np_product_state
    apply_1q = np_apply_1q
    apply_2q = np_apply_2q
    phased_xor_apply = np_phased_xor_apply
    phased_xor_expect = np_phased_xor_expect
    phased_xor_collapse = np_phased_xor_collapse
    class_probs = np_class_probs
    select_class = np_select_class


def backend_name() -> str:
    """Active kernel backend, either 'numba' or 'numpy'."""
    return BACKEND


def numpy_kernels() -> dict:
    """The pure-numpy kernel set, importable regardless of active backend."""
    return {
        "product_state": np_product_state,
        "apply_1q": np_apply_1q,
        "apply_2q": np_apply_2q,
        "phased_xor_apply": np_phased_xor_apply,
        "phased_xor_expect": np_phased_xor_expect,
        "phased_xor_collapse": np_phased_xor_collapse,
        "class_probs": np_class_probs,
        "select_class": np_select_class,
    }


def numba_kernels() -> dict | None:
    """The numba kernel set, or None when numba is not the active backend."""
    if BACKEND != "numba":
        return None
    return {
        "product_state": nb_product_state,
        "apply_1q": nb_apply_1q,
        "apply_2q": nb_apply_2q,
        "phased_xor_apply": nb_phased_xor_apply,
        "phased_xor_expect": nb_phased_xor_expect,
        "phased_xor_collapse": nb_phased_xor_collapse,
        "class_probs": nb_class_probs,
        "select_class": nb_select_class,
    }
