"""Backend kernel equivalence: the numba fast path must match the pure-numpy
fallback bit-for-bit in semantics on random inputs."""

import os
import subprocess
import sys

import numpy as np
import pytest

from magicsim import _accel


def _rand_state(n, rng):
    amps = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return amps / np.linalg.norm(amps)


def test_backend_name_valid():
    assert _accel.backend_name() in ("numba", "numpy")


needs_numba = pytest.mark.skipif(_accel.backend_name() != "numba",
                                 reason="numba backend not active")


@needs_numba
@pytest.mark.parametrize("n", [1, 2, 5, 15])
def test_phased_xor_kernels_match(n):
    rng = np.random.default_rng(n)
    nb = _accel.numba_kernels()
    for _ in range(25):
        amps = _rand_state(n, rng)
        xm = int(rng.integers(0, 2 ** n))
        pm = int(rng.integers(0, 2 ** n))
        lut = np.exp(1j * rng.normal(size=16))
        out_nb = np.empty_like(amps)
        out_np = np.empty_like(amps)
        nb["phased_xor_apply"](amps, out_nb, xm, pm, lut)
        _accel.np_phased_xor_apply(amps, out_np, xm, pm, lut)
        assert np.allclose(out_nb, out_np, atol=1e-13)

        e_nb = nb["phased_xor_expect"](amps, xm, pm, lut)
        e_np = _accel.np_phased_xor_expect(amps, xm, pm, lut)
        assert abs(e_nb - e_np) < 1e-12

        a_nb, a_np = amps.copy(), amps.copy()
        nb["phased_xor_collapse"](a_nb, xm, pm, lut, -1.0, 0.5)
        _accel.np_phased_xor_collapse(a_np, xm, pm, lut, -1.0, 0.5)
        assert np.allclose(a_nb, a_np, atol=1e-13)


@needs_numba
@pytest.mark.parametrize("n", [1, 3, 8])
def test_gate_kernels_match(n):
    rng = np.random.default_rng(10 + n)
    nb = _accel.numba_kernels()
    for _ in range(15):
        amps = _rand_state(n, rng)
        u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
        bit = 1 << int(rng.integers(0, n))
        a_nb, a_np = amps.copy(), amps.copy()
        nb["apply_1q"](a_nb, u, bit)
        _accel.np_apply_1q(a_np, u, bit)
        assert np.allclose(a_nb, a_np, atol=1e-13)
    if n >= 2:
        for _ in range(15):
            amps = _rand_state(n, rng)
            u4 = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0]
            q1, q2 = rng.choice(n, size=2, replace=False)
            a_nb, a_np = amps.copy(), amps.copy()
            nb["apply_2q"](a_nb, u4, 1 << int(q1), 1 << int(q2))
            _accel.np_apply_2q(a_np, u4, 1 << int(q1), 1 << int(q2))
            assert np.allclose(a_nb, a_np, atol=1e-13)


@needs_numba
def test_product_and_class_kernels_match():
    rng = np.random.default_rng(99)
    nb = _accel.numba_kernels()
    vecs = rng.normal(size=(6, 2)) + 1j * rng.normal(size=(6, 2))
    assert np.allclose(nb["product_state"](np.ascontiguousarray(vecs)),
                       _accel.np_product_state(vecs), atol=1e-13)

    amps = _rand_state(10, rng)
    classes = rng.integers(0, 16, size=2 ** 10).astype(np.int64)
    p_nb = nb["class_probs"](amps, classes, 16)
    p_np = _accel.np_class_probs(amps, classes, 16)
    assert np.allclose(p_nb, p_np, atol=1e-13)
    a_nb, a_np = amps.copy(), amps.copy()
    nb["select_class"](a_nb, classes, 3, 2.0)
    _accel.np_select_class(a_np, classes, 3, 2.0)
    assert np.allclose(a_nb, a_np)


def test_product_state_matches_kron_chain():
    rng = np.random.default_rng(4)
    vecs = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
    expected = np.array([1.0 + 0j])
    for q in range(4):
        expected = np.kron(expected, vecs[q])
    got = _accel.product_state(np.ascontiguousarray(vecs))
    assert np.allclose(got, expected, atol=1e-13)


def test_numpy_backend_env_selection():
    code = ("import magicsim; "
            "from magicsim import distill; "
            "assert magicsim.backend_name() == 'numpy'; "
            "r = distill.t_round_montecarlo(0.1, 200, seed=1); "
            "print(r.p_s)")
    env = dict(os.environ, MAGICSIM_BACKEND="numpy")
    proc = subprocess.run([sys.executable, "-c", code], env=env,
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    assert float(proc.stdout.strip()) > 0
