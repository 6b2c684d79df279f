import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fibsic.kernels import BACKEND, available_backends, get_kernels
from oracles import central_difference, frame_potential_loops, frame_potential_orbit


def _random(d, rng):
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 8])
def test_frame_sum_matches_loop_oracle(backend, d, rng):
    k = get_kernels(backend)
    for _ in range(3):
        psi = _random(d, rng)
        assert k.frame_sum(psi) == pytest.approx(frame_potential_loops(psi), abs=1e-13)


@pytest.mark.parametrize("d", [3, 4, 7])
def test_frame_sum_matches_orbit_oracle(backend, d, rng):
    psi = _random(d, rng)
    assert get_kernels(backend).frame_sum(psi) == pytest.approx(frame_potential_orbit(psi), abs=1e-12)


@pytest.mark.parametrize("d", [4, 8, 19, 48])
def test_backends_agree(d, rng):
    psi = _random(d, rng) * 1.3
    ref = get_kernels("python")
    f0, g0 = ref.frame_sum_grad(psi)
    C0 = ref.overlap_table(psi)
    e0, h0 = ref.excess_grad(psi)
    for name in available_backends():
        k = get_kernels(name)
        f, g = k.frame_sum_grad(psi)
        assert f == pytest.approx(f0, rel=1e-11)
        assert k.frame_sum(psi) == pytest.approx(f0, rel=1e-11)
        np.testing.assert_allclose(g, g0, atol=1e-11 * np.abs(g0).max())
        np.testing.assert_allclose(k.overlap_table(psi), C0, atol=1e-11)
        e, h = k.excess_grad(psi)
        assert e == pytest.approx(e0, rel=1e-9, abs=1e-15)
        np.testing.assert_allclose(h, h0, atol=1e-11 * np.abs(h0).max())


def test_overlap_table_definition(backend, rng):
    d = 6
    psi = _random(d, rng)
    C = get_kernels(backend).overlap_table(psi)
    w = np.exp(2j * np.pi / d)
    for j in range(d):
        for m in range(d):
            expected = sum(np.conj(psi[l]) * psi[(l + j) % d] * w ** (-l * m) for l in range(d))
            assert abs(C[j, m] - expected) < 1e-12


def _wirtinger_check(fun, psi, h=1e-6):
    """Compare 2 * conj-derivative with finite differences in real coordinates."""
    d = len(psi)
    x = np.concatenate([psi.real, psi.imag])

    def f(x):
        return fun(x[:d] + 1j * x[d:])[0]

    fd = central_difference(f, x, h)
    g = fun(psi)[1]
    analytic = np.concatenate([2 * g.real, 2 * g.imag])
    return np.linalg.norm(fd - analytic) / np.linalg.norm(analytic)


@pytest.mark.parametrize("d", [3, 4, 8])
def test_frame_sum_gradient(backend, d, rng):
    for _ in range(3):
        assert _wirtinger_check(get_kernels(backend).frame_sum_grad, _random(d, rng)) <= 1e-6


@pytest.mark.parametrize("d", [3, 4, 8])
def test_excess_gradient(backend, d, rng):
    for _ in range(3):
        assert _wirtinger_check(get_kernels(backend).excess_grad, 1.7 * _random(d, rng)) <= 1e-6


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1), st.floats(0.5, 2.0))
def test_excess_is_normalized_frame_sum_minus_bound(d, seed, scale):
    psi = scale * _random(d, np.random.default_rng(seed))
    k = get_kernels()
    unit = psi / np.linalg.norm(psi)
    assert k.excess_grad(psi)[0] == pytest.approx(k.frame_sum(unit) - 2 / (d + 1), abs=1e-13)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 16), st.integers(0, 2**32 - 1))
def test_fft_path_matches_direct(d, seed):
    psi = _random(d, np.random.default_rng(seed))
    assert get_kernels(fft=True).frame_sum(psi) == pytest.approx(get_kernels("python").frame_sum(psi), abs=1e-11)


def test_default_backend_prefers_compiled():
    assert BACKEND in available_backends()
    if "cython" in available_backends():
        assert BACKEND == "cython"


def test_unknown_backend():
    with pytest.raises(ValueError):
        get_kernels("fortran")


def test_env_override_selects_fallback():
    code = "import fibsic.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, FIBSIC_KERNELS="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
