"""Oscillator ground state against finite-difference and closed-form oracles."""

import numpy as np
import pytest

from strichartzlab.errors import DimensionMismatch, NonSpd
from strichartzlab.oscillator import (
    SpdMatrix,
    eigen_residual,
    eval_G,
    eval_H,
    eval_v,
    ground_state,
    spd_sqrt,
)


def test_spd_rejects_nonpositive():
    with pytest.raises(NonSpd):
        SpdMatrix(np.array([[1.0, 0.0], [0.0, -1.0]]))
    with pytest.raises(NonSpd):
        SpdMatrix(np.zeros((2, 2)))
    with pytest.raises(NonSpd):
        SpdMatrix(np.ones((2, 3)))


def test_spd_symmetrizes():
    m = SpdMatrix(np.array([[2.0, 0.5], [0.1, 1.0]]))
    assert np.allclose(m.entries, m.entries.T)


def test_sqrt_squares_back():
    rng = np.random.default_rng(0)
    for _ in range(20):
        g = rng.standard_normal((3, 3))
        a = g @ g.T + 3.0 * np.eye(3)
        b = spd_sqrt(a)
        assert np.allclose(b @ b, a, rtol=1e-12, atol=1e-12)
        assert np.allclose(b, b.T)


def test_ground_state_lambda_is_trace_of_root():
    a = np.diag([4.0, 9.0])
    e = ground_state(a)
    # sqrt of diag(4, 9) is diag(2, 3)
    assert e.lam == pytest.approx(5.0, rel=1e-14)
    assert e.dim == 2


def test_identity_matrix_gives_standard_gaussian():
    e = ground_state(np.eye(2))
    y = np.array([0.3, -1.2])
    assert eval_v(e, y) == pytest.approx(np.exp(-0.5 * np.dot(y, y)), rel=1e-14)


def test_eval_v_peak_and_decay():
    e = ground_state(np.eye(3))
    assert eval_v(e, np.zeros(3)) == 1.0
    r = np.linspace(0.0, 5.0, 50)
    pts = np.stack([r, np.zeros_like(r), np.zeros_like(r)], axis=-1)
    vals = eval_v(e, pts)
    assert np.all(np.diff(vals) < 0.0)


def test_G_matches_fd_directional_derivative():
    rng = np.random.default_rng(1)
    g = rng.standard_normal((2, 2))
    e = ground_state(g @ g.T + 2.0 * np.eye(2))
    ys = rng.uniform(-2.0, 2.0, size=(100, 2))
    h = 1e-6
    fd = (eval_v(e, ys * (1.0 + h)) - eval_v(e, ys * (1.0 - h))) / (2.0 * h)
    assert np.max(np.abs(fd - eval_G(e, ys))) < 1e-8


def test_H_matches_fd_second_radial_derivative():
    rng = np.random.default_rng(2)
    g = rng.standard_normal((2, 2))
    e = ground_state(g @ g.T + 2.0 * np.eye(2))
    ys = rng.uniform(-2.0, 2.0, size=(100, 2))
    h = 1e-4
    # y.Hess v.y is the second derivative of s -> v((1+s) y) at s = 0
    fd = (
        eval_v(e, ys * (1.0 + h)) - 2.0 * eval_v(e, ys) + eval_v(e, ys * (1.0 - h))
    ) / (h * h)
    assert np.max(np.abs(fd - eval_H(e, ys))) < 1e-6


def test_eigen_residual_small_for_exact_pair():
    rng = np.random.default_rng(3)
    g = rng.standard_normal((2, 2))
    a = g @ g.T + 2.0 * np.eye(2)
    e = ground_state(a)
    samples = rng.uniform(-2.0, 2.0, size=(200, 2))
    assert eigen_residual(e, a, samples) < 1e-5


def test_eigen_residual_detects_wrong_eigenvalue():
    a = np.eye(2)
    e = ground_state(a)
    bad = type(e)(lam=e.lam * 1.1, sqrt_a=e.sqrt_a)
    samples = np.zeros((1, 2))
    assert eigen_residual(bad, a, samples) > 1e-2


def test_eigen_residual_empty_samples():
    e = ground_state(np.eye(2))
    assert eigen_residual(e, np.eye(2), np.empty((0, 2))) == 0.0


def test_dimension_mismatch():
    e = ground_state(np.eye(2))
    with pytest.raises(DimensionMismatch):
        eval_v(e, np.zeros(3))
