"""Homogeneous potentials and their extracted quadratic data."""

import numpy as np
import pytest

from strichartzlab.errors import (
    NonpositiveZ,
    NonzeroMinimum,
    OutOfCone,
    UnknownProfile,
)
from strichartzlab.potential import (
    HomogeneousPotential,
    eval_potential,
    extract_morse,
    make_potential,
    remainder,
)


def test_unknown_profile():
    with pytest.raises(UnknownProfile):
        make_potential("nope", 2, 0.0)
    with pytest.raises(UnknownProfile):
        make_potential("aniso", 2, 0.0)  # aniso needs n = 3


def test_invalid_parameters():
    with pytest.raises(ValueError):
        make_potential("sin2", 1, 0.0)
    with pytest.raises(ValueError):
        make_potential("sin2", 2, 2.0)


def test_homogeneity():
    V = make_potential("sin2", 2, 1.0)
    rng = np.random.default_rng(0)
    y = rng.uniform(-1.0, 1.0, size=(50, 1))
    z = rng.uniform(2.0, 5.0, size=50)
    s = 3.7
    lhs = eval_potential(V, s * y, s * z)
    rhs = s ** (-V.sigma) * eval_potential(V, y, z)
    assert np.allclose(lhs, rhs, rtol=1e-13)


def test_potential_requires_positive_z():
    V = make_potential("sin2", 2, 0.0)
    with pytest.raises(NonpositiveZ):
        eval_potential(V, np.zeros(1), 0.0)


def test_quad_profile_extraction_is_exact():
    V = make_potential("quad", 2, 0.0)
    m = extract_morse(V)
    assert np.allclose(m.a.entries, np.eye(1), atol=1e-10)
    # |y|^2 has no cubic remainder, only the sampled floor survives
    assert m.remainder_constant <= 1e-9


def test_sin2_extraction():
    V = make_potential("sin2", 2, 0.0)
    m = extract_morse(V)
    # r^2/(1+r^2) = r^2 - r^4 + ..., quadratic part is the identity form
    assert np.allclose(m.a.entries, np.eye(1), atol=1e-8)
    # remainder -r^4/(1+r^2): sup over |y|<1 of |R|/|y|^3 is 1/2, C = 1.1x
    assert m.remainder_constant == pytest.approx(0.55, rel=0.02)


def test_aniso_extraction():
    V = make_potential("aniso", 3, 0.0)
    m = extract_morse(V)
    assert np.allclose(m.a.entries, np.diag([2.0, 3.0]), atol=1e-7)
    assert m.remainder_constant > 1.0  # cubic term y1^3 survives


def test_extract_rejects_shifted_minimum():
    V = HomogeneousPotential(n=2, sigma=0.0, profile=lambda y: y[..., 0] + y[..., 0] ** 2)
    with pytest.raises(NonzeroMinimum):
        extract_morse(V)
    V = HomogeneousPotential(n=2, sigma=0.0, profile=lambda y: 1.0 + y[..., 0] ** 2)
    with pytest.raises(NonzeroMinimum):
        extract_morse(V)


def test_remainder_definition_and_cone():
    V = make_potential("sin2", 2, 0.0)
    m = extract_morse(V)
    y = np.array([[0.5]])
    z = np.array([2.0])
    r = remainder(V, m, y, z)
    u = 0.25
    expected = u**2 / (1.0 + u**2) - u**2
    assert r[0] == pytest.approx(expected, abs=1e-10)
    with pytest.raises(OutOfCone):
        remainder(V, m, np.array([[3.0]]), np.array([2.0]))


def test_remainder_cubic_bound():
    V = make_potential("sin2", 2, 0.0)
    m = extract_morse(V)
    rng = np.random.default_rng(4)
    z = rng.uniform(2.0, 10.0, size=500)
    y = rng.uniform(-1.0, 1.0, size=(500, 1)) * z[:, None] * 0.9
    r = np.abs(remainder(V, m, y, z))
    bound = m.remainder_constant * np.abs(y[:, 0] / z) ** 3 * z ** (-V.sigma)
    assert np.all(r <= bound + 1e-12)
