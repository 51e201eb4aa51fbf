import math

import numpy as np
import pytest

from seqdisc.fock import (
    DimensionError,
    FockVector,
    basis,
    coherent,
    default_dim,
    inner,
    norm_sq,
    poisson_tail,
)


def test_vacuum():
    v = coherent(0.0, 4)
    assert np.allclose(v.amplitudes, [1, 0, 0, 0])


def test_coherent_norm_tail():
    v = coherent(1.0, 40)
    tail = poisson_tail(1.0, 40)
    assert abs(norm_sq(v) - (1.0 - tail)) < 1e-14
    assert abs(norm_sq(v) - 1.0) < 1e-12


def test_coherent_pm_overlap():
    # <alpha|-alpha> = exp(-2 alpha^2) for real alpha
    a = 1.2
    val = inner(coherent(a, 50), coherent(-a, 50))
    assert abs(val - math.exp(-2 * a * a)) < 1e-10


def test_coherent_matches_factorial_formula():
    for alpha in (0.3, 1.0 + 0.5j, -2.2, 3.0):
        v = coherent(alpha, 30)
        expect = [
            math.exp(-0.5 * abs(alpha) ** 2) * alpha**n / math.sqrt(math.factorial(n))
            for n in range(30)
        ]
        assert np.max(np.abs(v.amplitudes - np.array(expect))) < 1e-12


def test_inner_orthonormal_basis():
    e0, e1 = basis(0, 5), basis(1, 5)
    assert inner(e0, e0) == 1
    assert inner(e0, e1) == 0
    assert norm_sq(basis(3, 6)) == 1.0
    assert norm_sq(FockVector(np.zeros(4))) == 0.0


def test_inner_dim_mismatch():
    with pytest.raises(DimensionError):
        inner(basis(0, 3), basis(0, 4))


def test_invalid_dim():
    with pytest.raises(DimensionError):
        coherent(1.0, 0)
    with pytest.raises(DimensionError):
        poisson_tail(1.0, 0)


def test_poisson_tail_values():
    assert poisson_tail(0.0, 1) == 0.0
    assert abs(poisson_tail(1.0, 2) - (1.0 - 2.0 / math.e)) < 1e-14
    assert poisson_tail(1.3, 60) < 1e-30


def test_norm_plus_tail_is_one():
    for alpha in (0.25, 1.0, 2.1, 3.0):
        for dim in (10, 30, 80):
            total = norm_sq(coherent(alpha, dim)) + poisson_tail(alpha, dim)
            assert abs(total - 1.0) < 1e-12


def test_cauchy_schwarz_random():
    rng = np.random.default_rng(0)
    for _ in range(200):
        dim = int(rng.integers(1, 25))
        u = FockVector(rng.normal(size=dim) + 1j * rng.normal(size=dim))
        v = FockVector(rng.normal(size=dim) + 1j * rng.normal(size=dim))
        assert abs(inner(u, v)) ** 2 <= norm_sq(u) * norm_sq(v) * (1 + 1e-12)


def test_default_dim():
    assert default_dim(0.0) == 30
    assert default_dim(1.8) >= 30
    assert poisson_tail(3.0, default_dim(3.0)) < 1e-12


def test_amplitudes_read_only():
    v = coherent(1.0, 10)
    with pytest.raises(ValueError):
        v.amplitudes[0] = 0.0
