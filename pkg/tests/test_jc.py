import math

import numpy as np
import pytest

from seqdisc.fock import DimensionError, FockVector, basis, coherent, norm_sq
from seqdisc.jc import (
    AtomState,
    JointVector,
    ReceiverParams,
    TruncationOverflowError,
    extract_kraus,
    jc_unitary_apply,
    kraus_apply,
    pointer_state,
)


def random_params(rng):
    return ReceiverParams(*rng.uniform(0.0, 2.0 * math.pi, size=3))


def random_state(rng, dim):
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return FockVector(amps / np.linalg.norm(amps))


def test_pointer_states_orthonormal():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = random_params(rng)
        a = pointer_state(p, 1)
        b = pointer_state(p, 2)
        ip = np.conj(a.g_amp) * b.g_amp + np.conj(a.e_amp) * b.e_amp
        assert abs(abs(a.g_amp) ** 2 + abs(a.e_amp) ** 2 - 1.0) < 1e-14
        assert abs(abs(b.g_amp) ** 2 + abs(b.e_amp) ** 2 - 1.0) < 1e-14
        assert abs(ip) < 1e-14


def test_bad_outcome():
    p = ReceiverParams(1.0, 0.5, 0.2)
    with pytest.raises(ValueError):
        pointer_state(p, 0)
    with pytest.raises(ValueError):
        kraus_apply(p, 3, basis(0, 4))


def test_nonfinite_params_rejected():
    with pytest.raises(ValueError):
        ReceiverParams(math.nan, 0.0, 0.0)
    with pytest.raises(ValueError):
        ReceiverParams(0.0, math.inf, 0.0)


def test_kraus_on_vacuum():
    # vacuum is untouched by the interaction: amplitudes are just the
    # readout-basis components
    p = ReceiverParams(1.3, 0.7, 0.4)
    out1 = kraus_apply(p, 1, basis(0, 5))
    out2 = kraus_apply(p, 2, basis(0, 5))
    assert abs(out1.amplitudes[0] - math.cos(p.theta)) < 1e-15
    assert abs(out2.amplitudes[0] - math.sin(p.theta)) < 1e-15
    assert np.all(out1.amplitudes[1:] == 0)


def test_kraus_on_fock_state():
    # |n> maps to a two-term superposition of |n> and |n-1>
    p = ReceiverParams(0.9, 0.3, 1.1)
    n = 3
    out = kraus_apply(p, 1, basis(n, 8))
    root = math.sqrt(n)
    expect_n = math.cos(p.theta) * math.cos(p.phi * root)
    expect_nm1 = (
        -1j
        * np.exp(-1j * p.xi)
        * math.sin(p.theta)
        * math.sin(p.phi * root)
    )
    assert abs(out.amplitudes[n] - expect_n) < 1e-15
    assert abs(out.amplitudes[n - 1] - expect_nm1) < 1e-15
    mask = np.ones(8, dtype=bool)
    mask[[n - 1, n]] = False
    assert np.all(out.amplitudes[mask] == 0)


def test_completeness_random():
    # sum of outcome norms preserves the input norm
    rng = np.random.default_rng(7)
    for _ in range(300):
        dim = int(rng.integers(2, 40))
        p = random_params(rng)
        psi = random_state(rng, dim)
        total = norm_sq(kraus_apply(p, 1, psi)) + norm_sq(kraus_apply(p, 2, psi))
        assert abs(total - norm_sq(psi)) < 1e-12


def test_theta_shift_flips_sign():
    # theta -> theta + pi negates both outcome operators; norms unchanged
    rng = np.random.default_rng(11)
    p = random_params(rng)
    shifted = ReceiverParams(p.phi, p.theta + math.pi, p.xi)
    psi = random_state(rng, 20)
    for outcome in (1, 2):
        a = kraus_apply(p, outcome, psi).amplitudes
        b = kraus_apply(shifted, outcome, psi).amplitudes
        assert np.max(np.abs(a + b)) < 1e-12


def test_unitary_preserves_norm():
    rng = np.random.default_rng(13)
    for _ in range(100):
        dim = int(rng.integers(3, 30))
        g = random_state(rng, dim)
        e_amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        e_amps[-1] = 0.0  # keep the raising action inside the truncation
        e = FockVector(e_amps / np.linalg.norm(e_amps))
        joint = JointVector(g, e)
        before = norm_sq(joint.g) + norm_sq(joint.e)
        out = jc_unitary_apply(rng.uniform(0, 10), joint)
        after = norm_sq(out.g) + norm_sq(out.e)
        assert abs(after - before) < 1e-12


def test_unitary_phi_zero_is_identity():
    rng = np.random.default_rng(17)
    g = random_state(rng, 12)
    e_amps = np.zeros(12, dtype=np.complex128)
    e_amps[2] = 1.0
    joint = JointVector(g, FockVector(e_amps))
    out = jc_unitary_apply(0.0, joint)
    assert np.allclose(out.g.amplitudes, g.amplitudes)
    assert np.allclose(out.e.amplitudes, e_amps)


def test_unitary_edge_overflow():
    e = np.zeros(5, dtype=np.complex128)
    e[-1] = 1.0
    joint = JointVector(FockVector(np.zeros(5, dtype=np.complex128)), FockVector(e))
    with pytest.raises(TruncationOverflowError):
        jc_unitary_apply(1.0, joint)


def test_joint_vector_dim_mismatch():
    with pytest.raises(DimensionError):
        JointVector(basis(0, 3), basis(0, 4))


def test_extract_matches_kraus_random():
    # the unitary-plus-readout route reproduces the closed-form operators
    rng = np.random.default_rng(19)
    for _ in range(200):
        dim = int(rng.integers(2, 35))
        p = random_params(rng)
        psi = random_state(rng, dim)
        for outcome in (1, 2):
            a = kraus_apply(p, outcome, psi).amplitudes
            b = extract_kraus(p, outcome, psi).amplitudes
            assert np.max(np.abs(a - b)) < 1e-12


def test_extract_matches_kraus_coherent():
    p = ReceiverParams(2.1, 0.8, 5.5)
    psi = coherent(1.4, 40)
    for outcome in (1, 2):
        a = kraus_apply(p, outcome, psi).amplitudes
        b = extract_kraus(p, outcome, psi).amplitudes
        assert np.max(np.abs(a - b)) < 1e-13


def test_atom_state_fields():
    a = AtomState(0.6, 0.8j)
    assert a.g_amp == 0.6
    assert a.e_amp == 0.8j
