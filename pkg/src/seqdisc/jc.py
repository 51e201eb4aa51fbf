"""Indirect measurement of a light mode by a resonant two-level probe atom.

The measurement is parameterized by three reals per receiver: the
integrated interaction phase `phi`, and the probe readout-basis angles
`theta`, `xi`.  The closed-form measurement operators act as a diagonal
band plus one index-lowering band on the Fock amplitudes; the same
operators are recoverable by evolving the joint light-atom state and
projecting the atom onto a readout state, which serves as the module's
cross-validation oracle.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .fock import DimensionError, FockVector


class TruncationOverflowError(ValueError):
    """An index-raising action would push amplitude past the truncation."""


@dataclass(frozen=True)
class ReceiverParams:
    """One receiver's measurement parameters (all dimensionless reals)."""

    phi: float
    theta: float
    xi: float

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.phi, self.theta, self.xi)):
            raise ValueError("receiver parameters must be finite")


@dataclass(frozen=True)
class AtomState:
    """Amplitudes over the atomic basis {|g>, |e>}."""

    g_amp: complex
    e_amp: complex


@dataclass(frozen=True)
class JointVector:
    """Light-atom state psi_g (x) |g> + psi_e (x) |e>; both branches share one dim."""

    g: FockVector
    e: FockVector

    def __post_init__(self):
        if self.g.dim != self.e.dim:
            raise DimensionError(f"branch dims differ: {self.g.dim} != {self.e.dim}")

    @property
    def dim(self) -> int:
        return self.g.dim


def _check_outcome(outcome: int) -> None:
    if outcome not in (1, 2):
        raise ValueError(f"outcome must be 1 or 2, got {outcome!r}")


def pointer_state(params: ReceiverParams, outcome: int) -> AtomState:
    """Probe readout state for the given outcome.

    Outcome 1 maps to cos(theta)|g> + e^{i xi} sin(theta)|e>, outcome 2 to
    the orthogonal sin(theta)|g> - e^{i xi} cos(theta)|e>.
    """
    _check_outcome(outcome)
    phase = cmath.exp(1j * params.xi)
    if outcome == 1:
        return AtomState(math.cos(params.theta), phase * math.sin(params.theta))
    return AtomState(math.sin(params.theta), -phase * math.cos(params.theta))


def _kraus_amps(
    params: ReceiverParams, outcome: int, amps: np.ndarray
) -> np.ndarray:
    """Banded action of the measurement operator on raw Fock amplitudes."""
    dim = amps.size
    root = np.sqrt(np.arange(dim + 1))
    cos_phi = np.cos(params.phi * root)
    sin_phi = np.sin(params.phi * root)
    phase = cmath.exp(-1j * params.xi)
    if outcome == 1:
        diag = math.cos(params.theta) * cos_phi[:dim]
        lower = -1j * phase * math.sin(params.theta) * sin_phi[1:]
    else:
        diag = math.sin(params.theta) * cos_phi[:dim]
        lower = 1j * phase * math.cos(params.theta) * sin_phi[1:]
    out = diag * amps
    # lower[n] multiplies the amplitude at n+1 and deposits it at n; the
    # contribution at n+1 = dim is the sole truncation boundary and its
    # source amplitude is already excluded by the truncation itself.
    out[: dim - 1] += lower[: dim - 1] * amps[1:]
    return out


def kraus_apply(params: ReceiverParams, outcome: int, psi: FockVector) -> FockVector:
    """Apply the closed-form measurement operator for one outcome.

    Output dim equals input dim; the action only lowers Fock indices, so
    truncation introduces no error beyond what the input already carries.
    """
    _check_outcome(outcome)
    return FockVector(_kraus_amps(params, outcome, psi.amplitudes))


def jc_unitary_apply(phi: float, joint: JointVector) -> JointVector:
    """Resonant light-atom unitary for integrated interaction phase `phi`.

    Acts as cos/sin rotations within each two-dimensional block
    span{|n,g>, |n-1,e>}.  The excited branch raises the photon index, so
    its amplitude at the truncation edge must be negligible.
    """
    dim = joint.dim
    g_in = joint.g.amplitudes
    e_in = joint.e.amplitudes
    if abs(e_in[dim - 1]) > 1e-10:
        raise TruncationOverflowError(
            "excited-branch amplitude at the truncation edge would escape; "
            "increase dim"
        )
    root = np.sqrt(np.arange(dim + 1))
    cos_phi = np.cos(phi * root)
    sin_phi = np.sin(phi * root)
    g_out = cos_phi[:dim] * g_in
    g_out[1:] += -1j * sin_phi[1:dim] * e_in[: dim - 1]
    e_out = cos_phi[1 : dim + 1] * e_in
    e_out[: dim - 1] += -1j * sin_phi[1:dim] * g_in[1:]
    return JointVector(FockVector(g_out), FockVector(e_out))


def extract_kraus(params: ReceiverParams, outcome: int, psi: FockVector) -> FockVector:
    """Measurement action recovered from the unitary-plus-readout picture.

    Evolves psi (x) |g> under the joint unitary and projects the atom onto
    the outcome's readout state.  Contract: agrees with `kraus_apply` to
    rounding; this is the module's primary cross-validation oracle.
    """
    _check_outcome(outcome)
    zero = FockVector(np.zeros(psi.dim, dtype=np.complex128))
    evolved = jc_unitary_apply(params.phi, JointVector(psi, zero))
    probe = pointer_state(params, outcome)
    amps = (
        np.conj(probe.g_amp) * evolved.g.amplitudes
        + np.conj(probe.e_amp) * evolved.e.amplitudes
    )
    return FockVector(amps)
