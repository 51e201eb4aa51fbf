"""Truncated Fock-space vectors, coherent states, and truncation-error accounting."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DimensionError(ValueError):
    """Invalid or mismatched truncation dimension."""


@dataclass(frozen=True)
class FockVector:
    """Complex amplitudes over the photon-number basis |0>..|dim-1>.

    Immutable after construction; the underlying array is marked read-only
    so instances can be shared freely between workers.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size < 1:
            raise DimensionError("amplitudes must be a non-empty 1-D sequence")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


def basis(n: int, dim: int) -> FockVector:
    """Number state |n> truncated to `dim` levels."""
    if dim < 1:
        raise DimensionError(f"dim must be >= 1, got {dim}")
    if not 0 <= n < dim:
        raise DimensionError(f"basis index {n} outside [0, {dim})")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[n] = 1.0
    return FockVector(amps)


def coherent(alpha: complex, dim: int) -> FockVector:
    """Coherent state |alpha> truncated to `dim` levels.

    Amplitudes c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!) built by the
    stable recurrence c_{n+1} = c_n * alpha / sqrt(n+1); factorials are
    never materialized, so large dims do not overflow.
    """
    if dim < 1:
        raise DimensionError(f"dim must be >= 1, got {dim}")
    amps = np.empty(dim, dtype=np.complex128)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(dim - 1):
        amps[n + 1] = amps[n] * alpha / math.sqrt(n + 1)
    return FockVector(amps)


def default_dim(alpha: complex) -> int:
    """Truncation dimension giving a Poisson tail below ~1e-12 for |alpha| <= 3."""
    a = abs(alpha)
    return max(30, math.ceil(a * a + 8.0 * a + 10.0))


def inner(u: FockVector, v: FockVector) -> complex:
    """Hilbert-space inner product <u|v> = sum conj(u_n) v_n."""
    if u.dim != v.dim:
        raise DimensionError(f"dimension mismatch: {u.dim} != {v.dim}")
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def norm_sq(v: FockVector) -> float:
    """Squared norm <v|v>; the imaginary part must vanish to rounding."""
    val = inner(v, v)
    assert abs(val.imag) < 1e-14
    return val.real


def poisson_tail(alpha: complex, dim: int) -> float:
    """Probability weight of the coherent state beyond the truncation.

    Returns 1 - sum_{n<dim} exp(-|alpha|^2) |alpha|^{2n} / n!, clamped to
    [0, 1]; this is the exact truncation error of `coherent`.
    """
    if dim < 1:
        raise DimensionError(f"dim must be >= 1, got {dim}")
    lam = abs(alpha) ** 2
    term = math.exp(-lam)
    total = term
    for n in range(1, dim):
        term *= lam / n
        total += term
    return min(1.0, max(0.0, 1.0 - total))
