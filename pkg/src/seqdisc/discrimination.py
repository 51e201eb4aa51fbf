"""Chained success probability for sequential binary-state discrimination.

Two independent evaluation routes are kept deliberately separate: the
chain route applies the measurement operators receiver by receiver, while
the series route evaluates the closed-form coefficient sums for the
two-receiver case.  Their agreement is the central numerical cross-check.
Reference values (single-measurement optimum, optimal qubit-confined
two-receiver scheme) live here as well.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import FockVector, coherent, default_dim, norm_sq
from .jc import ReceiverParams, kraus_apply

ParamVector = tuple[ReceiverParams, ...]


@dataclass(frozen=True)
class DiscriminationProblem:
    """Two coherent hypotheses with priors, on a fixed truncation."""

    alpha1: complex
    alpha2: complex
    q1: float
    q2: float
    dim: int

    def __post_init__(self):
        if self.q1 < 0 or self.q2 < 0 or abs(self.q1 + self.q2 - 1.0) > 1e-12:
            raise ValueError("priors must be nonnegative and sum to 1")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")

    @classmethod
    def symmetric(cls, alpha: float, q1: float = 0.5, dim: int | None = None):
        """The |+alpha> vs |-alpha> problem used throughout the sweeps."""
        if dim is None:
            dim = default_dim(alpha)
        return cls(alpha, -alpha, q1, 1.0 - q1, dim)


def params_to_array(params: ParamVector) -> np.ndarray:
    return np.array(
        [x for p in params for x in (p.phi, p.theta, p.xi)], dtype=float
    )


def params_from_array(v: np.ndarray) -> ParamVector:
    if len(v) % 3 != 0 or len(v) == 0:
        raise ValueError("parameter vector length must be a positive multiple of 3")
    return tuple(
        ReceiverParams(v[3 * i], v[3 * i + 1], v[3 * i + 2])
        for i in range(len(v) // 3)
    )


@lru_cache(maxsize=256)
def _coherent_cached(alpha: complex, dim: int) -> FockVector:
    return coherent(alpha, dim)


def chain_apply(params: ParamVector, outcome: int, psi: FockVector) -> FockVector:
    """Apply every receiver's operator for the same outcome, first to last."""
    for p in params:
        psi = kraus_apply(p, outcome, psi)
    return psi


def success_probability(params: ParamVector, problem: DiscriminationProblem) -> float:
    """Probability that every receiver guesses the prepared state correctly."""
    p1 = norm_sq(chain_apply(params, 1, _coherent_cached(problem.alpha1, problem.dim)))
    p2 = norm_sq(chain_apply(params, 2, _coherent_cached(problem.alpha2, problem.dim)))
    return problem.q1 * p1 + problem.q2 * p2


def _coherent_amps(alpha: complex, dim: int) -> np.ndarray:
    # independent of fock.coherent only in call path; same recurrence,
    # identical floats, so the two evaluation routes share one truncation
    amps = np.empty(dim, dtype=np.complex128)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(dim - 1):
        amps[n + 1] = amps[n] * alpha / math.sqrt(n + 1)
    return amps


def f_coeffs(
    problem: DiscriminationProblem,
    first: ReceiverParams,
    outcome: int,
    n_max: int,
) -> np.ndarray:
    """First-receiver output coefficients for the outcome's hypothesis.

    Entry n combines the coherent amplitudes at n and n+1 with the
    receiver's trig factors; indices at or past the truncation count as
    zero.
    """
    if outcome not in (1, 2):
        raise ValueError(f"outcome must be 1 or 2, got {outcome!r}")
    alpha = problem.alpha1 if outcome == 1 else problem.alpha2
    full = _coherent_amps(alpha, problem.dim)
    c = np.zeros(n_max + 1, dtype=np.complex128)
    k = min(n_max + 1, problem.dim)
    c[:k] = full[:k]
    root = np.sqrt(np.arange(n_max + 1))
    cos_phi = np.cos(first.phi * root)
    sin_phi = np.sin(first.phi * root)
    phase = cmath.exp(-1j * first.xi)
    if outcome == 1:
        return (
            math.cos(first.theta) * cos_phi[:n_max] * c[:n_max]
            - 1j * phase * math.sin(first.theta) * sin_phi[1:] * c[1:]
        )
    return (
        math.sin(first.theta) * cos_phi[:n_max] * c[:n_max]
        + 1j * phase * math.cos(first.theta) * sin_phi[1:] * c[1:]
    )


def F_coeffs(
    problem: DiscriminationProblem,
    params: ParamVector,
    outcome: int,
    n_max: int,
) -> np.ndarray:
    """Two-receiver output coefficients, built from `f_coeffs` and the
    second receiver's trig factors."""
    if len(params) != 2:
        raise ValueError("F_coeffs is defined for exactly two receivers")
    first, second = params
    f = np.zeros(n_max + 1, dtype=np.complex128)
    f[: min(n_max + 1, problem.dim)] = f_coeffs(
        problem, first, outcome, min(n_max + 1, problem.dim)
    )
    root = np.sqrt(np.arange(n_max + 1))
    cos_phi = np.cos(second.phi * root)
    sin_phi = np.sin(second.phi * root)
    phase = cmath.exp(-1j * second.xi)
    if outcome == 1:
        return (
            math.cos(second.theta) * cos_phi[:n_max] * f[:n_max]
            - 1j * phase * math.sin(second.theta) * sin_phi[1:] * f[1:]
        )
    return (
        math.sin(second.theta) * cos_phi[:n_max] * f[:n_max]
        + 1j * phase * math.cos(second.theta) * sin_phi[1:] * f[1:]
    )


def success_probability_series(
    params: ParamVector, problem: DiscriminationProblem
) -> float:
    """Two-receiver success probability via the coefficient series.

    Independent code path from `success_probability`; the two must agree
    to ~1e-10 on any input.
    """
    n_max = problem.dim
    s1 = float(np.sum(np.abs(F_coeffs(problem, params, 1, n_max)) ** 2))
    s2 = float(np.sum(np.abs(F_coeffs(problem, params, 2, n_max)) ** 2))
    return problem.q1 * s1 + problem.q2 * s2


def overlap(alpha1: complex, alpha2: complex) -> complex:
    """Closed-form coherent-state overlap <alpha1|alpha2>."""
    a1, a2 = complex(alpha1), complex(alpha2)
    return cmath.exp(-0.5 * (abs(a1) ** 2 + abs(a2) ** 2) + a1.conjugate() * a2)


def helstrom_bound(q1: float, q2: float, overlap_mod: float) -> float:
    """Best single-measurement success probability for two pure states.

    Standard minimum-error result: (1 + sqrt(1 - 4 q1 q2 s^2)) / 2 where s
    is the overlap modulus.
    """
    if not 0.0 <= overlap_mod <= 1.0:
        raise ValueError(f"overlap modulus must lie in [0, 1], got {overlap_mod}")
    if abs(q1 + q2 - 1.0) > 1e-12:
        raise ValueError("priors must sum to 1")
    return 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - 4.0 * q1 * q2 * overlap_mod**2)))


@dataclass(frozen=True)
class BaselineResult:
    """Best value found for the qubit-confined two-receiver optimum."""

    value: float
    converged: bool
    evaluations: int


def _givens(n: int, i: int, j: int, a: float) -> np.ndarray:
    g = np.eye(n)
    c, s = math.cos(a), math.sin(a)
    g[i, i] = c
    g[j, j] = c
    g[i, j] = -s
    g[j, i] = s
    return g


def _baseline_objective(s: float, q1: float, q2: float):
    eps = 0.5 * math.acos(min(1.0, max(0.0, s)))
    psi1 = np.array([math.cos(eps), math.sin(eps)])
    psi2 = np.array([math.cos(eps), -math.sin(eps)])
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

    def objective(v: np.ndarray) -> float:
        # first receiver: the two stacked 2x2 operators form an isometry
        # column pair of a 4x4 rotation; second receiver: projective basis
        w = np.eye(4)
        for (i, j), a in zip(pairs, v[:6]):
            w = w @ _givens(4, i, j, a)
        k1 = w[:2, :2]
        k2 = w[2:, :2]
        t = v[6]
        m1 = np.array([math.cos(t), math.sin(t)])
        m2 = np.array([-math.sin(t), math.cos(t)])
        p = q1 * float(m1 @ (k1 @ psi1)) ** 2 + q2 * float(m2 @ (k2 @ psi2)) ** 2
        return -p

    return objective


def fields_baseline(
    overlap_mod: float,
    q1: float = 0.5,
    q2: float = 0.5,
    restarts: int = 24,
    seed: int = 7,
) -> BaselineResult:
    """Optimal two-sequential success probability with both measurements
    confined to the two-state span.

    Brute-force reconstruction: the first receiver is an arbitrary pure
    two-outcome instrument on the qubit span, the second a projective
    qubit measurement; the seven free angles are maximized by multi-start
    direction-set search.
    """
    from .optimize import powell_minimize

    if not 0.0 <= overlap_mod < 1.0 + 1e-15:
        raise ValueError(f"overlap modulus must lie in [0, 1], got {overlap_mod}")
    objective = _baseline_objective(overlap_mod, q1, q2)
    box = [(0.0, 2.0 * math.pi)] * 7
    rng = np.random.default_rng(seed)
    best = -math.inf
    evaluations = 0
    converged = False
    for _ in range(restarts):
        x0 = rng.uniform([lo for lo, _ in box], [hi for _, hi in box])
        res = powell_minimize(
            objective, x0, bounds=box, x_tol=1e-10, f_tol=1e-12, max_iterations=200
        )
        evaluations += res.evaluations
        if -res.fun > best:
            best = -res.fun
            converged = res.converged
    return BaselineResult(min(best, 1.0), converged, evaluations)
