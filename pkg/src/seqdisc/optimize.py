"""Derivative-free maximization of the success probability.

A from-scratch direction-set (Powell) minimizer with bracketing plus
golden-section line searches, wrapped in a seeded multi-start driver over
the measurement-parameter box.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .discrimination import (
    DiscriminationProblem,
    ParamVector,
    params_from_array,
    success_probability,
)
from .fock import coherent

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class OptimizerOptions:
    restarts: int = 40
    max_iterations: int = 200
    x_tolerance: float = 1e-9
    f_tolerance: float = 1e-10
    search_box: tuple[tuple[float, float], ...] | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.x_tolerance <= 0 or self.f_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.search_box is not None:
            for lo, hi in self.search_box:
                if not lo < hi:
                    raise ValueError(f"empty box interval [{lo}, {hi}]")


@dataclass(frozen=True)
class PowellResult:
    x: np.ndarray
    fun: float
    evaluations: int
    iterations: int
    converged: bool


@dataclass(frozen=True)
class OptimizationResult:
    best_params: ParamVector
    best_value: float
    evaluations: int
    converged: bool
    restart_values: tuple[float, ...] = field(default_factory=tuple)


class ObjectiveError(RuntimeError):
    """The objective returned a non-finite value."""


def _golden_section(g, a, b, ga, gb, x_tol):
    """Golden-section refinement on [a, b]; returns (t, g(t)) at the best
    probe seen."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    gc = g(c)
    gd = g(d)
    n = 2
    while (b - a) > x_tol:
        if gc < gd:
            b, gb = d, gd
            d, gd = c, gc
            c = b - _INV_PHI * (b - a)
            gc = g(c)
        else:
            a, ga = c, gc
            c, gc = d, gd
            d = a + _INV_PHI * (b - a)
            gd = g(d)
        n += 1
    pts = [(ga, a), (gc, c), (gd, d), (gb, b)]
    gbest, tbest = min(pts, key=lambda p: p[0])
    return tbest, gbest, n


def _line_minimize(f, x, fx, direction, bounds, x_tol):
    """Minimize f along x + t * direction inside the box.

    Brackets a local minimum by geometric expansion from t = 0 (trying the
    downhill side first), then refines by golden section.  Returns the new
    point, value, and evaluation count.
    """
    lo = np.array([b[0] for b in bounds], dtype=float)
    hi = np.array([b[1] for b in bounds], dtype=float)
    t_lo, t_hi = -math.inf, math.inf
    for xi, di, lo_i, hi_i in zip(x, direction, lo, hi):
        if di > 1e-300:
            t_lo = max(t_lo, (lo_i - xi) / di)
            t_hi = min(t_hi, (hi_i - xi) / di)
        elif di < -1e-300:
            t_lo = max(t_lo, (hi_i - xi) / di)
            t_hi = min(t_hi, (lo_i - xi) / di)
    if not t_lo < t_hi:
        return x, fx, 0
    t_lo, t_hi = min(t_lo, 0.0), max(t_hi, 0.0)

    def g(t):
        val = f(np.clip(x + t * direction, lo, hi))
        if not math.isfinite(val):
            raise ObjectiveError("objective returned a non-finite value")
        return val

    span = t_hi - t_lo
    h = min(0.05 * span, 0.5)
    n = 0

    def expand(sign):
        # returns bracket (a, b, ga, gb) enclosing a minimum on that side,
        # or None if the first step already goes uphill
        nonlocal n
        t1 = sign * h
        t1 = min(max(t1, t_lo), t_hi)
        if t1 == 0.0:
            return None
        g1 = g(t1)
        n += 1
        if g1 >= fx:
            return None
        t0, g0 = 0.0, fx
        while True:
            t2 = t1 + sign * (abs(t1 - t0) * 2.0 + h)
            t2 = min(max(t2, t_lo), t_hi)
            if t2 == t1:
                return (min(t0, t1), max(t0, t1), g0, g1) if sign > 0 else (
                    min(t0, t1),
                    max(t0, t1),
                    g1,
                    g0,
                )
            g2 = g(t2)
            n += 1
            if g2 >= g1:
                lo_t, hi_t = (t0, t2) if sign > 0 else (t2, t0)
                lo_g, hi_g = (g0, g2) if sign > 0 else (g2, g0)
                return lo_t, hi_t, lo_g, hi_g
            t0, g0, t1, g1 = t1, g1, t2, g2

    bracket = expand(+1.0)
    if bracket is None:
        bracket = expand(-1.0)
    if bracket is None:
        a = max(t_lo, -h)
        b = min(t_hi, h)
        bracket = (a, b, g(a) if a != 0.0 else fx, g(b) if b != 0.0 else fx)
        n += int(a != 0.0) + int(b != 0.0)
    a, b, ga, gb = bracket
    t, gt, k = _golden_section(g, a, b, ga, gb, x_tol)
    n += k
    if gt >= fx:
        return x, fx, n
    return np.clip(x + t * direction, lo, hi), gt, n


def powell_minimize(
    f,
    x0,
    *,
    bounds,
    x_tol: float = 1e-9,
    f_tol: float = 1e-10,
    max_iterations: int = 200,
):
    """Powell's conjugate-direction minimization inside a box.

    Directions start as the coordinate axes; after each sweep of line
    minimizations the direction of largest single-step decrease may be
    replaced by the sweep's net displacement, per Powell's criterion.
    """
    x = np.asarray(x0, dtype=float).copy()
    d = x.size
    lo = np.array([b[0] for b in bounds], dtype=float)
    hi = np.array([b[1] for b in bounds], dtype=float)
    x = np.clip(x, lo, hi)
    directions = [np.eye(d)[i] for i in range(d)]
    fx = f(x)
    if not math.isfinite(fx):
        raise ObjectiveError("objective returned a non-finite value")
    nfev = 1
    converged = False
    it = 0
    for it in range(1, max_iterations + 1):
        x_start = x.copy()
        f_start = fx
        biggest_drop = 0.0
        drop_index = 0
        for i, direction in enumerate(directions):
            x_new, f_new, k = _line_minimize(f, x, fx, direction, bounds, x_tol)
            nfev += k
            if fx - f_new > biggest_drop:
                biggest_drop = fx - f_new
                drop_index = i
            x, fx = x_new, f_new
        if 2.0 * (f_start - fx) <= f_tol * (abs(f_start) + abs(fx)) + 1e-25:
            converged = True
            break
        displacement = x - x_start
        if np.linalg.norm(displacement) == 0.0:
            converged = True
            break
        extrapolated = np.clip(x_start + 2.0 * displacement, lo, hi)
        f_ext = f(extrapolated)
        nfev += 1
        if f_ext < f_start:
            t = (
                2.0
                * (f_start - 2.0 * fx + f_ext)
                * (f_start - fx - biggest_drop) ** 2
                - biggest_drop * (f_start - f_ext) ** 2
            )
            if t < 0.0:
                new_dir = displacement / np.linalg.norm(displacement)
                x_new, f_new, k = _line_minimize(f, x, fx, new_dir, bounds, x_tol)
                nfev += k
                x, fx = x_new, f_new
                directions[drop_index] = directions[-1]
                directions[-1] = new_dir
    return PowellResult(x, fx, nfev, it, converged)


def default_search_box(
    receivers: int, phi_max: float = TWO_PI
) -> tuple[tuple[float, float], ...]:
    """Per-receiver box: interaction phase in [0, phi_max], both readout
    angles in [0, 2*pi)."""
    one = ((0.0, phi_max), (0.0, TWO_PI), (0.0, TWO_PI))
    return one * receivers


@numba.njit(cache=True)
def _chain_success_kernel(v, amps1, amps2, root, q1, q2, receivers):
    """Scalar-loop evaluation of the chained success probability.

    Floating-point-equivalent to the public chain route; jitted because
    the optimizer calls it hundreds of thousands of times per grid point.
    """
    p_total = 0.0
    dim = amps1.shape[0]
    for branch in range(2):
        amps = amps1.copy() if branch == 0 else amps2.copy()
        for l in range(receivers):
            phi = v[3 * l]
            theta = v[3 * l + 1]
            xi = v[3 * l + 2]
            ct = math.cos(theta)
            st = math.sin(theta)
            low = cmath.exp(-1j * xi) * (-1j * st if branch == 0 else 1j * ct)
            diag = ct if branch == 0 else st
            out = np.empty(dim, np.complex128)
            for n in range(dim):
                val = diag * math.cos(phi * root[n]) * amps[n]
                if n + 1 < dim:
                    val += low * math.sin(phi * root[n + 1]) * amps[n + 1]
                out[n] = val
            amps = out
        s = 0.0
        for n in range(dim):
            s += amps[n].real * amps[n].real + amps[n].imag * amps[n].imag
        p_total += (q1 if branch == 0 else q2) * s
    return p_total


def _make_objective(problem: DiscriminationProblem, receivers: int):
    amps1 = coherent(problem.alpha1, problem.dim).amplitudes.copy()
    amps2 = coherent(problem.alpha2, problem.dim).amplitudes.copy()
    root = np.sqrt(np.arange(problem.dim + 1, dtype=float))
    q1, q2 = problem.q1, problem.q2

    def objective(v: np.ndarray) -> float:
        return -_chain_success_kernel(v, amps1, amps2, root, q1, q2, receivers)

    return objective


def optimize_success(
    problem: DiscriminationProblem,
    opts: OptimizerOptions = OptimizerOptions(),
    receivers: int = 2,
) -> OptimizationResult:
    """Maximize the success probability over the measurement parameters.

    Runs the direction-set minimizer on the negated objective from
    `restarts` seeded uniform starts in the search box; ties between
    restarts go to the lowest restart index, so results are deterministic
    for a given seed.
    """
    box = opts.search_box or default_search_box(receivers)
    if len(box) != 3 * receivers:
        raise ValueError("search box length must be 3 * receivers")
    objective = _make_objective(problem, receivers)
    rng = np.random.default_rng(opts.rng_seed)
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    best_x: np.ndarray | None = None
    best_f = math.inf
    evaluations = 0
    converged = False
    restart_values = []
    for _ in range(opts.restarts):
        x0 = rng.uniform(lo, hi)
        res = powell_minimize(
            objective,
            x0,
            bounds=box,
            x_tol=opts.x_tolerance,
            f_tol=opts.f_tolerance,
            max_iterations=opts.max_iterations,
        )
        evaluations += res.evaluations
        restart_values.append(-res.fun)
        if res.fun < best_f:
            best_f = res.fun
            best_x = res.x
            converged = res.converged
    assert best_x is not None
    best_params = params_from_array(best_x)
    best_value = success_probability(best_params, problem)
    return OptimizationResult(
        best_params, best_value, evaluations, converged, tuple(restart_values)
    )
