"""
Independent references: plain floating-point Euler, the closed-form
expressions for :func:`mca.systems.example1`, and trajectory error metrics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainExceeded, NonFinite, ShapeMismatch
from .integrator import Trajectory
from .systems import PolySystem, eval_rhs


@dataclass(frozen=True)
class ErrorReport:
    max_abs: float
    l2: float
    argmax_step: int

    def as_dict(self) -> dict:
        return {"max_abs": self.max_abs, "l2": self.l2, "argmax_step": self.argmax_step}


def euler(sys: PolySystem, y0, tau: float, n_steps: int) -> Trajectory:
    """Explicit Euler, ``y_{n+1} = y_n + tau * f(y_n)``."""
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    states = np.empty((n_steps + 1, sys.dim))
    y = np.asarray(y0, dtype=float)
    states[0] = y
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_steps + 1):
            y = y + tau * eval_rhs(sys, y)
            if not np.all(np.isfinite(y)):
                raise NonFinite(f"Euler iterate became non-finite at step {n}", step=n)
            states[n] = y
    return Trajectory(tau=tau, times=np.arange(n_steps + 1) * tau, states=states, names=sys.names)


def example1_closed_forms(a: int, tau: float):
    """Return ``(u, v, t)`` after ``a`` unit decrements of ``u``'s integer part.

    u_a = 1 - a tau
    t_a = tau * sum_{m=0}^{a-1} (1 - m tau)^-2
    v_a = tau * sum_{m=1}^{a-1} prod_{k=m+1}^{a-1} (1 - 2 tau / (1 - k tau)^2)
    """
    if a < 0:
        raise DomainExceeded("a must be non-negative")
    if a * tau >= 1.0:
        raise DomainExceeded(f"a*tau = {a * tau} >= 1")
    u = 1.0 - a * tau
    t = tau * math.fsum((1.0 - m * tau) ** -2 for m in range(a))
    v = 0.0
    for m in range(1, a):
        prod = 1.0
        for k in range(m + 1, a):
            prod *= 1.0 - 2.0 * tau / (1.0 - k * tau) ** 2
        v += prod
    return u, tau * v, t


def example1_small_t(a: int, tau: float):
    """Small-``t`` variant, neglecting ``a**2 tau**2``; returns ``(u, v, t)``."""
    if a < 0:
        raise DomainExceeded("a must be non-negative")
    if 2 * a * tau >= 1.0:
        raise DomainExceeded(f"2*a*tau = {2 * a * tau} >= 1")
    u = 1.0 - a * tau
    v = (1.0 - 2 * a * tau) * sum(tau / (1.0 - 2 * m * tau) for m in range(2, a + 1))
    t = sum(tau / (1.0 - 2 * m * tau) for m in range(a))
    return u, v, t


def compare(traj_a: Trajectory, traj_b: Trajectory) -> ErrorReport:
    """Componentwise max-abs and discrete L2 difference between trajectories."""
    if traj_a.tau != traj_b.tau:
        raise ShapeMismatch(f"different steps: {traj_a.tau} vs {traj_b.tau}")
    if traj_a.states.shape != traj_b.states.shape:
        raise ShapeMismatch(f"shapes differ: {traj_a.states.shape} vs {traj_b.states.shape}")
    diff = np.abs(traj_a.states - traj_b.states)
    if diff.size == 0:
        return ErrorReport(0.0, 0.0, 0)
    per_step = diff.max(axis=1)
    step = int(np.argmax(per_step))
    return ErrorReport(float(per_step[step]), float(np.sqrt(np.sum(diff ** 2))), step)
