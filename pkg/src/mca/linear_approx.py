"""
Piecewise-linear analytic approximation.

Each component is held as ``y = a + b * tau`` with ``a`` on the integer
lattice and ``|b| < 1/tau``. Between shift events ``a`` is frozen, so ``b``
grows by ``G(a)`` per layer and ``y`` is linear in ``t`` with slope
``G(a)``. A component shifts after

    M = ceil((1 - b tau) / (G tau))     if G > 0
    M = ceil(-(1 + b tau) / (G tau))    if G < 0

layers; the earliest horizon closes the segment, the components attaining
it move ``a`` by ``sign(G)`` and wrap ``b`` modulo ``1/tau``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SlopeTooLarge
from .systems import PolySystem, eval_rhs
from .tau_series import ShiftFunction, ShiftKind

# Relative slack when snapping a nearly-integral horizon before the ceiling.
_SNAP = 1e-9


@dataclass
class LinState:
    t: float
    a: np.ndarray
    b: np.ndarray
    tau: float

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)

    def values(self) -> np.ndarray:
        return self.a + self.b * self.tau

    @classmethod
    def from_values(cls, y0, tau: float, t: float = 0.0) -> "LinState":
        y = np.asarray(y0, dtype=float)
        a = np.trunc(y)
        return cls(t, a, (y - a) / tau, tau)


@dataclass(frozen=True)
class LinearSegment:
    t_start: float
    t_end: float
    intercept: tuple
    slope: tuple

    def __call__(self, t):
        return np.asarray(self.intercept) + np.asarray(self.slope) * t

    def start_values(self) -> np.ndarray:
        return self(self.t_start)

    def end_values(self) -> np.ndarray:
        return self(self.t_end)


@dataclass
class PiecewiseLinearSolution:
    segments: list
    system: str
    tau: float
    names: tuple = ()
    shifts: list = field(default_factory=list)

    def __len__(self):
        return len(self.segments)

    @property
    def breakpoints(self) -> np.ndarray:
        if not self.segments:
            return np.empty(0)
        return np.array([s.t_start for s in self.segments] + [self.segments[-1].t_end])

    @property
    def slopes(self) -> np.ndarray:
        return np.array([s.slope for s in self.segments])

    def __call__(self, t):
        """Evaluate at scalar or array ``t`` within the covered interval."""
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        starts = np.array([s.t_start for s in self.segments])
        idx = np.clip(np.searchsorted(starts, ts, side="right") - 1, 0, len(self.segments) - 1)
        out = np.array([self.segments[i](x) for i, x in zip(idx, ts)])
        return out[0] if np.ndim(t) == 0 else out

    def sample(self) -> tuple[np.ndarray, np.ndarray]:
        """Times and values at every breakpoint; exact for a piecewise-linear path."""
        ts = self.breakpoints
        ys = np.array([s.start_values() for s in self.segments] + [self.segments[-1].end_values()])
        return ts, ys


def _snap_ceil(x: float) -> int:
    r = round(x)
    if abs(x - r) <= _SNAP * max(1.0, abs(x)):
        return int(r)
    return math.ceil(x)


def shift_horizon(G: float, b0: float, tau: float) -> float:
    """Layers until ``b0 + M G`` reaches ``+-1/tau``; ``inf`` when ``G == 0``."""
    if abs(G) >= 1.0 / tau:
        raise SlopeTooLarge(f"|G| = {abs(G)} >= 1/tau = {1.0 / tau}; reduce tau")
    if G > 0:
        return _snap_ceil((1.0 - b0 * tau) / (G * tau))
    if G < 0:
        return _snap_ceil(-(1.0 + b0 * tau) / (G * tau))
    return math.inf


def layer_advance(state: LinState, sys: PolySystem, t_max: float):
    """Emit the next linear segment and the state at its end.

    Returns ``(segment, new_state, shifted)`` where ``shifted`` is the
    per-component integer change (entries in {-1, 0, 1}). If ``t_max`` comes
    before the next shift event the segment is cut at ``t_max`` and no
    component shifts.
    """
    tau = state.tau
    G = eval_rhs(sys, state.a)
    try:
        horizons = [shift_horizon(g, b, tau) for g, b in zip(G, state.b)]
    except SlopeTooLarge as exc:
        raise SlopeTooLarge(f"{exc} (at t={state.t})", t=state.t) from None
    M = min(horizons)
    y0 = state.values()
    segment_end = state.t + M * tau if math.isfinite(M) else math.inf
    shifted = np.zeros(sys.dim)

    if segment_end >= t_max:
        steps = (t_max - state.t) / tau
        b = state.b + steps * G
        new = LinState(t_max, state.a.copy(), b, tau)
    else:
        b = state.b + M * G
        a = state.a.copy()
        hit = np.array([h == M for h in horizons])
        shifted[hit] = np.sign(G[hit])
        # Ceiling guarantees |b| >= 1/tau on hit components; the shift is the
        # carry of the mod 1/tau shifting function.
        wrap = ShiftFunction(ShiftKind.MOD_CARRY, tau)
        bounded, carry = wrap.apply(b[hit])
        carry = np.where(carry == 0, shifted[hit], carry)
        a[hit] += carry
        b[hit] = b[hit] - carry / tau
        shifted[hit] = carry
        new = LinState(segment_end, a, b, tau)

    segment = LinearSegment(
        t_start=state.t,
        t_end=new.t,
        intercept=tuple(float(x) for x in y0 - G * state.t),
        slope=tuple(float(g) for g in G),
    )
    return segment, new, shifted


def build(sys: PolySystem, y0, tau: float, t_max: float, t0: float = 0.0,
          max_segments: int | None = None) -> PiecewiseLinearSolution:
    if t_max <= t0:
        raise ValueError(f"t_max must exceed the start time {t0}, got {t_max}")
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    state = LinState.from_values(y0, tau, t0)
    segments, shifts = [], []
    while state.t < t_max:
        seg, state, shifted = layer_advance(state, sys, t_max)
        segments.append(seg)
        shifts.append(shifted)
        if max_segments is not None and len(segments) >= max_segments:
            break
    return PiecewiseLinearSolution(segments, sys.name, tau, sys.names, shifts)


def _fmt_num(x: float, digits: int) -> str:
    x = round(x, digits)
    if x == 0:
        x = 0.0
    return f"{x:.{digits}f}".rstrip("0").rstrip(".")


def format_linear(intercept: float, slope: float, digits: int = 2) -> str:
    """Render ``slope*t + intercept`` in the compact form ``2t-1``, ``-t+3``, ``t``."""
    s = round(slope, digits)
    c = round(intercept, digits)
    if s == 0:
        return _fmt_num(c, digits)
    if s == 1:
        head = "t"
    elif s == -1:
        head = "-t"
    else:
        head = _fmt_num(s, digits) + "t"
    if c == 0:
        return head
    sign = "+" if c > 0 else "-"
    return f"{head}{sign}{_fmt_num(abs(c), digits)}"


def to_table(sol: PiecewiseLinearSolution, digits: int = 2) -> str:
    """Plain-text table: interval, then one linear expression per component."""
    names = sol.names or tuple(f"y{i + 1}" for i in range(len(sol.segments[0].slope)))
    rows = [("t",) + tuple(names)]
    for seg in sol.segments:
        interval = f"[{_fmt_num(seg.t_start, digits)}, {_fmt_num(seg.t_end, digits)}]"
        rows.append((interval,) + tuple(
            format_linear(c, s, digits) for c, s in zip(seg.intercept, seg.slope)
        ))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows)


def csv_header(names) -> list[str]:
    dim = len(names)
    return ["t_start", "t_end"] + [f"intercept_{i + 1}" for i in range(dim)] + [
        f"slope_{i + 1}" for i in range(dim)
    ]


def csv_rows(sol: PiecewiseLinearSolution):
    for seg in sol.segments:
        yield [seg.t_start, seg.t_end, *seg.intercept, *seg.slope]
