"""
Series-form integration of polynomial systems.

The explicit first-order scheme ``y_{n+1} = y_n + tau * f(y_n)`` is carried
out on states stored as tau-series: ``f`` is evaluated on the coefficient
vectors with polynomial arithmetic (exact, because ``f`` is a polynomial),
the result is added one power of tau higher, and digit shifting keeps each
coefficient below ``1/tau``. The represented values therefore reproduce the
plain floating-point Euler iterates.

Two representations are supported:

* the full series ``a_0 + a_1 tau + ... + a_p tau**p`` (:func:`integrate_full`);
* the split form ``alpha tau**q + beta tau**p`` (:func:`integrate_split`), where
  ``alpha`` is the regular part on the tau-grid and ``beta`` the trailing,
  quasi-random block linked to it by a single carry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import InvalidSplit, MissingSeriesStates, NonFinite
from .systems import PolySystem, eval_rhs, retained_terms
from .tau_series import ShiftFunction, ShiftKind, TauSeries, normalize_array

MAX_SNAPSHOTS = 10_000


@dataclass
class SeriesState:
    """Per-component tau-series; ``coeffs[i, m]`` is ``a_m`` of component ``i``."""

    tau: float
    coeffs: np.ndarray

    @property
    def p(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def components(self) -> list[TauSeries]:
        return [TauSeries(self.tau, row.tolist()) for row in self.coeffs]

    def values(self) -> np.ndarray:
        acc = np.zeros(self.dim)
        power = 1.0
        for m in range(self.p + 1):
            acc = acc + self.coeffs[:, m] * power
            power *= self.tau
        return acc

    @classmethod
    def from_values(cls, y0, tau: float, p: int, shift: ShiftFunction | None = None) -> "SeriesState":
        rows = [TauSeries.from_value(float(y), tau, p).coeffs for y in y0]
        coeffs = np.array(rows, dtype=float)
        normalize_array(coeffs, shift or ShiftFunction(ShiftKind.MOD_CARRY, tau))
        return cls(tau, coeffs)


@dataclass
class SplitState:
    q: int
    p: int
    alpha: np.ndarray
    beta: np.ndarray
    tau: float

    def __post_init__(self):
        if self.q >= self.p:
            raise InvalidSplit(f"need q < p, got q={self.q}, p={self.p}")
        self.alpha = np.asarray(self.alpha, dtype=float)
        self.beta = np.asarray(self.beta, dtype=float)

    def values(self) -> np.ndarray:
        return self.alpha * self.tau ** self.q + self.beta * self.tau ** self.p

    @property
    def beta_bound(self) -> float:
        return self.tau ** -(self.p - self.q)

    @classmethod
    def from_values(cls, y0, tau: float, q: int, p: int) -> "SplitState":
        y = np.asarray(y0, dtype=float)
        alpha = np.trunc(y / tau ** q)
        beta = (y - alpha * tau ** q) / tau ** p
        return cls(q, p, alpha, beta, tau)


@dataclass
class Trajectory:
    tau: float
    times: np.ndarray
    states: np.ndarray
    names: tuple = ()
    series_states: np.ndarray | None = None
    series_steps: np.ndarray | None = None
    split_states: np.ndarray | None = None
    q: int = 1
    p: int | None = None
    extra: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    @property
    def n_steps(self) -> int:
        return len(self.times) - 1


def default_stride(n_steps: int) -> int:
    if n_steps <= MAX_SNAPSHOTS:
        return 1
    return math.ceil(n_steps / MAX_SNAPSHOTS)


def _series_rhs(sys: PolySystem, coeffs: np.ndarray) -> np.ndarray:
    """Coefficients of ``f(y)`` as a polynomial in tau, untruncated.

    Row ``i`` holds equation ``i``; column ``k`` multiplies ``tau**k``.
    """
    p = coeffs.shape[1] - 1
    width = p * max(sys.degree, 1) + 1
    out = np.zeros((sys.dim, width))
    powers = {}

    def power(j, e):
        key = (j, e)
        if key not in powers:
            powers[key] = coeffs[j] if e == 1 else np.convolve(power(j, e - 1), coeffs[j])
        return powers[key]

    for i, eq in enumerate(sys.equations):
        for mono in eq:
            poly = np.array([mono.coefficient])
            for j, e in enumerate(mono.exponents):
                if e:
                    poly = np.convolve(poly, power(j, e))
            out[i, : poly.size] += poly
    return out


def step_full(state: SeriesState, sys: PolySystem, shift: ShiftFunction | None = None,
              tail: str = "fold") -> SeriesState:
    """Advance one layer of the first-order explicit scheme.

    ``tau * f(y)`` is added to the series one power higher. Powers of tau
    beyond ``p`` are folded into ``a_p`` (scaled by ``tau**(k - p)``) with
    ``tail="fold"``, which keeps the represented value exact; ``tail="drop"``
    discards them instead, the literal truncation at ``p = r + 1``.
    """
    tau, p = state.tau, state.p
    shift = shift or ShiftFunction(ShiftKind.MOD_CARRY, tau)
    rhs = _series_rhs(sys, state.coeffs)
    new = state.coeffs.copy()
    head = min(p, rhs.shape[1])
    new[:, 1 : head + 1] += rhs[:, :head]
    if tail == "fold":
        scale = tau
        for k in range(p, rhs.shape[1]):
            new[:, p] += rhs[:, k] * scale
            scale *= tau
    elif tail != "drop":
        raise ValueError(f"tail must be 'fold' or 'drop', got {tail!r}")
    normalize_array(new, shift)
    return SeriesState(tau, new)


def _check_finite(values, n):
    if not np.all(np.isfinite(values)):
        raise NonFinite(f"state became non-finite at step {n}: {values}", step=n)


def integrate_full(sys: PolySystem, y0, tau: float, n_steps: int, shift: ShiftFunction | None = None,
                   stride: int | None = None, tail: str = "fold") -> Trajectory:
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    if len(y0) != sys.dim:
        raise ValueError(f"y0 has {len(y0)} components, system has {sys.dim}")
    p = retained_terms(sys, 1)
    shift = shift or ShiftFunction(ShiftKind.MOD_CARRY, tau)
    stride = stride or default_stride(n_steps)

    state = SeriesState.from_values(y0, tau, p, shift)
    states = np.empty((n_steps + 1, sys.dim))
    states[0] = state.values()
    snaps, snap_steps = [state.coeffs.copy()], [0]
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_steps + 1):
            state = step_full(state, sys, shift, tail)
            states[n] = state.values()
            _check_finite(states[n], n)
            if n % stride == 0:
                snaps.append(state.coeffs.copy())
                snap_steps.append(n)

    return Trajectory(
        tau=tau,
        times=np.arange(n_steps + 1) * tau,
        states=states,
        names=sys.names,
        series_states=np.array(snaps),
        series_steps=np.array(snap_steps),
        q=1,
        p=p,
    )


def step_split(state: SplitState, sys: PolySystem, shift: ShiftFunction | None = None) -> SplitState:
    """One Euler layer in the form ``alpha tau**q + beta tau**p``.

    The increment ``tau f(y)`` is accumulated into ``beta`` in units of
    ``tau**p``; the block is wrapped modulo ``tau**-(p-q)`` and the integer
    overflow carried into ``alpha``.
    """
    tau, q, p = state.tau, state.q, state.p
    kind = shift.kind if shift is not None else ShiftKind.MOD_CARRY
    block = ShiftFunction(kind, tau ** (p - q))
    rhs = eval_rhs(sys, state.values())
    raw = state.beta + rhs * tau ** (1 - p)
    beta, carry = block.apply(raw)
    return SplitState(q, p, state.alpha + carry, beta, tau)


def integrate_split(sys: PolySystem, y0, tau: float, n_steps: int, shift: ShiftFunction | None = None,
                    q: int = 1, stride: int | None = None) -> Trajectory:
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    p = retained_terms(sys, 1)
    stride = stride or default_stride(n_steps)
    state = SplitState.from_values(y0, tau, q, p)
    states = np.empty((n_steps + 1, sys.dim))
    states[0] = state.values()
    snaps, snap_steps = [np.stack([state.alpha, state.beta])], [0]
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_steps + 1):
            state = step_split(state, sys, shift)
            states[n] = state.values()
            _check_finite(states[n], n)
            if n % stride == 0:
                snaps.append(np.stack([state.alpha, state.beta]))
                snap_steps.append(n)
    return Trajectory(
        tau=tau,
        times=np.arange(n_steps + 1) * tau,
        states=states,
        names=sys.names,
        split_states=np.array(snaps),
        series_steps=np.array(snap_steps),
        q=q,
        p=p,
    )


def extract_random_part(traj: Trajectory, coeff_index: int | None = None, component: int | None = None) -> np.ndarray:
    """Trailing-coefficient sequence mapped to ``[0, 1)``.

    For a full-series trajectory this is ``a_{coeff_index}`` at every stored
    snapshot; for a split trajectory it is ``beta`` (``coeff_index`` must
    then be ``p`` or None). Values are reduced as ``(x * tau) mod 1`` with a
    floor remainder, i.e. the residue of the coefficient modulo ``1/tau``.
    ``component=None`` concatenates all components.
    """
    p = traj.p
    if coeff_index is None:
        coeff_index = p
    if p is None or not traj.q < coeff_index <= p:
        raise ValueError(f"coeff_index must lie in ({traj.q}, {p}], got {coeff_index}")
    if traj.series_states is not None:
        raw = traj.series_states[:, :, coeff_index]
        unit = traj.tau
    elif traj.split_states is not None:
        if coeff_index != p:
            raise ValueError("a split trajectory only stores the trailing block beta")
        raw = traj.split_states[:, 1, :]
        unit = traj.tau ** (p - traj.q)
    else:
        raise MissingSeriesStates("trajectory carries no series snapshots")
    raw = raw if component is None else raw[:, component : component + 1]
    return np.mod(raw.T.ravel() * unit, 1.0)


def uniformity_report(samples, bins: int = 16) -> dict:
    """Chi-square (equal bins on [0, 1)) and Kolmogorov-Smirnov against U(0, 1)."""
    u = np.asarray(samples, dtype=float)
    degenerate = u.size < 2 or np.ptp(u) == 0.0
    counts, _ = np.histogram(u, bins=bins, range=(0.0, 1.0))
    chi2 = stats.chisquare(counts)
    ks = stats.kstest(u, "uniform")
    return {
        "n": int(u.size),
        "bins": bins,
        "chi2": float(chi2.statistic),
        "chi2_pvalue": float(chi2.pvalue),
        "ks": float(ks.statistic),
        "ks_pvalue": float(ks.pvalue),
        "degenerate": bool(degenerate),
    }
