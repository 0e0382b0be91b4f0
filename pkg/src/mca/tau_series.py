"""
Values stored as a segment of a power series in the step ``tau``.

A number is held as coefficients ``a_0 .. a_p`` of ``tau**0 .. tau**p``,
the analogue of a positional numeral written in base ``1/tau``. Digit
shifting (:func:`normalize`) moves the overflow of each coefficient into
the next lower power, so that every coefficient with index >= 1 stays
bounded by ``1/tau`` while the represented value is unchanged.

Binary powers of two are the natural choice for ``tau``: multiplying by
``tau`` or ``1/tau`` is then exact in floating point, and so is every
carry.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSplit

#: Default step, 2**-10.
DEFAULT_TAU = 2.0 ** -10


class ShiftKind(enum.Enum):
    MOD_CARRY = "mod"
    SYMMETRIC_SAWTOOTH = "sawtooth"


@dataclass(frozen=True)
class ShiftFunction:
    """The shifting function ``psi(x) = phi(tau * x) / tau``.

    ``MOD_CARRY`` is the truncating remainder ``x mod 1/tau`` (the result
    keeps the sign of ``x``). ``SYMMETRIC_SAWTOOTH`` wraps ``tau * x`` into
    ``[-1, 1]`` by subtracting the nearest even integer, so its carries are
    always even.
    """

    kind: ShiftKind = ShiftKind.MOD_CARRY
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau!r}")
        if not isinstance(self.kind, ShiftKind):
            object.__setattr__(self, "kind", ShiftKind(self.kind))

    def bounded(self, x):
        if self.kind is ShiftKind.MOD_CARRY:
            return np.fmod(x, 1.0 / self.tau)
        width = 2.0 / self.tau
        return x - width * np.round(x / width)

    def apply(self, x):
        """Return ``(bounded, carry)`` with ``x == bounded + carry / tau``.

        ``carry`` is expressed in units of the next lower coefficient.
        Works elementwise on arrays.
        """
        b = self.bounded(x)
        return b, self.tau * (x - b)


def apply_shift(f: ShiftFunction, x):
    return f.apply(x)


@dataclass(frozen=True)
class CarryRecord:
    """Amount ``delta`` moved from coefficient ``index`` into ``index - 1``."""

    index: int
    delta: float


@dataclass(frozen=True)
class TauSeries:
    tau: float
    coeffs: tuple = field(default=(0.0,))

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau!r}")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a TauSeries needs at least one coefficient")

    @property
    def p(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_value(cls, y: float, tau: float, p: int = 1) -> "TauSeries":
        """Integer part in ``a_0``, the remainder in ``a_1`` (in units of tau)."""
        a0 = float(math.trunc(y))
        coeffs = [0.0] * (p + 1)
        coeffs[0] = a0
        if p >= 1:
            coeffs[1] = (y - a0) / tau
        else:
            coeffs[0] = y
        return cls(tau, coeffs)

    def value(self) -> float:
        return value(self)

    def normalize(self, f: ShiftFunction | None = None) -> "TauSeries":
        return normalize(self, f)

    def split(self, q: int, p: int | None = None):
        return split(self, q, self.p if p is None else p)


def value(s: TauSeries) -> float:
    """Evaluate ``sum(a_m * tau**m)`` in order of increasing ``m``."""
    total = 0.0
    power = 1.0
    for c in s.coeffs:
        total += c * power
        power *= s.tau
    return total


def normalize_array(coeffs: np.ndarray, f: ShiftFunction, records: list | None = None) -> np.ndarray:
    """Digit-shift coefficient rows in place, last axis = power of tau.

    Carries run from the highest index down to 1 in a single pass;
    index 0 absorbs the final carry unbounded.
    """
    for k in range(coeffs.shape[-1] - 1, 0, -1):
        bounded, carry = f.apply(coeffs[..., k])
        coeffs[..., k] = bounded
        coeffs[..., k - 1] += carry
        if records is not None:
            records.append(CarryRecord(k, carry))
    return coeffs


def normalize(s: TauSeries, f: ShiftFunction | None = None, records: list | None = None) -> TauSeries:
    if f is None:
        f = ShiftFunction(ShiftKind.MOD_CARRY, s.tau)
    elif f.tau != s.tau:
        raise ValueError("shift function and series use different tau")
    arr = np.array(s.coeffs, dtype=float)
    recs = [] if records is not None else None
    normalize_array(arr, f, recs)
    if records is not None:
        records.extend(CarryRecord(r.index, float(r.delta)) for r in recs)
    return TauSeries(s.tau, arr.tolist())


def split(s: TauSeries, q: int, p: int):
    """Regroup into ``alpha * tau**q + beta * tau**p``.

    Returns the pair ``(alpha, beta)``; see
    :class:`mca.integrator.SplitState` for the stepping form.
    """
    if q >= p:
        raise InvalidSplit(f"need q < p, got q={q}, p={p}")
    if q < 0 or p > s.p:
        raise InvalidSplit(f"split orders q={q}, p={p} outside 0..{s.p}")
    tau = s.tau
    alpha = sum(s.coeffs[i] * tau ** (i - q) for i in range(q + 1))
    beta = sum(s.coeffs[i] * tau ** (i - p) for i in range(q + 1, p + 1))
    return alpha, beta
