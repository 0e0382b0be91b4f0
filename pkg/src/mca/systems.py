"""
Autonomous ODE systems ``dy/dt = f(y)`` with polynomial right-hand sides.

Each equation is a list of :class:`Monomial` terms. Parameters are baked
into the coefficients at construction, so a system is an immutable value.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidSystem, UnknownSystem, UnsupportedSchemeOrder


@dataclass(frozen=True)
class Monomial:
    coefficient: float
    exponents: tuple

    def __post_init__(self):
        exps = tuple(self.exponents)
        for e in exps:
            if isinstance(e, bool) or int(e) != e or e < 0:
                raise InvalidSystem(f"exponents must be natural numbers, got {exps}")
        object.__setattr__(self, "exponents", tuple(int(e) for e in exps))
        object.__setattr__(self, "coefficient", float(self.coefficient))

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __call__(self, point) -> float:
        # Repeated multiplication, left to right; keeps integer inputs exact.
        term = self.coefficient
        for x, e in zip(point, self.exponents):
            for _ in range(e):
                term = term * x
        return term


@dataclass(frozen=True)
class PolySystem:
    dim: int
    equations: tuple
    names: tuple = ()
    name: str = "custom"

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidSystem("dim must be at least 1")
        eqs = tuple(tuple(eq) for eq in self.equations)
        if len(eqs) != self.dim:
            raise InvalidSystem(f"expected {self.dim} equations, got {len(eqs)}")
        for eq in eqs:
            for mono in eq:
                if not isinstance(mono, Monomial):
                    raise InvalidSystem(f"not a Monomial: {mono!r}")
                if len(mono.exponents) != self.dim:
                    raise InvalidSystem(
                        f"monomial {mono} has {len(mono.exponents)} exponents, system dim is {self.dim}"
                    )
        object.__setattr__(self, "equations", eqs)
        names = tuple(self.names) or tuple(f"y{i + 1}" for i in range(self.dim))
        if len(names) != self.dim:
            raise InvalidSystem("names must have one label per component")
        object.__setattr__(self, "names", names)

    def __call__(self, point):
        return eval_rhs(self, point)

    @property
    def degree(self) -> int:
        return degree(self)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "names": list(self.names),
            "equations": [
                [{"c": m.coefficient, "e": list(m.exponents)} for m in eq] for eq in self.equations
            ],
        }

    @classmethod
    def from_json(cls, doc) -> "PolySystem":
        """Build from ``{"dim": N, "equations": [[{"c": .., "e": [..]}, ..], ..]}``.

        ``doc`` may be a dict or a JSON string.
        """
        if isinstance(doc, (str, bytes)):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise InvalidSystem(f"system JSON does not parse: {exc}") from None
        try:
            dim = int(doc["dim"])
            equations = [
                [Monomial(term["c"], term["e"]) for term in eq] for eq in doc["equations"]
            ]
        except (KeyError, TypeError) as exc:
            raise InvalidSystem(f"malformed system document: {exc!r}") from None
        return cls(dim, equations, tuple(doc.get("names", ())), doc.get("name", "custom"))


def eval_rhs(sys: PolySystem, point) -> np.ndarray:
    """Evaluate every right-hand side at ``point``."""
    if len(point) != sys.dim:
        raise DimensionMismatch(f"point has {len(point)} components, system has {sys.dim}")
    pt = [float(x) for x in point]
    out = np.empty(sys.dim)
    for i, eq in enumerate(sys.equations):
        acc = 0.0
        for mono in eq:
            acc = acc + mono(pt)
        out[i] = acc
    return out


def degree(sys: PolySystem) -> int:
    return max((m.degree for eq in sys.equations for m in eq), default=0)


def retained_terms(sys: PolySystem, scheme_order: int = 1) -> int:
    """Number of retained powers of tau, ``p = r + 1`` for the first-order scheme."""
    if scheme_order != 1:
        raise UnsupportedSchemeOrder(
            f"only the first-order explicit scheme is implemented, got order {scheme_order}"
        )
    return degree(sys) + scheme_order


def _mono(c, *exps):
    return Monomial(c, exps)


def example1() -> PolySystem:
    """``u' = v**2 - u**2``, ``v' = u**2 - 2 v``."""
    return PolySystem(
        2,
        [
            [_mono(1.0, 0, 2), _mono(-1.0, 2, 0)],
            [_mono(1.0, 2, 0), _mono(-2.0, 0, 1)],
        ],
        ("u", "v"),
        "example1",
    )


def van_der_pol(lam: float = 1.0) -> PolySystem:
    """Van der Pol oscillator as a first-order system.

    ``u' = v``, ``v' = (lam - u**2) v - u``.
    """
    return PolySystem(
        2,
        [
            [_mono(1.0, 0, 1)],
            [_mono(lam, 0, 1), _mono(-1.0, 2, 1), _mono(-1.0, 1, 0)],
        ],
        ("u", "v"),
        "vanderpol",
    )


def lorenz(sigma: float = 3.0, r: float = 15.0, v: float = 1.0) -> PolySystem:
    return PolySystem(
        3,
        [
            [_mono(sigma, 0, 1, 0), _mono(-sigma, 1, 0, 0)],
            [_mono(r, 1, 0, 0), _mono(-1.0, 1, 0, 1), _mono(-1.0, 0, 1, 0)],
            [_mono(1.0, 1, 1, 0), _mono(-v, 0, 0, 1)],
        ],
        ("x", "y", "z"),
        "lorenz",
    )


BUILTINS = {
    "example1": (example1, {}),
    "vanderpol": (van_der_pol, {"lambda": "lam"}),
    "lorenz": (lorenz, {"sigma": "sigma", "r": "r", "v": "v"}),
}

DEFAULT_Y0 = {
    "example1": (1.0, 0.0),
    "vanderpol": (0.0, 1.0),
    "lorenz": (3.0, 2.0, 15.0),
}


def builtin(name: str, params: dict | None = None) -> PolySystem:
    """Construct a builtin system by id; unknown parameter names are ignored."""
    try:
        ctor, mapping = BUILTINS[name]
    except KeyError:
        raise UnknownSystem(f"unknown system {name!r}; known: {sorted(BUILTINS)}") from None
    kwargs = {}
    for key, val in (params or {}).items():
        if key in mapping and val is not None:
            val = float(val)
            if not np.isfinite(val):
                raise InvalidSystem(f"parameter {key} must be finite")
            kwargs[mapping[key]] = val
    return ctor(**kwargs)
