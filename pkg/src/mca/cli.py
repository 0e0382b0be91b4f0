"""Command-line entry point, ``mca-solve``.

Data goes to stdout, diagnostics to stderr. Exit status is 0 on success,
2 on an invalid configuration and 3 when the computation itself fails
(non-finite state, slope too large for the step).
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import integrator, linear_approx, reference
from .errors import InvalidSystem, MCAError, NonFinite, SlopeTooLarge, UnknownSystem
from .systems import DEFAULT_Y0, PolySystem, builtin
from .tau_series import DEFAULT_TAU, ShiftFunction, ShiftKind

MODES = ("integrate", "integrate-split", "linear", "compare", "randomness")
OUTPUTS = ("csv", "json", "table")
PARAM_FLAGS = ("lambda", "sigma", "r", "v")

EXIT_CONFIG = 2
EXIT_COMPUTE = 3


class ConfigError(ValueError):
    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class RunConfig:
    mode: str
    system: str = "lorenz"
    params: dict = field(default_factory=dict)
    y0: tuple | None = None
    tau: float = DEFAULT_TAU
    t_max: float = 10.0
    output: str = "csv"
    snapshot_stride: int | None = None
    shift: str = "mod"
    coeff_index: int | None = None
    component: int | None = None
    bins: int = 16

    def build_system(self) -> PolySystem:
        text = self.system.strip()
        try:
            if text.startswith("{"):
                return PolySystem.from_json(text)
            if text.endswith(".json") and Path(text).is_file():
                return PolySystem.from_json(Path(text).read_text())
            return builtin(text, self.params)
        except (UnknownSystem, InvalidSystem) as exc:
            raise ConfigError("system", str(exc).strip("'\"")) from None

    def validate(self) -> PolySystem:
        if self.mode not in MODES:
            raise ConfigError("mode", f"must be one of {MODES}")
        if self.output not in OUTPUTS:
            raise ConfigError("output", f"must be one of {OUTPUTS}")
        if not (math.isfinite(self.tau) and 0.0 < self.tau < 1.0):
            raise ConfigError("tau", f"must lie in (0, 1), got {self.tau}")
        if not math.isfinite(self.t_max) or self.t_max < 0:
            raise ConfigError("t_max", f"must be finite and non-negative, got {self.t_max}")
        if self.mode == "linear" and self.t_max == 0:
            raise ConfigError("t_max", "linear mode needs t_max > 0")
        if self.snapshot_stride is not None and self.snapshot_stride < 1:
            raise ConfigError("snapshot_stride", "must be a positive integer")
        if self.bins < 2:
            raise ConfigError("bins", "need at least 2 bins")
        for name, val in self.params.items():
            if val is not None and not math.isfinite(val):
                raise ConfigError(name, "must be finite")
        system = self.build_system()
        if self.y0 is None:
            if self.system not in DEFAULT_Y0:
                raise ConfigError("y0", "required for a custom system")
            self.y0 = DEFAULT_Y0[self.system]
        if len(self.y0) != system.dim:
            raise ConfigError("y0", f"expected {system.dim} components, got {len(self.y0)}")
        if not all(math.isfinite(y) for y in self.y0):
            raise ConfigError("y0", "components must be finite")
        if self.component is not None and not 0 <= self.component < system.dim:
            raise ConfigError("component", f"must lie in [0, {system.dim})")
        return system

    @property
    def n_steps(self) -> int:
        # Grid-aligned: the final partial step is not taken.
        return int(math.floor(self.t_max / self.tau + 1e-9))

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["y0"] = list(d["y0"]) if d["y0"] is not None else None
        return d


def _floats(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mca-solve",
        description="Series-form integration and piecewise-linear approximation of polynomial ODE systems.",
    )
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--system", default="lorenz",
                        help="builtin id (example1, vanderpol, lorenz), inline JSON, or a .json file")
    parser.add_argument("--lambda", dest="lam", type=float, help="Van der Pol parameter")
    parser.add_argument("--sigma", type=float)
    parser.add_argument("--r", type=float)
    parser.add_argument("--v", type=float)
    parser.add_argument("--y0", type=_floats, help="initial condition, e.g. 3,2,15")
    parser.add_argument("--tau", type=float, default=DEFAULT_TAU)
    parser.add_argument("--t-max", type=float, default=10.0)
    parser.add_argument("--output", choices=OUTPUTS, default="csv")
    parser.add_argument("--snapshot-stride", type=int)
    parser.add_argument("--shift", choices=[k.value for k in ShiftKind], default="mod")
    parser.add_argument("--coeff-index", type=int, help="randomness: trailing coefficient (default p)")
    parser.add_argument("--component", type=int, help="randomness: component index (default all)")
    parser.add_argument("--bins", type=int, default=16)
    return parser


def config_from_args(args, environ=os.environ) -> RunConfig:
    stride = args.snapshot_stride
    env = environ.get("MCA_SNAPSHOT_STRIDE")
    if env:
        try:
            stride = int(env)
        except ValueError:
            raise ConfigError("snapshot_stride", f"MCA_SNAPSHOT_STRIDE={env!r} is not an integer") from None
    params = {"lambda": args.lam, "sigma": args.sigma, "r": args.r, "v": args.v}
    return RunConfig(
        mode=args.mode,
        system=args.system,
        params={k: v for k, v in params.items() if v is not None},
        y0=args.y0,
        tau=args.tau,
        t_max=args.t_max,
        output=args.output,
        snapshot_stride=stride,
        shift=args.shift,
        coeff_index=args.coeff_index,
        component=args.component,
        bins=args.bins,
    )


def _num(x) -> str:
    return format(float(x), ".17g")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(x) if not isinstance(x, str) else x for x in row])
    return buf.getvalue()


def _text_table(header, rows) -> str:
    cells = [list(header)] + [[_num(x) if not isinstance(x, str) else x for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells) + "\n"


def _json(config, payload) -> str:
    return json.dumps({"config": config.as_dict(), **payload}, indent=2) + "\n"


def _render_trajectory(config, traj) -> str:
    header = ["t", *traj.names]
    rows = ([t, *y] for t, y in zip(traj.times, traj.states))
    if config.output == "csv":
        return _csv(header, rows)
    if config.output == "table":
        return _text_table(header, list(rows))
    return _json(config, {"names": list(traj.names), "t": traj.times.tolist(), "states": traj.states.tolist()})


def _render_record(config, record: dict) -> str:
    if config.output == "csv":
        return _csv(list(record), [list(record.values())])
    if config.output == "table":
        width = max(len(k) for k in record)
        return "".join(f"{k.ljust(width)}  {v if isinstance(v, (str, bool)) else _num(v)}\n"
                       for k, v in record.items())
    return _json(config, record)


def run(config: RunConfig, out=None) -> int:
    """Execute one configuration; returns the process exit status."""
    out = out or sys.stdout
    try:
        system = config.validate()
    except ConfigError as exc:
        print(f"mca-solve: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    shift = ShiftFunction(ShiftKind(config.shift), config.tau)
    n = config.n_steps
    try:
        if config.mode == "integrate":
            traj = integrator.integrate_full(system, config.y0, config.tau, n, shift, config.snapshot_stride)
            out.write(_render_trajectory(config, traj))
        elif config.mode == "integrate-split":
            traj = integrator.integrate_split(system, config.y0, config.tau, n, shift, stride=config.snapshot_stride)
            out.write(_render_trajectory(config, traj))
        elif config.mode == "linear":
            sol = linear_approx.build(system, config.y0, config.tau, config.t_max)
            if config.output == "csv":
                out.write(_csv(linear_approx.csv_header(system.names), linear_approx.csv_rows(sol)))
            elif config.output == "table":
                out.write(linear_approx.to_table(sol) + "\n")
            else:
                segs = [dataclasses.asdict(s) for s in sol.segments]
                out.write(_json(config, {"names": list(system.names), "segments": segs}))
        elif config.mode == "compare":
            traj = integrator.integrate_full(system, config.y0, config.tau, n, shift, config.snapshot_stride)
            ref = reference.euler(system, config.y0, config.tau, n)
            out.write(_render_record(config, reference.compare(traj, ref).as_dict()))
        elif config.mode == "randomness":
            traj = integrator.integrate_full(system, config.y0, config.tau, n, shift, config.snapshot_stride)
            idx = traj.p if config.coeff_index is None else config.coeff_index
            try:
                samples = integrator.extract_random_part(traj, idx, config.component)
            except ValueError as exc:
                print(f"mca-solve: invalid configuration: coeff_index: {exc}", file=sys.stderr)
                return EXIT_CONFIG
            report = {"coeff_index": idx, **integrator.uniformity_report(samples, config.bins)}
            out.write(_render_record(config, report))
    except NonFinite as exc:
        print(f"mca-solve: {exc} (step {exc.step})", file=sys.stderr)
        return EXIT_COMPUTE
    except SlopeTooLarge as exc:
        print(f"mca-solve: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except MCAError as exc:
        print(f"mca-solve: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return 0


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except ConfigError as exc:
        print(f"mca-solve: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
