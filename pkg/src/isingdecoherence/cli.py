"""Command-line front end.

Subcommands: ``factor``, ``concurrence``, ``negativity``, ``sweep``,
``figure <id>`` and ``verify``.  Each writes one data file (CSV with
``#`` comment lines, or JSON) and, when ``--out`` is given, a
``<out>.meta.json`` sidecar with the resolved run parameters.

Exit codes: 0 success, 1 invalid arguments, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import __version__
from .decoherence import (
    all_pair_series,
    mode_factors,
    partial_product,
    partial_sum_S,
    quartic_rates,
    uniform_grid,
)
from .measures import (
    PureAmplitudes,
    WernerParams,
    concurrence_series,
    concurrence_werner,
    negativity_eigen_oracle,
    negativity_pure,
    negativity_series,
    negativity_werner_general,
)
from .oracle import oracle_mode_factors, random_dephased_state, wootters_concurrence
from .output import table_rows, write_table
from .presets import PRESETS
from .spectrum import ChainConfig, branch_lambdas, branch_values, build_spectrum

log = logging.getLogger(__name__)

MODES = ("factor", "concurrence", "negativity", "sweep", "figure", "verify")
SWEEPABLE = ("lambda", "g", "L", "P")
MODE_TOL = 1e-9
PRODUCT_TOL = 1e-8
MEASURE_TOL = 1e-10

# (flag, config key, dest, help)
OPTIONS = [
    ("--L", "L", "L", "number of chain spins"),
    ("--lambda", "lambda", "lam", "transverse field"),
    ("--g", "g", "g", "system-chain coupling"),
    ("--d", "d", "d", "local dimension of each system spin"),
    ("--P", "P", "P", "Werner weight (selects the Werner state)"),
    ("--amps", "amps", "amps", "comma-separated pure-state amplitudes"),
    ("--tmax", "tmax", "tmax", "end of the time grid"),
    ("--points", "points", "points", "number of time-grid points"),
    ("--Kc", "Kc", "Kc", "mode cutoff for the approximation columns"),
    ("--angle-convention", "angle-convention", "convention", "atan2 or arcsin"),
    ("--out", "out", "out", "output path (stdout if omitted)"),
    ("--format", "format", "fmt", "csv or json"),
    ("--seed", "seed", "seed", "random seed for verify"),
    ("--jobs", "jobs", "jobs", "worker count"),
    ("--samples", "samples", "samples", "number of random draws for verify"),
    ("--measure", "measure", "measure", "quantity for sweep: factor, concurrence or negativity"),
]
CONFIG_KEYS = {key: dest for _, key, dest, _ in OPTIONS}

DEFAULTS = {
    "L": "300", "lam": "2.0", "g": "0.1", "tmax": "20.0", "points": "500",
    "convention": "atan2", "fmt": "csv", "seed": "0", "jobs": "1", "samples": "200",
}


class SpecError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SpecError(message)


@dataclass(frozen=True)
class RunSpec:
    mode: str
    L: int | None = None
    lam: float | None = None
    g: float | None = None
    d: int = 2
    P: float | None = None
    amps: tuple | None = None
    tmax: float = 20.0
    points: int = 500
    Kc: int | None = None
    convention: str = "atan2"
    out: str | None = None
    fmt: str = "csv"
    seed: int = 0
    jobs: int = 1
    samples: int = 200
    measure: str | None = None
    figure: str | None = None
    axis: str | None = None
    values: tuple | None = None

    @property
    def config(self) -> ChainConfig:
        return ChainConfig(self.L, self.lam, self.g)

    def state(self):
        if self.P is not None:
            return WernerParams(self.P, self.d)
        if self.amps is not None:
            return PureAmplitudes(self.amps)
        return PureAmplitudes.maximally_entangled(self.d)

    def grid(self) -> np.ndarray:
        return uniform_grid(self.tmax, self.points)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    for flag, _, dest, help_ in OPTIONS:
        common.add_argument(flag, dest=dest, default=argparse.SUPPRESS, help=help_)
    common.add_argument("--config", dest="config_file", default=argparse.SUPPRESS,
                        help="key=value file; command-line flags take precedence")

    parser = _Parser(prog="isingdecoherence", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    for mode in MODES:
        p = sub.add_parser(mode, parents=[common])
        if mode == "figure":
            p.add_argument("figure", choices=sorted(PRESETS))
    return parser


def read_config(path) -> dict:
    out = {}
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise SpecError(f"cannot read config file: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lstrip("-")
        if not sep or key not in CONFIG_KEYS:
            raise SpecError(f"{path}:{n}: unknown or malformed entry {line!r}")
        out[CONFIG_KEYS[key]] = value.strip()
    return out


def parse_values(text: str, integer=False) -> tuple:
    """``a:b:step`` (inclusive) or ``v1,v2,...`` into a tuple of numbers."""
    conv = int if integer else float
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0 or stop < start:
                raise SpecError(f"empty range {text!r}")
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            vals = [round(start + i * step, 12) for i in range(n)]
        else:
            vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise SpecError(f"bad value list {text!r}") from exc
    if not vals:
        raise SpecError(f"empty range {text!r}")
    if integer:
        if any(v != int(v) for v in vals):
            raise SpecError(f"expected integers in {text!r}")
    return tuple(conv(v) for v in vals)


def _number(raw, key, conv):
    try:
        return conv(raw[key])
    except (TypeError, ValueError) as exc:
        raise SpecError(f"invalid value for {key}: {raw.get(key)!r}") from exc


def _int(text):
    f = float(text)
    if f != int(f):
        raise ValueError(text)
    return int(f)


def resolve(ns: argparse.Namespace) -> RunSpec:
    """Merge defaults, config file and flags into a validated :class:`RunSpec`."""
    given = {k: v for k, v in vars(ns).items() if k not in ("mode", "figure", "verbose", "config_file")}
    raw = dict(DEFAULTS)
    if hasattr(ns, "config_file"):
        raw.update(read_config(ns.config_file))
    raw.update(given)
    mode = ns.mode
    figure = getattr(ns, "figure", None)

    if mode == "figure":
        extra = {k for k in given if k not in ("tmax", "points", "convention", "out", "fmt", "jobs")}
        if extra:
            raise SpecError(f"figure presets fix the physical parameters; unexpected: {sorted(extra)}")
        preset = PRESETS[figure]
        tmax = float(given["tmax"]) if "tmax" in given else preset.tmax
        points = _int(given["points"]) if "points" in given else preset.points
        base = {"L": preset.base.get("L"), "lam": preset.base.get("lambda"), "g": preset.base.get("g")}
        spec = RunSpec(mode="sweep", figure=figure, measure=preset.measure, d=preset.d,
                       axis=preset.axis, values=tuple(preset.values), tmax=tmax, points=points,
                       P=None, convention=raw["convention"], out=raw.get("out"), fmt=raw["fmt"],
                       jobs=_number(raw, "jobs", _int), **base)
        _validate(spec)
        return spec

    axis = values = None
    if mode == "sweep":
        ranged = [a for a in SWEEPABLE if _is_range(raw.get(_dest(a)))]
        if len(ranged) != 1:
            raise SpecError(f"sweep needs exactly one ranged parameter among {SWEEPABLE}, got {ranged}")
        axis = ranged[0]
        values = parse_values(raw.pop(_dest(axis)), integer=axis == "L")

    d_default = "3" if mode == "negativity" else "2"
    amps = None
    if "amps" in raw:
        try:
            amps = tuple(complex(x.strip().replace("i", "j")) for x in raw["amps"].split(","))
        except ValueError as exc:
            raise SpecError(f"invalid --amps {raw['amps']!r}") from exc
        amps = tuple(a.real if a.imag == 0 else a for a in amps)
    measure = raw.get("measure")
    if mode == "sweep":
        measure = measure or ("negativity" if _number({"d": raw.get("d", "2")}, "d", _int) > 2 else "concurrence")
    elif measure is not None:
        raise SpecError("--measure only applies to sweep")

    spec = RunSpec(
        mode=mode,
        L=None if axis == "L" else _number(raw, "L", _int),
        lam=None if axis == "lambda" else _number(raw, "lam", float),
        g=None if axis == "g" else _number(raw, "g", float),
        d=_number({"d": raw.get("d", d_default)}, "d", _int),
        P=None if axis == "P" or "P" not in raw else _number(raw, "P", float),
        amps=amps,
        tmax=_number(raw, "tmax", float),
        points=_number(raw, "points", _int),
        Kc=None if "Kc" not in raw else _number(raw, "Kc", _int),
        convention=raw["convention"],
        out=raw.get("out"),
        fmt=raw["fmt"],
        seed=_number(raw, "seed", _int),
        jobs=_number(raw, "jobs", _int),
        samples=_number(raw, "samples", _int),
        measure=measure,
        axis=axis,
        values=values,
    )
    _validate(spec)
    return spec


def _dest(axis):
    return {"lambda": "lam"}.get(axis, axis)


def _is_range(text):
    return text is not None and (":" in str(text) or "," in str(text))


def _validate(spec: RunSpec):
    if spec.convention not in ("atan2", "arcsin"):
        raise SpecError(f"unknown angle convention {spec.convention!r}")
    if spec.fmt not in ("csv", "json"):
        raise SpecError(f"unknown format {spec.fmt!r}")
    if spec.jobs < 1 or spec.samples < 1:
        raise SpecError("--jobs and --samples must be positive")
    if spec.mode == "verify":
        return
    if spec.points < 1 or not spec.tmax > 0:
        raise SpecError("need --points >= 1 and --tmax > 0")
    if spec.P is not None and spec.amps is not None:
        raise SpecError("give either --P (Werner) or --amps (pure), not both")
    if spec.mode == "concurrence" and spec.d != 2:
        raise SpecError("concurrence is defined here for qubits only (d = 2)")
    if spec.mode == "sweep" and spec.measure not in ("factor", "concurrence", "negativity"):
        raise SpecError(f"unknown measure {spec.measure!r}")
    if spec.measure == "concurrence" and spec.d != 2:
        raise SpecError("concurrence sweeps need d = 2")
    if spec.axis == "P" and spec.measure == "factor":
        raise SpecError("a P sweep needs a concurrence or negativity measure")
    for point in _sweep_points(spec):
        point.config
        point.state()
        if point.amps is not None and len(point.amps) != point.d:
            raise SpecError(f"{len(point.amps)} amplitudes given for d={point.d}")
        if point.Kc is not None and not 1 <= point.Kc <= point.config.M:
            raise SpecError(f"--Kc must lie in 1..{point.config.M}")


def _sweep_points(spec: RunSpec) -> list[RunSpec]:
    if spec.axis is None:
        return [spec]
    key = _dest(spec.axis)
    return [replace(spec, axis=None, values=None, **{key: v}) for v in spec.values]


def _pair_label(pair, d):
    return "F" if d == 2 else f"F_{pair[0]}{pair[1]}"


def factor_columns(spec: RunSpec):
    config, times = spec.config, spec.grid()
    series = all_pair_series(config, times, spec.d, spec.convention, spec.jobs)
    names, curves = [], []
    for pair, s in sorted(series.items()):
        names.append(_pair_label(pair, spec.d))
        curves.append(s.values)
    if spec.Kc is not None:
        for pair in sorted(series):
            names.append(_pair_label(pair, spec.d) + "_c")
            curves.append(np.asarray(partial_product(config, pair, spec.Kc, times, spec.d, spec.convention)))
        if spec.d == 2:
            lam0, lam1 = branch_lambdas(config, 2)
            rates = quartic_rates(config, spec.Kc, spec.convention)
            names += ["exp_S", "exp_gamma_t4", "exp_Gamma_t4"]
            curves += [
                np.exp(partial_sum_S(config, lam0, lam1, spec.Kc, times)),
                np.exp(-rates.gamma * times**4),
                np.exp(-rates.Gamma * times**4),
            ]
    return names, curves


def measure_columns(spec: RunSpec):
    config, times = spec.config, spec.grid()
    if spec.mode == "concurrence" or spec.measure == "concurrence":
        return ["C"], [concurrence_series(config, times, spec.state(), spec.convention, spec.jobs).values]
    series = negativity_series(config, times, spec.d, spec.state(), spec.convention, spec.jobs)
    if spec.mode == "negativity":
        factors = all_pair_series(config, times, spec.d, spec.convention, spec.jobs)
        names = ["N"] + [_pair_label(p, spec.d) for p in sorted(factors)]
        return names, [series.values] + [factors[p].values for p in sorted(factors)]
    return ["N"], [series.values]


def _sweep_task(spec: RunSpec):
    spec = replace(spec, jobs=1)
    if spec.measure == "factor":
        return factor_columns(spec)
    return measure_columns(spec)


def _fmt_axis(value):
    return repr(value) if isinstance(value, float) else str(value)


def sweep_columns(spec: RunSpec):
    points = _sweep_points(spec)
    if spec.jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=min(spec.jobs, len(points))) as pool:
            results = list(pool.map(_sweep_task, points))
    else:
        results = [_sweep_task(p) for p in points]
    names, curves = [], []
    for value, (cols, vals) in zip(spec.values, results):
        for c, v in zip(cols, vals):
            names.append(f"{c}[{spec.axis}={_fmt_axis(value)}]")
            curves.append(v)
    return names, curves


def run_verify(spec: RunSpec):
    """Closed forms against the matrix-exponential and eigensolver oracles."""
    rng = np.random.default_rng(spec.seed)
    columns = ["check", "index", "L", "lambda", "g", "t", "d", "P", "closed", "oracle", "abs_diff", "ok"]
    rows, failures = [], 0
    for n in range(spec.samples):
        lam, g = rng.uniform(0, 4), rng.uniform(0, 2)
        L = int(rng.choice([11, 51, 101]))
        t = rng.uniform(0, 20)
        config = ChainConfig(L, lam, g)
        lam0, lam1 = branch_values(lam, g, 2)
        s0 = build_spectrum(config, lam0, convention=spec.convention)
        s1 = build_spectrum(config, lam1, convention=spec.convention)
        closed = mode_factors(s0, s1, t)
        oracle = oracle_mode_factors(L, lam0, lam1, t)
        mode_diff = float(np.max(np.abs(closed - oracle)))
        pc, po = float(np.prod(closed)), float(np.prod(oracle))
        ok = mode_diff <= MODE_TOL and abs(pc - po) <= PRODUCT_TOL
        failures += not ok
        rows.append(("mode_factor", n, L, lam, g, t, 2, None, pc, po, mode_diff, ok))

    for n in range(spec.samples):
        d = int(rng.choice([2, 3]))
        werner = bool(rng.uniform() < 0.5)
        state, factors, rho = random_dephased_state(rng, d, werner)
        if werner:
            P = state.P
            closed = float(negativity_werner_general(P, d, factors))
            kind = "negativity_werner"
            if d == 2:
                c_closed = float(concurrence_werner(P, factors[0]))
                c_oracle = wootters_concurrence(rho)
                ok = abs(c_closed - c_oracle) <= MEASURE_TOL
                failures += not ok
                rows.append(("concurrence_werner", n, None, None, None, None, d, P, c_closed, c_oracle,
                             abs(c_closed - c_oracle), ok))
        else:
            P = None
            closed = float(negativity_pure(state, factors))
            kind = "negativity_pure"
        oracle = negativity_eigen_oracle(rho)
        ok = abs(closed - oracle) <= MEASURE_TOL
        failures += not ok
        rows.append((kind, n, None, None, None, None, d, P, closed, oracle, abs(closed - oracle), ok))
    return columns, rows, failures


def _params(spec: RunSpec) -> dict:
    p = asdict(spec)
    for k in ("out", "jobs"):
        p.pop(k)
    if p["figure"] is None:
        p.pop("figure")
    if p["mode"] == "verify":
        return {k: p[k] for k in ("mode", "convention", "fmt", "seed", "samples")}
    p.pop("seed")
    p.pop("samples")
    return p


def execute(spec: RunSpec) -> tuple[int, str]:
    start = time.perf_counter()
    status = 0
    if spec.mode == "verify":
        columns, rows, failures = run_verify(spec)
        status = 2 if failures else 0
        log.info("verify: %d of %d checks failed", failures, len(rows))
    else:
        if spec.mode == "factor":
            names, curves = factor_columns(spec)
        elif spec.mode == "sweep":
            names, curves = sweep_columns(spec)
        else:
            names, curves = measure_columns(spec)
        columns = ["t"] + names
        rows = table_rows(spec.grid(), curves)
    params = _params(spec)
    comments = [f"isingdecoherence {__version__} {spec.figure or spec.mode}"]
    comments += [f"{k}={v}" for k, v in params.items() if v is not None]
    meta = {
        "tool": "isingdecoherence",
        "version": __version__,
        "spec": asdict(spec),
        "columns": columns,
        "status": status,
        "wall_time_s": time.perf_counter() - start,
    }
    text = write_table(spec.out, columns, rows, params, spec.fmt, comments, meta)
    return status, text


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(message)s")
    try:
        spec = resolve(ns)
        status, text = execute(spec)
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if spec.out is None:
        sys.stdout.write(text)
    if status:
        print("verification failed: closed form and oracle disagree", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
