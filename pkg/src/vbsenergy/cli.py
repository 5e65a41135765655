"""Command line front end.

Subcommands evaluate operating points (power), optimize rate and core
count (optimize), sweep a parameter (sweep), compare against the macro
baseline (compare), run the event simulator (simulate), and print the
effective configuration (config-show). Data goes to stdout as CSV with
a fixed column set; diagnostics go to stderr.

Exit codes: 0 success, 2 usage or configuration error, 3 infeasible or
unstable operating point, 4 simulation failed its analytic validation.
"""
from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from dataclasses import replace

import numpy as np

from .config import Settings, apply_override, build_settings, read_config, render_config
from .errors import (
    ConfigError,
    InfeasibleLoadError,
    InfeasibleScenarioError,
    NoEnergyOptimumError,
    PowerCapExceededError,
    UnstableQueueError,
)
from .optimize import (
    Scenario,
    TradeoffPoint,
    best_rate_for_cores,
    cores_needed,
    earth_energy_optimal_rate,
    evaluate_point,
    joint_optimize,
    rate_for_delay,
    scenario_profile,
    tradeoff_curve,
)
from .power import earth_profile
from .queueing import average_power, queue_metrics
from .results import COLUMNS, ResultRow, write_rows
from .simulate import SimConfig, validate_against_analytic
from .units import parse_quantity

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_VALIDATION = 4

_DOMAIN_ERRORS = (
    UnstableQueueError,
    InfeasibleLoadError,
    InfeasibleScenarioError,
    PowerCapExceededError,
    NoEnergyOptimumError,
)

COMPARE_COLUMNS = (
    "scenario_id",
    "delay_s",
    "rate_bps",
    "vbs_cores",
    "vbs_power_w",
    "cbs_power_w",
    "savings",
    "status",
)

SWEEP_VARS = ("target_delay", "alpha", "lambda", "file_size", "n_cores")

_COMPARE_DELAY_MIN_S = 0.05
_COMPARE_DELAY_MAX_S = 5.0
_COMPARE_DELAY_POINTS = 40


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="vbsenergy",
        description="Energy and delay analysis of a virtual base station "
                    "with a computational-resource-aware power model.",
    )
    p.add_argument("--config", metavar="FILE",
                   help="INI file merged over the built-in defaults "
                        "(also via VBSENERGY_CONFIG)")
    sub = p.add_subparsers(dest="command", required=True)

    def add_traffic_flags(sp):
        sp.add_argument("--alpha", metavar="A",
                        help="delay penalty weight, W per queued flow")
        sp.add_argument("--lambda", dest="arrival_rate", metavar="RATE",
                        help="flow arrival rate, e.g. '1.5 /s'")
        sp.add_argument("--file-size", metavar="SIZE",
                        help="mean flow size, e.g. '2 MB' (1 MB = 8e6 bits)")

    def add_output_flag(sp):
        sp.add_argument("--output", metavar="FILE",
                        help="write CSV here instead of stdout")

    sp = sub.add_parser("power", help="evaluate one operating point")
    sp.add_argument("--rate", required=True, metavar="RATE",
                    help="service rate, e.g. '50 Mbps'")
    sp.add_argument("--cores", type=int, metavar="N",
                    help="core count (default: configured n_cores)")
    add_traffic_flags(sp)
    add_output_flag(sp)
    sp.set_defaults(func=cmd_power)

    sp = sub.add_parser("optimize",
                        help="minimize average power plus alpha times queue length")
    sp.add_argument("--cores", type=int, metavar="N",
                    help="fix the core count instead of searching")
    sp.add_argument("--cores-max", type=int, metavar="N",
                    help="search limit (default: configured n_cores_max)")
    sp.add_argument("--verbose", action="store_true",
                    help="list every candidate on stderr")
    add_traffic_flags(sp)
    add_output_flag(sp)
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("sweep", help="evaluate along a parameter grid")
    sp.add_argument("spec", metavar="VAR=START:STOP:STEPS[:log]",
                    help=f"variable in {{{', '.join(SWEEP_VARS)}}}; 'log' for "
                         "a geometric grid; units are SI base units")
    sp.add_argument("--cores", type=int, metavar="N",
                    help="fix the core count instead of auto-sizing")
    sp.add_argument("--cores-max", type=int, metavar="N",
                    help="search limit for optimizing sweeps")
    add_traffic_flags(sp)
    add_output_flag(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("compare",
                        help="virtual station versus the macro baseline")
    sp.add_argument("--policy", choices=("grid", "cbs-optimal"), default="grid",
                    help="'grid' sweeps target delays; 'cbs-optimal' uses the "
                         "baseline's energy-optimal rate (default: grid)")
    add_traffic_flags(sp)
    add_output_flag(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("simulate",
                        help="event simulation with analytic validation")
    sp.add_argument("--rate", required=True, metavar="RATE",
                    help="service rate, e.g. '50 Mbps'")
    sp.add_argument("--cores", type=int, metavar="N",
                    help="core count (default: configured n_cores)")
    sp.add_argument("--seed", metavar="SEED", help="random seed")
    sp.add_argument("--arrivals", metavar="N", help="number of flows to draw")
    sp.add_argument("--trace", metavar="FILE",
                    help="write a per-event trace here")
    add_traffic_flags(sp)
    add_output_flag(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("config-show", help="print the effective configuration")
    add_traffic_flags(sp)
    sp.set_defaults(func=cmd_config_show)

    return p


def _overrides(args) -> list[tuple[str, str, str]]:
    pairs = (
        ("alpha", "run", "alpha"),
        ("arrival_rate", "traffic", "arrival_rate"),
        ("file_size", "traffic", "file_size"),
        ("seed", "run", "seed"),
        ("arrivals", "run", "arrivals"),
    )
    out = []
    for attr, section, key in pairs:
        value = getattr(args, attr, None)
        if value is not None:
            out.append((section, key, value))
    return out


def _settings(args) -> Settings:
    text = read_config(args.config)
    for section, key, value in _overrides(args):
        apply_override(text, section, key, value)
    return build_settings(text)


def _scenario_tag(settings: Settings) -> str:
    t = settings.traffic
    return (f"lam{t.arrival_rate:.6g}-size{t.file_size_bits:.6g}"
            f"-alpha{settings.alpha:.6g}")


@contextmanager
def _out(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _point_row(scenario_id: str, command: str, p: TradeoffPoint,
               source: str = "analytic", seed: int | None = None,
               status: str = "ok") -> ResultRow:
    return ResultRow(
        scenario_id=scenario_id,
        command=command,
        rate_bps=p.rate_bps,
        n_cores=p.n_cores,
        rho=p.rho,
        mean_queue_len=p.mean_queue_len,
        mean_delay_s=p.mean_delay_s,
        avg_power_w=p.avg_power_w,
        cost_z=p.cost_z,
        source=source,
        seed=seed,
        status=status,
    )


def _status_for(exc: Exception) -> str:
    if isinstance(exc, InfeasibleLoadError):
        return "over-compute-cap"
    if isinstance(exc, InfeasibleScenarioError):
        return "infeasible"
    if isinstance(exc, UnstableQueueError):
        return "unstable"
    if isinstance(exc, NoEnergyOptimumError):
        return "no-optimum"
    raise exc


def cmd_power(args) -> int:
    settings = _settings(args)
    sc = settings.scenario
    rate = parse_quantity(args.rate, "bitrate", where="--rate")
    point = evaluate_point(sc, rate, args.cores)
    with _out(args.output) as fh:
        write_rows(fh, [_point_row(_scenario_tag(settings), "power", point)])
    return EXIT_OK


def cmd_optimize(args) -> int:
    settings = _settings(args)
    sc = settings.scenario
    if args.cores is not None:
        rate = best_rate_for_cores(sc, args.cores)
        point = evaluate_point(sc, rate, args.cores)
        candidates: tuple[TradeoffPoint, ...] = (point,)
    else:
        cores_max = args.cores_max or settings.n_cores_max
        result = joint_optimize(sc, cores_max)
        point = result.point
        candidates = result.candidates
    if args.verbose:
        for c in candidates:
            print(f"candidate: n_cores={c.n_cores} rate={c.rate_bps:.6g} "
                  f"power={c.avg_power_w:.6g} cost={c.cost_z:.6g}",
                  file=sys.stderr)
    with _out(args.output) as fh:
        write_rows(fh, [_point_row(_scenario_tag(settings), "optimize", point)])
    return EXIT_OK


def _parse_sweep_spec(spec: str) -> tuple[str, list[float]]:
    name, sep, grid = spec.partition("=")
    if not sep:
        raise ConfigError(f"sweep spec {spec!r} is not VAR=START:STOP:STEPS[:log]")
    if name not in SWEEP_VARS:
        raise ConfigError(f"unknown sweep variable {name!r}; "
                          f"choose from {', '.join(SWEEP_VARS)}")
    parts = grid.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise ConfigError(f"sweep grid {grid!r} is not START:STOP:STEPS[:log]")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"sweep grid {grid!r}: {exc}") from exc
    if steps < 1:
        raise ConfigError("sweep needs at least one step")
    if steps == 1:
        values = [start]
    elif len(parts) == 4:
        if start <= 0 or stop <= 0:
            raise ConfigError("log grids need positive endpoints")
        values = [float(v) for v in np.geomspace(start, stop, steps)]
    else:
        values = [float(v) for v in np.linspace(start, stop, steps)]
    return name, values


def _blank_row(scenario_id: str, status: str, n_cores: int | None = None) -> ResultRow:
    return ResultRow(scenario_id=scenario_id, command="sweep",
                     n_cores=n_cores, status=status)


def cmd_sweep(args) -> int:
    settings = _settings(args)
    sc = settings.scenario
    base = _scenario_tag(settings)
    var, values = _parse_sweep_spec(args.spec)
    cores_max = args.cores_max or settings.n_cores_max
    rows: list[ResultRow] = []

    if var == "target_delay":
        for cp in tradeoff_curve(sc, values, n_cores=args.cores):
            sid = f"{base}[target_delay={cp.target_delay_s:.6g}]"
            if cp.point is None:
                rows.append(_blank_row(sid, cp.status, args.cores))
            else:
                rows.append(_point_row(sid, "sweep", cp.point, status=cp.status))
    elif var == "n_cores":
        for v in values:
            if v != int(v) or v < 1:
                raise ConfigError(f"n_cores sweep needs positive integers, got {v:g}")
            n = int(v)
            sid = f"{base}[n_cores={n}]"
            try:
                rate = best_rate_for_cores(sc, n)
                rows.append(_point_row(sid, "sweep", evaluate_point(sc, rate, n)))
            except _DOMAIN_ERRORS as exc:
                rows.append(_blank_row(sid, _status_for(exc), n))
    else:
        for v in values:
            sid = f"{base}[{var}={v:.6g}]"
            if var == "alpha":
                sc_v = replace(sc, alpha=v)
            elif var == "lambda":
                sc_v = replace(sc, traffic=replace(sc.traffic, arrival_rate=v))
            else:
                sc_v = replace(sc, traffic=replace(sc.traffic, file_size_bits=v))
            try:
                if args.cores is not None:
                    rate = best_rate_for_cores(sc_v, args.cores)
                    rows.append(_point_row(sid, "sweep",
                                           evaluate_point(sc_v, rate, args.cores)))
                else:
                    result = joint_optimize(sc_v, cores_max)
                    rows.append(_point_row(sid, "sweep", result.point))
            except _DOMAIN_ERRORS as exc:
                rows.append(_blank_row(sid, _status_for(exc), args.cores))

    with _out(args.output) as fh:
        write_rows(fh, rows)
    return EXIT_OK


def cmd_compare(args) -> int:
    settings = _settings(args)
    if settings.earth is None:
        raise ConfigError("the macro baseline is disabled in [earth]; "
                          "set enabled = true to compare")
    sc = settings.scenario
    t = sc.traffic
    base = _scenario_tag(settings)
    cbs = earth_profile(settings.earth, sc.link.channel_gain,
                        sc.link.bandwidth_hz, settings.earth_switch_energy_j)

    def compare_at(rate: float):
        n = cores_needed(sc.compute, rate)
        p_vbs = average_power(scenario_profile(sc, n), t, rate)
        p_cbs = average_power(cbs, t, rate)
        return n, p_vbs, p_cbs, 1.0 - p_vbs / p_cbs

    rows = []
    if args.policy == "cbs-optimal":
        rate = earth_energy_optimal_rate(
            settings.earth, sc.link.channel_gain, sc.link.bandwidth_hz,
            settings.earth_switch_energy_j, t)
        delay = queue_metrics(t, rate).mean_delay_s
        n, p_vbs, p_cbs, savings = compare_at(rate)
        rows.append([f"{base}[cbs-optimal]", delay, rate, n,
                     p_vbs, p_cbs, savings, "ok"])
    else:
        delays = np.geomspace(_COMPARE_DELAY_MIN_S, _COMPARE_DELAY_MAX_S,
                              _COMPARE_DELAY_POINTS)
        for d in (float(x) for x in delays):
            sid = f"{base}[delay={d:.6g}]"
            rate = rate_for_delay(t, d)
            try:
                n, p_vbs, p_cbs, savings = compare_at(rate)
            except _DOMAIN_ERRORS as exc:
                rows.append([sid, d, rate, None, None, None, None,
                             _status_for(exc)])
                continue
            rows.append([sid, d, rate, n, p_vbs, p_cbs, savings, "ok"])

    with _out(args.output) as fh:
        write_rows(fh, rows, header=COMPARE_COLUMNS)
    return EXIT_OK


def cmd_simulate(args) -> int:
    settings = _settings(args)
    sc = settings.scenario
    rate = parse_quantity(args.rate, "bitrate", where="--rate")
    n = args.cores if args.cores is not None else sc.compute.n_cores
    profile = scenario_profile(sc, n)
    cfg = SimConfig(
        traffic=sc.traffic,
        profile=profile,
        rate_bps=rate,
        size_distribution=settings.size_distribution,
        n_arrivals=settings.arrivals,
        warmup_fraction=settings.warmup_fraction,
        seed=settings.seed,
        trace_path=args.trace,
    )
    report = validate_against_analytic(cfg)
    stats = report.stats

    for c in report.checks:
        mark = "inside" if c.inside else "OUTSIDE"
        print(f"{c.name}: analytic={c.analytic:.6g} "
              f"simulated={c.simulated:.6g} +/- {c.halfwidth:.3g} "
              f"[{mark} {report.confidence:.0%} interval]", file=sys.stderr)
    print(f"completed {stats.completed_flows} flows over {stats.window_s:.6g} s, "
          f"{stats.cycles_observed} sleep cycles", file=sys.stderr)

    status = "ok" if report.ok else "validation-failed"
    row = ResultRow(
        scenario_id=_scenario_tag(settings),
        command="simulate",
        rate_bps=rate,
        n_cores=n,
        rho=stats.busy_fraction,
        mean_queue_len=stats.mean_queue_len,
        mean_delay_s=stats.mean_delay_s,
        avg_power_w=stats.mean_power_w,
        cost_z=stats.mean_power_w + sc.alpha * stats.mean_queue_len,
        source="simulated",
        seed=settings.seed,
        status=status,
    )
    with _out(args.output) as fh:
        write_rows(fh, [row])
    return EXIT_OK if report.ok else EXIT_VALIDATION


def cmd_config_show(args) -> int:
    text = read_config(args.config)
    for section, key, value in _overrides(args):
        apply_override(text, section, key, value)
    build_settings(text)  # validate before claiming this is effective
    sys.stdout.write(render_config(text))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
