"""Command-line front end: spectrum tables, the temperature sweep
figure, verification suites, and scan reports as plain CSV.

Output conventions: '#'-prefixed metadata lines (normalized command,
artifact version, the full parameter map) followed by a column header
and %.17g rows, so files round-trip losslessly and identical
invocations produce identical bytes.  Nothing here depends on wall
time or machine identity.  Exit codes: 0 success, 1 verification
failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import NegspecError
from .kernels import (InflationParams, ThermalState, em_ft_kernel,
                      em_power_total, inflation_power, scalar_ft_kernel,
                      sign_change_wavenumber, temporal_power, thermal_power)
from .modesum import ModeSumConfig, order_of_limits_report
from .smeared import (SmearingConfig, TestFunctionSpec, ell_invariance_scan)
from .thermal import (crossover_ratio_closed_form, crossover_temperature,
                      fig1_table)
from .verify import SUITE_NAMES, format_check, run_suite

_CHANNELS = ("scalar_vacuum", "em_vacuum", "thermal", "total", "temporal",
             "inflation")

# keys accepted in a smearing config file, besides the two function
# blocks with suffixes 1 and 2
_SMEARED_SCALAR_KEYS = ("ell", "epsilon", "mc_samples", "seed", "factors")
_SPEC_KEYS = ("kind", "center", "temporal_width", "spatial_width",
              "amplitude")


class UsageError(Exception):
    """Bad flags or config content; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: command, validated parameter map, output.

    Construction is the single funnel between flag/file parsing and
    dispatch; every physical parameter has been range-checked by the
    owning module's types by the time an instance exists.
    """

    command: str
    params: dict = field(default_factory=dict)
    output: str = ""
    seed: int = 0


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def _emit(args, lines) -> None:
    text = "\n".join(lines) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(cfg: RunConfig) -> list:
    out = [f"# negspec {cfg.command}", f"# version: {__version__}"]
    for key in sorted(cfg.params):
        val = cfg.params[key]
        if isinstance(val, float):
            val = _fmt(val)
        out.append(f"# {key} = {val}")
    return out


def _add_common(sub, seed_default=20260816):
    sub.add_argument("--output", default="", metavar="PATH",
                     help="write to PATH instead of stdout")
    sub.add_argument("--seed", type=int, default=seed_default,
                     help="generator seed for sampled quantities")
    sub.add_argument("--quick", action="store_true",
                     help="reduced grids and sample counts")
    sub.add_argument("--threads", type=int, default=1,
                     help="reserved; results never depend on it")


def cmd_fig1(args) -> int:
    if args.t_min > args.t_max:
        raise UsageError("t-min must not exceed t-max")
    if args.points < 1:
        raise UsageError("points must be at least 1")
    Ts = np.linspace(args.t_min, args.t_max, args.points)
    table = fig1_table(args.k, Ts)
    by = {ch: [v for _, v, c in table.rows if c == ch]
          for ch in table.channels()}
    cfg = RunConfig(command="fig1", output=args.output,
                    params={"k": args.k, "t_min": args.t_min,
                            "t_max": args.t_max, "points": args.points})
    lines = _meta(cfg)
    lines.append("T,vacuum,thermal,total")
    for i, T in enumerate(Ts):
        lines.append(",".join(_fmt(v) for v in
                              (T, by["vacuum"][i], by["thermal"][i],
                               by["total"][i])))
    _emit(args, lines)
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.suite, quick=args.quick, seed=args.seed)
    lines = [format_check(c) for c in results]
    n_pass = sum(c.passed for c in results)
    lines.append(f"{n_pass}/{len(results)} checks passed "
                 f"(suite={args.suite}, quick={args.quick})")
    _emit(args, lines)
    return 0 if n_pass == len(results) else 1


def _spectrum_values(args):
    """Return (x label, value callable) for the selected channel."""
    ch = args.channel
    if ch == "scalar_vacuum":
        return "k", lambda k: scalar_ft_kernel(0.0, k)
    if ch == "em_vacuum":
        return "k", lambda k: em_ft_kernel(0.0, k)
    if ch in ("thermal", "total"):
        if args.beta is None:
            raise UsageError(f"channel {ch} needs --beta")
        state = ThermalState(beta=args.beta)
        fn = thermal_power if ch == "thermal" else em_power_total
        return "k", lambda k: fn(k, state)
    if ch == "temporal":
        return "omega", temporal_power
    params = InflationParams(lP=args.lp, H=args.hubble_rate,
                             S=args.scale_factor)
    return "k", lambda k: inflation_power(k, params)


def cmd_spectrum(args) -> int:
    if args.points < 1:
        raise UsageError("points must be at least 1")
    if args.k_min > args.k_max:
        raise UsageError("k-min must not exceed k-max")
    x_name, value = _spectrum_values(args)
    params = {"channel": args.channel, "k_min": args.k_min,
              "k_max": args.k_max, "points": args.points}
    if args.channel in ("thermal", "total"):
        params["beta"] = args.beta
    extra = []
    if args.channel == "inflation":
        params.update(lp=args.lp, hubble_rate=args.hubble_rate,
                      scale_factor=args.scale_factor)
        kc = sign_change_wavenumber(
            InflationParams(lP=args.lp, H=args.hubble_rate,
                            S=args.scale_factor))
        extra.append(f"# sign_change_wavenumber = {_fmt(kc)}")
    cfg = RunConfig(command="spectrum", output=args.output, params=params)
    lines = _meta(cfg) + extra
    lines.append(f"{x_name},value")
    for x in np.linspace(args.k_min, args.k_max, args.points):
        lines.append(f"{_fmt(x)},{_fmt(value(float(x)))}")
    _emit(args, lines)
    return 0


def cmd_crossover(args) -> int:
    tc = crossover_temperature(args.k)
    ref = args.k / crossover_ratio_closed_form()
    cfg = RunConfig(command="crossover", output=args.output,
                    params={"k": args.k})
    lines = _meta(cfg)
    lines.append(f"crossover_temperature = {_fmt(tc)}")
    lines.append(f"ratio_to_wavenumber = {_fmt(tc / args.k)}")
    lines.append(f"closed_form_reference = {_fmt(ref)}")
    lines.append(f"abs_deviation = {_fmt(abs(tc - ref))}")
    _emit(args, lines)
    return 0


def cmd_modesum(args) -> int:
    mcfg = ModeSumConfig(box_size=args.box_size, mode_index=args.mode_index,
                         max_index=args.max_index)
    rep = order_of_limits_report(mcfg, cutoff_indices=(10, 20, 40, 80))
    cfg = RunConfig(command="modesum", output=args.output,
                    params={"box_size": args.box_size,
                            "mode_index": args.mode_index,
                            "max_index": args.max_index})
    lines = _meta(cfg)
    lines.append(f"wavenumber = {_fmt(rep.wavenumber)}")
    lines.append("static_scan (cutoff, value):")
    for c, v in zip(rep.static_cutoffs, rep.static_values):
        lines.append(f"  {_fmt(c)}  {_fmt(v)}")
    lines.append(f"static_slope = {_fmt(rep.static_slope)}")
    lines.append(f"static_diverged = {rep.static_diverged}")
    lines.append("oscillating_scan (offset, value):")
    for t, v in zip(rep.oscillating_taus, rep.oscillating_values):
        lines.append(f"  {_fmt(t)}  {_fmt(v)}")
    lines.append(f"small_offset_limit = {_fmt(rep.small_tau_limit)}")
    lines.append(f"reference = {_fmt(rep.reference)}")
    rel = abs(rep.small_tau_limit - rep.reference) / abs(rep.reference)
    lines.append(f"limit_rel_deviation = {_fmt(rel)}")
    _emit(args, lines)
    return 0


def parse_config_file(path: str) -> dict:
    """Flat key = value lines; '#' comments and blank lines ignored."""
    known = set(_SMEARED_SCALAR_KEYS)
    for suffix in ("1", "2"):
        known.update(k + suffix for k in _SPEC_KEYS)
    out = {}
    try:
        with open(path) as fh:
            body = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}")
    for ln, raw in enumerate(body.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"line {ln}: expected key = value")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in known:
            raise UsageError(f"line {ln}: unknown key {key!r}")
        if key in out:
            raise UsageError(f"line {ln}: duplicate key {key!r}")
        out[key] = val.strip()
    return out


def spec_to_config(spec: TestFunctionSpec, suffix: str) -> list:
    """Config-file lines describing one smearing function."""
    return [
        f"kind{suffix} = {spec.kind}",
        f"center{suffix} = " + ",".join(_fmt(c) for c in spec.center),
        f"temporal_width{suffix} = {_fmt(spec.temporal_width)}",
        f"spatial_width{suffix} = {_fmt(spec.spatial_width)}",
        f"amplitude{suffix} = {_fmt(spec.amplitude)}",
    ]


def spec_from_config(cfg: dict, suffix: str) -> TestFunctionSpec:
    try:
        kind = cfg[f"kind{suffix}"]
    except KeyError:
        raise UsageError(f"config needs kind{suffix}")
    kwargs = {}
    if f"center{suffix}" in cfg:
        parts = cfg[f"center{suffix}"].split(",")
        if len(parts) != 4:
            raise UsageError(f"center{suffix} needs four components")
        kwargs["center"] = tuple(float(p) for p in parts)
    for name in ("temporal_width", "spatial_width", "amplitude"):
        if f"{name}{suffix}" in cfg:
            kwargs[name] = float(cfg[f"{name}{suffix}"])
    return TestFunctionSpec(kind=kind, **kwargs)


def cmd_smeared(args) -> int:
    file_cfg = parse_config_file(args.config)
    spec1 = spec_from_config(file_cfg, "1")
    spec2 = spec_from_config(file_cfg, "2")

    def resolve(flag_value, key, cast, fallback):
        if flag_value is not None:
            return flag_value
        if key in file_cfg:
            return cast(file_cfg[key])
        return fallback

    ell = resolve(args.ell, "ell", float, 1.0)
    epsilon = resolve(args.epsilon, "epsilon", float, 0.0)
    samples = resolve(args.mc_samples, "mc_samples", int, 1_000_000)
    seed = resolve(args.seed, "seed", int, 20260816)
    factors_raw = resolve(args.factors, "factors", str, "1,2,5")
    try:
        factors = tuple(float(f) for f in str(factors_raw).split(","))
    except ValueError:
        raise UsageError(f"bad factors list: {factors_raw!r}")

    scfg = SmearingConfig(ell=ell, epsilon=epsilon, mc_samples=samples,
                          seed=seed)
    rep = ell_invariance_scan(spec1, spec2, scfg, factors)
    params = {"config": args.config, "ell": ell, "epsilon": epsilon,
              "mc_samples": samples, "seed": seed,
              "factors": ",".join(_fmt(f) for f in factors)}
    cfg = RunConfig(command="smeared", output=args.output, params=params,
                    seed=seed)
    lines = _meta(cfg)
    lines.append("# max_pairwise_rel_deviation = "
                 + _fmt(rep.max_pairwise_rel_deviation))
    lines.append(f"# evaluations = {rep.evaluations}")
    lines.append("factor,scale,value,error")
    for f, s, v, e in zip(rep.factors, rep.scales, rep.values, rep.errors):
        lines.append(",".join(_fmt(x) for x in (f, s, v, e)))
    _emit(args, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="negspec",
        description="spatial and temporal power spectra of normal-ordered "
                    "quadratic field observables, with their verification "
                    "suites")
    sub = p.add_subparsers(dest="command", required=True)

    f1 = sub.add_parser("fig1", help="temperature sweep of the vacuum, "
                                     "thermal, and total spectra at fixed k")
    f1.add_argument("--k", type=float, default=1.0)
    f1.add_argument("--t-min", type=float, default=0.2)
    f1.add_argument("--t-max", type=float, default=3.0)
    f1.add_argument("--points", type=int, default=200)
    _add_common(f1)
    f1.set_defaults(func=cmd_fig1)

    ver = sub.add_parser("verify", help="run a named verification suite")
    ver.add_argument("suite", choices=SUITE_NAMES + ("all",))
    _add_common(ver)
    ver.set_defaults(func=cmd_verify)

    sp = sub.add_parser("spectrum", help="tabulate one spectrum channel")
    sp.add_argument("channel", choices=_CHANNELS)
    sp.add_argument("--k-min", type=float, default=0.5)
    sp.add_argument("--k-max", type=float, default=5.0)
    sp.add_argument("--points", type=int, default=64)
    sp.add_argument("--beta", type=float, default=None,
                    help="inverse temperature (thermal and total channels)")
    sp.add_argument("--lp", type=float, default=1.0,
                    help="gravitational coupling length (inflation)")
    sp.add_argument("--hubble-rate", type=float, default=1.0,
                    help="expansion rate (inflation)")
    sp.add_argument("--scale-factor", type=float, default=1.0,
                    help="scale factor at evaluation time (inflation)")
    _add_common(sp)
    sp.set_defaults(func=cmd_spectrum)

    co = sub.add_parser("crossover", help="temperature where the total "
                                          "spectrum changes sign")
    co.add_argument("k", type=float, nargs="?", default=1.0)
    _add_common(co)
    co.set_defaults(func=cmd_crossover)

    ms = sub.add_parser("modesum", help="order-of-limits report for the "
                                        "finite-box mode sum")
    ms.add_argument("--box-size", type=float, default=2.0 * math.pi)
    ms.add_argument("--mode-index", type=int, default=1)
    ms.add_argument("--max-index", type=int, default=16)
    _add_common(ms)
    ms.set_defaults(func=cmd_modesum)

    sm = sub.add_parser("smeared", help="scale-invariance scan of the "
                                        "smeared pairing from a config file")
    sm.add_argument("config", help="flat key = value file; flags override")
    sm.add_argument("--ell", type=float, default=None)
    sm.add_argument("--epsilon", type=float, default=None)
    sm.add_argument("--mc-samples", type=int, default=None)
    sm.add_argument("--factors", default=None,
                    help="comma-separated scale factors")
    _add_common(sm)
    sm.set_defaults(func=cmd_smeared)
    # config seed should win unless the flag is given explicitly
    sm.set_defaults(seed=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NegspecError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
