"""Command-line front end: ``udr-adc gen|convert|reconstruct|sqnr|hwmodel``.

Exit codes: 0 success, 2 usage or configuration error, 3 bad data (parse,
corruption, counter saturation), 4 sampling-rate violation under ``--strict``.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .adc import encode
from .codec import pack, unpack
from .errors import (
    ConfigError,
    CorruptionError,
    DomainError,
    FormatError,
    LengthError,
    NonConvergenceError,
    ParseError,
    SaturationError,
    UnsupportedError,
)
from .frontend import AdcConfig, validate_timing
from .presets import PRESETS, get_preset
from .reconstruct import reconstruct, srer
from .signals import (
    DistributionKind,
    RandomProcess,
    SignalSpec,
    SinusoidMixture,
    generate,
    read_csv,
    read_pcm_audio,
    write_csv,
    write_pcm_audio,
)
from .analysis import (
    AdcKind,
    HwQuery,
    SqnrQuery,
    crossover_gamma,
    dynamic_power_au,
    dynamic_power_ratio,
    flash_area_model,
    monte_carlo_sqnr,
    sqnr_std,
    sqnr_udr,
    to_db,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_STRICT = 4

_USAGE_ERRORS = (ConfigError, DomainError, UnsupportedError, OSError)
_DATA_ERRORS = (
    ParseError,
    FormatError,
    LengthError,
    CorruptionError,
    SaturationError,
    NonConvergenceError,
)


class UsageError(Exception):
    """Bad flag combination detected after argparse has run."""


def _num(x):
    """Deterministic text for CSV cells: shortest round-trip repr, ``inf`` spelled out."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float) or isinstance(x, np.floating):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def _json_value(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        # JSON has no infinity; a string keeps the document valid
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def _emit_rows(columns, rows, args):
    """Write rows as CSV (default) or a JSON list of objects to ``-o`` or stdout."""
    if args.json:
        doc = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_num(v) for v in row) + "\n")
        text = buf.getvalue()
    _write_text(text, getattr(args, "output", None))


def _write_text(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _emit_report(report: dict, args, lines):
    if args.json:
        sys.stdout.write(json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("".join(f"{line}\n" for line in lines))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return _json_value(obj)


def _range(text, what, count=True):
    """Parse ``lo:hi[:count]``."""
    parts = text.split(":")
    try:
        if count:
            if len(parts) != 3:
                raise ValueError
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        else:
            if len(parts) != 2:
                raise ValueError
            lo, hi, n = int(parts[0]), int(parts[1]), None
    except ValueError:
        form = "lo:hi:count" if count else "lo:hi"
        raise UsageError(f"{what}: expected {form}, got {text!r}") from None
    if not (0 < lo <= hi) or not math.isfinite(hi) or (count and n < 1):
        raise UsageError(f"{what}: need 0 < lo <= hi and count >= 1, got {text!r}")
    if count and n > 1 and lo == hi:
        raise UsageError(f"{what}: lo == hi with count {n}")
    return lo, hi, n


def _list(text, conv, what):
    try:
        return [conv(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{what}: cannot parse {text!r}") from None


def _parse_sines(text):
    """``freq:amp[:phase],...`` into a :class:`SinusoidMixture`."""
    terms = []
    for item in text.split(","):
        fields = item.split(":")
        if len(fields) not in (2, 3):
            raise UsageError(f"--sines: expected freq:amp[:phase], got {item!r}")
        try:
            freq, amp = float(fields[0]), float(fields[1])
            phase = float(fields[2]) if len(fields) == 3 else 0.0
        except ValueError:
            raise UsageError(f"--sines: non-numeric field in {item!r}") from None
        terms.append((amp, freq, phase))
    return SinusoidMixture.of(*terms)


def _is_wav(path):
    return str(path).lower().endswith(".wav")


# --- gen -------------------------------------------------------------------


def cmd_gen(args):
    preset = get_preset(args.preset) if args.preset else None
    if args.sines and args.dist:
        raise UsageError("--sines and --dist are mutually exclusive")
    if args.sines or args.dist:
        if args.rate is None or args.dur is None:
            raise UsageError("--rate and --dur are required")
        if args.sines:
            kind = _parse_sines(args.sines)
        else:
            kind = RandomProcess(DistributionKind(args.dist), args.sigma)
        spec = SignalSpec(kind, args.dur, args.rate)
    elif preset is not None:
        if preset.signal is None:
            raise ConfigError(f"preset {preset.name!r} has no synthetic signal; it takes a recording")
        spec = preset.signal
    else:
        raise UsageError("give --sines, --dist or a --preset with a test signal")
    stream = generate(spec, seed=args.seed)
    if _is_wav(args.output):
        full_scale = args.full_scale or (preset.full_scale if preset else None)
        if full_scale is None:
            raise UsageError("--full-scale is required for WAV output")
        write_pcm_audio(stream, args.output, full_scale)
    else:
        write_csv(stream, args.output)
    return EXIT_OK


# --- convert ---------------------------------------------------------------


def _load_input(path, rate, full_scale):
    if _is_wav(path):
        if full_scale is None:
            raise UsageError("--full-scale is required for WAV input")
        return read_pcm_audio(path, full_scale)
    if rate is None:
        raise UsageError("--rate is required for CSV input")
    return read_csv(path, rate)


def cmd_convert(args):
    preset = get_preset(args.preset) if args.preset else None
    v_ref = args.vref if args.vref is not None else (preset.v_ref if preset else None)
    bits = args.bits if args.bits is not None else (preset.total_bits if preset else None)
    if v_ref is None or bits is None:
        raise UsageError("--vref and --bits are required without a --preset")
    unipolar = args.unipolar or (preset.unipolar if preset else False)
    rate = args.rate if args.rate is not None else (preset.sample_rate if preset else None)
    full_scale = args.full_scale if args.full_scale is not None else (
        preset.full_scale if preset else None
    )
    config = AdcConfig(
        v_ref=v_ref,
        total_bits=bits,
        counter_bits=args.counter_bits,
        t_clk_sh=args.t_sh,
        t_clk_cnt=args.t_cnt,
        tau=args.tau,
        unipolar=unipolar,
    )
    clocks = (args.t_sh, args.t_cnt, args.tau)
    if any(c is not None for c in clocks):
        if not validate_timing(config):
            raise ConfigError(
                "sample-and-hold period too short: need t_sh >= 2 * t_cnt + tau"
            )
    stream = _load_input(args.input, rate, full_scale)
    conv = encode(stream, config, engine=args.engine)
    Path(args.output).write_bytes(pack(conv.stream))

    report = conv.summary()
    report["output"] = str(args.output)
    lines = [
        f"samples: {report['samples']}",
        f"resets: none={report['resets']['none']} positive={report['resets']['positive']} "
        f"negative={report['resets']['negative']}",
        "fold histogram: " + " ".join(f"{k}:{v}" for k, v in report["fold_histogram"].items()),
        f"max |fold|: {report['max_abs_fold']}",
        f"max cycles used: {report['max_cycles_used']}",
        f"growth violations: {report['growth_violations']}",
    ]
    _emit_report(report, args, lines)
    if report["growth_violations"]:
        print(
            f"warning: {report['growth_violations']} samples break the sampling-rate "
            f"condition (first at sample {report['first_violation']}, max increment "
            f"{report['max_increment_volts']!r} V vs {report['max_increment_allowed_volts']!r} V)",
            file=sys.stderr,
        )
        if args.strict:
            return EXIT_STRICT
    return EXIT_OK


# --- reconstruct -----------------------------------------------------------


def cmd_reconstruct(args):
    stream = unpack(Path(args.input).read_bytes())
    est = reconstruct(stream)
    if args.output is not None:
        if _is_wav(args.output):
            if args.full_scale is None:
                raise UsageError("--full-scale is required for WAV output")
            write_pcm_audio(est, args.output, args.full_scale)
        else:
            write_csv(est, args.output)
    report = {"samples": len(est), "sample_rate": est.sample_rate, "output": args.output}
    lines = [f"samples: {len(est)}"]
    if args.reference is not None:
        ref = _load_input(args.reference, est.sample_rate, args.full_scale)
        value = srer(ref, est)
        report["srer_db"] = value
        lines.append(f"srer_db: {_num(value)}")
    _emit_report(report, args, lines)
    return EXIT_OK


# --- sqnr ------------------------------------------------------------------

SQNR_COLUMNS = ["distribution", "n", "gamma", "sqnr_std_db", "sqnr_udr_db"]
MC_COLUMNS = ["mc_std_db", "mc_std_stderr_db", "mc_udr_db", "mc_udr_stderr_db"]


def _sqnr_row(dist, n, g, args):
    row = [dist.value, n, g, to_db(sqnr_std(dist, n, g, args.one_sided)), to_db(sqnr_udr(n, g))]
    if args.monte_carlo:
        for adc in (AdcKind.STANDARD, AdcKind.UDR):
            r = monte_carlo_sqnr(
                SqnrQuery(dist, n, g, adc), args.monte_carlo, seed=args.seed, workers=args.workers
            )
            row += [r.db, r.stderr_db]
    return row


def cmd_sqnr(args):
    dists = _list(args.dist, lambda t: DistributionKind(t.strip()), "--dist")
    ns = _list(args.bits, int, "--bits")
    if not dists or not ns:
        raise UsageError("--dist and --bits need at least one value")
    lo, hi, count = _range(args.gamma, "--gamma")
    grid = np.geomspace(lo, hi, count) if count > 1 else np.array([lo])
    columns = SQNR_COLUMNS + (MC_COLUMNS if args.monte_carlo else [])
    if args.crossover:
        columns = ["point"] + columns
    rows = []
    for dist in dists:
        for n in ns:
            for g in grid.tolist():
                row = _sqnr_row(dist, n, g, args)
                rows.append(["grid"] + row if args.crossover else row)
            if args.crossover:
                g_star = crossover_gamma(dist, n, one_sided=args.one_sided)
                if g_star is not None:
                    rows.append(["crossover"] + _sqnr_row(dist, n, g_star, args))
    _emit_rows(columns, rows, args)
    return EXIT_OK


# --- hwmodel ---------------------------------------------------------------


def cmd_hwmodel(args):
    lams = _list(args.lambdas, float, "--lambda")
    if not lams or any(not (lam >= 1 and math.isfinite(lam)) for lam in lams):
        raise UsageError(f"--lambda values must be finite and >= 1, got {args.lambdas!r}")
    if args.table == "area":
        lo, hi, _ = _range(args.n1, "--n1", count=False)
        columns = ["n_bits", "lambda", "comparators_std", "comparators_udr"]
        rows = []
        for lam in lams:
            for n1 in range(lo, hi + 1):
                a = flash_area_model(HwQuery(n1, lam))
                rows.append([n1, lam, a.comparators_std, a.comparators_udr])
    else:
        lo, hi, count = _range(args.resolution, "--resolution")
        res = np.geomspace(lo, hi, count) if count > 1 else np.array([lo])
        columns = ["resolution_volts", "lambda", "power_ratio"]
        if args.absolute is not None:
            columns += ["power_std_au", "power_udr_au"]
        rows = []
        for lam in lams:
            for r in res.tolist():
                row = [r, lam, dynamic_power_ratio(lam)]
                if args.absolute is not None:
                    row += list(dynamic_power_au(r, lam, args.absolute))
                rows.append(row)
    _emit_rows(columns, rows, args)
    return EXIT_OK


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="udr-adc", description="Self-resetting (modulo) ADC model and analyses."
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    presets = sorted(PRESETS)

    g = sub.add_parser("gen", help="write a test signal to CSV or WAV")
    g.add_argument("--preset", choices=presets)
    g.add_argument("--sines", help="freq:amp[:phase],... in Hz, volts, radians")
    g.add_argument("--dist", choices=[d.value for d in DistributionKind])
    g.add_argument("--sigma", type=float, default=1.0, help="standard deviation in volts")
    g.add_argument("--rate", type=float, help="sample rate in Hz")
    g.add_argument("--dur", type=float, help="duration in seconds")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--full-scale", type=float, help="volts at PCM full scale (WAV output)")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("convert", help="fold and quantize a CSV/WAV signal into a stream file")
    c.add_argument("input")
    c.add_argument("-o", "--output", required=True)
    c.add_argument("--preset", choices=presets)
    c.add_argument("--vref", type=float)
    c.add_argument("--bits", type=int, help="total bits per sample, including the 2 reset bits")
    c.add_argument("--counter-bits", type=int, default=8)
    c.add_argument("--unipolar", action="store_true", help="positive-only window [0, vref)")
    c.add_argument("--rate", type=float, help="sample rate of a CSV input in Hz")
    c.add_argument("--full-scale", type=float, help="volts at PCM full scale (WAV input)")
    c.add_argument("--engine", choices=["circuit", "ideal"], default="circuit")
    c.add_argument("--t-sh", type=float, help="sample-and-hold clock period, seconds")
    c.add_argument("--t-cnt", type=float, help="counter clock period, seconds")
    c.add_argument("--tau", type=float, help="comparator and logic delay, seconds")
    c.add_argument("--strict", action="store_true", help="exit 4 on sampling-rate violations")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_convert)

    r = sub.add_parser("reconstruct", help="unwrap a stream file back to volts")
    r.add_argument("input")
    r.add_argument("-o", "--output", help="reconstructed CSV or WAV")
    r.add_argument("--reference", help="original CSV/WAV to compute SRER against")
    r.add_argument("--full-scale", type=float, help="volts at PCM full scale (WAV files)")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("sqnr", help="closed-form (and optionally simulated) SQNR sweeps")
    s.add_argument("--dist", default="uniform,gaussian,laplacian")
    s.add_argument("--bits", default="8,11")
    s.add_argument("--gamma", default="0.05:10:100", help="lo:hi:count, log spaced")
    s.add_argument("--monte-carlo", type=int, metavar="N", help="add simulated columns")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--crossover", action="store_true", help="append equal-SQNR rows")
    s.add_argument(
        "--one-sided-overload", dest="one_sided", action="store_true", help="one-sided Gaussian overload term"
    )
    s.add_argument("-o", "--output")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_sqnr)

    h = sub.add_parser("hwmodel", help="flash area or dynamic power comparison tables")
    h.add_argument("--table", choices=["area", "power"], default="area")
    h.add_argument("--n1", default="4:14", help="lo:hi bit range for the area table")
    h.add_argument("--lambda", dest="lambdas", default="1,2,4,8", help="folding factors")
    h.add_argument("--resolution", default="1e-4:1e-2:5", help="lo:hi:count in volts")
    h.add_argument(
        "--absolute", type=int, metavar="N1", help="add arbitrary-unit power columns for N1 bits"
    )
    h.add_argument("-o", "--output")
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_hwmodel)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
