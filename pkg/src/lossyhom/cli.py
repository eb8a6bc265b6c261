"""Command-line front end.

Exit codes: 0 success, 1 validation or parse failure, 2 usage error.
Every command that writes a file also writes ``<output>.manifest.json``
recording the arguments, resolved configuration, seed and SHA-256 of
each output.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, bsmath, counting, interference, streams
from .bsmath import BeamsplitterSpec
from .errors import LossyHomError
from .presets import PHASE_VARIANTS, get_preset, preset_names
from .wavepacket import WavepacketSpec, coherence_time, overlap_values, path_to_delay


class CliError(Exception):
    """Failure reported to the user with exit code 1."""


# -- argument groups ---------------------------------------------------------


def _common(p):
    g = p.add_argument_group("global")
    g.add_argument("--seed", type=int, default=0, help="master RNG seed (default 0)")
    g.add_argument("--output", "-o", type=Path, help="write results to this file")
    g.add_argument(
        "--format", choices=("csv", "json"), default=None,
        help="output format; defaults to the output file suffix, else csv",
    )


def _spec_args(p):
    g = p.add_argument_group("beamsplitter (choose one source)")
    g.add_argument("--preset", choices=preset_names(), help="named sample")
    g.add_argument("--phase", choices=PHASE_VARIANTS, default="measured",
                   help="2*phi_rt variant of the preset (default measured)")
    g.add_argument("--spec-json", type=Path, help="JSON file with r/t (cartesian or polar)")
    g.add_argument("--r", type=complex, help="reflection amplitude, e.g. 0.5 or 0.3+0.4j")
    g.add_argument("--t", type=complex, help="transmission amplitude")
    g.add_argument("--r-abs", type=float, help="|r|")
    g.add_argument("--phi-r-deg", type=float, default=0.0, help="arg(r) in degrees")
    g.add_argument("--t-abs", type=float, help="|t|")
    g.add_argument("--phi-t-deg", type=float, default=0.0, help="arg(t) in degrees")


def _wave_args(p):
    g = p.add_argument_group("wavepacket and delay grid")
    g.add_argument("--lambda0-nm", type=float, default=806.0, help="centre wavelength (nm)")
    g.add_argument("--fwhm-nm", type=float, default=1.0, help="spectral FWHM (nm)")
    g.add_argument("--delay-min-um", type=float, default=-300.0,
                   help="most negative path difference (um)")
    g.add_argument("--delay-max-um", type=float, default=300.0,
                   help="most positive path difference (um)")
    g.add_argument("--delay-points", type=int, default=61, help="number of delays")


def _config_args(p):
    g = p.add_argument_group("detection chain")
    g.add_argument("--config", type=Path, help="JSON file with ExperimentConfig fields")
    defaults = counting.ExperimentConfig()
    for name, value in defaults.to_dict().items():
        flag = "--" + name.replace("_", "-")
        kind = int if isinstance(value, int) else float
        g.add_argument(flag, type=kind, default=None, help=f"default {value}")
    g.add_argument("--duration", type=float, default=5.0, help="seconds per run (default 5)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lossyhom",
        description="Two-particle interference on lossy beamsplitters.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check physicality, loss and phase of a splitter")
    _spec_args(p)
    _common(p)

    p = sub.add_parser("hom", help="HOM coincidence scan (analytic or Monte Carlo)")
    p.add_argument("--mode", choices=("analytic", "montecarlo"), default="analytic")
    _spec_args(p)
    _wave_args(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--max-overlap", type=float, default=1.0,
                   help="peak wavepacket overlap in [0, 1] (default 1)")
    g.add_argument("--fit-contrast", type=float,
                   help="fit max-overlap so the scan reaches this contrast")
    _config_args(p)
    _common(p)

    p = sub.add_parser("mz", help="classical fringes at both outputs")
    _spec_args(p)
    p.add_argument("--phase-points", type=int, default=73, help="samples over one period")
    _common(p)

    p = sub.add_parser("classical-hom", help="random-phase classical field benchmark")
    _spec_args(p)
    _wave_args(p)
    p.add_argument("--samples", type=int, default=100_000, help="phase samples (>= 1000)")
    p.add_argument("--max-overlap", type=float, default=1.0)
    _common(p)

    p = sub.add_parser("simulate", help="simulate detector click streams")
    _spec_args(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--overlap", type=float, help="wavepacket overlap I in [0, 1]")
    g.add_argument("--delay-um", type=float, help="path difference (um); overlap from wavepacket")
    p.add_argument("--lambda0-nm", type=float, default=806.0)
    p.add_argument("--fwhm-nm", type=float, default=1.0)
    p.add_argument("--max-overlap", type=float, default=1.0)
    p.add_argument("--stream-format", choices=("binary", "csv"), default="binary")
    _config_args(p)
    _common(p)

    p = sub.add_parser("coincidences", help="count coincidences in stream files")
    p.add_argument("inputs", nargs="+", type=Path, help="stream files (channels merged)")
    p.add_argument("--window", type=int, default=1, help="window in clock ticks (default 1)")
    p.add_argument("--duration", type=float, help="acquisition time (s); default from ticks")
    p.add_argument("--clock", type=float, default=streams.DEFAULT_CLOCK,
                   help="clock frequency for CSV input (Hz)")
    _common(p)

    p = sub.add_parser("presets", help="list the built-in samples")
    _common(p)
    return parser


# -- helpers -----------------------------------------------------------------


def resolve_spec(args) -> BeamsplitterSpec:
    sources = [
        args.preset is not None,
        args.spec_json is not None,
        args.r is not None or args.t is not None,
        args.r_abs is not None or args.t_abs is not None,
    ]
    if sum(sources) != 1:
        raise CliError("give exactly one of --preset, --spec-json, --r/--t, --r-abs/--t-abs")
    if args.preset:
        return get_preset(args.preset, args.phase).spec
    if args.spec_json:
        return BeamsplitterSpec.from_dict(json.loads(args.spec_json.read_text()))
    if args.r is not None or args.t is not None:
        if args.r is None or args.t is None:
            raise CliError("--r and --t must be given together")
        return BeamsplitterSpec(args.r, args.t, "cli")
    if args.r_abs is None or args.t_abs is None:
        raise CliError("--r-abs and --t-abs must be given together")
    return BeamsplitterSpec.from_polar(args.r_abs, args.phi_r_deg, args.t_abs, args.phi_t_deg, "cli")


def resolve_config(args) -> counting.ExperimentConfig:
    data = {}
    if args.config:
        data.update(json.loads(args.config.read_text()))
    for name in counting.ExperimentConfig().to_dict():
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    return counting.ExperimentConfig.from_dict(data)


def _wavepacket(args):
    return WavepacketSpec(args.lambda0_nm * 1e-9, args.fwhm_nm * 1e-9)


def _delays(args):
    if args.delay_points < 1:
        raise CliError("--delay-points must be positive")
    path = np.linspace(args.delay_min_um, args.delay_max_um, args.delay_points) * 1e-6
    return path_to_delay(path)


def _fmt(args):
    if args.format:
        return args.format
    if args.output is not None and args.output.suffix.lower() == ".json":
        return "json"
    return "csv"


def _emit(args, payload, resolved):
    """Write ``payload`` (str) to --output with a manifest, or print it."""
    if args.output is None:
        sys.stdout.write(payload if payload.endswith("\n") else payload + "\n")
        return
    args.output.parent.mkdir(parents=True, exist_ok=True)
    data = payload.encode()
    args.output.write_bytes(data)
    write_manifest(args, resolved, [args.output])


def write_manifest(args, resolved, outputs):
    manifest = {
        "command": args.command,
        "argv": [str(x) for x in getattr(args, "_argv", [])],
        "version": __version__,
        "seed": args.seed,
        "resolved": resolved,
        "outputs": {
            str(p): hashlib.sha256(Path(p).read_bytes()).hexdigest() for p in outputs
        },
    }
    path = Path(str(outputs[0]) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _info(msg):
    print(msg, file=sys.stderr)


# -- commands ----------------------------------------------------------------


def cmd_validate(args):
    spec = resolve_spec(args)
    report = bsmath.validate(spec)
    phase = bsmath.phase_info(spec)
    out = {
        "spec": spec.to_dict(),
        "ok": report.ok,
        "lossless": report.lossless,
        "loss_fraction": report.loss_fraction,
        "two_phi_rt_deg": math.degrees(phase.two_phi_rt),
        "violations": list(report.violations),
    }
    if _fmt(args) == "json" or args.output:
        _emit(args, json.dumps(out, indent=2), out)
    else:
        status = "ok" if report.ok else "INVALID"
        print(f"{status}  lossless={report.lossless}  loss_fraction={report.loss_fraction:.6g}  "
              f"2phi_rt={out['two_phi_rt_deg']:.4g} deg")
        for v in report.violations:
            print(f"  violation: {v}")
    return 0 if report.ok else 1


def cmd_hom(args):
    spec = resolve_spec(args)
    bsmath.validate(spec).raise_if_invalid()
    wp = _wavepacket(args)
    delays = _delays(args)
    max_overlap = args.max_overlap
    if args.fit_contrast is not None:
        max_overlap = interference.fit_max_overlap(spec, args.fit_contrast)
    resolved = {
        "mode": args.mode,
        "spec": spec.to_dict(),
        "wavepacket": wp.to_dict(),
        "coherence_time_fs": coherence_time(wp) * 1e15,
        "max_overlap": max_overlap,
    }
    if args.mode == "analytic":
        scan = interference.hom_scan(spec, wp, delays, max_overlap)
    else:
        cfg = resolve_config(args)
        resolved["config"] = cfg.to_dict()
        resolved["duration_per_point"] = args.duration
        scan = counting.hom_scan_counts(
            cfg, spec, wp, delays, args.duration, args.seed, max_overlap=max_overlap
        )
    report = interference.contrast(scan)
    payload = scan.to_json() if _fmt(args) == "json" else scan.to_csv()
    _emit(args, payload, resolved)
    _info(f"kind={report.kind} contrast={report.contrast:.4f} "
          f"quantum_flag={report.quantum_flag} max_overlap={max_overlap:.4f}")
    return 0


def cmd_mz(args):
    spec = resolve_spec(args)
    if args.phase_points < 3:
        raise CliError("--phase-points must be at least 3")
    phases = np.linspace(0.0, 2 * math.pi, args.phase_points, endpoint=False)
    traces = interference.mz_fringes(spec, phases)
    payload = traces.to_json() if _fmt(args) == "json" else traces.to_csv()
    _emit(args, payload, {"spec": spec.to_dict(), "phase_points": args.phase_points})
    _info(f"phase_difference={math.degrees(traces.phase_difference):.4f} deg "
          f"visibility_a={traces.visibility_a:.4f} visibility_b={traces.visibility_b:.4f}")
    return 0


def cmd_classical_hom(args):
    spec = resolve_spec(args)
    wp = _wavepacket(args)
    scan = interference.classical_field_hom(
        spec, _delays(args), wp, args.samples, args.seed, args.max_overlap
    )
    payload = scan.to_json() if _fmt(args) == "json" else scan.to_csv()
    resolved = {"spec": spec.to_dict(), "wavepacket": wp.to_dict(), "samples": args.samples}
    _emit(args, payload, resolved)
    _info(f"kind={scan.kind} visibility={scan.contrast:.4f}")
    return 0


def cmd_simulate(args):
    spec = resolve_spec(args)
    cfg = resolve_config(args)
    if args.delay_um is not None:
        wp = WavepacketSpec(args.lambda0_nm * 1e-9, args.fwhm_nm * 1e-9)
        ov = float(overlap_values(wp, [path_to_delay(args.delay_um * 1e-6)])[0])
        ov *= args.max_overlap
    else:
        ov = 1.0 if args.overlap is None else args.overlap
    if args.output is None:
        raise CliError("simulate needs --output for the stream file")
    a, b = counting.simulate_run(cfg, spec, ov, args.duration, args.seed)
    args.output.parent.mkdir(parents=True, exist_ok=True)
    streams.write_streams(args.output, {"A": a, "B": b}, args.stream_format)
    resolved = {
        "spec": spec.to_dict(),
        "config": cfg.to_dict(),
        "overlap": ov,
        "duration": args.duration,
        "stream_format": args.stream_format,
    }
    write_manifest(args, resolved, [args.output])
    _info(f"singles_a={len(a)} singles_b={len(b)} overlap={ov:.6g}")
    return 0


def cmd_coincidences(args):
    chans = {"A": [], "B": []}
    clock = None
    for path in args.inputs:
        pair = streams.read_streams(path, args.clock)
        for ch, s in pair.items():
            if clock is not None and len(s) and s.clock_frequency != clock:
                raise CliError(f"{path}: clock {s.clock_frequency} Hz differs from {clock} Hz")
            if len(s):
                clock = s.clock_frequency
            chans[ch].append(s.ticks)
    clock = clock or args.clock
    a, b = (
        streams.TimestampStream(ch, np.unique(np.concatenate(chans[ch])), clock)
        for ch in ("A", "B")
    )
    report = counting.count_coincidences(a, b, args.window, args.duration)
    _emit(args, report.to_json(), {"inputs": [str(p) for p in args.inputs], "window": args.window})
    return 0


def cmd_presets(args):
    rows = []
    for name in preset_names():
        for phase in PHASE_VARIANTS:
            entry = get_preset(name, phase)
            rows.append({
                "name": name,
                "phase": phase,
                "r_abs": abs(entry.spec.r),
                "t_abs": abs(entry.spec.t),
                "two_phi_rt_deg": math.degrees(bsmath.phase_info(entry.spec).two_phi_rt),
                "note": entry.note,
            })
    if _fmt(args) == "json":
        payload = json.dumps(rows, indent=2)
    else:
        lines = ["name,phase,r_abs,t_abs,two_phi_rt_deg"]
        lines += [f"{r['name']},{r['phase']},{r['r_abs']:.6g},{r['t_abs']:.6g},"
                  f"{r['two_phi_rt_deg']:.6g}" for r in rows]
        payload = "\n".join(lines)
    _emit(args, payload, {})
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "hom": cmd_hom,
    "mz": cmd_mz,
    "classical-hom": cmd_classical_hom,
    "simulate": cmd_simulate,
    "coincidences": cmd_coincidences,
    "presets": cmd_presets,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args._argv = argv
    try:
        return COMMANDS[args.command](args)
    except (CliError, LossyHomError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
