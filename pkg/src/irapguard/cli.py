"""Command-line entry point.

Subcommands:
  inspect    parse an Annex-B file and print NAL stream statistics (JSON)
  synth      generate a synthetic Annex-B stream plus a unit manifest
  simulate   run one congestion simulation, print the run report (JSON)
  sweep      calibrated paired-policy sweep over files and target losses
  calibrate  find a schedule hitting a target baseline loss

Exit codes: 0 success, 1 usage error, 2 data/IO error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .bitstream import Codec, scan_annexb, stream_stats
from .errors import IrapGuardError
from .packetizer import DEFAULT_PAYLOAD_SIZE, packetize
from .policy import CONTENT_AWARE, POLICY_NAMES
from .report import aggregate, write_outputs
from .schedule import (
    DEFAULT_CALIBRATION_PERIOD,
    CongestionSchedule,
    calibrate,
    empty_schedule,
    periodic_schedule,
)
from .simulator import SimulationConfig, events_to_csv, run
from .streamgen import SynthSpec, generate_stream
from .sweep import StreamSource, run_sweep

_RESOLUTION_RE = re.compile(r"(\d{3,4}x\d{3,4})")
_QP_RE = re.compile(r"qp(\d{1,2})", re.IGNORECASE)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _env_seed() -> int:
    try:
        return int(os.environ.get("IRAPGUARD_SEED", "0"))
    except ValueError:
        return 0


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--buffer", type=int, default=60, help="buffer capacity in packets")
    p.add_argument("--in-rate", type=int, default=60, help="arrivals per tick")
    p.add_argument("--out-rate", type=int, default=120, help="departures per tick")
    p.add_argument("--payload-size", type=int, default=DEFAULT_PAYLOAD_SIZE)
    p.add_argument("--repeat", type=int, default=1, help="logical stream repetitions")
    p.add_argument("--seed", type=int, default=_env_seed())
    p.add_argument(
        "--protect-non-vcl",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="exempt parameter-set packets from preemptive drop",
    )


def _config_from_args(args) -> SimulationConfig:
    return SimulationConfig(
        input_rate=args.in_rate,
        output_rate=args.out_rate,
        buffer_capacity=args.buffer,
        payload_size=args.payload_size,
        repeat=args.repeat,
        seed=args.seed,
        protect_non_vcl=args.protect_non_vcl,
    )


def _load_units(path: str, codec_name: str):
    data = Path(path).read_bytes()
    return scan_annexb(data, Codec(codec_name))


def _parse_schedule(text: str, horizon: int) -> CongestionSchedule:
    if text.startswith("periodic:"):
        try:
            period_s, duration_s = text[len("periodic:"):].split(",")
            period, duration = int(period_s), int(duration_s)
        except ValueError:
            raise IrapGuardError(f"bad periodic schedule spec {text!r}, want periodic:P,D")
        return periodic_schedule(period, duration, max(horizon, period))
    return CongestionSchedule.from_json(Path(text).read_text())


def _parse_targets(text: str) -> tuple[float, ...]:
    if ":" in text:
        try:
            lo, hi, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise IrapGuardError(f"bad targets spec {text!r}, want lo:hi:step or a,b,c")
        targets = []
        t = lo
        while t <= hi + 1e-9:
            targets.append(round(t, 6))
            t += step
        return tuple(targets)
    return tuple(float(x) for x in text.split(","))


def _tags_from_name(path: str) -> dict[str, str]:
    name = Path(path).name
    tags = {}
    if m := _RESOLUTION_RE.search(name):
        tags["resolution"] = m.group(1)
    if m := _QP_RE.search(name):
        tags["qp"] = m.group(1)
    return tags


def _cmd_inspect(args) -> int:
    units = _load_units(args.file, args.codec)
    stats = stream_stats(units, payload_size=args.payload_size)
    print(json.dumps(stats.to_json_dict(), indent=2))
    return 0


def _cmd_synth(args) -> int:
    spec = SynthSpec(
        codec=Codec(args.codec),
        frame_count=args.frames,
        irap_period=args.irap_period,
        irap_nal_bytes=args.irap_bytes,
        non_irap_nal_bytes=args.non_irap_bytes,
        include_parameter_sets=args.parameter_sets,
        seed=args.seed,
        jitter_pct=args.jitter_pct,
    )
    data, units = generate_stream(spec)
    Path(args.output).write_bytes(data)
    manifest = [
        {
            "index": u.index,
            "byte_offset": u.byte_offset,
            "byte_len": u.byte_len,
            "nal_type": u.nal_type,
            "class": u.nal_class.value,
        }
        for u in units
    ]
    Path(args.manifest).write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(data)} bytes / {len(units)} NAL units to {args.output}")
    return 0


def _cmd_simulate(args) -> int:
    units = _load_units(args.file, args.codec)
    config = _config_from_args(args)
    packets = packetize(units, config.payload_size, config.repeat)
    horizon = -(-len(packets) // config.input_rate)
    schedule = (
        _parse_schedule(args.schedule, horizon)
        if args.schedule
        else empty_schedule(horizon)
    )
    config = replace(config, policy=args.policy, schedule=schedule)
    report, events = run(config, packets)
    print(json.dumps(report.to_json_dict(), indent=2))
    if args.events:
        Path(args.events).write_text(events_to_csv(events))
    return 0


def _cmd_calibrate(args) -> int:
    units = _load_units(args.file, args.codec)
    config = _config_from_args(args)
    packets = packetize(units, config.payload_size, config.repeat)
    schedule, achieved = calibrate(
        args.target, config, packets, period=args.period
    )
    out = schedule.to_json_dict()
    out["achieved_loss_pct"] = achieved
    text = json.dumps(out, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0


def _cmd_sweep(args) -> int:
    config = _config_from_args(args)
    sources = []
    for path in args.files:
        units = _load_units(path, args.codec)
        sources.append(
            StreamSource(
                stream_id=Path(path).stem,
                units=tuple(units),
                tags=_tags_from_name(path),
            )
        )
    targets = _parse_targets(args.targets)
    cells = run_sweep(
        sources, targets=targets, config=config, period=args.period, jobs=args.jobs
    )
    summary = aggregate(cells)
    out_dir = Path(args.out_dir)
    paths = write_outputs(summary, cells, out_dir)
    if args.plots:
        from .plots import render_figures

        for p in render_figures(cells, summary, out_dir):
            paths[p.stem] = p
    for name, p in sorted(paths.items()):
        print(f"{name}: {p}")
    print(
        f"mean baseline IRAP loss {summary['mean_baseline_irap_packet_loss_pct']:.2f}% "
        f"-> policy {summary['mean_policy_irap_packet_loss_pct']:.2f}% "
        f"({summary['reduction_pct']:.1f}% reduction)"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="irapguard", description=__doc__.split("\n")[1])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="print NAL stream statistics")
    p.add_argument("file")
    p.add_argument("--codec", choices=["h264", "h265"], required=True)
    p.add_argument("--payload-size", type=int, default=DEFAULT_PAYLOAD_SIZE)
    p.set_defaults(func=_cmd_inspect)

    p = sub.add_parser("synth", help="generate a synthetic Annex-B stream")
    p.add_argument("--codec", choices=["h264", "h265"], default="h265")
    p.add_argument("--frames", type=int, default=120)
    p.add_argument("--irap-period", type=int, default=32)
    p.add_argument("--irap-bytes", type=int, default=7000)
    p.add_argument("--non-irap-bytes", type=int, default=1400)
    p.add_argument("--parameter-sets", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--jitter-pct", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=_env_seed())
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("simulate", help="run one congestion simulation")
    p.add_argument("file")
    p.add_argument("--codec", choices=["h264", "h265"], required=True)
    p.add_argument("--policy", choices=POLICY_NAMES, default=CONTENT_AWARE)
    p.add_argument(
        "--schedule",
        help="'periodic:P,D' or a schedule JSON file; default: no congestion",
    )
    p.add_argument("--events", help="write the event log CSV here")
    _add_sim_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("calibrate", help="calibrate a schedule to a target loss")
    p.add_argument("file")
    p.add_argument("--codec", choices=["h264", "h265"], required=True)
    p.add_argument("--target", type=float, required=True, help="target loss percent")
    p.add_argument("--period", type=int, default=DEFAULT_CALIBRATION_PERIOD)
    p.add_argument("-o", "--output", help="write schedule JSON here (default stdout)")
    _add_sim_flags(p)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("sweep", help="paired-policy sweep with CSV/JSON/figures")
    p.add_argument("files", nargs="+")
    p.add_argument("--codec", choices=["h264", "h265"], required=True)
    p.add_argument("--targets", default="5:50:5", help="lo:hi:step or comma list")
    p.add_argument("--policies", choices=["both"], default="both")
    p.add_argument("--period", type=int, default=DEFAULT_CALIBRATION_PERIOD)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-dir", default="sweep-out")
    p.add_argument("--plots", action=argparse.BooleanOptionalAction, default=True)
    _add_sim_flags(p)
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (IrapGuardError, OSError) as exc:
        print(f"irapguard: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
