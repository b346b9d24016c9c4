"""Command-line interface.

Exit codes: 0 success, 2 invalid arguments, 3 non-CPTP channel input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .activation import (
    ActivationParams,
    BracketError,
    eac_channel,
    eac_noise_m,
    optimal_gprime,
)
from .channels import (
    CPTP_TOL,
    GaussianChannel1M,
    NonCPTPError,
    classify,
    q_lower_bound_from_invariants,
)
from .figures import FIGURES, figure_spec
from .sweep import Axis, SweepSpec, run_sweep, spec_comments, write_csv, write_json_lines
from .transducer import EOParams, cooperativity, gain_from_cooperativity

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NON_CPTP = 3


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------- input parsing


def parse_axis(text: str) -> Axis:
    """``NAME:START:STOP:COUNT[:SCALE]`` or ``NAME=v1,v2,...``."""
    if "=" in text:
        name, values = text.split("=", 1)
        return Axis(name.strip(), values=tuple(float(v) for v in values.split(",")))
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise UsageError(f"malformed axis {text!r}; expected NAME:START:STOP:COUNT[:SCALE]")
    name, start, stop, count = parts[:4]
    scale = parts[4] if len(parts) == 5 else "linear"
    return Axis(name.strip(), float(start), float(stop), int(count), scale.strip())


def parse_fixed(text: str) -> tuple[str, float]:
    if "=" not in text:
        raise UsageError(f"malformed fixed value {text!r}; expected NAME=VALUE")
    name, value = text.split("=", 1)
    return name.strip(), float(value)


def parse_quantities(text: str) -> list[str]:
    return [q.strip() for q in text.split(",") if q.strip()]


def read_config(path: str) -> dict[str, list[str]]:
    """Flat ``key = value`` file; keys are long CLI flag names, repeatable."""
    entries: dict[str, list[str]] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        key = key.strip().lstrip("-").replace("-", "_")
        entries.setdefault(key, []).append(value.strip())
    return entries


def build_sweep_spec(args: argparse.Namespace) -> tuple[SweepSpec, int]:
    config = read_config(args.spec) if args.spec else {}
    unknown = set(config) - {"axis", "fix", "quantities", "workers"}
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")

    axes = {a.name: a for a in map(parse_axis, config.get("axis", []))}
    fixed = dict(map(parse_fixed, config.get("fix", [])))
    # a flag on the command line replaces any file entry for that parameter
    for axis in map(parse_axis, args.axis or []):
        fixed.pop(axis.name, None)
        axes[axis.name] = axis
    for name, value in map(parse_fixed, args.fix or []):
        axes.pop(name, None)
        fixed[name] = value

    quantities = ["qlb"]
    if "quantities" in config:
        quantities = parse_quantities(config["quantities"][-1])
    if args.quantities:
        quantities = parse_quantities(args.quantities)
    workers = int(config["workers"][-1]) if "workers" in config else 1
    if args.workers is not None:
        workers = args.workers
    return SweepSpec(tuple(axes.values()), fixed, tuple(quantities)), workers


def read_channel_records(source: str) -> list[dict]:
    """Channel records from inline JSON, a JSON/CSV file, or ``-`` for stdin."""
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith("{") or source.lstrip().startswith("["):
        text = source
    else:
        path = Path(source)
        if not path.exists():
            raise UsageError(f"no such file: {source}")
        if path.suffix.lower() == ".csv":
            with path.open(newline="") as fh:
                rows = [r for r in csv.DictReader(line for line in fh if not line.startswith("#"))]
            return rows
        text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse channel record: {exc}") from exc
    return data if isinstance(data, list) else [data]


def activation_params(args: argparse.Namespace) -> ActivationParams:
    return ActivationParams(args.G, args.Gp, args.Gpp)


def gain_argument(args: argparse.Namespace) -> float:
    """Amplifier gain from ``--G``, ``--Cg`` or the device rates."""
    rates = [args.g, args.kappa_o, args.kappa_e]
    given = [
        getattr(args, "G", None) is not None,
        args.Cg is not None,
        any(r is not None for r in rates),
    ]
    if sum(given) != 1:
        raise UsageError("give exactly one of --G, --Cg, or --g/--kappa-o/--kappa-e")
    if given[0]:
        return args.G
    if given[1]:
        return gain_from_cooperativity(args.Cg)
    if any(r is None for r in rates):
        raise UsageError("--g, --kappa-o and --kappa-e must be given together")
    return gain_from_cooperativity(cooperativity(EOParams(*rates)))


# ---------------------------------------------------------------- output


def emit(records: list[dict], args: argparse.Namespace, out=None) -> None:
    out = out or sys.stdout
    if not records:
        return
    columns = list(records[0])
    if args.json:
        write_json_lines(records, columns, out)
    else:
        write_csv(records, columns, out)


def channel_report(ch: GaussianChannel1M, tol: float) -> dict:
    inv = classify(ch, tol)
    record = ch.to_record()
    record.update(inv.to_record())
    record["qlb"] = q_lower_bound_from_invariants(inv)
    return record


# ---------------------------------------------------------------- subcommands


def cmd_classify(args):
    records = []
    for raw in read_channel_records(args.record):
        ch = GaussianChannel1M.from_record(raw)
        rec = ch.to_record()
        rec.update(classify(ch, args.tol).to_record())
        records.append(rec)
    emit(records, args)


def cmd_qlb(args):
    if args.record is not None:
        channels = [GaussianChannel1M.from_record(r) for r in read_channel_records(args.record)]
    elif args.G is not None and args.Gp is not None and args.Gpp is not None:
        channels = [eac_channel(activation_params(args))]
    else:
        raise UsageError("qlb needs a channel record or all of --G --Gp --Gpp")
    emit([{"qlb": q_lower_bound_from_invariants(classify(ch, args.tol))} for ch in channels], args)


def cmd_eac(args):
    p = activation_params(args)
    record = {"G": p.G, "Gp": p.G_p, "Gpp": p.G_pp, "m": eac_noise_m(p)}
    record.update(channel_report(eac_channel(p), args.tol))
    emit([record], args)


def cmd_transducer(args):
    G = gain_argument(args)
    C_g = args.Cg
    if C_g is None:
        C_g = cooperativity(EOParams(args.g, args.kappa_o, args.kappa_e))
    record = {"Cg": C_g, "G": G}
    Gp = args.Gp
    if Gp is None:
        Gp, _ = optimal_gprime(G, args.Gpp)
    p = ActivationParams(G, Gp, args.Gpp)
    record.update({"Gp": p.G_p, "Gpp": p.G_pp, "m": eac_noise_m(p)})
    inv = classify(eac_channel(p), args.tol)
    record.update(inv.to_record())
    record["qlb"] = q_lower_bound_from_invariants(inv)
    emit([record], args)


def cmd_optimal_gprime(args):
    G = gain_argument(args)
    gp, n_e = optimal_gprime(G, args.Gpp)
    p = ActivationParams(G, gp, args.Gpp)
    inv = classify(eac_channel(p), args.tol)
    emit(
        [
            {
                "G": G,
                "Gpp": args.Gpp,
                "Gp_opt": gp,
                "n_e_min": n_e,
                "tau": inv.tau,
                "qlb": q_lower_bound_from_invariants(inv),
            }
        ],
        args,
    )


def _write_sweep(spec: SweepSpec, workers: int, args, label: str | None = None) -> None:
    rows = run_sweep(spec, workers=workers, tol=args.tol)
    out_path = getattr(args, "out", None)
    fh = open(out_path, "w", newline="") if out_path else sys.stdout
    try:
        if args.json:
            write_json_lines(rows, spec.columns, fh)
        else:
            write_csv(rows, spec.columns, fh, spec_comments(spec, label, args.tol))
    finally:
        if out_path:
            fh.close()


def cmd_sweep(args):
    spec, workers = build_sweep_spec(args)
    _write_sweep(spec, workers, args)


def cmd_fig(args):
    spec = figure_spec(args.name, args.points)
    _write_sweep(spec, args.workers or 1, args, label=args.name)


# ---------------------------------------------------------------- parser


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true", default=argparse.SUPPRESS,
        help="write one JSON object per record instead of CSV",
    )
    common.add_argument(
        "--tol", type=float, default=argparse.SUPPRESS,
        help=f"CPTP eigenvalue tolerance (default {CPTP_TOL:g})",
    )
    return common


def _gain_flags(parser: argparse.ArgumentParser, with_g: bool = True) -> None:
    if with_g:
        parser.add_argument("--G", type=float, help="amplifier gain G > 1")
    parser.add_argument("--Cg", type=float, help="electro-optic cooperativity in [0, 1)")
    parser.add_argument("--g", type=float, help="coupling strength (rad/s)")
    parser.add_argument("--kappa-o", dest="kappa_o", type=float, help="optical decay rate (rad/s)")
    parser.add_argument("--kappa-e", dest="kappa_e", type=float, help="microwave decay rate (rad/s)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="gaussact",
        description="One-mode Gaussian channel invariants, capacity bounds and activation sweeps.",
        parents=[common],
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], allow_abbrev=False, help=help)

    p = command("classify", "canonical invariants of a channel record")
    p.add_argument("record", help="JSON object, JSON/CSV file, or '-' for stdin")
    p.set_defaults(func=cmd_classify)

    p = command("qlb", "capacity lower bound")
    p.add_argument("record", nargs="?", help="JSON object, JSON/CSV file, or '-' for stdin")
    p.add_argument("--G", type=float)
    p.add_argument("--Gp", type=float)
    p.add_argument("--Gpp", type=float)
    p.set_defaults(func=cmd_qlb)

    p = command("eac", "entanglement-activated channel")
    p.add_argument("--G", type=float, required=True)
    p.add_argument("--Gp", type=float, required=True)
    p.add_argument("--Gpp", type=float, required=True)
    p.set_defaults(func=cmd_eac)

    p = command("transducer", "activated electro-optic transducer")
    _gain_flags(p, with_g=False)
    p.add_argument("--Gp", type=float, help="entangler gain (default: noise-optimal)")
    p.add_argument("--Gpp", type=float, required=True)
    p.set_defaults(func=cmd_transducer)

    p = command("optimal-gprime", "noise-cancelling entangler gain")
    _gain_flags(p)
    p.add_argument("--Gpp", type=float, required=True)
    p.set_defaults(func=cmd_optimal_gprime)

    p = command("sweep", "grid sweep to CSV")
    p.add_argument("--spec", help="key = value file mirroring these flags")
    p.add_argument("--axis", action="append", help="NAME:START:STOP:COUNT[:linear|log] or NAME=v1,v2")
    p.add_argument("--fix", action="append", help="NAME=VALUE")
    p.add_argument("--quantities", help="comma list from tau,m,n_e,qlb,qlb_amp,class_label")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = command("fig", "canonical figure sweep")
    p.add_argument("name", choices=FIGURES)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--points", type=int, help="override the per-axis grid density")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_fig)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = getattr(args, "json", False)
    args.tol = getattr(args, "tol", CPTP_TOL)
    try:
        args.func(args)
    except NonCPTPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NON_CPTP
    except (ValueError, BracketError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
