"""Command-line front end.

Subcommands::

    solve --config FILE            envelope rows for one configured state
    table ID|all                   reproduce the published-style tables
    phi-dos --config FILE          dominantly-orbital phi of the configured state
    calibrate-phi --config FILE    phi matching a ground-state energy
    oracle --config FILE           variational energy of the configured state
    hierarchy                      ordering of the five lowest linear levels
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace

from .config import ConfigError, load_config
from .envelope import calibrate_phi, dos_phi
from .errors import EnvelopeError, MixedQ0, NoBoundState, NonConvergence
from .model import StateSpec, quantum_numbers
from .oracle import OracleConfig, solve_oracle
from .reporting import TABLES, format_report, hierarchy_check, reproduce_table, run

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NO_BOUND_STATE = 4
EXIT_NON_CONVERGENCE = 5
EXIT_MIXED_Q0 = 6


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="run configuration file")
    common.add_argument("--format", choices=("table", "csv"), default=None)
    common.add_argument("--out", help="write the report to this file")
    common.add_argument("--qstar-max", type=int, default=None)
    common.add_argument("--quad-order", type=int, default=None)

    p = argparse.ArgumentParser(prog="envtheory", description="Envelope-theory tables and solvers.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve the configured state")
    t = sub.add_parser("table", parents=[common], help="reproduce a table")
    t.add_argument("id", choices=sorted(TABLES) + ["all"])
    t.add_argument("--no-oracle", action="store_true", help="envelope columns only")
    t.add_argument("--diagnostics", action="store_true",
                   help="add truncated-basis size diagnostics to the caption")
    t.add_argument("--z-window", type=int, default=None,
                   help="optimise z on the bands up to band+N, then diagonalise the full basis")
    sub.add_parser("phi-dos", parents=[common], help="dominantly-orbital phi")
    c = sub.add_parser("calibrate-phi", parents=[common], help="phi matching an energy")
    c.add_argument("--energy", type=float, help="target ground-state energy")
    sub.add_parser("oracle", parents=[common], help="variational energy")
    sub.add_parser("hierarchy", parents=[common], help="level ordering check")
    return p


def _need_config(args):
    if not args.config:
        raise ConfigError("this command needs --config")
    return load_config(args.config)


def _fmt(args, cfg=None):
    if args.format:
        return args.format
    return cfg.format if cfg else "table"


def _kv_table(pairs, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([k for k, _ in pairs])
        w.writerow([f"{v:.12g}" if isinstance(v, float) else v for _, v in pairs])
        return buf.getvalue()
    width = max(len(k) for k, _ in pairs)
    return "".join(
        f"{k.ljust(width)}  {v:.6g}\n" if isinstance(v, float) else f"{k.ljust(width)}  {v}\n"
        for k, v in pairs
    )


def _dispatch(args):
    """Report text and exit code for the parsed command line."""
    out = _report(args)
    return out if isinstance(out, tuple) else (out, EXIT_OK)


def _report(args):
    cmd = args.command
    if cmd == "table":
        ids = list(TABLES) if args.id == "all" else [args.id]
        parts = []
        for tid in ids:
            rep = reproduce_table(
                tid, oracle=not args.no_oracle, qstar_max=args.qstar_max,
                quad_order=args.quad_order or 80, diagnostics=args.diagnostics, z_window=args.z_window,
            )
            text = format_report(rep, _fmt(args))
            if parts and _fmt(args) == "csv":
                text = text.split("\n", 1)[1]  # one header for the whole file
            parts.append(text)
        return ("" if _fmt(args) == "csv" else "\n").join(parts)
    if cmd == "hierarchy":
        res = hierarchy_check(qstar_max=args.qstar_max or 12)
        lines = ["envelope:"] + [f"  L={k[0]} P={k[1]:+d} #{k[2]}  {E:.4g}" for k, E in res["envelope"]]
        lines += ["oracle:"] + [f"  L={k[0]} P={k[1]:+d} #{k[2]}  {E:.4g}" for k, E in res["oracle"]]
        lines.append("ordering consistent" if res["ok"] else "ordering MISMATCH")
        return "\n".join(lines) + "\n", EXIT_OK if res["ok"] else EXIT_ERROR

    cfg = _need_config(args)
    if args.qstar_max is not None or args.quad_order is not None:
        cfg = replace(
            cfg,
            qstar_max=args.qstar_max if args.qstar_max is not None else cfg.qstar_max,
            quad_order=args.quad_order if args.quad_order is not None else cfg.quad_order,
        )
    fmt = _fmt(args, cfg)
    if cmd == "solve":
        return format_report(run(cfg), fmt, cfg.precision)
    if cmd == "phi-dos":
        return _kv_table([("phi_dos", dos_phi(cfg.system, cfg.state))], fmt)
    if cmd == "calibrate-phi":
        target = args.energy
        if target is None:
            cal = [m for m in cfg.phi_modes if m.kind == "calibrate"]
            if not cal:
                raise ConfigError("give --energy or a 'calibrate:<E>' phi mode")
            target = cal[0].value
        phi = calibrate_phi(cfg.system, StateSpec.ground(cfg.system.N), target)
        return _kv_table([("E_target", float(target)), ("phi_gs", phi)], fmt)
    # oracle
    _, _, band, parity = quantum_numbers(cfg.state, cfg.system.D)
    sol = solve_oracle(cfg.system, OracleConfig(
        L=cfg.state.L or 0, parity=parity, sigma=cfg.state.sigma,
        Qstar_max=cfg.qstar_max, level=cfg.level, quad_order=cfg.quad_order, et_band=band,
    ))
    pairs = [("E_acc", sol.E_acc), ("z_opt", sol.z_opt), ("z_mode", sol.z_mode)]
    if sol.nu is not None:
        pairs.append(("nu", sol.nu))
    pairs += [(f"weight_{band}", sol.weight(band)), ("r", sol.moments[1]),
              ("r2", sol.moments[2]), ("rinv", sol.moments[-1])]
    if sol.convergence_delta is not None:
        pairs.append(("convergence", sol.convergence_delta))
    return _kv_table(pairs, fmt)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        text, code = _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoBoundState as exc:
        print(f"no bound state: {exc}", file=sys.stderr)
        return EXIT_NO_BOUND_STATE
    except NonConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NON_CONVERGENCE
    except MixedQ0 as exc:
        print(f"mixed Q0: {exc}", file=sys.stderr)
        return EXIT_MIXED_Q0
    except (EnvelopeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
