"""Command-line front end.

Subcommands: build-code, det-stats, diversity-check, fd-analyze,
complexity, simulate.  Every run prints a metadata header and embeds the
same metadata in its output files; files are written atomically
(temp + rename).  Exit codes: 0 success, 2 bad flags or arguments,
3 enumeration budget exceeded, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path


from . import __version__
from .codes import (
    CODE_NAMES,
    BudgetExceededError,
    build_lattice,
    diversity_check,
    normalize_unit_volume,
)
from .mldecode import complexity_profile, fd_analyze
from .relaychannel import NafConfig, load_naf_config
from .simharness import SimConfig, run_ber_sweep, run_det_report

ALPHABETS = {"pm1": (-1, 1), "pm1pm3": (-3, -1, 1, 3)}


def parse_snr_spec(spec: str) -> tuple[float, ...]:
    """'start:step:stop' (inclusive) or a comma-separated list."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad snr range {spec!r}, expected start:step:stop")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("snr step must be positive")
        out = []
        v = start
        while v <= stop + 1e-9:
            out.append(round(v, 9))
            v += step
        return tuple(out)
    return tuple(float(p) for p in spec.split(","))


def parse_alphabet(args) -> tuple[int, ...]:
    if getattr(args, "alphabet_set", None):
        vals = tuple(int(v) for v in args.alphabet_set.split(","))
        if not vals:
            raise ValueError("empty alphabet")
        return tuple(sorted(set(vals)))
    name = getattr(args, "alphabet", "pm1")
    if name not in ALPHABETS:
        raise ValueError(f"unknown alphabet {name!r}; known: {', '.join(ALPHABETS)}")
    return ALPHABETS[name]


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _meta(args, **extra) -> dict:
    meta = {
        "artifact_version": __version__,
        "command": args.command,
        "argv": args._argv,
    }
    meta.update(extra)
    return meta


def _emit_header(args, **extra) -> None:
    bits = " ".join(f"{k}={v}" for k, v in extra.items())
    print(f"# relaystc {__version__} | {args.command} | {bits}".rstrip())


# -- subcommand handlers -----------------------------------------------------------


def _cmd_build_code(args) -> int:
    code = build_lattice(args.code)
    normalized = normalize_unit_volume(code)
    _emit_header(args, code=args.code, scale=f"{normalized.scale:.12g}")
    print(f"code {code.name}: n={code.n}, k={code.k}, blocks={list(code.block_structure)}")
    print(f"fundamental volume (raw basis): {code.volume():.10g}")
    print(f"unit-volume scale: {normalized.scale:.12g}")
    if args.dump_basis:
        for idx, mat in enumerate(code.basis):
            print(f"-- basis[{idx}] (exact entries)")
            inner = mat.matrix if hasattr(mat, "matrix") else mat
            for i in range(inner.rows):
                row = []
                for j in range(inner.cols):
                    e = inner.entries[i][j]
                    p = mat.powers[i][j] if hasattr(mat, "powers") else 0
                    row.append(f"({e!r})*r^{p}" if p else f"{e!r}")
                print("  [" + ", ".join(row) + "]")
    if args.json:
        payload = {
            "meta": _meta(args, code=args.code),
            "name": code.name,
            "n": code.n,
            "k": code.k,
            "block_structure": list(code.block_structure),
            "volume": code.volume(),
            "unit_volume_scale": normalized.scale,
            "basis_embedded": [
                [[_c2pair(v) for v in row] for row in mat]
                for mat in normalized.basis_complex
            ],
        }
        atomic_write_text(args.json, json.dumps(payload, indent=2))
        print(f"wrote {args.json}")
    return 0


def _c2pair(v: complex) -> list[float]:
    return [float(v.real), float(v.imag)]


def _cmd_det_stats(args) -> int:
    alphabet = parse_alphabet(args)
    code, stats, meta = run_det_report(args.code, args.convention, alphabet)
    _emit_header(args, code=args.code, convention=stats.convention,
                 scale=f"{code.scale:.12g}")
    print(f"min={stats.min:.6g} max={stats.max:.6g} mean={stats.mean:.6g} "
          f"({stats.n_codewords} codewords)")
    if args.json:
        payload = {"meta": _meta(args, **meta)}
        payload.update(stats.to_json_dict(code=args.code, scale=code.scale))
        atomic_write_text(args.json, json.dumps(payload, indent=2))
        print(f"wrote {args.json}")
    if args.csv:
        atomic_write_text(args.csv, _csv_text(["bin_center", "count"], stats.histogram_rows()))
        print(f"wrote {args.csv}")
    return 0


def _cmd_diversity_check(args) -> int:
    alphabet = parse_alphabet(args)
    code = normalize_unit_volume(build_lattice(args.code))
    report = diversity_check(code, alphabet=alphabet)
    _emit_header(args, code=args.code, fully_diverse=report.fully_diverse)
    print(f"min_rank={report.min_rank} "
          f"min |det| over nonzero differences={report.min_abs_det_nonzero_diff:.6g} "
          f"({report.n_points} points, {report.n_exact_checked} exact checks)")
    if args.json:
        payload = {"meta": _meta(args, code=args.code, alphabet=list(alphabet))}
        payload.update(report.to_json_dict(code=args.code))
        atomic_write_text(args.json, json.dumps(payload, indent=2))
        print(f"wrote {args.json}")
    return 0


def _cmd_fd_analyze(args) -> int:
    code = normalize_unit_volume(build_lattice(args.code))
    report = fd_analyze(code, trials=args.trials, tol=args.tol, rng_seed=args.seed)
    _emit_header(args, code=args.code, k_prime=report.complexity_exponent,
                 fast_decodable=report.fast_decodable)
    print(report.mask_ascii())
    print(f"complexity exponent k'={report.complexity_exponent} "
          f"(exact-certified exponent {report.exact_exponent}), "
          f"{len(report.hr_pairs)} HR-orthogonal pairs")
    if args.json:
        payload = {"meta": _meta(args, code=args.code, trials=args.trials,
                                 tol=args.tol, seed=args.seed)}
        payload.update(report.to_json_dict(code=args.code))
        atomic_write_text(args.json, json.dumps(payload, indent=2))
        print(f"wrote {args.json}")
    return 0


def _cmd_complexity(args) -> int:
    code = normalize_unit_volume(build_lattice(args.code))
    alphabet = parse_alphabet(args)
    snrs = parse_snr_spec(args.snr)
    rows = []
    for snr in snrs:
        prof = complexity_profile(code, alphabet=alphabet, channels=args.channels,
                                  rng_seed=args.seed, snr_db=snr)
        rows.append((snr, prof["mean_nodes"], prof["max_nodes"]))
    _emit_header(args, code=args.code, channels=args.channels, seed=args.seed)
    for snr, mean_nodes, max_nodes in rows:
        print(f"snr={snr:g} dB  mean_nodes={mean_nodes:.2f}  max_nodes={max_nodes}")
    if args.csv:
        atomic_write_text(args.csv, _csv_text(["snr_db", "mean_nodes", "max_nodes"], rows))
        print(f"wrote {args.csv}")
    if args.json:
        payload = {
            "meta": _meta(args, code=args.code, channels=args.channels, seed=args.seed),
            "profile": [
                {"snr_db": s, "mean_nodes": m, "max_nodes": x} for s, m, x in rows
            ],
        }
        atomic_write_text(args.json, json.dumps(payload, indent=2))
        print(f"wrote {args.json}")
    return 0


def _cmd_simulate(args) -> int:
    alphabet = parse_alphabet(args)
    snrs = parse_snr_spec(args.snr)
    naf = None
    if args.config:
        naf = load_naf_config(args.config)
    if args.channel == "naf":
        naf = naf if naf is not None else NafConfig()
        overrides = {
            "n_s": args.ns, "n_r": args.nr, "n_d": args.nd, "n_relays": args.relays,
            "gamma_direct_1": args.gamma_direct1, "gamma_direct_2": args.gamma_direct2,
            "gamma_relay_tx": args.gamma_relay_tx, "gamma_relay_rx": args.gamma_relay_rx,
        }
        naf = replace(naf, **{k: v for k, v in overrides.items() if v is not None})
    cfg = SimConfig(
        code=args.code,
        snr_db=snrs,
        trials=args.trials,
        master_seed=args.seed,
        channel_mode=args.channel,
        alphabet=alphabet,
        max_block_errors=args.max_block_errors,
        batch=args.batch,
        threads=args.threads,
        naf=naf,
    )
    result = run_ber_sweep(cfg)
    _emit_header(args, code=args.code, channel=args.channel, seed=args.seed)
    for p in result.points:
        print(f"snr={p.snr_db:g} dB  bler={p.bler:.6g}  ber={p.ber:.6g}  "
              f"trials={p.trials}  nodes={p.mean_decoder_nodes:.1f}")
    if args.json:
        payload = result.to_json_dict()
        payload["meta"] = _meta(args, seed=args.seed)
        atomic_write_text(args.json, json.dumps(payload, indent=2, sort_keys=True))
        print(f"wrote {args.json}")
    if args.csv:
        atomic_write_text(args.csv, _csv_text(["snr_db", "bler", "ber", "trials"],
                                              result.csv_rows()))
        print(f"wrote {args.csv}")
    return 0


# -- parser ------------------------------------------------------------------------


def _add_alphabet_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alphabet", default="pm1", choices=sorted(ALPHABETS),
                   help="named signaling alphabet (default pm1 = {-1,+1})")
    p.add_argument("--alphabet-set", default=None,
                   help="explicit comma-separated integer alphabet, overrides --alphabet")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="relaystc",
        description="Distributed space-time codes: construction, analysis, simulation.",
    )
    ap.add_argument("--version", action="version", version=f"relaystc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-code", help="construct a code lattice and report its shape")
    p.add_argument("--code", required=True, choices=CODE_NAMES)
    p.add_argument("--dump-basis", action="store_true", help="print all basis matrices exactly")
    p.add_argument("--json", default=None, help="write a JSON description")
    p.set_defaults(func=_cmd_build_code)

    p = sub.add_parser("det-stats", help="exhaustive determinant statistics")
    p.add_argument("--code", required=True, choices=CODE_NAMES)
    _add_alphabet_flags(p)
    p.add_argument("--convention", default="auto",
                   choices=("auto", "abs_det", "abs_det_squared"))
    p.add_argument("--json", default=None)
    p.add_argument("--csv", default=None, help="histogram as (bin_center, count) rows")
    p.set_defaults(func=_cmd_det_stats)

    p = sub.add_parser("diversity-check", help="difference-set rank certification")
    p.add_argument("--code", required=True, choices=CODE_NAMES)
    _add_alphabet_flags(p)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_diversity_check)

    p = sub.add_parser("fd-analyze", help="certified R zero structure and decoding exponent")
    p.add_argument("--code", required=True, choices=CODE_NAMES)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_fd_analyze)

    p = sub.add_parser("complexity", help="sphere-decoder node-count profile")
    p.add_argument("--code", required=True, choices=CODE_NAMES)
    _add_alphabet_flags(p)
    p.add_argument("--channels", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--snr", default="30", help="SNR dB: start:step:stop or comma list")
    p.add_argument("--csv", default=None)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_complexity)

    p = sub.add_parser("simulate", help="seeded Monte Carlo BER/BLER sweep")
    p.add_argument("--code", required=True, choices=CODE_NAMES)
    p.add_argument("--channel", default="quasi_static", choices=("quasi_static", "naf"))
    p.add_argument("--snr", required=True, help="SNR dB: start:step:stop or comma list")
    p.add_argument("--trials", type=int, default=10000, help="trial cap per SNR point")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-block-errors", type=int, default=200,
                   help="stop a point after this many block errors")
    p.add_argument("--batch", type=int, default=256)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: STCODE_THREADS or machine parallelism)")
    _add_alphabet_flags(p)
    p.add_argument("--config", default=None, help="JSON NafConfig file (flags override)")
    p.add_argument("--ns", type=int, default=None, help="source antennas (naf)")
    p.add_argument("--nr", type=int, default=None, help="relay antennas (naf)")
    p.add_argument("--nd", type=int, default=None, help="destination antennas (naf)")
    p.add_argument("--relays", type=int, default=None, help="relay count (naf)")
    p.add_argument("--gamma-direct1", type=float, default=None)
    p.add_argument("--gamma-direct2", type=float, default=None)
    p.add_argument("--gamma-relay-tx", type=float, default=None)
    p.add_argument("--gamma-relay-rx", type=float, default=None)
    p.add_argument("--json", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=_cmd_simulate)

    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    args._argv = argv
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: budget: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: invalid: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
