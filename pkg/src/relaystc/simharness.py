"""Seeded Monte Carlo experiments: BER/BLER sweeps, determinant reports,
and their serialization.

Every trial owns an RNG derived from (master_seed, snr_index, trial_index),
so results are bit-exact for a given configuration regardless of thread
count or batch scheduling; error counters are integers merged by addition.
Each SNR point stops early once `max_block_errors` block errors have
accumulated (checked at batch boundaries to keep the trial set
deterministic).
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import __version__
from .codes import (
    DetStats,
    STCodeLattice,
    build_lattice,
    det_statistics,
    normalize_unit_volume,
    select_convention,
)
from .mldecode import DegenerateChannelError, RealizedLattice, sphere_decode
from .relaychannel import (
    NafConfig,
    equivalent_channel,
    quasi_static_mimo,
    sample_channels,
)

CHANNEL_MODES = ("quasi_static", "naf")

MAX_RESAMPLES = 64


@dataclass(frozen=True)
class SimConfig:
    """One BER/BLER sweep: code, channel mode, SNR grid and budgets."""

    code: str
    snr_db: tuple[float, ...]
    trials: int | tuple[int, ...]
    master_seed: int
    channel_mode: str = "quasi_static"
    alphabet: tuple[int, ...] = (-1, 1)
    max_block_errors: int = 200
    batch: int = 256
    threads: int | None = None
    n_d: int = 1
    naf: NafConfig | None = None

    def __post_init__(self):
        if not self.snr_db:
            raise ValueError("snr list must be nonempty")
        if min(self._trials_tuple()) < 1:
            raise ValueError("trials must be >= 1")
        if self.channel_mode not in CHANNEL_MODES:
            raise ValueError(f"unknown channel mode {self.channel_mode!r}")

    def _trials_tuple(self) -> tuple[int, ...]:
        """Per-point trial caps (a scalar applies to every SNR point)."""
        if isinstance(self.trials, int):
            return (self.trials,) * len(self.snr_db)
        if len(self.trials) != len(self.snr_db):
            raise ValueError("per-point trials must match the SNR grid length")
        return tuple(int(t) for t in self.trials)

    def resolved_threads(self) -> int:
        if self.threads is not None:
            return max(1, self.threads)
        env = os.environ.get("STCODE_THREADS")
        if env:
            return max(1, int(env))
        return os.cpu_count() or 1


@dataclass
class SimPoint:
    """Accumulated counters for one SNR point."""

    snr_db: float
    trials: int
    block_errors: int
    bit_errors: int
    bits_per_block: int
    decoder_nodes: int
    resampled: int

    @property
    def bler(self) -> float:
        return self.block_errors / self.trials

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.bits_per_block)

    @property
    def mean_decoder_nodes(self) -> float:
        return self.decoder_nodes / self.trials

    def to_json_dict(self) -> dict:
        return {
            "snr_db": self.snr_db,
            "trials": self.trials,
            "block_errors": self.block_errors,
            "bit_errors": self.bit_errors,
            "bits_per_block": self.bits_per_block,
            "bler": self.bler,
            "ber": self.ber,
            "mean_decoder_nodes": self.mean_decoder_nodes,
            "resampled": self.resampled,
        }


@dataclass
class SimResult:
    points: list[SimPoint]
    metadata: dict

    def to_json_dict(self) -> dict:
        return {"metadata": self.metadata, "points": [p.to_json_dict() for p in self.points]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    def csv_rows(self) -> list[tuple]:
        return [(p.snr_db, p.bler, p.ber, p.trials) for p in self.points]


def derive_trial_seed(master_seed: int, snr_index: int, trial_index: int) -> int:
    """Injective counter-based seed for one trial of one SNR point."""
    if not (0 <= snr_index < 1 << 16) or not (0 <= trial_index < 1 << 48):
        raise ValueError("snr_index/trial_index out of the injective packing range")
    return (int(master_seed) << 64) | (snr_index << 48) | trial_index


def _trial_counts(basis, k, alphabet, mode, snr_db, sigma2, naf_cfg, n_d, seed):
    """Run one trial; returns (block_err, bit_errs, nodes, resampled)."""
    rng = np.random.default_rng(seed)
    J = alphabet
    resampled = 0
    for _ in range(MAX_RESAMPLES):
        if mode == "quasi_static":
            H = quasi_static_mimo(n_d, basis.shape[1], snr_db, rng)
            noise_var2 = sigma2 / 2.0
        else:
            ch = sample_channels(naf_cfg, rng)
            H = equivalent_channel(naf_cfg, ch).H_eq_white
            noise_var2 = 0.5  # whitened model noise is unit variance per entry
        try:
            lat = RealizedLattice.realize(H, basis)
        except DegenerateChannelError:
            resampled += 1
            continue
        z0 = rng.choice(J, size=k)
        y = lat.B @ z0.astype(float) + rng.standard_normal(lat.B.shape[0]) * np.sqrt(noise_var2)
        z_hat, nodes = sphere_decode(y, lat, J)
        wrong = int(np.count_nonzero(z_hat != z0))
        return int(wrong > 0), wrong, nodes, resampled
    raise DegenerateChannelError(f"channel stayed degenerate after {MAX_RESAMPLES} resamples")


def _run_range(args):
    (basis, k, alphabet, mode, snr_db, sigma2, naf_cfg, n_d,
     master_seed, snr_index, t0, t1) = args
    blocks = bits = nodes = resampled = 0
    for t in range(t0, t1):
        seed = derive_trial_seed(master_seed, snr_index, t)
        b, w, nd, rs = _trial_counts(basis, k, alphabet, mode, snr_db, sigma2, naf_cfg, n_d, seed)
        blocks += b
        bits += w
        nodes += nd
        resampled += rs
    return blocks, bits, nodes, resampled


def run_ber_sweep(cfg: SimConfig) -> SimResult:
    """Sweep BLER/BER over the SNR grid with the configured stopping rule."""
    code = normalize_unit_volume(build_lattice(cfg.code))
    basis = code.basis_complex
    k = code.k
    J = np.asarray(sorted(cfg.alphabet), dtype=np.int64)
    bits_per_coeff = max(1, int(round(np.log2(len(J)))))
    bits_per_block = k * bits_per_coeff
    es_col = float(sum(np.linalg.norm(b) ** 2 for b in basis)) / code.n
    es_entry = es_col / code.n
    threads = cfg.resolved_threads()

    points = []
    trial_caps = cfg._trials_tuple()
    for snr_index, snr_db in enumerate(cfg.snr_db):
        point_trials = trial_caps[snr_index]
        sigma2 = es_col / 10.0 ** (snr_db / 10.0)
        naf_cfg = None
        if cfg.channel_mode == "naf":
            base = cfg.naf if cfg.naf is not None else NafConfig()
            naf_cfg = replace(base, snr_db=snr_db, es_per_entry=es_entry)
        blocks = bits = nodes = resampled = 0
        trials_run = 0
        for start in range(0, point_trials, cfg.batch):
            stop = min(start + cfg.batch, point_trials)
            ranges = _split_range(start, stop, threads)
            tasks = [
                (basis, k, J, cfg.channel_mode, snr_db, sigma2, naf_cfg, cfg.n_d,
                 cfg.master_seed, snr_index, a, b)
                for a, b in ranges
            ]
            if threads == 1 or len(tasks) == 1:
                results = [_run_range(t) for t in tasks]
            else:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    results = list(pool.map(_run_range, tasks))
            for b_, w_, n_, r_ in results:
                blocks += b_
                bits += w_
                nodes += n_
                resampled += r_
            trials_run = stop
            if blocks >= cfg.max_block_errors:
                break
        points.append(SimPoint(
            snr_db=float(snr_db), trials=trials_run, block_errors=blocks,
            bit_errors=bits, bits_per_block=bits_per_block,
            decoder_nodes=nodes, resampled=resampled,
        ))

    rate_bpcu = bits_per_block / code.n
    meta = {
        "artifact_version": __version__,
        "code": cfg.code,
        "channel_mode": cfg.channel_mode,
        "master_seed": cfg.master_seed,
        "alphabet": [int(v) for v in J],
        "scale": code.scale,
        "es_per_column": es_col,
        "rate_bpcu": rate_bpcu,
        "config": _config_echo(cfg),
    }
    return SimResult(points=points, metadata=meta)


def _split_range(a: int, b: int, parts: int) -> list[tuple[int, int]]:
    n = b - a
    parts = max(1, min(parts, n))
    step = (n + parts - 1) // parts
    return [(a + i * step, min(a + (i + 1) * step, b)) for i in range(parts) if a + i * step < b]


def _config_echo(cfg: SimConfig) -> dict:
    d = asdict(cfg)
    d["snr_db"] = list(cfg.snr_db)
    d["alphabet"] = list(cfg.alphabet)
    if cfg.naf is not None:
        d["naf"] = asdict(cfg.naf)
    return d


# -- determinant reports ----------------------------------------------------------


def run_det_report(code_name: str, convention: str = "auto",
                   alphabet: tuple[int, ...] = (-1, 1)) -> tuple[STCodeLattice, DetStats, dict]:
    """Normalize the named code and compute its determinant statistics.

    ``convention='auto'`` locks the |det| convention against the golden
    reference (see `select_convention`).  Returns the normalized lattice,
    the stats, and a metadata dict suitable for embedding in output files.
    """
    code = normalize_unit_volume(build_lattice(code_name))
    conv = select_convention() if convention == "auto" else convention
    stats = det_statistics(code, conv, alphabet=alphabet)
    meta = {
        "artifact_version": __version__,
        "code": code_name,
        "convention": conv,
        "convention_policy": convention,
        "scale": code.scale,
        "alphabet": list(alphabet),
        "n_codewords": stats.n_codewords,
    }
    return code, stats, meta


def bler_crossing_snr(points: list[SimPoint], target: float) -> float | None:
    """SNR where the BLER curve crosses ``target`` (log-linear interpolation)."""
    pts = [(p.snr_db, p.bler) for p in points if p.bler > 0]
    pts.sort()
    for (s0, b0), (s1, b1) in zip(pts, pts[1:]):
        lo, hi = min(b0, b1), max(b0, b1)
        if lo <= target <= hi and b0 != b1:
            t = (np.log10(target) - np.log10(b0)) / (np.log10(b1) - np.log10(b0))
            return float(s0 + t * (s1 - s0))
    return None
