"""Half-duplex N-relay MIMO amplify-and-forward transmission model.

Each cooperation frame has two partitions: the source transmits in both,
the relays listen in the first and forward a scaled version in the second.
`equivalent_channel` packs the whole superframe into a virtual single-user
MIMO form: stacking the two phases of frame i under each other and the
frames side by side gives

    Y_stacked = H_eq @ X + noise,        H_eq = [M_1 ... M_N],

with X the block-diagonal n x n codeword, n = N * (n_s + n_r).  The
relay-path noise is colored by G_i B_i; the per-frame whiteners returned
alongside restore white noise and define the matrix the decoder sees.

The SNR-related scalars and the relay normalization B_i = b_i * I are not
pinned by the transmission equations themselves; the defaults below follow
the standard amplify-and-forward calibration and every scalar can be
overridden in `NafConfig`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class NafConfig:
    """Geometry and calibration of the relay network."""

    n_relays: int = 2
    n_s: int = 2
    n_r: int = 2
    n_d: int = 1
    frame_len: int = 8
    snr_db: float = 20.0
    gamma_direct_1: float | None = None
    gamma_direct_2: float | None = None
    gamma_relay_tx: float | None = None
    gamma_relay_rx: float | None = None
    relay_gain_mode: str = "unit_power"
    es_per_entry: float = 1.0

    def __post_init__(self):
        if self.n_relays < 1:
            raise ValueError("need at least one relay")
        if self.n_r > self.n_s:
            raise ValueError("only the n_r <= n_s regime is modeled")
        if self.frame_len % 2 != 0:
            raise ValueError("frame length must be even")
        if self.relay_gain_mode not in ("unit_power", "identity"):
            raise ValueError(f"unknown relay_gain_mode {self.relay_gain_mode!r}")

    @property
    def snr_linear(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)

    def gammas(self) -> tuple[float, float, float, float]:
        """(gamma_1, gamma_2, gamma_R, gamma_R') with standard AF defaults."""
        s = self.snr_linear
        g1 = self.gamma_direct_1 if self.gamma_direct_1 is not None else np.sqrt(s)
        g2 = self.gamma_direct_2 if self.gamma_direct_2 is not None else np.sqrt(s)
        gr = self.gamma_relay_tx if self.gamma_relay_tx is not None else np.sqrt(s / (1.0 + s))
        grp = self.gamma_relay_rx if self.gamma_relay_rx is not None else np.sqrt(s)
        return float(g1), float(g2), float(gr), float(grp)

    def relay_gain(self) -> float:
        """Scalar b with B_i = b * I, normalizing the relay's output power."""
        if self.relay_gain_mode == "identity":
            return 1.0
        _, _, _, grp = self.gammas()
        return float(1.0 / np.sqrt(grp ** 2 * self.n_s * self.es_per_entry + 1.0))

    @property
    def n_virtual(self) -> int:
        return self.n_relays * (self.n_s + self.n_r)


def load_naf_config(path: str | Path, **overrides) -> NafConfig:
    """Read a NafConfig from a JSON file; keyword overrides win."""
    raw = json.loads(Path(path).read_text())
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return NafConfig(**raw)


@dataclass(frozen=True)
class ChannelRealization:
    """One superframe's worth of static Rayleigh channels."""

    F: np.ndarray
    H: tuple[np.ndarray, ...]
    G: tuple[np.ndarray, ...]


def _cn01(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def sample_channels(cfg: NafConfig, rng: np.random.Generator) -> ChannelRealization:
    """Draw i.i.d. unit-variance circularly-symmetric Gaussian channels."""
    F = _cn01(rng, cfg.n_d, cfg.n_s)
    H = tuple(_cn01(rng, cfg.n_r, cfg.n_s) for _ in range(cfg.n_relays))
    G = tuple(_cn01(rng, cfg.n_d, cfg.n_r) for _ in range(cfg.n_relays))
    return ChannelRealization(F=F, H=H, G=G)


def naf_transmit(cfg: NafConfig, ch: ChannelRealization, frames,
                 rng: np.random.Generator | None = None) -> list[tuple[np.ndarray, np.ndarray]]:
    """Run the two-phase transmission for each cooperation frame.

    ``frames`` lists (X_1, X_2) per frame, each n_s x T/2.  ``rng=None``
    disables all noise (useful for consistency checks).  Returns the
    received pairs (Y_1, Y_2).
    """
    if len(frames) != cfg.n_relays:
        raise ValueError(f"expected {cfg.n_relays} frames, got {len(frames)}")
    g1, g2, gr, grp = cfg.gammas()
    b = cfg.relay_gain()
    half = cfg.frame_len // 2
    out = []
    for i, (X1, X2) in enumerate(frames):
        X1 = np.asarray(X1, dtype=complex)
        X2 = np.asarray(X2, dtype=complex)
        if X1.shape != (cfg.n_s, half) or X2.shape != (cfg.n_s, half):
            raise ValueError(
                f"frame {i}: expected {(cfg.n_s, half)} transmit matrices, "
                f"got {X1.shape} and {X2.shape}"
            )
        V1 = _cn01(rng, cfg.n_d, half) if rng is not None else 0.0
        V2 = _cn01(rng, cfg.n_d, half) if rng is not None else 0.0
        W = _cn01(rng, cfg.n_r, half) if rng is not None else 0.0
        relay_rx = grp * ch.H[i] @ X1 + W
        Y1 = g1 * ch.F @ X1 + V1
        Y2 = g2 * ch.F @ X2 + V2 + gr * ch.G[i] @ (b * relay_rx)
        out.append((Y1, Y2))
    return out


@dataclass(frozen=True)
class EquivalentChannel:
    """Virtual single-user MIMO form of one channel realization.

    ``H_eq`` has 2*n_d rows (phase 1 over phase 2) and n columns; frame i
    occupies the i-th column block.  ``whiteners`` holds the per-frame
    n_d x n_d transforms for the phase-2 rows; ``H_eq_white`` has them
    applied, so a decoder pairing it with unit-variance noise sees the
    exact transmission model.
    """

    H_eq: np.ndarray
    H_eq_white: np.ndarray
    whiteners: tuple[np.ndarray, ...]
    block_cols: int

    def stack_received(self, received) -> np.ndarray:
        """Arrange naf_transmit output as the (2 n_d) x n stacked matrix."""
        n_d = self.H_eq.shape[0] // 2
        out = np.zeros((2 * n_d, self.H_eq.shape[1]), dtype=complex)
        for i, (Y1, Y2) in enumerate(received):
            c = i * self.block_cols
            out[:n_d, c:c + self.block_cols] = Y1
            out[n_d:, c:c + self.block_cols] = Y2
        return out

    def whiten(self, stacked: np.ndarray) -> np.ndarray:
        """Apply the per-frame phase-2 whiteners to a stacked receive matrix."""
        n_d = self.H_eq.shape[0] // 2
        out = stacked.copy()
        for i, W in enumerate(self.whiteners):
            c = i * self.block_cols
            out[n_d:, c:c + self.block_cols] = W @ out[n_d:, c:c + self.block_cols]
        return out


def equivalent_channel(cfg: NafConfig, ch: ChannelRealization) -> EquivalentChannel:
    """Build H_eq = [M_1 ... M_N] and the phase-2 noise whiteners.

    Requires n_r = n_s so that the codeword blocks are 2*n_s x 2*n_s; the
    zero-noise output of `naf_transmit`, stacked with `stack_received`,
    equals ``H_eq @ X`` exactly.
    """
    if cfg.n_r != cfg.n_s:
        raise ValueError("the virtual single-user form needs n_r = n_s")
    g1, g2, gr, grp = cfg.gammas()
    b = cfg.relay_gain()
    n = cfg.n_virtual
    two_ns = 2 * cfg.n_s
    H_eq = np.zeros((2 * cfg.n_d, n), dtype=complex)
    H_w = np.zeros_like(H_eq)
    whiteners = []
    for i in range(cfg.n_relays):
        relay_path = gr * grp * b * ch.G[i] @ ch.H[i]
        M = np.zeros((2 * cfg.n_d, two_ns), dtype=complex)
        M[:cfg.n_d, :cfg.n_s] = g1 * ch.F
        M[cfg.n_d:, :cfg.n_s] = relay_path
        M[cfg.n_d:, cfg.n_s:] = g2 * ch.F
        cov = np.eye(cfg.n_d) + (gr * b) ** 2 * (ch.G[i] @ ch.G[i].conj().T)
        W = _inv_sqrt_hermitian(cov)
        whiteners.append(W)
        Mw = M.copy()
        Mw[cfg.n_d:, :] = W @ M[cfg.n_d:, :]
        H_eq[:, i * two_ns:(i + 1) * two_ns] = M
        H_w[:, i * two_ns:(i + 1) * two_ns] = Mw
    return EquivalentChannel(
        H_eq=H_eq, H_eq_white=H_w, whiteners=tuple(whiteners), block_cols=two_ns
    )


def _inv_sqrt_hermitian(C: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(C)
    return vecs @ np.diag(1.0 / np.sqrt(vals)) @ vecs.conj().T


def quasi_static_mimo(n_d: int, n: int, snr_db: float,
                      rng: np.random.Generator) -> np.ndarray:
    """Plain n_d x n Rayleigh channel draw (unit variance per entry).

    The SNR argument keeps the sampling interface uniform with the relay
    model; the channel itself is unscaled and noise power is set by the
    caller.
    """
    del snr_db
    return _cn01(rng, n_d, n)
