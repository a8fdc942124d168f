"""The two-phase relay transmission and its virtual single-user MIMO form.

A block-diagonal codeword is sliced into per-frame transmit matrices; the
stacked received phases equal H_eq @ X exactly when noise is off, and the
per-frame whiteners restore white noise for the decoder.
"""

import numpy as np

from relaystc import (
    NafConfig,
    build_lattice,
    equivalent_channel,
    naf_transmit,
    normalize_unit_volume,
    reshape_to_naf_frames,
    sample_channels,
)

rng = np.random.default_rng(1)
cfg = NafConfig(snr_db=16.0)
print("config:", cfg)
print("gammas (g1, g2, gR, gR'):", tuple(round(g, 4) for g in cfg.gammas()))
print("relay gain b:", round(cfg.relay_gain(), 6))

ch = sample_channels(cfg, rng)
code = normalize_unit_volume(build_lattice("golden"))
z = rng.choice([-1.0, 1.0], 16)
X = np.tensordot(z, code.basis_complex, axes=1)

frames = [(C[:, :4], C[:, 4:]) for C in reshape_to_naf_frames(X, cfg.n_s)]
print("\nper-frame transmit shapes:", [(a.shape, b.shape) for a, b in frames])

received = naf_transmit(cfg, ch, frames, rng=None)  # noise off
eq = equivalent_channel(cfg, ch)
stacked = eq.stack_received(received)
err = np.max(np.abs(stacked - eq.H_eq @ X))
print(f"zero-noise consistency |stacked - H_eq @ X| = {err:.3e}")
print("H_eq shape:", eq.H_eq.shape, " (two phases stacked, frames side by side)")

cov = np.eye(cfg.n_d) + (cfg.gammas()[2] * cfg.relay_gain()) ** 2 * (ch.G[0] @ ch.G[0].conj().T)
print("\nphase-2 noise covariance before whitening (frame 1):", np.round(cov.real, 4))
W = eq.whiteners[0]
print("whitener @ cov @ whitener^H:", np.round((W @ cov @ W.conj().T).real, 12))
