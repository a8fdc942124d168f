"""A small seeded BLER sweep comparing the four codes (2 bpcu, 2-PAM).

Modest trial counts keep this demo around a minute; the acceptance suite
runs the statistically tight version.  silver_-17 is far worse than the
other three, which track each other closely.
"""

import numpy as np

from relaystc import CODE_NAMES, SimConfig, bler_crossing_snr, run_ber_sweep

GRID = (9.0, 12.0, 15.0)
results = {}
for name in CODE_NAMES:
    cfg = SimConfig(code=name, snr_db=GRID, trials=8000, master_seed=2024,
                    max_block_errors=150, batch=512)
    res = run_ber_sweep(cfg)
    results[name] = res
    row = "  ".join(f"{p.snr_db:4.1f} dB: {p.bler:9.5f} ({p.trials} trials)"
                    for p in res.points)
    print(f"{name:11s} {row}")
    print(f"{'':11s} rate = {res.metadata['rate_bpcu']} bpcu, "
          f"seed = {res.metadata['master_seed']}")

print("\nBLER = 1e-2 crossings (log-linear interpolation):")
for name, res in results.items():
    x = bler_crossing_snr(res.points, 1e-2)
    print(f"  {name:11s} {x if x is None else round(x, 2)} dB")

print("\nwriting JSON/CSV is available via SimResult.to_json()/csv_rows() "
      "or the 'relaystc simulate' command")
