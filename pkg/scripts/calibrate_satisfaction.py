#!/usr/bin/env python3
"""Direct-sampling calibration of per-panel satisfaction probability.

Standalone oracle for the default scenario: estimates, for every IRS panel,
the probability that a uniformly placed UE served by the panel's cell meets
the rate threshold through that panel, under one independent Rayleigh block
per leg. It restates the default scenario constants straight-line and
imports nothing from the package; the frozen table in
tests/test_acceptance.py comes from a run of this script.

Sampling law per estimate:
  ue ~ U([0, grid]^2), serving cell = nearest cell, panel = each panel of
  the serving ring, g1, g2 ~ Exp(1) i.i.d., and

      snr  = 10^((tx + gain - PL(bs->panel) - PL(panel->ue) - noise)/10) * g1 * g2
      PL(d) = ref + 10 * n * log10(max(d, 1))
      satisfied iff log2(1 + snr) >= threshold

Usage:
    python scripts/calibrate_satisfaction.py [--samples N] [--gain G]
    python scripts/calibrate_satisfaction.py --gain-sweep 50 75 5
"""

import argparse

import numpy as np

GRID = 200.0
CELLS = np.array([[50.0, 100.0], [150.0, 100.0]])
RING_RADIUS = 20.0
PANELS_PER_CELL = 8
PATHLOSS_EXPONENT = 2.2
REF_LOSS_DB = 0.0
TX_POWER_DB = 5.0
NOISE_POWER_DB = 0.0
IRS_GAIN_DB = 61.0
RATE_THRESHOLD = 1.0

SEED = 314159
TARGET_BAND = (0.2, 0.8)


def panel_positions():
    """All panel coordinates, cell-major, angle 2*pi*k/n within a cell."""
    angles = 2.0 * np.pi * np.arange(PANELS_PER_CELL) / PANELS_PER_CELL
    ring = RING_RADIUS * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return np.concatenate([c + ring for c in CELLS])


def path_loss_db(d):
    return REF_LOSS_DB + 10.0 * PATHLOSS_EXPONENT * np.log10(np.maximum(d, 1.0))


def per_panel_probability(gain_db, n_samples, seed=SEED):
    """Satisfaction probability per panel and the number of UEs it saw."""
    rng = np.random.default_rng(seed)
    panels = panel_positions()
    ues = rng.uniform(0.0, GRID, size=(n_samples, 2))
    cell_of_ue = np.argmin(
        np.linalg.norm(ues[:, None, :] - CELLS[None, :, :], axis=2), axis=1
    )

    snr_threshold = 2.0**RATE_THRESHOLD - 1.0
    hits = np.zeros(len(panels))
    counts = np.zeros(len(panels))
    for j, panel in enumerate(panels):
        cell = j // PANELS_PER_CELL
        mine = ues[cell_of_ue == cell]
        pl_bs = path_loss_db(np.linalg.norm(panel - CELLS[cell]))
        pl_ue = path_loss_db(np.linalg.norm(mine - panel, axis=1))
        budget = TX_POWER_DB + gain_db - pl_bs - pl_ue - NOISE_POWER_DB
        g = rng.exponential(size=(len(mine), 2))
        snr = 10.0 ** (budget / 10.0) * g[:, 0] * g[:, 1]
        hits[j] = np.sum(snr >= snr_threshold)
        counts[j] = len(mine)
    return hits / counts, counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=400_000)
    ap.add_argument("--gain", type=float, default=IRS_GAIN_DB)
    ap.add_argument("--gain-sweep", nargs=3, type=float, metavar=("LO", "HI", "STEP"))
    args = ap.parse_args()

    if args.gain_sweep:
        lo, hi, step = args.gain_sweep
        print("gain_db  overall_p")
        for gain in np.arange(lo, hi + step / 2, step):
            probs, counts = per_panel_probability(gain, args.samples)
            overall = float(np.sum(probs * counts) / np.sum(counts))
            print(f"{gain:7.1f}  {overall:.4f}")
        return 0

    probs, counts = per_panel_probability(args.gain, args.samples)
    overall = float(np.sum(probs * counts) / np.sum(counts))
    print(f"gain={args.gain} dB, threshold={RATE_THRESHOLD} bit/s/Hz, "
          f"{args.samples} UE placements")
    print("panel  cell  angle_deg  p_satisfied")
    for j, p in enumerate(probs):
        cell = j // PANELS_PER_CELL
        angle = 360.0 * (j % PANELS_PER_CELL) / PANELS_PER_CELL
        print(f"{j:5d}  {cell:4d}  {angle:9.1f}  {p:.4f}")
    print(f"overall: {overall:.4f}")

    lo, hi = TARGET_BAND
    ok = lo < overall < hi and all(lo < p < hi for p in probs)
    print(f"within ({lo}, {hi}): {'yes' if ok else 'NO'}")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
