"""Normalized H/V count rates vs phase difference, and visibility vs modulation depth.

Writes phase_scan.csv and visibility.csv under the output directory.
"""

import argparse
from pathlib import Path

import numpy as np

from scw_interface.interface import DetectorSpec, FilterSpec, alpha0_for_peak_rate
from scw_interface.scans import phase_scan, visibility_vs_beta
from scw_interface.tables import write_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/phase_scan")
    ap.add_argument("--beta", type=float, default=0.15)
    ap.add_argument("--gamma", type=float, default=100.0)
    ap.add_argument("--peak-rate", type=float, default=1e4)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    filt, det = FilterSpec(), DetectorSpec(gamma=args.gamma)
    a0 = alpha0_for_peak_rate(args.beta, args.peak_rate, filt, det)
    scan = phase_scan(args.beta, a0, filt, det)
    write_table(out / "phase_scan", ("delta_phi_rad", "rate_h_norm", "rate_v_norm"), scan.rows())
    print(f"alpha0 = {a0:.5f}, visibility = {scan.visibility():.4f}")

    betas = np.round(np.concatenate([np.arange(0.025, 1.0, 0.025), np.arange(1.0, 2.51, 0.1)]), 4)
    all_sb = visibility_vs_beta(betas, a0, filt, det)
    first = visibility_vs_beta(betas, a0, filt, det, sidebands=(-1, 1))
    rows = [(b, v, v1) for (b, v), (_, v1) in zip(all_sb, first)]
    write_table(out / "visibility", ("beta", "visibility", "visibility_first_order"), rows)
    plateau = [v for b, v, _ in rows if 0.1 <= b <= 0.7]
    print(f"visibility on 0.1 <= beta <= 0.7: {min(plateau):.4f} .. {max(plateau):.4f}")


if __name__ == "__main__":
    main()
