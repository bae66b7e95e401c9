"""Simulated tomography of the H, V, D, A states produced at four phase differences."""

import argparse
import json
from pathlib import Path

from scw_interface.interface import DetectorSpec
from scw_interface.tables import write_records, write_table
from scw_interface.tomography import basis_state_pipeline, default_mean_photons, rho_to_json


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/tomography")
    ap.add_argument("--duration", type=float, default=10.0, help="seconds per projector")
    ap.add_argument("--gamma", type=float, default=50.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--v-phase-offset", type=float, default=0.0)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = basis_state_pipeline(
        DetectorSpec(gamma=args.gamma),
        args.duration,
        args.seed,
        mean_photons=default_mean_photons(),
        v_phase_offset=args.v_phase_offset,
    )
    rows = []
    for res in results:
        (out / f"rho_{res.label}.json").write_text(json.dumps(rho_to_json(res.rho), indent=1) + "\n")
        write_records(out / f"records_{res.label}", res.records)
        rows.append((res.delta_phi, res.label, res.fidelity))
        print(f"{res.label}: F = {res.fidelity:.4f}")
    write_table(out / "tomography_fidelity", ("delta_phi_rad", "target", "fidelity"), rows)


if __name__ == "__main__":
    main()
