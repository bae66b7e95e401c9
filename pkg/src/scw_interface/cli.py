"""Command-line front end writing figure-ready datasets.

Exit codes: 0 success, 2 configuration or usage error, 3 runtime or
model-validity error (including unwritable output paths).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
import warnings
from pathlib import Path

from . import scans
from .config import ConfigError, RunConfig, apply_overrides, load_config, serialize_config
from .interface import alpha0_for_peak_rate
from .keyrate import ModelValidityWarning, ProtocolParams, Scheme, key_rate, loss_db_to_eta
from .optimize import OptimizationBounds, sweep
from .tables import read_records, write_records, write_table
from .tomography import (
    BASIS_TARGETS,
    basis_state_pipeline,
    default_mean_photons,
    fidelity,
    mle_reconstruct,
    rho_to_json,
)

log = logging.getLogger("scw_interface")

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 2, 3

KEYRATE_COLUMNS = ("loss_db", "eta", "scheme", "alpha0", "beta", "K_bits_per_s", "Q", "P_B", "chi")
OPTIMIZE_COLUMNS = KEYRATE_COLUMNS + ("alpha0_opt", "beta_opt", "below_cutoff")


class UsageError(Exception):
    pass


def _scan_detector(cfg: RunConfig):
    return dataclasses.replace(cfg.detector, gamma=cfg.scan_gamma)


def _scan_alpha0(cfg: RunConfig) -> float:
    if cfg.scan_alpha0 is not None:
        return cfg.scan_alpha0
    return alpha0_for_peak_rate(cfg.scan_beta, cfg.scan_peak_rate, cfg.filter, _scan_detector(cfg))


def _out(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_phase_scan(cfg: RunConfig) -> list[Path]:
    phis = cfg.phis()
    if not phis:
        raise UsageError("phase list is empty")
    det = _scan_detector(cfg)
    alpha0 = _scan_alpha0(cfg)
    scan = scans.phase_scan(cfg.scan_beta, alpha0, cfg.filter, det, phis)
    log.info("alpha0=%.6g visibility H=%.4f V=%.4f", alpha0, scans.visibility(scan.rate_h), scans.visibility(scan.rate_v))
    path = write_table(_out(cfg) / "phase_scan", ("delta_phi_rad", "rate_h_norm", "rate_v_norm"), scan.rows(), cfg.out_format)
    return [path]


def cmd_visibility(cfg: RunConfig) -> list[Path]:
    if not cfg.vis_betas:
        raise UsageError("beta list is empty")
    phis = cfg.phis()
    if not phis:
        raise UsageError("phase list is empty")
    sidebands = (-1, 1) if cfg.vis_first_order_only else None
    rows = scans.visibility_vs_beta(
        cfg.vis_betas, _scan_alpha0(cfg), cfg.filter, _scan_detector(cfg), phis=phis, sidebands=sidebands
    )
    return [write_table(_out(cfg) / "visibility", ("beta", "visibility"), rows, cfg.out_format)]


def cmd_tomography(cfg: RunConfig, records_file: str | None = None) -> list[Path]:
    out = _out(cfg)
    written = []
    if records_file is not None:
        rho = mle_reconstruct(read_records(Path(records_file)))
        path = out / "rho_reconstructed.json"
        path.write_text(json.dumps(rho_to_json(rho), indent=1) + "\n")
        rows = [(label, fidelity(rho, target)) for _, label, target in BASIS_TARGETS]
        written.append(path)
        written.append(write_table(out / "fidelity_vs_targets", ("target", "fidelity"), rows, cfg.out_format))
        return written
    n = default_mean_photons(cfg.tomo_alpha0, cfg.tomo_beta)
    results = basis_state_pipeline(
        cfg.detector, cfg.tomo_duration, cfg.tomo_seed, mean_photons=n, v_phase_offset=cfg.tomo_v_phase_offset
    )
    rows = []
    for res in results:
        rho_path = out / f"rho_{res.label}.json"
        payload = {"delta_phi_rad": float(f"{res.delta_phi:.12g}"), "target": res.label, **rho_to_json(res.rho)}
        rho_path.write_text(json.dumps(payload, indent=1) + "\n")
        written.append(rho_path)
        written.append(write_records(out / f"records_{res.label}", res.records))
        rows.append((res.delta_phi, res.label, res.fidelity))
    written.append(write_table(out / "tomography_fidelity", ("delta_phi_rad", "target", "fidelity"), rows, cfg.out_format))
    return written


def _schemes(name: str) -> list[Scheme]:
    if name == "both":
        return [Scheme.TRADITIONAL, Scheme.DISCRIMINATOR]
    return [Scheme(name)]


def _fixed(cfg: RunConfig) -> ProtocolParams:
    return ProtocolParams(cfg.key_alpha0, cfg.key_beta, cfg.filter, cfg.detector, cfg.f_ec)


def _clamp(k: float) -> float:
    return max(k, 0.0)


def cmd_keyrate(cfg: RunConfig, scheme: str = "both", optimize: bool = False, threads: int = 1) -> list[Path]:
    """Loss sweep; key rates below zero are written as 0."""
    if not cfg.losses_db:
        raise UsageError("loss list is empty")
    losses = sorted(cfg.losses_db)
    params = _fixed(cfg)
    rows = []
    if optimize:
        bounds = OptimizationBounds((0.0, cfg.opt_alpha0_max), (0.0, cfg.opt_beta_max), cfg.opt_grid)
        for s in _schemes(scheme):
            for opt in sweep(s, params, losses, bounds, warm_start=cfg.opt_warm_start, workers=threads):
                r = opt.result
                rows.append(
                    (opt.loss_db, opt.eta, s.value, opt.alpha0, opt.beta, _clamp(r.K), r.Q, r.P_B, r.chi,
                     opt.alpha0, opt.beta, opt.below_cutoff)
                )
        return [write_table(_out(cfg) / "optimize", OPTIMIZE_COLUMNS, rows, cfg.out_format)]
    for s in _schemes(scheme):
        for loss in losses:
            eta = loss_db_to_eta(loss)
            r = key_rate(s, params, eta)
            rows.append((loss, eta, s.value, params.alpha0, params.beta, _clamp(r.K), r.Q, r.P_B, r.chi))
    return [write_table(_out(cfg) / "keyrate", KEYRATE_COLUMNS, rows, cfg.out_format)]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int, help="tomography RNG seed")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="scw-interface", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("phase-scan", parents=[common], help="normalized H/V rates vs phase difference")
    ps.add_argument("--beta", type=float)
    ps.add_argument("--alpha0", type=float)
    ps.add_argument("--phis", help="comma-separated phase differences in rad")

    vis = sub.add_parser("visibility", parents=[common], help="visibility vs modulation depth")
    vis.add_argument("--betas", help="comma-separated modulation depths")
    vis.add_argument("--alpha0", type=float)
    vis.add_argument("--first-order-only", action="store_true")

    tomo = sub.add_parser("tomography", parents=[common], help="simulated tomography of the four basis states")
    tomo.add_argument("--duration", type=float, help="acquisition time per projector, s")
    tomo.add_argument("--records", help="reconstruct from a projector,counts,duration_s CSV instead")

    for name, helptext in (("keyrate", "key rate vs channel loss"), ("optimize", "key rate with per-loss optimization")):
        kr = sub.add_parser(name, parents=[common], help=helptext)
        kr.add_argument("--scheme", choices=("traditional", "discriminator", "both"), default="both")
        kr.add_argument("--losses", help="comma-separated losses in dB")
        kr.add_argument("--gamma", type=float, help="dark count rate override, Hz")
        if name == "keyrate":
            kr.add_argument("--optimize", action="store_true")
    return p


def _config_from_args(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    values: dict[str, str] = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        values[k.strip()] = v.strip()
    flag_map = {
        "out": "output.dir",
        "format": "output.format",
        "seed": "tomography.seed",
        "beta": "scan.beta",
        "alpha0": "scan.alpha0",
        "phis": "scan.phis",
        "betas": "visibility.betas",
        "duration": "tomography.duration",
        "losses": "keyrate.losses_db",
        "gamma": "detector.gamma",
    }
    for attr, key in flag_map.items():
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = str(v)
    if getattr(args, "first_order_only", False):
        values["visibility.first_order_only"] = "true"
    return apply_overrides(cfg, values)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = _config_from_args(args)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        with warnings.catch_warnings():
            warnings.simplefilter("error", ModelValidityWarning)
            if args.command == "phase-scan":
                paths = cmd_phase_scan(cfg)
            elif args.command == "visibility":
                paths = cmd_visibility(cfg)
            elif args.command == "tomography":
                paths = cmd_tomography(cfg, args.records)
            else:
                optimize = args.command == "optimize" or args.optimize
                paths = cmd_keyrate(cfg, args.scheme, optimize, args.threads)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelValidityWarning as exc:
        print(f"model validity error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for path in paths:
        print(path)
    if args.verbose:
        log.info("config:\n%s", serialize_config(cfg))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
