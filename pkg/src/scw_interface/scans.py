"""Phase scans and visibility curves of the interface output."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .interface import (
    DetectorSpec,
    FilterSpec,
    ModulationParams,
    choose_truncation,
    click_rate,
    interface_transform,
    make_scw_state,
)

# Default phase grid: 360 points on [0, 2pi), contains 0, pi/2, pi and 3pi/2 exactly.
DEFAULT_PHIS = np.linspace(0.0, 2 * np.pi, 361)[:-1]


@dataclass(frozen=True)
class PhaseScan:
    delta_phi: np.ndarray
    rate_h: np.ndarray  # Hz, '+' port
    rate_v: np.ndarray  # Hz, '-' port

    @property
    def rate_h_norm(self) -> np.ndarray:
        return self.rate_h / self.rate_h.max()

    @property
    def rate_v_norm(self) -> np.ndarray:
        return self.rate_v / self.rate_v.max()

    def rows(self) -> list[tuple[float, float, float]]:
        return list(zip(self.delta_phi.tolist(), self.rate_h_norm.tolist(), self.rate_v_norm.tolist()))

    def visibility(self) -> float:
        """Mean of the H and V curve visibilities."""
        return 0.5 * (visibility(self.rate_h) + visibility(self.rate_v))


def port_rates(
    beta: float,
    alpha0: complex,
    filt: FilterSpec,
    det: DetectorSpec,
    delta_phi: float,
    *,
    S: int | None = None,
    sidebands=None,
    physical: bool = False,
) -> tuple[float, float]:
    """Click rates (H, V) in Hz for one phase difference, phi_LO fixed at 0."""
    S = choose_truncation(beta) if S is None else S
    state = make_scw_state(alpha0, ModulationParams(beta, phi=delta_phi), S)
    out = interface_transform(state, filt, ModulationParams(beta), physical=physical)
    return click_rate(out.plus, det, sidebands), click_rate(out.minus, det, sidebands)


def phase_scan(
    beta: float,
    alpha0: complex,
    filt: FilterSpec,
    det: DetectorSpec,
    phis=DEFAULT_PHIS,
    *,
    sidebands=None,
    physical: bool = False,
) -> PhaseScan:
    """Port click rates over a list of phase differences phi_in - phi_LO."""
    phis = np.asarray(phis, dtype=float)
    if phis.size == 0:
        raise ValueError("phase list is empty")
    S = choose_truncation(beta)
    rates = np.array(
        [port_rates(beta, alpha0, filt, det, p, S=S, sidebands=sidebands, physical=physical) for p in phis]
    )
    return PhaseScan(phis, rates[:, 0], rates[:, 1])


def visibility(rates) -> float:
    """(max - min) / (max + min) of a count-rate curve."""
    rates = np.asarray(rates, dtype=float)
    if rates.size == 0:
        raise ValueError("no rates given")
    if np.any(rates < 0):
        raise ValueError("rates must be non-negative")
    hi, lo = rates.max(), rates.min()
    if hi + lo == 0:
        raise ValueError("visibility undefined for all-zero rates")
    return float((hi - lo) / (hi + lo))


def visibility_vs_beta(
    betas,
    alpha0: complex,
    filt: FilterSpec,
    det: DetectorSpec,
    *,
    phis=DEFAULT_PHIS,
    sidebands=None,
) -> list[tuple[float, float]]:
    """Visibility against modulation depth, all sidebands on one detector by default."""
    out = []
    for b in betas:
        if b < 0:
            raise ValueError(f"modulation depth must be >= 0, got {b}")
        out.append((float(b), phase_scan(b, alpha0, filt, det, phis, sidebands=sidebands).visibility()))
    return out
