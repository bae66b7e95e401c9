"""Simulation of a photonic interface from subcarrier-wave to dual-rail (polarization) encoding."""

from .interface import (
    DetectorSpec,
    DualRailOutput,
    FilterSpec,
    ModulationParams,
    MultimodeCoherentState,
    choose_truncation,
    expected_clicks,
    interface_transform,
    make_scw_state,
    mean_sideband_photons,
    polarization_amplitudes,
)
from .keyrate import KeyRateResult, ProtocolParams, Scheme, key_rate
from .mathcore import bessel_j, binary_entropy
from .optimize import OptimizationBounds, optimize_key_rate, sweep

__version__ = "0.1.0"

__all__ = [
    "DetectorSpec",
    "DualRailOutput",
    "FilterSpec",
    "KeyRateResult",
    "ModulationParams",
    "MultimodeCoherentState",
    "OptimizationBounds",
    "ProtocolParams",
    "Scheme",
    "bessel_j",
    "binary_entropy",
    "choose_truncation",
    "expected_clicks",
    "interface_transform",
    "key_rate",
    "make_scw_state",
    "mean_sideband_photons",
    "optimize_key_rate",
    "polarization_amplitudes",
    "sweep",
]
