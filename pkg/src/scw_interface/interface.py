"""Subcarrier-wave states, the SCW -> dual-rail interface, and the click model.

Sideband amplitudes are stored as numpy complex arrays indexed ``m + S`` for
``m = -S..S``; the carrier is the middle entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .mathcore import bessel_j, bessel_j_range

TWO_PI = 2.0 * math.pi
MIN_TRUNCATION = 5


@dataclass(frozen=True)
class ModulationParams:
    beta: float
    omega: float = TWO_PI * 4.8e9  # metadata only
    phi: float = 0.0

    def __post_init__(self):
        if not self.beta >= 0:
            raise ValueError(f"modulation depth must be >= 0, got {self.beta}")
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)


@dataclass(frozen=True)
class FilterSpec:
    """Spectral filter: carrier power reflection ``r``, sideband suppression ``rho``."""

    r: float = 0.99
    rho: float = 1e-4

    def __post_init__(self):
        for name in ("r", "rho"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"filter {name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class DetectorSpec:
    """Single-photon detector. ``gamma`` in Hz, ``dt`` gate and ``T`` period in s."""

    epsilon: float = 0.1
    gamma: float = 50.0
    dt: float = 3.3e-9
    T: float = 10e-9

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if not self.gamma >= 0.0:
            raise ValueError(f"dark count rate must be >= 0, got {self.gamma}")
        if not (self.dt > 0.0 and self.T > 0.0):
            raise ValueError("gate duration and period must be positive")


@dataclass(frozen=True)
class MultimodeCoherentState:
    alpha0: complex
    S: int
    amps: np.ndarray = field(repr=False)
    # modulation that produced the state, if known; used to check beta matching
    mod: ModulationParams | None = None

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (2 * self.S + 1,):
            raise ValueError(f"expected {2 * self.S + 1} amplitudes, got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.S, self.S + 1)

    def amp(self, m: int) -> complex:
        if abs(m) > self.S:
            return 0j
        return complex(self.amps[m + self.S])


@dataclass(frozen=True)
class DualRailOutput:
    plus: MultimodeCoherentState
    minus: MultimodeCoherentState
    path_phase: complex = -1j

    def __post_init__(self):
        if self.plus.S != self.minus.S:
            raise ValueError("ports must share the truncation order")
        if abs(abs(self.path_phase) - 1.0) > 1e-12:
            raise ValueError("path phase must have unit modulus")


def make_scw_state(alpha0: complex, mod: ModulationParams, S: int) -> MultimodeCoherentState:
    """Phase-modulated coherent state: amplitude ``alpha0 J_m(beta) e^{i m phi}`` in sideband m."""
    if S < 1:
        raise ValueError(f"truncation order must be >= 1, got {S}")
    m = np.arange(-S, S + 1)
    amps = complex(alpha0) * bessel_j_range(S, mod.beta) * np.exp(1j * m * mod.phi)
    return MultimodeCoherentState(complex(alpha0), S, amps, mod)


def choose_truncation(beta: float, tol: float = 1e-12) -> int:
    """Smallest S (at least 5) whose discarded sideband power sum_{|m|>S} J_m^2 is below ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    S = MIN_TRUNCATION
    while True:
        # tail evaluated termwise so it is not swamped by rounding of 1 - sum
        tail = 2.0 * sum(bessel_j(k, beta) ** 2 for k in range(S + 1, S + 40))
        if tail < tol:
            return S
        S += 1


def interface_transform(
    state: MultimodeCoherentState,
    filt: FilterSpec,
    mod_lo: ModulationParams,
    *,
    path_phase: complex = -1j,
    physical: bool = False,
) -> DualRailOutput:
    """Map an SCW state onto the two beam-splitter output ports.

    The reflected input carrier is re-modulated with ``mod_lo`` and its sidebands
    interfere with the transmitted input sidebands on a 50:50 splitter.  By
    default ``r``, ``1 - r`` and ``1 - rho`` multiply amplitudes, as in the
    interface equations; ``physical=True`` uses their square roots instead.
    """
    if state.mod is not None and not math.isclose(state.mod.beta, mod_lo.beta, rel_tol=1e-12, abs_tol=1e-15):
        raise ValueError(
            f"input modulation depth {state.mod.beta} differs from local {mod_lo.beta}"
        )
    if physical:
        refl, trans, side = math.sqrt(filt.r), math.sqrt(1 - filt.r), math.sqrt(1 - filt.rho)
    else:
        refl, trans, side = filt.r, 1 - filt.r, 1 - filt.rho

    S = state.S
    m = state.orders
    carrier = state.amps[S]
    j_lo = bessel_j_range(S, mod_lo.beta)
    x = side * state.amps
    y = side * carrier * refl * j_lo * np.exp(1j * m * mod_lo.phi)
    # carrier: transmitted input vs. re-modulated, re-filtered local carrier
    x[S] = carrier * trans
    y[S] = carrier * j_lo[S] * refl * trans
    s2 = math.sqrt(2.0)
    plus = MultimodeCoherentState(state.alpha0, S, (x + y) / s2)
    minus = MultimodeCoherentState(state.alpha0, S, (x - y) / s2)
    return DualRailOutput(plus, minus, complex(path_phase))


def polarization_amplitudes(delta_phi: float, m: int) -> tuple[complex, complex]:
    """Single-photon polarization amplitudes (cH, cV) of sideband ``m = +-1``.

    Global phase dropped; ``delta_phi = phi_in - phi_LO``.
    """
    if m not in (-1, 1):
        raise ValueError(f"sideband index must be +1 or -1, got {m}")
    return complex(math.cos(delta_phi / 2)), complex(m * math.sin(delta_phi / 2))


def polarization_from_ports(out: DualRailOutput, m: int) -> tuple[complex, complex]:
    """Normalized (cH, cV) for sideband ``m`` read off the two ports.

    The '+' port becomes H; the '-' port is rotated to V and picks up the path
    phase.  The common phase is removed so that cH is real and non-negative.
    """
    h = out.plus.amp(m)
    v = out.minus.amp(m) * out.path_phase
    norm = math.hypot(abs(h), abs(v))
    if norm == 0:
        raise ValueError(f"sideband {m} is empty in both ports")
    ref = h if abs(h) > 1e-15 * norm else v
    ph = np.conj(ref) / abs(ref)
    return complex(h * ph / norm), complex(v * ph / norm)


def mean_sideband_photons(state: MultimodeCoherentState, sidebands=None) -> float:
    """Mean photon number summed over sidebands m != 0 (or over ``sidebands`` if given)."""
    if sidebands is None:
        p = np.abs(state.amps) ** 2
        return float(p[: state.S].sum() + p[state.S + 1 :].sum())
    return float(sum(abs(state.amp(m)) ** 2 for m in sidebands if m != 0))


def click_rate(state: MultimodeCoherentState, det: DetectorSpec, sidebands=None) -> float:
    """Detector click rate in Hz in the linear regime."""
    return det.gamma + det.epsilon / det.dt * mean_sideband_photons(state, sidebands)


def expected_clicks(
    state: MultimodeCoherentState, det: DetectorSpec, duration: float, sidebands=None
) -> float:
    if duration <= 0:
        raise ValueError("duration must be positive")
    return click_rate(state, det, sidebands) * duration


def alpha0_for_peak_rate(
    beta: float, rate: float, filt: FilterSpec, det: DetectorSpec, m: int = 1
) -> float:
    """Carrier amplitude at which sideband ``m`` alone peaks at ``rate`` Hz in the '+' port.

    The peak is at phi_in = phi_LO; dark counts are included in ``rate``.
    """
    signal = rate - det.gamma
    if signal <= 0:
        raise ValueError("target rate must exceed the dark count rate")
    S = max(choose_truncation(beta), abs(m))
    unit = interface_transform(
        make_scw_state(1.0, ModulationParams(beta), S), filt, ModulationParams(beta)
    )
    per_photon = det.epsilon / det.dt * abs(unit.plus.amp(m)) ** 2
    if per_photon == 0:
        raise ValueError(f"sideband {m} carries no power at beta={beta}")
    return math.sqrt(signal / per_photon)
