"""Asymptotic key rates of one-way SCW QKD against the collective beam-splitter attack.

Two receivers are modelled: the traditional single-detector SCW receiver and
the interface used as a two-state discriminator (one detector per splitter
port).  Key rates are Devetak-Winter bounds ``nu P_B (1 - f H(Q) - chi)`` and
are reported unclamped, so they go negative past the cutoff loss.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .interface import DetectorSpec, FilterSpec, choose_truncation
from .mathcore import bessel_j, bessel_j_range, binary_entropy


class ModelValidityWarning(UserWarning):
    """A click probability left the linear detector regime and was clipped."""


class Scheme(str, enum.Enum):
    TRADITIONAL = "traditional"
    DISCRIMINATOR = "discriminator"


@dataclass(frozen=True)
class ProtocolParams:
    alpha0: float = 0.5
    beta: float = 0.5
    filter: FilterSpec = field(default_factory=FilterSpec)
    det: DetectorSpec = field(default_factory=DetectorSpec)
    f_ec: float = 1.25

    def __post_init__(self):
        if self.alpha0 < 0 or self.beta < 0:
            raise ValueError("alpha0 and beta must be non-negative")
        if self.f_ec < 1:
            raise ValueError("error-correction efficiency must be >= 1")

    @property
    def nu(self) -> float:
        """Repetition rate in Hz, one pulse per period."""
        return 1.0 / self.det.T

    def with_controls(self, alpha0: float, beta: float) -> "ProtocolParams":
        return replace(self, alpha0=alpha0, beta=beta)


@dataclass(frozen=True)
class KeyRateResult:
    K: float  # bits/s
    Q: float
    P_B: float
    chi: float
    scheme: Scheme
    alpha0: float
    beta: float


def loss_db_to_eta(loss_db: float) -> float:
    return 10.0 ** (-loss_db / 10.0)


def _click_probability(n: float, det: DetectorSpec) -> float:
    p = (det.epsilon * n / det.T + det.gamma) * det.dt
    if p > 1.0:
        warnings.warn(
            f"click probability {p:.4g} exceeds 1 outside the linear regime; clipped",
            ModelValidityWarning,
            stacklevel=3,
        )
        return 1.0
    return p


# -- traditional receiver ---------------------------------------------------


def n_ph_traditional(params: ProtocolParams, eta: float, same_phase: bool) -> float:
    """Photons reaching the detector after Bob's modulator and filter."""
    r, rho = params.filter.r, params.filter.rho
    scale = params.alpha0**2 * eta
    if not same_phase:
        return scale * (1 - r)
    j2 = bessel_j(0, 2 * params.beta) ** 2
    return scale * ((1 - rho) * (1 - j2) + (1 - r) * j2)


def p_det(params: ProtocolParams, eta: float, same_phase: bool) -> float:
    return _click_probability(n_ph_traditional(params, eta, same_phase), params.det)


def qber_traditional(params: ProtocolParams, eta: float) -> float:
    match = p_det(params, eta, True)
    miss = p_det(params, eta, False)
    if match + miss <= 0:
        raise ZeroDivisionError("no detection probability; QBER undefined")
    return miss / (match + miss)


def holevo_bound(alpha0: float, beta: float, eta: float) -> float:
    """Eve's Holevo information (bits) from the photons tapped off by a 1-eta splitter."""
    x = alpha0**2 * (1 - eta) * (1 - bessel_j(0, 2 * beta))
    return binary_entropy(0.5 * (1 - math.exp(-x)))


def key_rate_traditional(params: ProtocolParams, eta: float) -> KeyRateResult:
    match = p_det(params, eta, True)
    miss = p_det(params, eta, False)
    if match + miss <= 0:
        raise ZeroDivisionError("no detection probability; QBER undefined")
    Q = miss / (match + miss)
    P_B = 0.5 * (match + miss)
    chi = holevo_bound(params.alpha0, params.beta, eta)
    K = params.nu * P_B * (1 - params.f_ec * binary_entropy(Q) - chi)
    return KeyRateResult(K, Q, P_B, chi, Scheme.TRADITIONAL, params.alpha0, params.beta)


# -- interface as a two-state discriminator ---------------------------------


def _sideband_terms(params: ProtocolParams):
    S = choose_truncation(params.beta)
    J = bessel_j_range(S, params.beta)
    m = np.arange(-S, S + 1)
    keep = m != 0
    return m[keep], J[keep], J[S]


def n_pm_discriminator(
    params: ProtocolParams, eta: float, phi_A: float, phi_LO: float, port: int
) -> float:
    """Mean photon number at the '+' (port=+1) or '-' (port=-1) output of the interface."""
    if port not in (1, -1):
        raise ValueError(f"port must be +1 or -1, got {port}")
    m, Jm, J0 = _sideband_terms(params)
    return _n_pm(params, eta, m, Jm, J0, phi_A, phi_LO, port)


def _n_pm(params, eta, m, Jm, J0, phi_A, phi_LO, port):
    r, rho = params.filter.r, params.filter.rho
    a = math.sqrt(eta) * params.alpha0
    side = a * Jm * (1 - rho) * (np.exp(1j * m * phi_A) + port * np.exp(1j * m * phi_LO) * r * J0) / math.sqrt(2)
    carrier = a * J0 * ((1 - r) + port * J0 * r * (1 - r)) / math.sqrt(2)
    return float(np.sum(np.abs(side) ** 2) + carrier**2)


def discriminator_probabilities(params: ProtocolParams, eta: float, phi_A: float = 0.0):
    """(P_E, P_C): erroneous and correct bit-decoding probabilities summed over both states of a basis."""
    m, Jm, J0 = _sideband_terms(params)
    det = params.det

    def P(phi_B, port):
        return _click_probability(_n_pm(params, eta, m, Jm, J0, phi_A, phi_B, port), det)

    same_p, same_m = P(phi_A, 1), P(phi_A, -1)
    opp_p, opp_m = P(phi_A + math.pi, 1), P(phi_A + math.pi, -1)
    P_E = opp_p * (1 - opp_m) + same_m * (1 - same_p)
    P_C = same_p * (1 - same_m) + opp_m * (1 - opp_p)
    return P_E, P_C


def qber_discriminator(params: ProtocolParams, eta: float, phi_A: float = 0.0):
    """(Q, P_E, P_C) for the discriminator receiver."""
    P_E, P_C = discriminator_probabilities(params, eta, phi_A)
    if P_E + P_C <= 0:
        raise ZeroDivisionError("no decoding probability; QBER undefined")
    return P_E / (P_E + P_C), P_E, P_C


def key_rate_discriminator(params: ProtocolParams, eta: float) -> KeyRateResult:
    Q, P_E, P_C = qber_discriminator(params, eta)
    P_B = 0.5 * (P_E + P_C)
    chi = holevo_bound(params.alpha0, params.beta, eta)
    K = params.nu * P_B * (1 - params.f_ec * binary_entropy(Q) - chi)
    return KeyRateResult(K, Q, P_B, chi, Scheme.DISCRIMINATOR, params.alpha0, params.beta)


def key_rate(scheme: Scheme | str, params: ProtocolParams, eta: float) -> KeyRateResult:
    scheme = Scheme(scheme)
    if scheme is Scheme.TRADITIONAL:
        return key_rate_traditional(params, eta)
    return key_rate_discriminator(params, eta)
