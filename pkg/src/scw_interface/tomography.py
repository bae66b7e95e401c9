"""Six-projector polarization tomography with iterative maximum likelihood.

Random counts come from ``numpy.random.default_rng(seed)`` (PCG64).  One
Poisson draw is made per projector in the fixed order H, V, D, A, R, L, so a
given seed always maps to the same records for a given numpy release series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .interface import DetectorSpec, polarization_amplitudes
from .mathcore import bessel_j

LABELS = ("H", "V", "D", "A", "R", "L")

_S2 = 1 / math.sqrt(2)
_KETS = {
    "H": (1.0, 0.0),
    "V": (0.0, 1.0),
    "D": (_S2, _S2),
    "A": (_S2, -_S2),
    "R": (_S2, 1j * _S2),
    "L": (_S2, -1j * _S2),
}

# phase difference -> (label, target ket) for the four BB84 states
BASIS_TARGETS = (
    (0.0, "H", (1.0, 0.0)),
    (math.pi, "V", (0.0, 1.0)),
    (math.pi / 2, "D", (_S2, _S2)),
    (3 * math.pi / 2, "A", (_S2, -_S2)),
)


@dataclass(frozen=True)
class TomographyRecord:
    projector: str
    counts: int
    duration: float  # s

    def __post_init__(self):
        if self.projector not in _KETS:
            raise ValueError(f"unknown projector {self.projector!r}")
        if self.counts < 0:
            raise ValueError("counts must be non-negative")
        if not self.duration > 0:
            raise ValueError("duration must be positive")


def ket(label: str) -> np.ndarray:
    try:
        return np.array(_KETS[label], dtype=complex)
    except KeyError:
        raise ValueError(f"unknown projector {label!r}") from None


def projector(label: str) -> np.ndarray:
    k = ket(label)
    return np.outer(k, k.conj())


def is_density_matrix(rho, tol: float = 1e-12, eig_floor: float = -1e-10) -> bool:
    rho = np.asarray(rho)
    return (
        rho.shape == (2, 2)
        and np.allclose(rho, rho.conj().T, atol=tol, rtol=0)
        and abs(np.trace(rho) - 1) <= tol
        and np.linalg.eigvalsh(rho).min() >= eig_floor
    )


def default_mean_photons(alpha0: float = 0.15, beta: float = 0.15) -> float:
    """Single-sideband photon number 2|alpha0 J_1(beta)|^2 of the ideal polarization state."""
    return 2 * abs(alpha0 * bessel_j(1, beta)) ** 2


def simulate_counts(
    state,
    det: DetectorSpec,
    duration: float,
    seed: int,
    *,
    mean_photons: float | None = None,
    labels=LABELS,
) -> list[TomographyRecord]:
    """Poisson counts behind each analyzer setting for the polarization state (cH, cV).

    Mean counts per projector are ``(gamma + eps/dt * n * <P>) * duration`` with
    ``n`` the photon number per gate in the measured sideband.
    """
    c = np.asarray(state, dtype=complex)
    norm2 = float(np.vdot(c, c).real)
    if norm2 > 1 + 1e-9:
        raise ValueError(f"state norm^2 {norm2} exceeds 1")
    if mean_photons is None:
        mean_photons = default_mean_photons()
    rng = np.random.default_rng(seed)
    records = []
    for label in labels:
        prob = abs(np.vdot(ket(label), c)) ** 2
        mean = (det.gamma + det.epsilon / det.dt * mean_photons * prob) * duration
        records.append(TomographyRecord(label, int(rng.poisson(mean)), duration))
    return records


def log_likelihood(rho: np.ndarray, freqs: np.ndarray, projs: np.ndarray) -> float:
    p = np.einsum("jab,ba->j", projs, rho).real
    mask = freqs > 0
    return float(np.sum(freqs[mask] * np.log(p[mask])))


def _prepare(records):
    labels = [r.projector for r in records]
    projs = np.array([projector(lab) for lab in labels])
    vecs = projs.reshape(len(labels), 4)
    if np.linalg.matrix_rank(vecs, tol=1e-9) < 4:
        raise ValueError("projectors do not span the operator space (need 4 independent)")
    rates = np.array([r.counts / r.duration for r in records], dtype=float)
    if rates.sum() <= 0:
        raise ValueError("no counts recorded")
    return projs, rates / rates.sum()


def mle_reconstruct(records, *, tol: float = 1e-10, max_iter: int = 10_000, history: list | None = None):
    """Maximum-likelihood 2x2 density matrix by the R rho R fixed-point iteration.

    Starts from the maximally mixed state.  A plain step that would lower the
    likelihood (it can cycle on degenerate data) is replaced by a diluted step
    ``(1 + e R) rho (1 + e R)`` with ``e`` halved until the likelihood holds.
    If ``history`` is a list, the log-likelihood after each iteration is
    appended to it.
    """
    projs, freqs = _prepare(records)
    eye = np.eye(2, dtype=complex)
    rho = eye / 2
    like = log_likelihood(rho, freqs, projs)
    for _ in range(max_iter):
        p = np.einsum("jab,ba->j", projs, rho).real
        w = np.divide(freqs, p, out=np.zeros_like(freqs), where=freqs > 0)
        R = np.einsum("j,jab->ab", w, projs)
        new = _step(R, rho)
        new_like = log_likelihood(new, freqs, projs)
        dilution = 1.0
        while new_like < like and dilution > 1e-8:
            dilution /= 2
            new = _step(eye + dilution * R, rho)
            new_like = log_likelihood(new, freqs, projs)
        if new_like < like:
            break
        delta = np.abs(new - rho).max()
        rho, like = new, new_like
        if history is not None:
            history.append(like)
        if delta < tol:
            break
    return rho


def _step(R, rho):
    new = R @ rho @ R
    new = 0.5 * (new + new.conj().T)
    return new / np.trace(new).real


def fidelity(rho, target) -> float:
    """<psi|rho|psi> for a pure target state (normalized internally)."""
    psi = np.asarray(target, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    f = float(np.vdot(psi, np.asarray(rho) @ psi).real)
    return min(max(f, 0.0), 1.0)


@dataclass(frozen=True)
class TomographyResult:
    delta_phi: float
    label: str
    rho: np.ndarray
    fidelity: float
    records: tuple


def basis_state_pipeline(
    det: DetectorSpec,
    duration: float,
    seed: int,
    *,
    mean_photons: float | None = None,
    v_phase_offset: float = 0.0,
) -> list[TomographyResult]:
    """Reconstruct the m=+1 polarization state for the four basis phase differences.

    Each phase difference gets its own RNG stream, seeded ``seed + index``.
    ``v_phase_offset`` adds a static extra phase on the V arm.
    """
    out = []
    for i, (dphi, label, target) in enumerate(BASIS_TARGETS):
        cH, cV = polarization_amplitudes(dphi, +1)
        cV *= complex(math.cos(v_phase_offset), math.sin(v_phase_offset))
        recs = simulate_counts((cH, cV), det, duration, seed + i, mean_photons=mean_photons)
        rho = mle_reconstruct(recs)
        out.append(TomographyResult(dphi, label, rho, fidelity(rho, target), tuple(recs)))
    return out


def rho_to_json(rho) -> dict:
    rho = np.asarray(rho)
    return {"basis": ["H", "V"], "re": rho.real.tolist(), "im": rho.imag.tolist()}


def rho_from_json(obj: dict) -> np.ndarray:
    return np.array(obj["re"], dtype=float) + 1j * np.array(obj["im"], dtype=float)
