"""Per-loss optimization of carrier amplitude and modulation depth.

Coarse grid scan, then a Nelder-Mead simplex refinement in coordinates
normalized to the bounding box.  Everything is deterministic.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .keyrate import KeyRateResult, ProtocolParams, Scheme, key_rate, loss_db_to_eta


class OptimizerWarning(UserWarning):
    pass


@dataclass(frozen=True)
class OptimizationBounds:
    """Search box; each range is half-open ``(low, high]``."""

    alpha0_range: tuple[float, float] = (0.0, 4.0)
    beta_range: tuple[float, float] = (0.0, 1.5)
    coarse_grid: int = 32

    def __post_init__(self):
        for lo, hi in (self.alpha0_range, self.beta_range):
            if lo < 0 or not hi > lo:
                raise ValueError(f"invalid range ({lo}, {hi}]")
        if self.coarse_grid < 8:
            raise ValueError("coarse grid needs at least 8 points per axis")

    def to_params(self, u: np.ndarray) -> tuple[float, float]:
        (a0, a1), (b0, b1) = self.alpha0_range, self.beta_range
        return a0 + (a1 - a0) * u[0], b0 + (b1 - b0) * u[1]

    def to_unit(self, alpha0: float, beta: float) -> np.ndarray:
        (a0, a1), (b0, b1) = self.alpha0_range, self.beta_range
        return np.array([(alpha0 - a0) / (a1 - a0), (beta - b0) / (b1 - b0)])


@dataclass(frozen=True)
class OptimizationResult:
    alpha0: float
    beta: float
    result: KeyRateResult
    below_cutoff: bool
    loss_db: float | None = None
    eta: float | None = None


# keeps the open lower edge of each range out of reach
_UNIT_FLOOR = 1e-9


def nelder_mead(
    f,
    x0,
    step,
    *,
    xtol: float = 1e-6,
    max_iter: int = 500,
    alpha: float = 1.0,
    gamma: float = 2.0,
    rho: float = 0.5,
    sigma: float = 0.5,
):
    """Minimize ``f`` from ``x0`` with an axis-aligned initial simplex of size ``step``.

    Stops when the simplex diameter drops below ``xtol`` or after ``max_iter``
    iterations.  Returns ``(x_best, f_best, n_iter)``.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    simplex = [x0] + [x0 + step * np.eye(n)[i] for i in range(n)]
    values = [f(x) for x in simplex]
    it = 0
    while it < max_iter:
        order = sorted(range(n + 1), key=lambda i: (values[i], i))
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        diameter = max(np.abs(a - b).max() for a in simplex for b in simplex)
        if diameter < xtol:
            break
        it += 1
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        xr = centroid + alpha * (centroid - worst)
        fr = f(xr)
        if fr < values[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = f(xe)
            simplex[-1], values[-1] = (xe, fe) if fe < fr else (xr, fr)
        elif fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                xc = centroid + rho * (xr - centroid)
            else:
                xc = centroid + rho * (worst - centroid)
            fc = f(xc)
            if fc < min(fr, values[-1]):
                simplex[-1], values[-1] = xc, fc
            else:
                best = simplex[0]
                simplex = [best] + [best + sigma * (x - best) for x in simplex[1:]]
                values = [values[0]] + [f(x) for x in simplex[1:]]
    i = min(range(n + 1), key=lambda i: (values[i], i))
    return simplex[i], values[i], it


def coarse_grid(bounds: OptimizationBounds) -> tuple[np.ndarray, np.ndarray]:
    n = bounds.coarse_grid
    u = np.arange(1, n + 1) / n
    return u, u


def optimize_key_rate(
    scheme: Scheme | str,
    fixed: ProtocolParams,
    eta: float,
    bounds: OptimizationBounds | None = None,
    *,
    start: tuple[float, float] | None = None,
) -> OptimizationResult:
    """Maximize the key rate over (alpha0, beta); ``fixed`` supplies filter, detector and f_ec.

    ``start`` (alpha0, beta) is used as the refinement seed when it beats the
    best coarse grid point.
    """
    scheme = Scheme(scheme)
    bounds = bounds or OptimizationBounds()

    def rate(u) -> KeyRateResult:
        a, b = bounds.to_params(u)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return key_rate(scheme, fixed.with_controls(a, b), eta)

    best_u, best_K = None, -math.inf
    ua, ub = coarse_grid(bounds)
    # alpha-major ascending with strict improvement breaks ties toward small alpha0, then beta
    for x in ua:
        for y in ub:
            K = rate((x, y)).K
            if K > best_K:
                best_u, best_K = np.array([x, y]), K
    grid_best_K = best_K
    if start is not None:
        su = np.clip(bounds.to_unit(*start), _UNIT_FLOOR, 1.0)
        sK = rate(su).K
        if sK > best_K:
            best_u, best_K = su, sK

    def objective(u):
        return -rate(np.clip(u, _UNIT_FLOOR, 1.0)).K

    u_opt, f_opt, _ = nelder_mead(objective, best_u, 1.0 / bounds.coarse_grid)
    u_opt = np.clip(u_opt, _UNIT_FLOOR, 1.0)
    if -f_opt < best_K:
        u_opt = best_u
    a, b = bounds.to_params(u_opt)
    # re-evaluated outside the warning filter so clipping at the optimum is reported
    res = key_rate(scheme, fixed.with_controls(a, b), eta)
    return OptimizationResult(float(a), float(b), res, below_cutoff=bool(grid_best_K <= 0 or res.K <= 0), eta=eta)


def sweep(
    scheme: Scheme | str,
    fixed: ProtocolParams,
    losses_db,
    bounds: OptimizationBounds | None = None,
    *,
    warm_start: bool = True,
    workers: int = 1,
) -> list[OptimizationResult]:
    """Optimized key rate at each loss (dB), ascending.

    With ``warm_start`` each point also tries the previous optimum as a seed
    and the sweep runs sequentially; otherwise points are independent and run
    on up to ``workers`` processes.
    """
    losses = [float(x) for x in losses_db]
    if any(b < a for a, b in zip(losses, losses[1:])):
        raise ValueError("losses must be sorted ascending")
    scheme = Scheme(scheme)
    etas = [loss_db_to_eta(x) for x in losses]
    out: list[OptimizationResult] = []
    if not warm_start and workers > 1 and len(losses) > 1:
        n = len(losses)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            opts = list(pool.map(optimize_key_rate, [scheme] * n, [fixed] * n, etas, [bounds] * n))
    else:
        opts, prev = [], None
        for eta in etas:
            opt = optimize_key_rate(scheme, fixed, eta, bounds, start=prev if warm_start else None)
            opts.append(opt)
            if not opt.below_cutoff:
                prev = (opt.alpha0, opt.beta)
    for loss, eta, opt in zip(losses, etas, opts):
        out.append(OptimizationResult(opt.alpha0, opt.beta, opt.result, opt.below_cutoff, loss, eta))
    check_monotone(out)
    return out


def check_monotone(results, rtol: float = 1e-9) -> bool:
    """Warn and return False if the optimized key rate grows with loss anywhere."""
    ok = True
    for a, b in zip(results, results[1:]):
        if b.result.K > a.result.K + rtol * max(abs(a.result.K), 1.0):
            ok = False
            warnings.warn(
                f"optimized key rate increases from {a.loss_db} dB to {b.loss_db} dB; "
                "optimizer likely stuck in a local maximum",
                OptimizerWarning,
                stacklevel=2,
            )
    return ok
