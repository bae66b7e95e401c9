"""Bessel functions of the first kind (integer order) and binary entropy."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

# Below this argument the power series is used; above it, Miller's recurrence.
SERIES_LIMIT = 2.0


def _check_finite(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"Bessel argument must be finite, got {x!r}")
    return x


def _series(n: int, x: float) -> float:
    """J_n(x) for n >= 0 by the ascending power series."""
    half = 0.5 * x
    term = half**n / math.factorial(n)
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        total += term
        if abs(term) <= 1e-17 * abs(total) or k > 200:
            return total


def _miller(nmax: int, x: float) -> np.ndarray:
    """J_0..J_nmax at x > 0 via downward recurrence, normalized by 1 = J0 + 2 sum J_2k."""
    start = nmax + 20 + int(2 * x)
    start += start % 2  # even start keeps the normalization sum aligned
    vals = np.zeros(start + 2)
    vals[start] = 1e-300
    for k in range(start, 0, -1):
        vals[k - 1] = 2.0 * k / x * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > 1e250:
            vals[k - 1 :] *= 1e-250
    norm = vals[0] + 2.0 * vals[2 : start + 1 : 2].sum()
    return vals[: nmax + 1] / norm


def bessel_j(order: int, x: float) -> float:
    """Bessel function of the first kind J_order(x) for integer order.

    Negative orders use J_{-n} = (-1)^n J_n, negative arguments J_n(-x) = (-1)^n J_n(x).
    """
    x = _check_finite(x)
    n = int(order)
    sign = 1.0
    if n < 0:
        n = -n
        sign = -1.0 if n % 2 else 1.0
    if x < 0:
        x = -x
        if n % 2:
            sign = -sign
    if x == 0.0:
        return sign * (1.0 if n == 0 else 0.0)
    if x <= SERIES_LIMIT:
        return sign * _series(n, x)
    return sign * float(_miller(n, x)[n])


@lru_cache(maxsize=4096)
def _bessel_table(smax: int, x: float) -> tuple[float, ...]:
    if x == 0.0:
        return (1.0,) + (0.0,) * smax
    if x <= SERIES_LIMIT:
        return tuple(_series(n, x) for n in range(smax + 1))
    return tuple(_miller(smax, x))


def bessel_j_range(smax: int, x: float) -> np.ndarray:
    """Array of J_m(x) for m = -smax..smax (index m + smax)."""
    x = _check_finite(x)
    if smax < 0:
        raise ValueError("smax must be non-negative")
    flip = x < 0
    pos = np.array(_bessel_table(int(smax), abs(x)))
    orders = np.arange(smax + 1)
    if flip:
        pos = pos * np.where(orders % 2, -1.0, 1.0)
    neg = pos[:0:-1] * np.where(orders[:0:-1] % 2, -1.0, 1.0)
    return np.concatenate([neg, pos])


def binary_entropy(q: float) -> float:
    """Binary Shannon entropy in bits, with H(0) = H(1) = 0."""
    q = float(q)
    if not (0.0 <= q <= 1.0):
        raise ValueError(f"probability out of [0, 1]: {q!r}")
    if q == 0.0 or q == 1.0:
        return 0.0
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)
