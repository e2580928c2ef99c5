"""Empirical distribution functions and Kolmogorov-Smirnov tests.

Critical values are the asymptotic Kolmogorov quantiles; every verification in
this package runs at n >= 1000 where they are accurate to about three decimals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import TooFewSamples

KS_COEFFICIENTS = {0.05: 1.358, 0.01: 1.628}
MIN_SAMPLES = 8


class EmpiricalCDF:
    """Right-continuous step function (#values <= x) / n."""

    def __init__(self, values):
        values = np.sort(np.asarray(values, dtype=float).ravel())
        if values.size < 1:
            raise TooFewSamples("empirical d.f. needs at least one value")
        self.values = values

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __call__(self, x):
        out = np.searchsorted(self.values, x, side="right") / self.n
        return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class KSReport:
    statistic: float
    n: int
    critical: float
    level: float
    m: Optional[int] = None

    @property
    def passed(self) -> bool:
        return bool(self.statistic < self.critical)

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "critical": self.critical,
            "level": self.level,
            "n": self.n,
            "m": self.m,
            "pass": self.passed,
        }


def _coefficient(level: float) -> float:
    try:
        return KS_COEFFICIENTS[level]
    except KeyError:
        raise ValueError(f"level must be one of {sorted(KS_COEFFICIENTS)}, got {level}") from None


def ks_one_sample(sample, cdf: Callable, level: float = 0.05) -> KSReport:
    coef = _coefficient(level)
    x = np.sort(np.asarray(sample, dtype=float).ravel())
    n = x.size
    if n < MIN_SAMPLES:
        raise TooFewSamples(f"one-sample KS needs n >= {MIN_SAMPLES}, got {n}")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    d = max(float(np.max(i / n - F)), float(np.max(F - (i - 1) / n)))
    return KSReport(d, n, coef / math.sqrt(n), level)


def ks_two_sample(a, b, level: float = 0.05) -> KSReport:
    coef = _coefficient(level)
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    n, m = a.size, b.size
    if n < MIN_SAMPLES or m < MIN_SAMPLES:
        raise TooFewSamples(f"two-sample KS needs both sizes >= {MIN_SAMPLES}, got {n} and {m}")
    # evaluating both right-continuous ECDFs at every merged point takes the full
    # step at tied values before comparing
    merged = np.concatenate([a, b])
    fa = np.searchsorted(a, merged, side="right") / n
    fb = np.searchsorted(b, merged, side="right") / m
    d = float(np.max(np.abs(fa - fb)))
    return KSReport(d, n, coef * math.sqrt((n + m) / (n * m)), level, m)
