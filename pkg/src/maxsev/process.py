"""Extremal processes with stationary independent max-increments.

For a base d.f. G (the law of Y(1)) the marginal of Y(t) is G**t and the
max-increment over (s, t] has d.f. G**(t - s). Self-similarity checks are done
on the tail function: G**t(u) = exp(-t psi(u)).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NonMonotoneTimes
from .law import IDENTITY_TOL, SemiStableLaw
from .stats import KSReport, ks_two_sample

IDENTITY_TIMES = (0.5, 1.0, 2.0)
DEFAULT_KS_N = 5000


@dataclass(frozen=True)
class ExtremalProcess:
    base: SemiStableLaw

    def marginal_cdf(self, t: float, u):
        if not t > 0:
            raise ValueError("t must be positive")
        law = self.base
        u = np.asarray(u, dtype=float)
        inside = law.in_support(u)
        out = np.zeros_like(u) if law.branch == "frechet" else np.ones_like(u)
        if np.any(inside):
            us = np.where(inside, u, 1.0 if law.branch == "frechet" else -1.0)
            out = np.where(inside, np.exp(-t * np.asarray(law.tail(us))), out)
        return out if out.ndim else float(out)

    def sample_marginal(self, t: float, n: int, seed) -> np.ndarray:
        """n independent draws of Y(t). Uses the same stream as ``base.sample``."""
        if not t > 0:
            raise ValueError("t must be positive")
        if n < 1:
            raise ValueError("n must be >= 1")
        rng = np.random.default_rng(seed)
        return self.base.from_uniforms(rng.random(n), t)

    def sample_paths(self, times: Sequence[float], n: int, seed) -> np.ndarray:
        """``n`` independent paths observed at ``times``; shape (n, len(times))."""
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise NonMonotoneTimes("times must be a non-empty 1-d sequence")
        if times[0] <= 0 or np.any(np.diff(times) <= 0):
            raise NonMonotoneTimes("times must be positive and strictly increasing")
        rng = np.random.default_rng(seed)
        u = rng.random((n, times.size))
        steps = np.diff(times, prepend=0.0)
        increments = self.base.from_uniforms(u, steps)
        return np.maximum.accumulate(increments, axis=1)

    def sample_path(self, times: Sequence[float], seed) -> list[tuple[float, float]]:
        values = self.sample_paths(times, 1, seed)[0]
        return [(float(t), float(v)) for t, v in zip(times, values)]


@dataclass(frozen=True)
class SemiSSReport:
    scale_b: float
    exponent_h: float
    identity_error: float
    ks: Optional[KSReport] = None
    identity_tol: float = IDENTITY_TOL

    @property
    def identity_pass(self) -> bool:
        return bool(self.identity_error <= self.identity_tol)

    @property
    def ks_pass(self) -> Optional[bool]:
        return None if self.ks is None else self.ks.passed

    @property
    def passed(self) -> bool:
        return self.identity_pass and self.ks_pass is not False

    def to_dict(self) -> dict:
        return {
            "scaleB": self.scale_b,
            "exponentH": self.exponent_h,
            "identityError": self.identity_error,
            "ksStatistic": None if self.ks is None else self.ks.statistic,
            "ksCritical": None if self.ks is None else self.ks.critical,
            "identityPass": self.identity_pass,
            "ksPass": self.ks_pass,
        }


def semi_ss_identity_error(ep: ExtremalProcess, scale_b: float, exponent_h: float, grid=None,
                           times: Sequence[float] = IDENTITY_TIMES) -> float:
    """max over u, t of |b t psi(b^H u) - t psi(u)| / (t psi(u))."""
    law = ep.base
    grid = law.quantile_grid() if grid is None else np.asarray(grid, dtype=float)
    psi = np.asarray(law.tail(grid))
    psi_scaled = np.asarray(law.tail(scale_b ** exponent_h * grid))
    worst = 0.0
    for t in times:
        rel = np.abs(scale_b * t * psi_scaled - t * psi) / (t * psi)
        worst = max(worst, float(rel.max()))
    return worst


def check_semi_ss(ep: ExtremalProcess, scale_b: float, exponent_h: float, grid=None,
                  n: Optional[int] = DEFAULT_KS_N, seed: int = 0, level: float = 0.05) -> SemiSSReport:
    """Check {Y(bt)} =d {b^H Y(t)} exactly on the tail function and by a two-sample KS test.

    The empirical part compares n draws of Y(b) with n draws of b^H Y(1);
    ``n=None`` skips it.
    """
    if not scale_b > 0:
        raise ValueError("scale_b must be positive")
    err = semi_ss_identity_error(ep, scale_b, exponent_h, grid)
    ks = None
    if n:
        left, right = np.random.SeedSequence(seed).spawn(2)
        y_scaled_time = ep.sample_marginal(scale_b, n, left)
        y_scaled_space = scale_b ** exponent_h * ep.sample_marginal(1.0, n, right)
        ks = ks_two_sample(y_scaled_time, y_scaled_space, level)
    return SemiSSReport(float(scale_b), float(exponent_h), err, ks)


def check_ss(ep: ExtremalProcess, exponent_h: float, b_samples: Sequence[float], grid=None,
             n: Optional[int] = DEFAULT_KS_N, seed: int = 0, level: float = 0.05) -> list[SemiSSReport]:
    """Run :func:`check_semi_ss` at every scale; repetition i uses seed + i."""
    if len(b_samples) == 0:
        raise ValueError("b_samples must be non-empty")
    return [check_semi_ss(ep, b, exponent_h, grid, n, seed + i, level) for i, b in enumerate(b_samples)]


def natural_scaling(law: SemiStableLaw) -> tuple[float, float]:
    """(time scale, exponent) under which a max-semi-stable EP is semi-selfsimilar."""
    if law.branch == "frechet":
        return law.b ** law.alpha, 1.0 / law.alpha
    return law.b ** (-law.alpha), -1.0 / law.alpha


def is_ss(reports: Sequence[SemiSSReport]) -> bool:
    return all(r.passed for r in reports)
