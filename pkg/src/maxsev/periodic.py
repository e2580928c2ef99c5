"""Positive bounded periodic perturbations built from finite trigonometric series.

A :class:`PeriodicFn` is ``h(y) = level + sum_k [c_k cos(2 pi k y / P) + s_k sin(2 pi k y / P)]``.
It enters the distribution function through ``h(ln|x|)``, so besides positivity the
series has to keep the tail function monotone; :func:`validate` checks both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import InvalidPeriod, NonMonotoneTail, NonPositive

FRECHET = "frechet"
WEIBULL = "weibull"
BRANCHES = (FRECHET, WEIBULL)

DEFAULT_GRID = 4096
MIN_GRID = 256
POSITIVITY_FLOOR = 1e-9


@dataclass(frozen=True)
class PeriodicFn:
    period: float
    level: float
    harmonics: tuple[tuple[int, float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(
            self,
            "harmonics",
            tuple((int(k), float(c), float(s)) for k, c, s in self.harmonics),
        )
        object.__setattr__(self, "period", float(self.period))
        object.__setattr__(self, "level", float(self.level))

    @classmethod
    def constant(cls, level: float = 1.0, period: float = math.log(2.0)) -> PeriodicFn:
        return cls(period, level, ())

    @property
    def is_constant(self) -> bool:
        return all(c == 0.0 and s == 0.0 for _, c, s in self.harmonics)

    @property
    def bound(self) -> float:
        """Upper bound on ``|h|`` from the triangle inequality."""
        return abs(self.level) + sum(abs(c) + abs(s) for _, c, s in self.harmonics)

    def __call__(self, y):
        return evaluate(self, y)

    def derivative(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        w = 2.0 * math.pi / self.period
        for k, c, s in self.harmonics:
            phase = w * k * y
            if s:
                out += w * k * s * np.cos(phase)
            if c:
                out -= w * k * c * np.sin(phase)
        return out if out.ndim else float(out)

    def scaled(self, factor: float) -> PeriodicFn:
        """Same level, every harmonic coefficient multiplied by ``factor``."""
        return PeriodicFn(
            self.period,
            self.level,
            tuple((k, factor * c, factor * s) for k, c, s in self.harmonics),
        )

    def with_period(self, period: float) -> PeriodicFn:
        return PeriodicFn(period, self.level, self.harmonics)

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "level": self.level,
            "harmonics": [[k, c, s] for k, c, s in self.harmonics],
        }

    @classmethod
    def from_dict(cls, data: dict, period: float | None = None) -> PeriodicFn:
        """Build from the JSON form; ``period`` fills in a missing ``"period"`` key."""
        if "period" in data:
            period = data["period"]
        if period is None:
            raise KeyError("period")
        harmonics: Iterable = data.get("harmonics", [])
        return cls(float(period), float(data.get("level", 1.0)), tuple(tuple(h) for h in harmonics))


def evaluate(h: PeriodicFn, y):
    """Evaluate ``h`` at ``y`` (scalar or array)."""
    y = np.asarray(y, dtype=float)
    out = np.full_like(y, h.level)
    w = 2.0 * math.pi / h.period
    for k, c, s in h.harmonics:
        phase = w * k * y
        if c:
            out += c * np.cos(phase)
        if s:
            out += s * np.sin(phase)
    return out if out.ndim else float(out)


def value_and_derivative(h: PeriodicFn, y) -> tuple[np.ndarray, np.ndarray]:
    """``(h(y), h'(y))`` for an array ``y``, sharing the trigonometric evaluations."""
    y = np.asarray(y, dtype=float)
    val = np.full_like(y, h.level)
    der = np.zeros_like(y)
    w = 2.0 * math.pi / h.period
    for k, c, s in h.harmonics:
        phase = w * k * y
        cos, sin = np.cos(phase), np.sin(phase)
        val += c * cos + s * sin
        der += w * k * (s * cos - c * sin)
    return val, der


@dataclass(frozen=True)
class ValidationReport:
    period: float
    alpha: float
    branch: str
    grid_size: int
    min_h: float
    max_h: float
    bound: float
    # min over the grid of alpha*h - h' (Frechet) or alpha*h + h' (Weibull)
    monotone_slack: float
    positive: bool
    monotone: bool
    bounded: bool

    @property
    def valid(self) -> bool:
        return self.positive and self.monotone and self.bounded

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "alpha": self.alpha,
            "branch": self.branch,
            "gridSize": self.grid_size,
            "minH": self.min_h,
            "maxH": self.max_h,
            "bound": self.bound,
            "monotoneSlack": self.monotone_slack,
            "positive": self.positive,
            "monotone": self.monotone,
            "bounded": self.bounded,
            "valid": self.valid,
        }


def inspect(h: PeriodicFn, alpha: float, branch: str, grid_size: int = DEFAULT_GRID) -> ValidationReport:
    """Compute the validation report without raising on failed verdicts."""
    if not h.period > 0 or not math.isfinite(h.period):
        raise InvalidPeriod(f"period must be positive and finite, got {h.period!r}")
    if grid_size < MIN_GRID:
        raise ValueError(f"grid_size must be >= {MIN_GRID}, got {grid_size}")
    if branch not in BRANCHES:
        raise ValueError(f"unknown branch {branch!r}")

    y = h.period * np.arange(grid_size) / grid_size
    hv = evaluate(h, y)
    dh = h.derivative(y)
    if branch == FRECHET:
        slack = alpha * hv - dh
    else:
        slack = alpha * hv + dh
    min_h = float(hv.min())
    max_abs = float(np.abs(hv).max())
    return ValidationReport(
        period=h.period,
        alpha=float(alpha),
        branch=branch,
        grid_size=grid_size,
        min_h=min_h,
        max_h=float(hv.max()),
        bound=h.bound,
        monotone_slack=float(slack.min()),
        positive=min_h > POSITIVITY_FLOOR,
        monotone=bool(slack.min() >= 0.0),
        bounded=max_abs <= h.bound * (1 + 1e-12),
    )


def validate(h: PeriodicFn, alpha: float, branch: str, grid_size: int = DEFAULT_GRID) -> ValidationReport:
    """Check that ``h`` yields a valid distribution function for ``branch``.

    Raises :class:`NonPositive` or :class:`NonMonotoneTail` (with the report
    attached) when a verdict fails; returns the report otherwise.
    """
    report = inspect(h, alpha, branch, grid_size)
    if not report.positive:
        raise NonPositive(f"min h on grid is {report.min_h:.3g}, need > {POSITIVITY_FLOOR:g}", report)
    if not report.monotone:
        raise NonMonotoneTail(
            f"tail function not monotone: min slack {report.monotone_slack:.3g} < 0", report
        )
    return report
