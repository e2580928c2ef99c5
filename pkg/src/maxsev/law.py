"""Max-semi-stable(a, b) distribution functions of extended Frechet and Weibull type.

Frechet branch (support x > 0, b > 1, a = b**alpha)::

    F(x) = exp(-psi(x)),   psi(x) = x**(-alpha) * h(ln x)

Weibull branch (support x < 0, 0 < b < 1, a = b**(-alpha))::

    F(x) = exp(-psi(x)),   psi(x) = |x|**alpha * h(ln|x|)

In both cases ``psi(x) = a * psi(b x)`` because h has period ``|ln b|``. The
inversion routine exploits that identity to reduce every root-finding problem
to a single period of ``ln|x|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import ConvergenceError, DomainError, InvalidLaw
from .periodic import (
    BRANCHES,
    DEFAULT_GRID,
    FRECHET,
    WEIBULL,
    PeriodicFn,
    ValidationReport,
    validate,
    value_and_derivative,
)

IDENTITY_TOL = 1e-10
PERIOD_TOL = 1e-12
BISECT_TOL = 1e-14
BISECT_MAXITER = 200
LIMIT_TOL = 1e-6

_TINY = np.finfo(float).tiny


def _out(arr, like):
    return arr if np.ndim(like) else float(arr)


@dataclass(frozen=True)
class SemiStableLaw:
    branch: str
    alpha: float
    b: float
    h: PeriodicFn
    a: float = field(init=False)
    report: ValidationReport | None = field(init=False, default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "branch", str(self.branch).lower())
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "a", _derive_a(self.branch, self.alpha, self.b))
        problems = law_problems(self.branch, self.alpha, self.b, self.h)
        if problems:
            raise InvalidLaw("; ".join(problems))
        object.__setattr__(self, "report", validate(self.h, self.alpha, self.branch, DEFAULT_GRID))
        # a is carried redundantly; both sides of the defining relation must hold
        side = self.a * self.b ** (-self.alpha if self.branch == FRECHET else self.alpha)
        assert abs(side - 1.0) < 1e-12, side

    @classmethod
    def unvalidated(cls, branch: str, alpha: float, b: float, h: PeriodicFn) -> SemiStableLaw:
        """Construct without any invariant checks. For diagnostics and negative tests."""
        law = object.__new__(cls)
        object.__setattr__(law, "branch", branch)
        object.__setattr__(law, "alpha", float(alpha))
        object.__setattr__(law, "b", float(b))
        object.__setattr__(law, "h", h)
        object.__setattr__(law, "a", _derive_a(branch, alpha, b))
        object.__setattr__(law, "report", None)
        return law

    @classmethod
    def max_stable(cls, branch: str = FRECHET, alpha: float = 1.0, scale: float = 1.0, b: float | None = None):
        """Max-stable law exp(-scale * |x|**(-+alpha)); ``b`` only fixes the nominal period."""
        if b is None:
            b = 2.0 if branch == FRECHET else 0.5
        return cls(branch, alpha, b, PeriodicFn.constant(scale, abs(math.log(b))))

    @classmethod
    def from_dict(cls, data: dict) -> SemiStableLaw:
        b = float(data["b"])
        h = PeriodicFn.from_dict(data.get("h", {"level": 1.0}), period=abs(math.log(b)))
        return cls(data["branch"], float(data["alpha"]), b, h)

    def to_dict(self) -> dict:
        return {"branch": self.branch, "alpha": self.alpha, "b": self.b, "h": self.h.to_dict()}

    @property
    def is_max_stable(self) -> bool:
        return self.h.is_constant

    @property
    def _sign(self) -> float:
        # d/ds of the power part of ln psi, with s = ln|x|
        return -1.0 if self.branch == FRECHET else 1.0

    def in_support(self, x):
        x = np.asarray(x, dtype=float)
        return x > 0 if self.branch == FRECHET else x < 0

    def _check_support(self, x):
        if not np.all(self.in_support(x)):
            side = "x > 0" if self.branch == FRECHET else "x < 0"
            raise DomainError(f"{self.branch} tail function needs {side}")

    def tail(self, x):
        """psi(x) = -ln F(x) on the support half-line."""
        self._check_support(x)
        xa = np.abs(np.asarray(x, dtype=float))
        with np.errstate(over="ignore", divide="ignore"):
            power = xa ** (self._sign * self.alpha)
        return _out(power * self.h(np.log(xa)), x)

    def log_tail(self, x):
        self._check_support(x)
        s = np.log(np.abs(np.asarray(x, dtype=float)))
        return _out(self._log_tail_s(s), x)

    def _log_tail_s(self, s):
        return self._sign * self.alpha * s + np.log(self.h(s))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = self.in_support(x)
        out = np.zeros_like(x) if self.branch == FRECHET else np.ones_like(x)
        if np.any(inside):
            xs = np.where(inside, x, -1.0 if self.branch == WEIBULL else 1.0)
            vals = np.exp(-np.asarray(self.tail(xs)))
            out = np.where(inside, vals, out)
        return _out(out, x)

    def solve_log_tail(self, target):
        """Return x in the support with ln psi(x) = target (array-valued).

        The period relation ln psi(e^(s+kP)) = ln psi(e^s) + sign*k*ln a maps the
        target into one period [0, P] of s = ln|x|. There the root is bracketed and
        found by Newton steps that fall back to bisection whenever they would
        leave the current bracket.
        """
        target = np.asarray(target, dtype=float)
        period = abs(math.log(self.b))
        ln_a = math.log(self.a)
        sign = self._sign
        base = float(self._log_tail_s(0.0))

        # m(s) = sign*(ln psi(s) - ln psi(0)) is increasing, m(0) = 0, m(P) = ln a
        m_target = sign * (target - base)
        k = np.floor(m_target / ln_a)
        r = m_target - k * ln_a

        def m(s):
            return sign * (self._log_tail_s(s) - base)

        top = m(period)
        if np.any(r > top + 1e-9) or not np.all(np.isfinite(r)):
            raise ConvergenceError("target not bracketed by one period; law invariants broken")
        # exact when h is constant
        s = np.clip(r / ln_a * period, 0.0, period)
        lo = np.zeros_like(s)
        hi = np.full_like(s, period)
        active = np.arange(s.size)
        s_flat, lo, hi, r_flat = s.ravel(), lo.ravel(), hi.ravel(), r.ravel()
        for _ in range(BISECT_MAXITER):
            cur = s_flat[active]
            hv, dh = value_and_derivative(self.h, cur)
            f = sign * (sign * self.alpha * cur + np.log(hv) - base) - r_flat[active]
            lo[active] = np.where(f < 0, cur, lo[active])
            hi[active] = np.where(f > 0, cur, hi[active])
            slope = self.alpha + sign * dh / hv
            with np.errstate(divide="ignore", invalid="ignore"):
                nxt = cur - np.where(slope > 0, f / slope, np.inf)
            a_lo, a_hi = lo[active], hi[active]
            nxt = np.where((nxt > a_lo) & (nxt < a_hi), nxt, 0.5 * (a_lo + a_hi))
            nxt = np.where(f == 0, cur, nxt)
            s_flat[active] = nxt
            active = active[np.abs(nxt - cur) > BISECT_TOL]
            if active.size == 0:
                break
        else:
            raise ConvergenceError(f"root finding did not converge in {BISECT_MAXITER} iterations")
        s = s_flat.reshape(r.shape)
        s = s + k * period
        with np.errstate(over="ignore"):
            x = np.exp(s)
        return x if self.branch == FRECHET else -x

    def quantile(self, u):
        u_arr = np.asarray(u, dtype=float)
        if np.any((u_arr <= 0) | (u_arr >= 1)):
            raise ValueError("quantile levels must lie in (0, 1)")
        return _out(self.solve_log_tail(np.log(-np.log(u_arr))), u)

    def sample(self, n: int, seed: int) -> np.ndarray:
        if n < 1:
            raise ValueError("n must be >= 1")
        rng = np.random.default_rng(seed)
        return self.from_uniforms(rng.random(n))

    def from_uniforms(self, u, t=1.0) -> np.ndarray:
        """Inverse-transform uniforms through the d.f. ``F**t``."""
        u = np.maximum(np.asarray(u, dtype=float), _TINY)
        return self.solve_log_tail(np.log(-np.log(u)) - np.log(t))

    def cofactor(self, x):
        """H(x) = F(x)/F(bx), the factor in F(x) = F(bx) H(x)."""
        self._check_support(x)
        x = np.asarray(x, dtype=float)
        return _out(np.exp(np.asarray(self.tail(self.b * x)) - np.asarray(self.tail(x))), x)

    def quantile_grid(self, levels=None) -> np.ndarray:
        if levels is None:
            levels = np.arange(1, 100) / 100.0
        return np.asarray(self.quantile(np.asarray(levels, dtype=float)))

    def tail_grid(self, n: int = 1024, psi_max: float = 1e4, psi_min: float = 1e-10) -> np.ndarray:
        """Sorted grid whose tail values span [psi_min, psi_max] geometrically.

        Reaches far enough into both tails that d.f.-type quantities approach 0 and 1.
        """
        x = self.solve_log_tail(np.linspace(math.log(psi_max), math.log(psi_min), n))
        return np.sort(x)


def _derive_a(branch: str, alpha: float, b: float) -> float:
    if branch == FRECHET:
        return float(b) ** float(alpha)
    return float(b) ** (-float(alpha))


def law_problems(branch: str, alpha: float, b: float, h: PeriodicFn) -> list[str]:
    """Names of violated law invariants other than the h-validation itself."""
    problems = []
    if branch not in BRANCHES:
        return [f"branch: unknown branch {branch!r}"]
    if not alpha > 0:
        problems.append(f"alpha: must be positive, got {alpha}")
    if branch == FRECHET and not b > 1:
        problems.append(f"b: Frechet branch needs b > 1, got {b}")
    if branch == WEIBULL and not 0 < b < 1:
        problems.append(f"b: Weibull branch needs 0 < b < 1, got {b}")
    if b > 0 and b != 1 and not math.isclose(h.period, abs(math.log(b)), rel_tol=PERIOD_TOL, abs_tol=PERIOD_TOL):
        problems.append(f"period: h.period={h.period!r} differs from |ln b|={abs(math.log(b))!r}")
    return problems


@dataclass(frozen=True)
class IdentityReport:
    name: str
    max_error: float
    tolerance: float
    n_points: int

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "maxError": self.max_error,
            "tolerance": self.tolerance,
            "nPoints": self.n_points,
            "pass": self.passed,
        }


def check_semi_stable_identity(law: SemiStableLaw, grid=None, tol: float = IDENTITY_TOL) -> IdentityReport:
    """Max relative error of psi(x) = a psi(bx) over ``grid``."""
    grid = law.quantile_grid() if grid is None else np.asarray(grid, dtype=float)
    psi = np.asarray(law.tail(grid))
    rel = np.abs(psi - law.a * np.asarray(law.tail(law.b * grid))) / psi
    return IdentityReport("semi-stable", float(rel.max()), tol, int(grid.size))


@dataclass(frozen=True)
class CofactorCheck:
    c: float
    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    monotone: bool
    in_range: bool
    lower_limit: bool
    upper_limit: bool
    nondegenerate: bool
    worst_violation: float

    @property
    def verdict(self) -> bool:
        return self.monotone and self.in_range and self.lower_limit and self.upper_limit and self.nondegenerate

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "gridSize": int(self.grid.size),
            "monotone": self.monotone,
            "inRange": self.in_range,
            "lowerLimit": self.lower_limit,
            "upperLimit": self.upper_limit,
            "nondegenerate": self.nondegenerate,
            "worstViolation": self.worst_violation,
            "pass": self.verdict,
        }


CdfLike = Union[SemiStableLaw, Callable]


def _has_interior(values, tol=LIMIT_TOL) -> bool:
    # a point mass only ever shows 0 or 1
    return bool(np.any((values > tol) & (values < 1 - tol)))


def check_max_semi_sd(F: CdfLike, c: float, grid=None, tol: float = LIMIT_TOL) -> CofactorCheck:
    """Test whether H(x) = F(x)/F(cx) is a non-degenerate d.f. on ``grid``.

    ``F`` may be a :class:`SemiStableLaw` (cofactor computed from the tail
    function in log space) or any vectorised callable d.f.; the grid must then
    be supplied and reach far enough into both tails for the limit checks.
    """
    if grid is None:
        if not isinstance(F, SemiStableLaw):
            raise ValueError("a grid is required for a generic d.f.")
        grid = F.tail_grid()
    grid = np.asarray(grid, dtype=float)

    if isinstance(F, SemiStableLaw):
        inside = F.in_support(grid) & F.in_support(c * grid)
        safe = np.where(inside, grid, 1.0 if F.branch == FRECHET else -1.0)
        with np.errstate(over="ignore", invalid="ignore"):
            log_h = np.asarray(F.tail(c * safe)) - np.asarray(F.tail(safe))
            H = np.where(inside, np.exp(log_h), 0.0 if F.branch == FRECHET else 1.0)
        f_vals = np.asarray(F.cdf(grid))
    else:
        f_vals = np.asarray(F(grid), dtype=float)
        f_scaled = np.asarray(F(c * grid), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            H = np.where(f_scaled > 0, f_vals / np.where(f_scaled > 0, f_scaled, 1.0), np.where(f_vals > 0, np.inf, 0.0))

    with np.errstate(invalid="ignore"):
        drops = np.diff(H)
    worst_drop = float(max(0.0, -drops.min())) if drops.size else 0.0
    excess = float(max(0.0, np.nanmax(H) - 1.0)) if np.all(np.isfinite(H)) else math.inf
    return CofactorCheck(
        c=float(c),
        grid=grid,
        values=H,
        monotone=bool(np.all(np.isfinite(H))) and worst_drop <= 1e-12,
        in_range=excess <= 1e-12 and bool(np.all(H >= 0)),
        lower_limit=bool(H[0] <= tol),
        upper_limit=bool(H[-1] >= 1 - tol),
        nondegenerate=_has_interior(H, tol) and _has_interior(f_vals, tol),
        worst_violation=max(worst_drop, excess),
    )
