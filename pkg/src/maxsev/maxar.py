"""Stationary max-autoregressive recursion X_n = rho * X_{n-1} v eps_n.

With marginal G and b = 1/rho, the innovation law is that of rho * Y(b**alpha - 1)
(Frechet) or rho * Y(b**-alpha - 1) (Weibull), i.e. {G(b u)}**exponent. Its d.f.
coincides with the cofactor F(u)/F(u/rho) of the factorisation F(u) = F(u/rho) H(u).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidModel, PeriodMismatch
from .law import IDENTITY_TOL, CofactorCheck, IdentityReport, SemiStableLaw, check_max_semi_sd
from .periodic import FRECHET
from .stats import KSReport, ks_one_sample

DEFAULT_THIN = 10
# tolerance for recognising rho as an integer power of 1/b
_PERIOD_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class InnovationLaw:
    base: SemiStableLaw
    exponent: float
    scale: float

    def cdf(self, u):
        law = self.base
        u = np.asarray(u, dtype=float)
        v = self.scale * u
        inside = law.in_support(v)
        out = np.zeros_like(u) if law.branch == FRECHET else np.ones_like(u)
        if np.any(inside):
            vs = np.where(inside, v, 1.0 if law.branch == FRECHET else -1.0)
            out = np.where(inside, np.exp(-self.exponent * np.asarray(law.tail(vs))), out)
        return out if out.ndim else float(out)

    def from_uniforms(self, u) -> np.ndarray:
        return self.base.from_uniforms(u, self.exponent) / self.scale

    def sample(self, n: int, seed) -> np.ndarray:
        if n < 1:
            raise ValueError("n must be >= 1")
        return self.from_uniforms(np.random.default_rng(seed).random(n))


@dataclass(frozen=True)
class MaxARModel:
    rho: float
    marginal: SemiStableLaw
    innovation: InnovationLaw

    def __post_init__(self):
        if not self.rho > 0:
            raise InvalidModel(f"rho must be positive, got {self.rho}")
        if not self.innovation.exponent > 0:
            raise InvalidModel(f"innovation exponent must be positive, got {self.innovation.exponent}")
        if not math.isclose(self.innovation.scale, 1.0 / self.rho, rel_tol=1e-12):
            raise InvalidModel("innovation scale must equal 1/rho")

    @property
    def b(self) -> float:
        return 1.0 / self.rho

    def innovation_cdf(self, u):
        return self.innovation.cdf(u)

    def cofactor_cdf(self, u):
        """F(u)/F(u/rho), the innovation d.f. read off the max-semi-SD factorisation."""
        F = self.marginal.cdf
        u = np.asarray(u, dtype=float)
        num, den = np.asarray(F(u)), np.asarray(F(u / self.rho))
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
        return out if out.ndim else float(out)


def innovation_exponent(branch: str, alpha: float, rho: float) -> float:
    b = 1.0 / rho
    return b ** alpha - 1.0 if branch == FRECHET else b ** (-alpha) - 1.0


def _on_period(law: SemiStableLaw, rho: float) -> bool:
    # any integer power b**k, k >= 1, is a period of h(ln|x|) as well
    k = math.log(1.0 / rho) / math.log(law.b)
    return k >= 1 - _PERIOD_MATCH_TOL and abs(k - round(k)) <= _PERIOD_MATCH_TOL


def build_model(marginal: SemiStableLaw, rho: float | None = None) -> MaxARModel:
    """Stationary max-AR(1) model with the given marginal.

    ``rho`` defaults to 1/b. A non-constant h only admits rho = b**-k; a
    constant h admits any rho for which the innovation exponent is positive,
    i.e. rho < 1 on the Frechet branch and rho > 1 on the Weibull branch.
    """
    if rho is None:
        rho = 1.0 / marginal.b
    rho = float(rho)
    if not rho > 0:
        raise InvalidModel(f"rho must be positive, got {rho}")
    if not marginal.is_max_stable and not _on_period(marginal, rho):
        raise PeriodMismatch(
            f"rho={rho!r} is not 1/b**k for b={marginal.b!r}; non-constant h breaks stationarity off-period"
        )
    exponent = innovation_exponent(marginal.branch, marginal.alpha, rho)
    if not exponent > 0:
        need = "rho < 1" if marginal.branch == FRECHET else "rho > 1"
        raise InvalidModel(f"{marginal.branch} marginal needs {need} (innovation exponent {exponent:.6g} <= 0)")
    return MaxARModel(rho, marginal, InnovationLaw(marginal, exponent, 1.0 / rho))


def simulate(model: MaxARModel, n: int, burn_in: int = 0, seed: int = 0) -> np.ndarray:
    """X_{burn_in+1}, ..., X_{burn_in+n}, starting from X_0 drawn from the marginal.

    One uniform stream: the first draw feeds X_0, the rest feed the innovations.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    rng = np.random.default_rng(seed)
    u = rng.random(1 + burn_in + n)
    x0 = float(model.marginal.from_uniforms(u[:1])[0])
    eps = model.innovation.from_uniforms(u[1:])
    rho = model.rho
    out = np.empty_like(eps)
    prev = x0
    for i, e in enumerate(eps):
        prev = max(rho * prev, e)
        out[i] = prev
    return out[burn_in:]


def check_stationarity_identity(model: MaxARModel, grid=None, tol: float = IDENTITY_TOL) -> IdentityReport:
    """One-step stationarity in log space: psi(bu) + exponent*psi(bu) against psi(u)."""
    law = model.marginal
    grid = law.quantile_grid() if grid is None else np.asarray(grid, dtype=float)
    psi = np.asarray(law.tail(grid))
    psi_b = np.asarray(law.tail(model.b * grid))
    one_step = psi_b + model.innovation.exponent * psi_b
    rel = np.abs(one_step - psi) / psi
    return IdentityReport("stationarity", float(rel.max()), tol, int(grid.size))


def check_innovation_consistency(model: MaxARModel, grid=None, tol: float = 1e-12) -> IdentityReport:
    """Absolute gap between {G(bu)}**exponent and F(u)/F(u/rho)."""
    grid = model.marginal.quantile_grid() if grid is None else np.asarray(grid, dtype=float)
    gap = np.abs(np.asarray(model.innovation_cdf(grid)) - np.asarray(model.cofactor_cdf(grid)))
    return IdentityReport("innovation-consistency", float(gap.max()), tol, int(grid.size))


def check_marginal_stationarity_empirical(model: MaxARModel, n: int = 10_000, burn_in: int = 0, seed: int = 0,
                                          thin: int = DEFAULT_THIN, level: float = 0.01) -> KSReport:
    """One-sample KS of the thinned simulated series against the marginal d.f.

    Thinning by ``thin`` weakens the serial dependence, which otherwise makes the
    test anti-conservative.
    """
    if n < 100:
        raise ValueError("n must be >= 100")
    if thin < 1:
        raise ValueError("thin must be >= 1")
    return thinned_ks(simulate(model, n, burn_in, seed), model.marginal, thin, level)


def thinned_ks(path, marginal: SemiStableLaw, thin: int = DEFAULT_THIN, level: float = 0.01) -> KSReport:
    """KS of every ``thin``-th value of ``path`` (X_thin, X_2thin, ...) against the marginal."""
    return ks_one_sample(np.asarray(path)[thin - 1::thin], marginal.cdf, level)


def check_max_semi_sd_equivalence(marginal: SemiStableLaw, rho: float, grid=None) -> CofactorCheck:
    """A stationary max-AR(1) with this marginal and rho exists iff the marginal is max-semi-SD(1/rho)."""
    return check_max_semi_sd(marginal, 1.0 / rho, grid)
