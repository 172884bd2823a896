"""Symmetric effort equilibria for the batch and sequential mechanisms.

Everything here evaluates or solves first-order conditions built from the
score sequence ``v``: a marginal unit of effort buys a higher chance of
being the (k+1)-th reporter and earning ``v_{k+1} - v_k``.  The central
structural fact, verified property-style in the tests, is that the
best-response condition of one agent coincides with the welfare condition
of the group, so the solved equilibria are also the welfare optima.

For the built-in exponential latency family combined with an exponential
time-value density every integral collapses to a finite sum of terms
``1/a`` or ``1/a^2`` (expand the binomial, integrate ``t^m e^{-at}``).
Each evaluator also carries an adaptive-quadrature route over the raw
integrand; ``method="auto"`` picks the closed form when it exists and the
tests cross-validate the two to tight tolerance.
"""
import math
from dataclasses import dataclass

import numpy as np

from .info_model import ScoreSequence
from .mvp import TAIL_MASS, TimeValue
from .numerics import EquilibriumResult, integrate_decaying, solve_decreasing_foc
from .pm_baseline import AccessFunction


@dataclass(frozen=True)
class LatencyFamily:
    """Distribution of signal-arrival time as a function of effort.

    The built-in (and only) kind is exponential: investing effort c makes
    the arrival time Exp(lam * c), so more effort means stochastically
    earlier signals and zero effort means the signal never arrives.
    """

    kind: str = "exponential"
    lam: float = 1.0

    def __post_init__(self):
        if self.kind != "exponential":
            raise ValueError("only the exponential latency family is built in")
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam}")

    @classmethod
    def exponential(cls, lam: float) -> "LatencyFamily":
        return cls("exponential", lam)

    def cdf(self, c: float, t):
        t = np.asarray(t, dtype=float)
        out = -np.expm1(-self.lam * c * t)
        return float(out) if out.ndim == 0 else out

    def dcdf_dc(self, c: float, t):
        """Sensitivity of arrival probability to effort, d F_c(t) / d c."""
        t = np.asarray(t, dtype=float)
        out = self.lam * t * np.exp(-self.lam * c * t)
        return float(out) if out.ndim == 0 else out


def _check_v(v: ScoreSequence, n: int) -> None:
    if len(v) < n + 1:
        raise ValueError(f"need v_0..v_{n}, got {len(v)} values")


def _closed_form_ok(latency: LatencyFamily, h: TimeValue) -> bool:
    return latency.kind == "exponential" and h.kind == "exponential"


def _resolve_method(method: str, latency: LatencyFamily, h: TimeValue) -> str:
    if method not in ("auto", "closed", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed" and not _closed_form_ok(latency, h):
        raise ValueError("no closed form for this latency/time-value pair")
    if method == "auto":
        return "closed" if _closed_form_ok(latency, h) else "quadrature"
    return method


# ----------------------------------------------------------- batch setting

def batch_equilibrium(F: AccessFunction, v: ScoreSequence, n: int) -> EquilibriumResult:
    """Symmetric equilibrium effort of the batch mechanism.

    Solves ``F'(c) * sum_k C(n-1,k) F^k (1-F)^(n-1-k) (v_{k+1}-v_k) = 1``;
    returns the corner c = 0 when even the first unit of effort is not
    worth its marginal value.
    """
    _check_v(v, n)
    deltas = v.deltas[:n]
    ks = np.arange(n)
    binom = np.array([math.comb(n - 1, k) for k in ks])

    def foc(c: float) -> float:
        Fc = F.value(c)
        mix = binom * Fc ** ks * (1.0 - Fc) ** (n - 1 - ks)
        return F.derivative(c) * float(np.dot(mix, deltas)) - 1.0

    return solve_decreasing_foc(foc, hi=min(1.0, F.domain_max),
                                domain_max=F.domain_max)


def batch_welfare(F: AccessFunction, v: ScoreSequence, n: int, c: float) -> float:
    """Expected welfare gain over the prior at symmetric effort c.

    Binomially mixes v_k over the number of agents who obtain signals,
    minus the total effort spent.
    """
    _check_v(v, n)
    Fc = F.value(c)
    ks = np.arange(n + 1)
    mix = np.array([math.comb(n, k) for k in ks]) * Fc ** ks * (1.0 - Fc) ** (n - ks)
    return float(np.dot(mix, v.values[:n + 1])) - n * c


# ------------------------------------------------------ sequential setting

def mvp_br_derivative(latency: LatencyFamily, h: TimeValue, v: ScoreSequence,
                      n: int, c_i: float, c: float, method: str = "auto") -> float:
    """Marginal utility of agent i's effort when everyone else invests c.

    Zero at the best response; the sequential analogue of the batch FOC
    with arrival times doing the rank mixing.
    """
    _check_v(v, n)
    if c_i < 0 or c < 0:
        raise ValueError("efforts must be nonnegative")
    deltas = v.deltas[:n]
    if _resolve_method(method, latency, h) == "closed":
        lam, eta = latency.lam, h.eta
        total = 0.0
        for k in range(n):
            if deltas[k] == 0.0:
                continue
            inner = 0.0
            for j in range(k + 1):
                a = eta + lam * c_i + lam * c * (n - 1 - k + j)
                inner += math.comb(k, j) * (-1.0) ** j / (a * a)
            total += math.comb(n - 1, k) * deltas[k] * inner
        return lam * eta * total - 1.0

    binom = np.array([math.comb(n - 1, k) for k in range(n)])

    def integrand(t: float) -> float:
        Fc = latency.cdf(c, t)
        mix = binom * Fc ** np.arange(n) * (1.0 - Fc) ** (n - 1 - np.arange(n))
        return latency.dcdf_dc(c_i, t) * float(np.dot(mix, deltas)) * h.density(t)

    return integrate_decaying(integrand, h.horizon(TAIL_MASS)) - 1.0


def mvp_equilibrium(latency: LatencyFamily, h: TimeValue, v: ScoreSequence,
                    n: int, method: str = "auto") -> EquilibriumResult:
    """Symmetric equilibrium effort of the sequential mechanism.

    Root of the best-response derivative on the diagonal c_i = c; the
    corner c = 0 applies when information value decays too fast (or is too
    small) for any effort to pay.
    """
    _check_v(v, n)

    def foc(c: float) -> float:
        return mvp_br_derivative(latency, h, v, n, c, c, method=method)

    return solve_decreasing_foc(foc, hi=1.0)


def mvp_welfare(latency: LatencyFamily, h: TimeValue, v: ScoreSequence,
                n: int, c: float, method: str = "auto") -> float:
    """Expected welfare gain over the prior at symmetric effort c.

    Time-integrates the binomial mixture of v_k over how many signals have
    arrived by t, weighted by the time value, minus total effort.
    """
    _check_v(v, n)
    if c < 0:
        raise ValueError("effort must be nonnegative")
    values = v.values[:n + 1]
    if _resolve_method(method, latency, h) == "closed":
        lam, eta = latency.lam, h.eta
        total = 0.0
        for k in range(n + 1):
            if values[k] == 0.0:
                continue
            inner = 0.0
            for j in range(k + 1):
                a = eta + lam * c * (n - k + j)
                inner += math.comb(k, j) * (-1.0) ** j * eta / a
            total += math.comb(n, k) * values[k] * inner
        return total - n * c

    binom = np.array([math.comb(n, k) for k in range(n + 1)])
    ks = np.arange(n + 1)

    def integrand(t: float) -> float:
        Fc = latency.cdf(c, t)
        mix = binom * Fc ** ks * (1.0 - Fc) ** (n - ks)
        return float(np.dot(mix, values)) * h.density(t)

    return integrate_decaying(integrand, h.horizon(TAIL_MASS)) - n * c


def mvp_agent_reward(latency: LatencyFamily, h: TimeValue, v: ScoreSequence,
                     n: int, c: float, method: str = "auto") -> float:
    """Exact expected reward of one agent under symmetric truthful timely play."""
    _check_v(v, n)
    if c < 0:
        raise ValueError("effort must be nonnegative")
    deltas = v.deltas[:n]
    if _resolve_method(method, latency, h) == "closed":
        lam, eta = latency.lam, h.eta
        total = 0.0
        for k in range(n):
            if deltas[k] == 0.0:
                continue
            inner = 0.0
            for j in range(k + 2):
                a = eta + lam * c * (n - 1 - k + j)
                inner += math.comb(k + 1, j) * (-1.0) ** j * eta / a
            total += math.comb(n - 1, k) * deltas[k] * inner
        return total

    binom = np.array([math.comb(n - 1, k) for k in range(n)])
    ks = np.arange(n)

    def integrand(t: float) -> float:
        Fc = latency.cdf(c, t)
        mix = binom * Fc ** ks * (1.0 - Fc) ** (n - 1 - ks)
        return Fc * float(np.dot(mix, deltas)) * h.density(t)

    return integrate_decaying(integrand, h.horizon(TAIL_MASS))


def mvp_principal_utility(latency: LatencyFamily, h: TimeValue, v: ScoreSequence,
                          n: int, c: float, method: str = "auto") -> float:
    """Principal's expected utility gain: welfare minus what agents keep.

    Identity: welfare = principal utility + sum of agent utilities, with
    each agent keeping (expected reward - effort).
    """
    welfare = mvp_welfare(latency, h, v, n, c, method=method)
    reward = mvp_agent_reward(latency, h, v, n, c, method=method)
    return welfare - n * (reward - c)
