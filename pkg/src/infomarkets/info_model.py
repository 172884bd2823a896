"""Conditionally i.i.d. information structures and exact score expectations.

An :class:`InformationModel` couples an outcome prior with a per-signal
likelihood table; every agent draws his signal from the same table,
independently conditioned on the outcome.  The canonical special case is
the binary noisy model: outcome 1 has prior probability ``alpha`` and each
signal equals the outcome with probability ``1 - beta``.

On top of the model this module computes, by exact enumeration, the
expected-score sequence ``v_0 .. v_n``: how much the self-expected proper
score of the market belief rises after k truthful reports.  That sequence
is the single input through which the information structure enters every
equilibrium computation downstream.
"""
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError
from .scoring import ScoringRule, expected_score

#: largest number of signal tuples exact enumeration is willing to visit
ENUMERATION_BUDGET = 10 ** 7

_PROB_TOL = 1e-12


def _validate_distribution(vec: np.ndarray, what: str, tol: float) -> None:
    if np.any(vec < -tol) or np.any(vec > 1 + tol):
        raise ValueError(f"{what} has entries outside [0, 1]: {vec}")
    if abs(vec.sum() - 1.0) > tol:
        raise ValueError(f"{what} sums to {vec.sum()!r}, not 1")


@dataclass(frozen=True)
class Belief:
    """A probability vector over the d outcomes; the market state."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)
        if probs.ndim != 1 or probs.size < 2:
            raise ValueError("a belief needs at least two outcome probabilities")
        _validate_distribution(probs, "belief", 1e-10)

    @classmethod
    def normalized(cls, raw) -> "Belief":
        raw = np.asarray(raw, dtype=float)
        total = raw.sum()
        if total <= 0:
            raise ValueError("cannot normalize a nonpositive mass vector")
        return cls(raw / total)

    @property
    def num_outcomes(self) -> int:
        return self.probs.size

    def __len__(self) -> int:
        return self.probs.size

    def __getitem__(self, y: int) -> float:
        return float(self.probs[y])


@dataclass(frozen=True)
class InformationModel:
    """Outcome prior plus the shared conditional signal table.

    ``likelihood[y, x]`` is the probability that any one agent observes
    signal value ``x`` when the outcome is ``y``.
    """

    prior: np.ndarray
    likelihood: np.ndarray
    num_agents: int = 2

    def __post_init__(self):
        prior = np.asarray(self.prior, dtype=float)
        lik = np.asarray(self.likelihood, dtype=float)
        prior.flags.writeable = False
        lik.flags.writeable = False
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "likelihood", lik)
        _validate_distribution(prior, "prior", _PROB_TOL)
        if lik.ndim != 2 or lik.shape[0] != prior.size:
            raise ValueError("likelihood must be a d x m table matching the prior")
        for y in range(lik.shape[0]):
            _validate_distribution(lik[y], f"likelihood row {y}", _PROB_TOL)
        if not self.num_agents >= 1:
            raise ValueError("num_agents must be a positive integer")

    @classmethod
    def binary_noisy(cls, alpha: float, beta: float, num_agents: int = 2) -> "InformationModel":
        """Binary outcome with prior ``alpha`` on outcome 1 and flip noise ``beta``."""
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
        if not 0.0 <= beta <= 0.5:
            raise ValueError(f"beta must lie in [0, 1/2], got {beta}")
        prior = np.array([1.0 - alpha, alpha])
        likelihood = np.array([[1.0 - beta, beta], [beta, 1.0 - beta]])
        return cls(prior, likelihood, num_agents)

    @classmethod
    def from_config(cls, cfg: dict, num_agents: int = 2) -> "InformationModel":
        """Parse ``{kind: "binary_noisy", alpha, beta}`` or ``{kind: "table", ...}``."""
        kind = cfg.get("kind")
        n = int(cfg.get("num_agents", num_agents))
        if kind == "binary_noisy":
            return cls.binary_noisy(float(cfg["alpha"]), float(cfg["beta"]), n)
        if kind == "table":
            return cls(np.asarray(cfg["prior"], float),
                       np.asarray(cfg["likelihood"], float), n)
        raise ValueError(f"unknown model kind {kind!r}")

    @property
    def num_outcomes(self) -> int:
        return self.prior.size

    @property
    def num_signal_values(self) -> int:
        return self.likelihood.shape[1]

    def prior_belief(self) -> Belief:
        return Belief(self.prior.copy())


@dataclass(frozen=True)
class ScoreSequence:
    """Expected score gains ``v_0 = 0 <= v_1 <= ... <= v_n`` after k reports."""

    values: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("a score sequence needs at least v_0")
        if values[0] != 0.0:
            raise ValueError(f"v_0 must be exactly 0, got {values[0]!r}")
        if np.any(np.diff(values) < -1e-12):
            raise ValueError("score sequence must be nondecreasing: more reports "
                             "cannot lower the expected proper score")

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, k: int) -> float:
        return float(self.values[k])

    @property
    def deltas(self) -> np.ndarray:
        """Marginal gains ``v_{k+1} - v_k``."""
        return np.diff(self.values)


def posterior(model: InformationModel, signals) -> Belief:
    """Exact Bayes posterior over outcomes given observed signal values.

    The result is invariant to the order of ``signals`` because they are
    conditionally independent.
    """
    signals = list(signals)
    m = model.num_signal_values
    for x in signals:
        if not 0 <= x < m:
            raise ValueError(f"signal value {x} outside the table with {m} columns")
    weights = model.prior.copy()
    for x in signals:
        weights = weights * model.likelihood[:, x]
    total = weights.sum()
    if total <= 0:
        raise ValueError("signals are jointly impossible under this model")
    return Belief(weights / total)


def expected_base_score(model: InformationModel, rule: ScoringRule) -> float:
    """Self-expected score of the prior, the additive constant in welfare."""
    return expected_score(rule, model.prior)


def _mean_self_score_binary(model: InformationModel, rule: ScoringRule, k: int) -> float:
    """E[self-expected score after k signals] via the count-of-ones statistic.

    Valid for any two-valued signal table: the posterior after k signals
    depends only on how many of them were 1, so k+1 terms with binomial
    weights replace the 2^k tuples.
    """
    lik = model.likelihood
    total = 0.0
    for ones in range(k + 1):
        comb = math.comb(k, ones)
        weights = model.prior * lik[:, 1] ** ones * lik[:, 0] ** (k - ones)
        mass = weights.sum()
        if mass == 0.0:
            continue
        total += comb * mass * expected_score(rule, weights / mass)
    return total


def _mean_self_score_enumerated(model: InformationModel, rule: ScoringRule, k: int) -> float:
    m = model.num_signal_values
    total = 0.0
    for tup in itertools.product(range(m), repeat=k):
        weights = model.prior.copy()
        for x in tup:
            weights = weights * model.likelihood[:, x]
        mass = weights.sum()
        if mass == 0.0:
            continue
        total += mass * expected_score(rule, weights / mass)
    return total


def v_sequence(model: InformationModel, rule: ScoringRule, n: int) -> ScoreSequence:
    """Expected score gains after k = 0..n truthful reports, exactly.

    Two-valued signal models collapse to the count-of-ones sufficient
    statistic (O(k) terms per k); other models enumerate all ``m^k`` signal
    tuples, guarded by :data:`ENUMERATION_BUDGET`.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = model.num_signal_values
    binary = m == 2
    if not binary and m ** n > ENUMERATION_BUDGET:
        raise CapacityError(
            f"{m}^{n} signal tuples exceed the exact-enumeration budget of "
            f"{ENUMERATION_BUDGET}; estimate the score sequence by simulation "
            f"(infomarkets.montecarlo) instead")
    mean_self = _mean_self_score_binary if binary else _mean_self_score_enumerated
    base = mean_self(model, rule, 0)
    values = np.empty(n + 1)
    values[0] = 0.0
    for k in range(1, n + 1):
        values[k] = mean_self(model, rule, k) - base
    return ScoreSequence(values)
