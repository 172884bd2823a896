"""The fair batch market: aggregate all reports, pay leave-one-out gains.

Every agent is rewarded as if he had reported last:

    r_k = S(p_all, y*) - S(p_without_k, y*)

where p_without_k folds everyone's report but agent k's.  Because odds
updates commute, this equals the randomized construction that draws a
permutation ending in k and pays the final score difference, with the
randomness gone: :func:`fpm_run` is deterministic, and
:func:`fpm_run_sampled_permutation` keeps the literal randomized form as a
test oracle.

Rewards may be negative; an agent whose report degrades the belief others
built pays for it, which is what makes misreporting strictly unprofitable.
"""
import itertools
from dataclasses import dataclass, field

import numpy as np

from .belief import ReportVector, apply_report, truthful_report
from .errors import CapacityError
from .info_model import ENUMERATION_BUDGET, Belief, InformationModel
from .scoring import ScoringRule, score


@dataclass(frozen=True)
class BatchOutcomeReport:
    """One settlement input: n reports (index-aligned to agents) and the outcome.

    Agents without a signal appear explicitly with the 1/2 vector rather
    than being omitted, so reward vectors stay index-aligned.
    """

    reports: tuple
    outcome: int

    def __post_init__(self):
        object.__setattr__(self, "reports", tuple(self.reports))
        if len(self.reports) < 1:
            raise ValueError("a batch needs at least one report slot")

    @property
    def num_agents(self) -> int:
        return len(self.reports)


@dataclass(frozen=True)
class FpmResult:
    aggregated: Belief
    rewards: np.ndarray

    def __post_init__(self):
        rewards = np.asarray(self.rewards, dtype=float)
        rewards.flags.writeable = False
        object.__setattr__(self, "rewards", rewards)
        if not np.all(np.isfinite(rewards)):
            raise ValueError(f"non-finite rewards {rewards}; use a scoring rule "
                             "that stays finite on reachable beliefs")


def _fold(prior: Belief, reports, skip: int | None = None) -> Belief:
    belief = prior
    for i, report in enumerate(reports):
        if i == skip:
            continue
        belief = apply_report(belief, report)
    return belief


def fpm_run(model_prior: Belief, batch: BatchOutcomeReport,
            rule: ScoringRule) -> FpmResult:
    """Settle a batch: aggregated belief plus each agent's leave-one-out reward."""
    if not 0 <= batch.outcome < model_prior.num_outcomes:
        raise ValueError(f"outcome {batch.outcome} outside the belief support")
    aggregated = _fold(model_prior, batch.reports)
    s_all = score(rule, aggregated, batch.outcome)
    rewards = np.empty(batch.num_agents)
    for k in range(batch.num_agents):
        without_k = _fold(model_prior, batch.reports, skip=k)
        rewards[k] = s_all - score(rule, without_k, batch.outcome)
    return FpmResult(aggregated, rewards)


def fpm_run_sampled_permutation(model_prior: Belief, batch: BatchOutcomeReport,
                                rule: ScoringRule, rng: np.random.Generator) -> FpmResult:
    """Literal randomized settlement: per agent, a random order ending with him.

    Kept as an oracle for the determinism property; agrees with
    :func:`fpm_run` because updates commute.
    """
    n = batch.num_agents
    rewards = np.empty(n)
    aggregated = None
    for k in range(n):
        order = list(rng.permutation([i for i in range(n) if i != k])) + [k]
        belief = model_prior
        before_last = None
        for j in order:
            before_last = belief
            belief = apply_report(belief, batch.reports[j])
        rewards[k] = (score(rule, belief, batch.outcome)
                      - score(rule, before_last, batch.outcome))
        aggregated = belief
    return FpmResult(aggregated, rewards)


def _signal_states(model: InformationModel, q: float):
    """(probability-given-y vector, report) for no-signal and each signal value."""
    d = model.num_outcomes
    states = [(np.full(d, 1.0 - q), ReportVector.no_signal(d))]
    for x in range(model.num_signal_values):
        report = (truthful_report(model, x) if d == 2
                  else model.likelihood[:, x])
        states.append((q * model.likelihood[:, x], report))
    return states


def fpm_expected_reward(model: InformationModel, rule: ScoringRule,
                        effort_profile, report_override=None) -> np.ndarray:
    """Exact expected reward per agent when agent i has a signal w.p. q_i.

    Enumerates (signal obtained?, signal value, outcome) jointly, settling
    each realization with truthful reports.  ``report_override`` maps one
    agent to a replacement report function ``f(signal or None) -> report``,
    which is how deviation losses are measured exactly.
    """
    q = np.asarray(effort_profile, dtype=float)
    if np.any(q < 0) or np.any(q > 1):
        raise ValueError("signal probabilities must lie in [0, 1]")
    n = q.size
    m = model.num_signal_values
    if (m + 1) ** n > ENUMERATION_BUDGET:
        raise CapacityError(
            f"({m}+1)^{n} signal-state tuples exceed the exact-enumeration "
            f"budget; estimate rewards with infomarkets.montecarlo.simulate")
    per_agent_states = []
    for i in range(n):
        states = _signal_states(model, q[i])
        if report_override and i in report_override:
            override = report_override[i]
            states = [(w, override(None if s == 0 else s - 1))
                      for s, (w, _) in enumerate(states)]
        per_agent_states.append(states)

    prior_belief = model.prior_belief()
    expected = np.zeros(n)
    for combo in itertools.product(*per_agent_states):
        weight_given_y = np.ones(model.num_outcomes)
        for w, _ in combo:
            weight_given_y = weight_given_y * w
        joint = model.prior * weight_given_y
        if not np.any(joint > 0):
            continue
        reports = tuple(r for _, r in combo)
        for y in range(model.num_outcomes):
            if joint[y] == 0.0:
                continue
            result = fpm_run(prior_belief, BatchOutcomeReport(reports, y), rule)
            expected += joint[y] * result.rewards
    return expected


def batch_from_json(record: dict, num_outcomes: int) -> BatchOutcomeReport:
    """Parse ``{"reports": [[...], ...], "outcome": y}``.

    A report with d-1 entries is a ratio-encoded :class:`ReportVector`;
    one with d entries is a raw likelihood column.
    """
    reports = []
    for entry in record["reports"]:
        entry = list(entry)
        if len(entry) == num_outcomes - 1:
            reports.append(ReportVector(tuple(entry)))
        elif len(entry) == num_outcomes:
            reports.append(np.asarray(entry, dtype=float))
        else:
            raise ValueError(f"report of length {len(entry)} fits neither the "
                             f"ratio encoding ({num_outcomes - 1} entries) nor a "
                             f"likelihood column ({num_outcomes} entries)")
    return BatchOutcomeReport(tuple(reports), int(record["outcome"]))


def result_to_json(result: FpmResult) -> dict:
    return {"aggregated": [float(p) for p in result.aggregated.probs],
            "rewards": [float(r) for r in result.rewards]}
