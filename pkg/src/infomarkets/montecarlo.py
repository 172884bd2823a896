"""Agent-based sampling of the full games, vectorized over trials.

One trial draws an outcome, gives each agent a shot at a signal (a
Bernoulli access draw in batch settings, an exponential arrival time in
sequential ones), applies each agent's report policy, settles the chosen
mechanism, and records rewards, costs and the principal's value.  The
per-trial books close exactly: welfare is computed as principal utility
plus the agents' utilities, so the accounting identity holds bit for bit.

Randomness comes from counter-based Philox streams keyed by (master seed,
purpose, agent) with the trial index as the counter position.  Two
consequences the tests rely on: results are bitwise independent of how the
trial range is chunked, and two runs with the same seed see identical
draws, so a deviation test compares strategies on common random numbers
and certifies harm with tiny variance.
"""
import math
from dataclasses import dataclass

import numpy as np

from .belief import RATIO_CLAMP, truthful_report
from .equilibrium import LatencyFamily
from .info_model import InformationModel
from .mvp import TimeValue
from .pm_baseline import AccessFunction
from .scoring import ScoringRule, score

MECHANISMS = ("fpm", "mvp", "pm_batch", "pm_sequential")

_DEFAULT_CHUNK = 1 << 17

# purpose tags for the random streams
_OUTCOME, _LATENCY, _SIGNAL, _WINNER = 0, 1, 2, 3


@dataclass(frozen=True)
class ReportPolicy:
    """What an agent does with the report he would otherwise submit truthfully.

    ``perturbed`` shifts one ratio entry by ``epsilon``; ``delayed`` adds
    ``delay`` to the submission time (sequential settings only); ``silent``
    never reports.
    """

    kind: str = "truthful"
    epsilon: float = 0.0
    entry: int = 0
    delay: float = 0.0

    def __post_init__(self):
        if self.kind not in ("truthful", "perturbed", "delayed", "silent"):
            raise ValueError(f"unknown report policy {self.kind!r}")
        if self.kind == "delayed" and self.delay < 0:
            raise ValueError("delay must be nonnegative")


TRUTHFUL = ReportPolicy()


@dataclass(frozen=True)
class StrategyProfile:
    """Per-agent efforts and report policies."""

    efforts: tuple[float, ...]
    policies: tuple[ReportPolicy, ...] = ()

    def __post_init__(self):
        efforts = tuple(float(c) for c in self.efforts)
        object.__setattr__(self, "efforts", efforts)
        if any(c < 0 for c in efforts):
            raise ValueError("efforts must be nonnegative")
        policies = tuple(self.policies) or (TRUTHFUL,) * len(efforts)
        if len(policies) != len(efforts):
            raise ValueError("one policy per agent required")
        object.__setattr__(self, "policies", policies)

    @classmethod
    def symmetric(cls, effort: float, n: int,
                  policy: ReportPolicy = TRUTHFUL) -> "StrategyProfile":
        return cls((effort,) * n, (policy,) * n)

    def replace_agent(self, i: int, effort: float | None = None,
                      policy: ReportPolicy | None = None) -> "StrategyProfile":
        efforts = list(self.efforts)
        policies = list(self.policies)
        if effort is not None:
            efforts[i] = effort
        if policy is not None:
            policies[i] = policy
        return StrategyProfile(tuple(efforts), tuple(policies))

    @property
    def num_agents(self) -> int:
        return len(self.efforts)


@dataclass(frozen=True)
class SimStats:
    """Aggregates of one simulation run (per-agent arrays are agent-indexed)."""

    mechanism: str
    trials: int
    reward_mean: np.ndarray
    reward_se: np.ndarray
    cost_mean: np.ndarray
    cost_se: np.ndarray
    utility_mean: np.ndarray
    utility_se: np.ndarray
    principal_utility_mean: float
    welfare_mean: float

    def to_json(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "trials": self.trials,
            "reward_mean": self.reward_mean.tolist(),
            "reward_se": self.reward_se.tolist(),
            "cost_mean": self.cost_mean.tolist(),
            "cost_se": self.cost_se.tolist(),
            "utility_mean": self.utility_mean.tolist(),
            "utility_se": self.utility_se.tolist(),
            "principal_utility_mean": self.principal_utility_mean,
            "welfare_mean": self.welfare_mean,
        }


def _stream(seed: int, purpose: int, agent: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(
        np.random.SeedSequence(entropy=(int(seed), purpose, agent))))


def _report_columns(model: InformationModel, policy: ReportPolicy) -> np.ndarray:
    """Columns indexed by extended signal state (0 = no signal, 1+x = signal x).

    Truthful content is the likelihood column itself; the ratio-encoded
    binary report (1-b, b) is the same column up to scale.  Perturbation
    works in ratio space and therefore requires a binary market.
    """
    d, m = model.num_outcomes, model.num_signal_values
    cols = np.ones((m + 1, d))
    if policy.kind == "silent":
        return cols
    if policy.kind == "perturbed":
        if d != 2:
            raise ValueError("perturbed policies target the binary ratio encoding")
        for x in range(m):
            b = truthful_report(model, x).entries[0]
            if policy.entry != 0:
                raise ValueError("binary reports have a single entry, index 0")
            b = min(max(b + policy.epsilon, RATIO_CLAMP), 1.0 - RATIO_CLAMP)
            cols[1 + x] = (1.0 - b, b)
        # a signal-less perturbed agent distorts the 1/2 default too
        b0 = min(max(0.5 + policy.epsilon, RATIO_CLAMP), 1.0 - RATIO_CLAMP)
        cols[0] = (1.0 - b0, b0)
        return cols
    cols[1:] = model.likelihood.T
    return cols


def _draw_outcomes(model: InformationModel, u: np.ndarray) -> np.ndarray:
    cum = np.cumsum(model.prior)
    return np.minimum(np.searchsorted(cum, u, side="right"),
                      model.num_outcomes - 1)


def _draw_signals(model: InformationModel, y: np.ndarray, u: np.ndarray) -> np.ndarray:
    cum_rows = np.cumsum(model.likelihood, axis=1)[y]
    return np.minimum((cum_rows <= u[:, None]).sum(axis=1),
                      model.num_signal_values - 1)


def _normalize_rows(w: np.ndarray) -> np.ndarray:
    return w / w.sum(axis=1, keepdims=True)


def _fold_path(prior: np.ndarray, cols_by_slot: list[np.ndarray]) -> list[np.ndarray]:
    """Belief after 0, 1, .., n folded report columns; each (T, d)."""
    path = [np.broadcast_to(prior, cols_by_slot[0].shape).copy()
            if cols_by_slot else prior[None, :].copy()]
    for col in cols_by_slot:
        path.append(_normalize_rows(path[-1] * col))
    return path


class _Chunk:
    """Per-trial results of one chunk: rewards, value, and agent costs."""

    __slots__ = ("rewards", "value")

    def __init__(self, rewards: np.ndarray, value: np.ndarray):
        self.rewards = rewards
        self.value = value


def _settle_batch(model, mechanism, profile, rule, access, y, u_lat, u_sig, u_win):
    T = y.size
    n = profile.num_agents
    silent = np.array([p.kind == "silent" for p in profile.policies])
    has = np.empty((T, n), dtype=bool)
    for i, c in enumerate(profile.efforts):
        has[:, i] = u_lat[:, i] < access.value(c)
    active = has & ~silent

    if mechanism == "pm_batch":
        count = active.sum(axis=1)
        value = (count > 0).astype(float)
        rewards = np.zeros((T, n))
        pick = np.floor(u_win * count).astype(int)  # uniform among signal holders
        cum = np.cumsum(active, axis=1)
        sel = active & (cum == (pick + 1)[:, None])
        rewards[sel] = 1.0
        return _Chunk(rewards, value)

    x = _draw_signals(model, y, u_sig[:, 0])
    xs = np.empty((T, n), dtype=int)
    for i in range(n):
        xs[:, i] = x if i == 0 else _draw_signals(model, y, u_sig[:, i])

    d = model.num_outcomes
    cols = np.ones((n, T, d))
    for i in range(n):
        table = _report_columns(model, profile.policies[i])
        state = np.where(has[:, i], 1 + xs[:, i], 0)
        cols[i] = table[state]

    prior = model.prior
    prefix = [np.ones((T, d))]
    for i in range(n):
        prefix.append(prefix[-1] * cols[i])
    suffix = [np.ones((T, d))]
    for i in range(n - 1, -1, -1):
        suffix.append(suffix[-1] * cols[i])
    suffix.reverse()

    p_all = _normalize_rows(prior * prefix[n])
    s_all = score(rule, p_all, y)
    s_prior = score(rule, np.broadcast_to(prior, (T, d)), y)
    rewards = np.empty((T, n))
    for i in range(n):
        p_wo = _normalize_rows(prior * prefix[i] * suffix[i + 1])
        rewards[:, i] = s_all - score(rule, p_wo, y)
    return _Chunk(rewards, s_all - s_prior)


def _settle_sequential(model, mechanism, profile, rule, latency, h,
                       y, u_lat, u_sig):
    T = y.size
    n = profile.num_agents
    d = model.num_outcomes
    eta = h.eta

    times = np.full((T, n), np.inf)
    for i, c in enumerate(profile.efforts):
        policy = profile.policies[i]
        if policy.kind == "silent" or c == 0.0:
            continue
        times[:, i] = -np.log1p(-u_lat[:, i]) / (latency.lam * c)
        if policy.kind == "delayed":
            times[:, i] += policy.delay

    xs = np.empty((T, n), dtype=int)
    for i in range(n):
        xs[:, i] = _draw_signals(model, y, u_sig[:, i])

    cols = np.ones((n, T, d))
    for i in range(n):
        table = _report_columns(model, profile.policies[i])
        active = np.isfinite(times[:, i])
        state = np.where(active, 1 + xs[:, i], 0)
        cols[i] = table[state]

    order = np.argsort(times, axis=1, kind="stable")
    sorted_times = np.take_along_axis(times, order, axis=1)
    rows = np.arange(T)
    slot_cols = []
    for j in range(n):
        agent_j = order[:, j]
        col = cols[agent_j, rows]
        col = np.where(np.isfinite(sorted_times[:, j, None]), col, 1.0)
        slot_cols.append(col)

    path = _fold_path(model.prior, slot_cols)
    s_path = np.stack([score(rule, p, y) for p in path])      # (n+1, T)
    decay = np.exp(-eta * np.minimum(sorted_times, 1e308))
    decay = np.where(np.isfinite(sorted_times), decay, 0.0)
    edges = np.concatenate([np.ones((T, 1)), decay, np.zeros((T, 1))], axis=1)
    masses = edges[:, :-1] - edges[:, 1:]                     # (T, n+1) slot weights

    value = np.einsum("jt,tj->t", s_path - s_path[0], masses)

    rewards = np.zeros((T, n))
    if mechanism == "pm_sequential":
        gains = s_path[1:] - s_path[:-1]                      # (n, T) per slot
        reported = np.isfinite(sorted_times)
        for j in range(n):
            np.add.at(rewards, (rows[reported[:, j]], order[reported[:, j], j]),
                      gains[j, reported[:, j]])
        return _Chunk(rewards, value)

    for i in range(n):
        cf_cols = [np.where((order[:, j] == i)[:, None], 1.0, slot_cols[j])
                   for j in range(n)]
        cf_path = _fold_path(model.prior, cf_cols)
        s_cf = np.stack([score(rule, p, y) for p in cf_path])
        rewards[:, i] = np.einsum("jt,tj->t", s_path - s_cf, masses)
    return _Chunk(rewards, value)


def _validate_setup(model, mechanism, profile, rule, access, latency, h):
    if mechanism not in MECHANISMS:
        raise ValueError(f"unknown mechanism {mechanism!r}, try one of {MECHANISMS}")
    if mechanism in ("fpm", "pm_batch") and access is None:
        raise ValueError(f"{mechanism} needs an AccessFunction")
    if mechanism in ("mvp", "pm_sequential"):
        if latency is None:
            raise ValueError(f"{mechanism} needs a LatencyFamily")
        if h is None:
            h = TimeValue.exponential(1.0)
        if h.kind != "exponential":
            raise ValueError("the simulator supports exponential time value only")
    if mechanism != "pm_batch" and rule is None:
        raise ValueError(f"{mechanism} needs a ScoringRule")
    if profile.num_agents < 1:
        raise ValueError("need at least one agent")
    return h


def _run(model: InformationModel, mechanism: str, profile: StrategyProfile,
         trials: int, seed: int, rule, access, latency, h, chunk_size):
    """Full per-trial reward and value arrays, chunked but chunk-invariant."""
    n = profile.num_agents
    chunk_size = chunk_size or _DEFAULT_CHUNK
    g_outcome = _stream(seed, _OUTCOME)
    g_winner = _stream(seed, _WINNER)
    g_lat = [_stream(seed, _LATENCY, i) for i in range(n)]
    g_sig = [_stream(seed, _SIGNAL, i) for i in range(n)]

    rewards = np.empty((trials, n))
    value = np.empty(trials)
    done = 0
    while done < trials:
        T = min(chunk_size, trials - done)
        y = _draw_outcomes(model, g_outcome.random(T))
        u_win = g_winner.random(T)
        u_lat = np.column_stack([g.random(T) for g in g_lat])
        u_sig = np.column_stack([g.random(T) for g in g_sig])
        if mechanism in ("fpm", "pm_batch"):
            chunk = _settle_batch(model, mechanism, profile, rule, access,
                                  y, u_lat, u_sig, u_win)
        else:
            chunk = _settle_sequential(model, mechanism, profile, rule,
                                       latency, h, y, u_lat, u_sig)
        rewards[done:done + T] = chunk.rewards
        value[done:done + T] = chunk.value
        done += T
    return rewards, value


def simulate(model: InformationModel, mechanism: str, profile: StrategyProfile,
             trials: int, seed: int, *, rule: ScoringRule | None = None,
             access: AccessFunction | None = None,
             latency: LatencyFamily | None = None,
             h: TimeValue | None = None,
             chunk_size: int | None = None) -> SimStats:
    """Sample ``trials`` independent plays and aggregate the books.

    Deterministic given ``seed`` and the configuration, regardless of
    ``chunk_size``.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    h = _validate_setup(model, mechanism, profile, rule, access, latency, h)
    rewards, value = _run(model, mechanism, profile, trials, seed,
                          rule, access, latency, h, chunk_size)
    costs = np.asarray(profile.efforts)
    utilities = rewards - costs
    principal = value - rewards.sum(axis=1)
    welfare = principal + utilities.sum(axis=1)
    sqrt_t = math.sqrt(trials)

    def se(a: np.ndarray) -> np.ndarray:
        return a.std(axis=0, ddof=1) / sqrt_t if trials > 1 else np.zeros(a.shape[1])

    return SimStats(
        mechanism=mechanism, trials=trials,
        reward_mean=rewards.mean(axis=0), reward_se=se(rewards),
        cost_mean=costs.copy(), cost_se=np.zeros_like(costs),
        utility_mean=utilities.mean(axis=0), utility_se=se(utilities),
        principal_utility_mean=float(principal.mean()),
        welfare_mean=float(welfare.mean()),
    )


def per_trial_records(model, mechanism, profile, trials, seed, *,
                      rule=None, access=None, latency=None, h=None,
                      chunk_size=None) -> dict[str, np.ndarray]:
    """Raw per-trial arrays (rewards, value, utilities, books) for debugging."""
    h = _validate_setup(model, mechanism, profile, rule, access, latency, h)
    rewards, value = _run(model, mechanism, profile, trials, seed,
                          rule, access, latency, h, chunk_size)
    costs = np.asarray(profile.efforts)
    utilities = rewards - costs
    principal = value - rewards.sum(axis=1)
    welfare = principal + utilities.sum(axis=1)
    return {"rewards": rewards, "value": value, "utilities": utilities,
            "principal_utility": principal, "welfare": welfare}


def deviation_test(model: InformationModel, mechanism: str,
                   baseline: StrategyProfile, deviant_agent: int, deviation,
                   trials: int, seed: int, *, rule: ScoringRule | None = None,
                   access: AccessFunction | None = None,
                   latency: LatencyFamily | None = None,
                   h: TimeValue | None = None,
                   chunk_size: int | None = None) -> tuple[float, float]:
    """Paired estimate of how a unilateral deviation changes the deviant's utility.

    ``deviation`` is a :class:`ReportPolicy`, a bare effort level, or an
    ``(effort, policy)`` pair.  Baseline and deviant runs share every
    random draw, so the difference has tiny variance; a mean below
    ``-3 * se`` certifies the deviation as harmful.  Returns
    ``(delta_mean, delta_se)``.
    """
    if not 0 <= deviant_agent < baseline.num_agents:
        raise ValueError(f"no agent {deviant_agent} in the profile")
    if isinstance(deviation, ReportPolicy):
        devprofile = baseline.replace_agent(deviant_agent, policy=deviation)
    elif isinstance(deviation, (int, float)):
        devprofile = baseline.replace_agent(deviant_agent, effort=float(deviation))
    else:
        effort, policy = deviation
        devprofile = baseline.replace_agent(deviant_agent, effort=float(effort),
                                            policy=policy)

    kw = dict(rule=rule, access=access, latency=latency, h=h, chunk_size=chunk_size)
    base = per_trial_records(model, mechanism, baseline, trials, seed, **kw)
    dev = per_trial_records(model, mechanism, devprofile, trials, seed, **kw)
    delta = (dev["utilities"][:, deviant_agent]
             - base["utilities"][:, deviant_agent])
    se = float(delta.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return float(delta.mean()), se
