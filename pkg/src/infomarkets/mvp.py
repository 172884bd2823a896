"""The sequential market: marginal-value rewards under time-decaying value.

The market belief is a piecewise-constant path updated by timed reports.
Alongside it the mechanism maintains, for every agent i, the counterfactual
path that skips agent i's report but folds everyone else's.  After the
outcome reveals, agent i earns the time-weighted integral of his marginal
contribution:

    r_i = integral over t > 0 of (S(p(t), y*) - S(p~i(t), y*)) h(t) dt

where h is the time-value density.  The integral runs over the whole
timeline with no truncation: for the exponential h the tail is exact in
closed form, and any h must have finite total mass anyway for rewards to
be well defined.

Reports are folded in time order; simultaneous timestamps (possible in
input files, never under continuous latencies) are broken by agent index,
which cannot affect rewards because tied segments have zero width.
"""
import math
from dataclasses import dataclass

import numpy as np

from .belief import ReportVector, apply_report
from .errors import ProtocolError
from .info_model import Belief
from .numerics import integrate_decaying
from .scoring import ScoringRule, score

#: how much h tail mass may be dropped when quadrature needs a finite horizon
TAIL_MASS = 1e-13


@dataclass(frozen=True)
class TimeValue:
    """How much belief quality at time t is worth: a density h(t) on t > 0.

    The exponential kind ``h(t) = eta * exp(-eta * t)`` integrates to one
    and has closed-form interval masses.  The table kind interpolates a
    sampled density linearly between knots (zero beyond the last knot) and
    integrates by adaptive quadrature.
    """

    kind: str = "exponential"
    eta: float = 1.0
    times: tuple[float, ...] | None = None
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind == "exponential":
            if not self.eta > 0:
                raise ValueError(f"decay rate eta must be positive, got {self.eta}")
        elif self.kind == "table":
            if self.times is None or self.values is None:
                raise ValueError("table kind needs times and values")
            times = tuple(float(t) for t in self.times)
            values = tuple(float(v) for v in self.values)
            object.__setattr__(self, "times", times)
            object.__setattr__(self, "values", values)
            if len(times) != len(values) or len(times) < 2:
                raise ValueError("times and values must align with >= 2 knots")
            if any(t1 <= t0 for t0, t1 in zip(times, times[1:])) or times[0] < 0:
                raise ValueError("times must be strictly increasing from >= 0")
            if any(v < 0 for v in values) or not any(v > 0 for v in values):
                raise ValueError("density values must be nonnegative, not all zero")
        else:
            raise ValueError(f"unknown time-value kind {self.kind!r}")

    @classmethod
    def exponential(cls, eta: float) -> "TimeValue":
        return cls("exponential", eta=eta)

    @classmethod
    def table(cls, times, values) -> "TimeValue":
        return cls("table", times=tuple(times), values=tuple(values))

    @classmethod
    def from_config(cls, cfg: dict) -> "TimeValue":
        if isinstance(cfg, (int, float)):
            return cls.exponential(float(cfg))
        if cfg.get("kind", "exponential") == "exponential":
            return cls.exponential(float(cfg.get("eta", 1.0)))
        return cls.table(cfg["times"], cfg["values"])

    def density(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "exponential":
            out = self.eta * np.exp(-self.eta * t)
        else:
            out = np.interp(t, self.times, self.values, left=0.0, right=0.0)
        return float(out) if out.ndim == 0 else out

    def horizon(self, tail: float = TAIL_MASS) -> float:
        """A time beyond which at most ``tail`` mass remains."""
        if self.kind == "exponential":
            return -math.log(tail) / self.eta
        return self.times[-1]


def time_value_mass(h: TimeValue, a: float, b: float) -> float:
    """Interval mass of the time-value density, integral of h over [a, b]."""
    if a > b:
        raise ValueError(f"empty interval [{a}, {b}]")
    if a == b:
        return 0.0
    if h.kind == "exponential":
        upper = 0.0 if math.isinf(b) else math.exp(-h.eta * b)
        return math.exp(-h.eta * a) - upper
    hi = min(b, h.times[-1])
    lo = min(a, hi)
    if lo == hi:
        return 0.0
    return integrate_decaying(lambda t: h.density(lo + t), hi - lo)


@dataclass(frozen=True)
class TimedReport:
    """One agent's single submission: who, when, and what."""

    agent: int
    time: float
    report: object

    def __post_init__(self):
        if self.agent < 0:
            raise ValueError(f"agent index must be nonnegative, got {self.agent}")
        if not (math.isfinite(self.time) and self.time >= 0):
            raise ValueError(f"report time must be finite and >= 0, got {self.time}")


@dataclass(frozen=True)
class MarketTrace:
    """The belief path and every agent's counterfactual path.

    ``beliefs[j]`` is in force between ``breakpoints[j-1]`` and
    ``breakpoints[j]`` (prior before the first report, final belief
    afterwards); ``counterfactuals[i, j]`` aligns to the same breakpoints
    but skips agent i's report.  ``reporters[j]`` is who caused breakpoint j.
    """

    breakpoints: np.ndarray
    beliefs: np.ndarray
    counterfactuals: np.ndarray
    reporters: np.ndarray

    def k(self, t) -> int | np.ndarray:
        """Number of reports strictly before time t (right-continuous count)."""
        out = np.searchsorted(self.breakpoints, np.asarray(t, dtype=float), side="left")
        return int(out) if out.ndim == 0 else out

    def belief_at(self, t) -> np.ndarray:
        return self.beliefs[self.k(t)]

    @property
    def num_agents(self) -> int:
        return self.counterfactuals.shape[0]


def _build_trace(prior: Belief, reports: list[TimedReport], n: int) -> MarketTrace:
    ordered = sorted(reports, key=lambda r: (r.time, r.agent))
    d = prior.num_outcomes
    K = len(ordered)
    breakpoints = np.array([r.time for r in ordered])
    reporters = np.array([r.agent for r in ordered], dtype=int)
    beliefs = np.empty((K + 1, d))
    counterfactuals = np.empty((n, K + 1, d))
    beliefs[0] = prior.probs
    counterfactuals[:, 0] = prior.probs
    actual = prior
    cf = [prior] * n
    for j, rep in enumerate(ordered, start=1):
        actual = apply_report(actual, rep.report)
        beliefs[j] = actual.probs
        for i in range(n):
            if i != rep.agent:
                cf[i] = apply_report(cf[i], rep.report)
            counterfactuals[i, j] = cf[i].probs
    return MarketTrace(breakpoints, beliefs, counterfactuals, reporters)


def mvp_run(prior: Belief, reports: list[TimedReport], outcome: int,
            rule: ScoringRule, h: TimeValue,
            num_agents: int | None = None) -> tuple[MarketTrace, np.ndarray]:
    """Run the sequential market on a recorded report stream and settle it.

    Returns the trace (actual and counterfactual paths) and the reward of
    every agent ``0 .. num_agents-1``; agents who never reported earn 0.
    """
    if not 0 <= outcome < prior.num_outcomes:
        raise ValueError(f"outcome {outcome} outside the belief support")
    seen = set()
    for rep in reports:
        if rep.agent in seen:
            raise ProtocolError(f"agent {rep.agent} reported twice; each agent "
                                "may report only once")
        seen.add(rep.agent)
    n = (max(seen) + 1 if seen else 0) if num_agents is None else num_agents
    if seen and max(seen) >= n:
        raise ValueError(f"agent index {max(seen)} outside 0..{n - 1}")

    trace = _build_trace(prior, list(reports), n)
    K = trace.breakpoints.size
    edges = np.concatenate([[0.0], trace.breakpoints, [np.inf]])
    masses = np.array([time_value_mass(h, edges[j], edges[j + 1])
                       for j in range(K + 1)])
    s_actual = np.array([score(rule, trace.beliefs[j], outcome)
                         for j in range(K + 1)])
    rewards = np.empty(n)
    for i in range(n):
        s_cf = np.array([score(rule, trace.counterfactuals[i, j], outcome)
                         for j in range(K + 1)])
        rewards[i] = float(np.dot(s_actual - s_cf, masses))
    if not np.all(np.isfinite(rewards)):
        raise ValueError("non-finite reward; the scoring rule hit a zero-probability "
                         "outcome on some segment")
    return trace, rewards


def reports_from_stream(lines, num_outcomes: int) -> list[TimedReport]:
    """Parse ``agent_id, time, b_1, ..., b_{d-1}`` records (one per line).

    Records with d trailing numbers are read as likelihood columns.
    """
    out = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) < 3:
            raise ValueError(f"line {lineno}: expected agent_id, time, entries")
        agent = int(parts[0])
        t = float(parts[1])
        entries = [float(p) for p in parts[2:]]
        if len(entries) == num_outcomes - 1:
            report = ReportVector(tuple(entries))
        elif len(entries) == num_outcomes:
            report = np.asarray(entries, dtype=float)
        else:
            raise ValueError(f"line {lineno}: {len(entries)} entries fit neither "
                             f"the ratio encoding nor a likelihood column")
        out.append(TimedReport(agent, t, report))
    return out


def trace_dump_rows(trace: MarketTrace):
    """Rows ``time, p_1, ..., p_d`` describing the belief path (time 0 first)."""
    yield (0.0, *map(float, trace.beliefs[0]))
    for j in range(trace.breakpoints.size):
        yield (float(trace.breakpoints[j]), *map(float, trace.beliefs[j + 1]))
