"""Odds-form market updates and the likelihood-ratio report encoding.

A market maintains a belief vector; each report multiplies the odds of an
outcome by a likelihood ratio the reporter encodes as a number in (0, 1).
For binary outcome spaces this per-coordinate update is an exact Bayes
step (see :func:`truthful_report`); for three or more outcomes it is not,
because "all other outcomes" do not share one likelihood, so the canonical
general update is :func:`bayes_likelihood_update` on a full likelihood
column and mechanisms accept those columns directly as reports.

Report entry convention: ``entries[i]`` carries the ratio for outcome
``i + 1``; outcome 0 is the residual coordinate that keeps the belief
summing to one.  An agent with nothing to say submits entries of 1/2
(likelihood ratio one), which leaves any belief unchanged.
"""
from dataclasses import dataclass, field

import numpy as np

from .info_model import Belief, InformationModel

#: degenerate likelihood ratios (0 or infinite) are encoded this far inside (0, 1)
RATIO_CLAMP = 1e-12


@dataclass(frozen=True)
class ReportVector:
    """d-1 likelihood-ratio entries, each strictly inside (0, 1).

    ``clamped`` records that a degenerate ratio (a noiseless signal) was
    squeezed to the open interval; downstream analysis of noiseless models
    should prefer the score-sequence shortcut over pushing these through
    the odds update.
    """

    entries: tuple[float, ...]
    clamped: bool = field(default=False, compare=False)

    def __post_init__(self):
        entries = tuple(float(b) for b in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) < 1:
            raise ValueError("a report needs at least one entry")
        for b in entries:
            if not 0.0 < b < 1.0:
                raise ValueError(f"report entry {b!r} is not strictly inside (0, 1)")

    @classmethod
    def no_signal(cls, num_outcomes: int) -> "ReportVector":
        """The report of an agent without a signal: all entries 1/2."""
        return cls((0.5,) * (num_outcomes - 1))

    @property
    def num_outcomes(self) -> int:
        return len(self.entries) + 1

    def is_no_signal(self) -> bool:
        return all(b == 0.5 for b in self.entries)


def update(p: float, b: float) -> float:
    """One odds-form update: multiply the odds ``p/(1-p)`` by ``b/(1-b)``.

    Degenerate beliefs 0 and 1 are fixed points for every report.
    """
    if not 0.0 < b < 1.0:
        raise ValueError(f"report entry {b!r} is not strictly inside (0, 1)")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    return p * b / ((1.0 - p) * (1.0 - b) + p * b)


def bayes_likelihood_update(belief: Belief, likelihood_column) -> Belief:
    """Multiply a belief by a likelihood column and renormalize.

    This is the exact posterior update for any number of outcomes.
    """
    column = np.asarray(likelihood_column, dtype=float)
    if column.shape != belief.probs.shape:
        raise ValueError(f"likelihood column shape {column.shape} does not match "
                         f"belief over {belief.num_outcomes} outcomes")
    if np.any(column < 0):
        raise ValueError("likelihood column entries must be nonnegative")
    weights = belief.probs * column
    total = weights.sum()
    if total <= 0:
        raise ValueError("belief and likelihood column have disjoint support; "
                         "the reported evidence is inconsistent with the market state")
    return Belief(weights / total)


def truthful_report(model: InformationModel, signal: int) -> ReportVector:
    """Encode a signal as the report that performs its exact Bayes update.

    For a binary outcome space the entry ``b`` satisfies
    ``b/(1-b) = P(x | Y=1) / P(x | Y=0)``, so feeding ``b`` through
    :func:`update` turns any market belief P(Y=1 | evidence) into
    P(Y=1 | evidence, x).  Noiseless models produce ratios of 0 or
    infinity; those are clamped just inside (0, 1) and flagged.

    With three or more outcomes the per-coordinate encoding is not an
    exact Bayes step; report the likelihood column
    ``model.likelihood[:, signal]`` itself and let mechanisms apply
    :func:`bayes_likelihood_update`.
    """
    d = model.num_outcomes
    if d != 2:
        raise ValueError(
            "the likelihood-ratio encoding is exact only for binary outcome "
            "spaces; for d > 2 submit the likelihood column "
            "model.likelihood[:, signal] as the report")
    if not 0 <= signal < model.num_signal_values:
        raise ValueError(f"signal value {signal} outside the likelihood table")
    ell = model.likelihood[:, signal]
    clamped = False
    if ell[0] == 0.0 or ell[1] == 0.0:
        b = RATIO_CLAMP if ell[1] == 0.0 else 1.0 - RATIO_CLAMP
        clamped = True
    else:
        b = ell[1] / (ell[0] + ell[1])
    return ReportVector((b,), clamped=clamped)


def report_to_column(report: ReportVector) -> np.ndarray:
    """The binary likelihood column ``(1-b, b)`` equivalent to a report."""
    if report.num_outcomes != 2:
        raise ValueError("only binary reports convert to a likelihood column")
    b = report.entries[0]
    return np.array([1.0 - b, b])


def apply_report(belief: Belief, report) -> Belief:
    """Fold one report into a market belief.

    ``report`` is either a :class:`ReportVector` (binary markets: the
    per-coordinate odds update) or a likelihood column of length d (the
    general exact update).
    """
    if isinstance(report, ReportVector):
        d = belief.num_outcomes
        if report.num_outcomes != d:
            raise ValueError(f"report covers {report.num_outcomes} outcomes, "
                             f"market has {d}")
        if d != 2:
            raise ValueError("per-coordinate reports are exact only for binary "
                             "markets; submit a likelihood column for d > 2")
        p1 = update(belief[1], report.entries[0])
        return Belief(np.array([1.0 - p1, p1]))
    return bayes_likelihood_update(belief, report)
