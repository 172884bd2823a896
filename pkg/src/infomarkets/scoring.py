"""Proper scoring rules used as agent payments and as the value of a belief.

Higher scores mean better predictions.  The quadratic rule is
``S(p, y) = 2 p(y) - ||p||^2`` and its self-expected value is ``||p||^2``;
the logarithmic rule is ``S(p, y) = ln p(y)``.  Both are strictly proper:
the expected score under a belief ``b`` is uniquely maximized by predicting
``p = b``.  A positive ``scale`` multiplies every score, which matters when
scores are traded off against effort costs measured in other units.
"""
from dataclasses import dataclass

import numpy as np

KINDS = ("quadratic", "logarithmic")

_ALIASES = {"quadratic": "quadratic", "log": "logarithmic", "logarithmic": "logarithmic"}


@dataclass(frozen=True)
class ScoringRule:
    kind: str = "quadratic"
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scoring rule kind {self.kind!r}, try one of {KINDS}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    @classmethod
    def from_config(cls, cfg: dict) -> "ScoringRule":
        """Parse ``{"rule": "quadratic"|"log", "scale": <real>}``."""
        kind = _ALIASES.get(cfg.get("rule", "quadratic"))
        if kind is None:
            raise ValueError(f"unknown scoring rule {cfg.get('rule')!r}")
        return cls(kind=kind, scale=float(cfg.get("scale", 1.0)))

    def to_config(self) -> dict:
        return {"rule": "log" if self.kind == "logarithmic" else "quadratic",
                "scale": self.scale}


def _probs(p) -> np.ndarray:
    probs = getattr(p, "probs", p)
    return np.asarray(probs, dtype=float)


def score(rule: ScoringRule, p, y) -> float | np.ndarray:
    """Score of prediction ``p`` when outcome ``y`` realizes.

    ``p`` may be a single belief (shape ``(d,)``) or a batch (shape
    ``(T, d)`` with ``y`` of shape ``(T,)``).  The logarithmic rule returns
    ``-inf`` when ``p(y) = 0``; callers that integrate scores must reject
    the sentinel.
    """
    probs = _probs(p)
    y = np.asarray(y, dtype=int)
    if probs.ndim == 1:
        p_y = probs[y]
    else:
        p_y = np.take_along_axis(probs, y.reshape(-1, 1), axis=-1)[..., 0]
    if rule.kind == "quadratic":
        raw = 2.0 * p_y - np.sum(probs * probs, axis=-1)
    else:
        with np.errstate(divide="ignore"):
            raw = np.log(p_y)
    out = rule.scale * raw
    return float(out) if out.ndim == 0 else out


def expected_score(rule: ScoringRule, p) -> float | np.ndarray:
    """Self-expected score ``E_{Y~p}[S(p, Y)]``; ``scale * ||p||^2`` for quadratic."""
    probs = _probs(p)
    if rule.kind == "quadratic":
        raw = np.sum(probs * probs, axis=-1)
    else:
        # 0 * ln 0 is treated as 0
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(probs > 0, probs * np.log(probs), 0.0)
        raw = np.sum(terms, axis=-1)
    out = rule.scale * raw
    return float(out) if out.ndim == 0 else out
