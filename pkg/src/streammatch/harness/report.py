"""JSON run reports with a stable field order."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


def ratio_of(estimate, exact):
    """``estimate / exact`` with ``0/0 = 1``; ``None`` when either side is missing."""
    if estimate is None or exact is None:
        return None
    if exact == 0:
        return 1.0 if estimate == 0 else math.inf
    return estimate / exact


@dataclass
class RunReport:
    algorithm: str
    config: dict
    seed: int | None
    estimate: float | None
    exact: float | None = None
    ratio: float | None = None
    words: dict = field(default_factory=dict)
    subseeds: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    wall_time_s: float | None = None

    def __post_init__(self):
        if self.exact is not None and self.ratio is None:
            self.ratio = ratio_of(self.estimate, self.exact)
        if (self.ratio is None) != (self.exact is None) and self.estimate is not None:
            raise ValueError("ratio must be present exactly when the exact value is")
        if any(v < 0 for v in self.words.values()):
            raise ValueError("word counters must be nonnegative")

    @property
    def total_words(self) -> int:
        return sum(self.words.values())

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "algorithm": self.algorithm,
            "config": self.config,
            "seed": self.seed,
            "estimate": self.estimate,
            "exact": self.exact,
            "ratio": self.ratio,
            "words": self.words,
            "total_words": self.total_words,
            "subseeds": self.subseeds,
            "failures": self.failures,
            "details": self.details,
        }
        if timing:
            out["wall_time_s"] = self.wall_time_s
        return out

    def to_json(self, timing: bool = True, **kwargs) -> str:
        return json.dumps(self.to_dict(timing), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> RunReport:
        keys = ("algorithm", "config", "seed", "estimate", "exact", "ratio", "words",
                "subseeds", "failures", "details", "wall_time_s")
        return cls(**{k: d[k] for k in keys if k in d})
