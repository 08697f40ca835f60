"""Weight descriptors: the density e^-phi evaluated from signed distance.

The density is always computed by powering the distance directly, never via
a log/exp round trip, so it underflows gracefully to 0 at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Weight:
    kind: str  # "zero" | "neg_log_distance" | "fiber_scaled"
    alpha: float = 0.0
    fiber_index: int = 0

    def __post_init__(self):
        if self.kind not in ("zero", "neg_log_distance", "fiber_scaled"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind != "zero" and not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.fiber_index < 0:
            raise ValueError("fiber index must be >= 0")

    @staticmethod
    def zero() -> "Weight":
        return Weight("zero")

    @staticmethod
    def neg_log_distance(alpha: float) -> "Weight":
        return Weight("neg_log_distance", alpha=alpha)

    @staticmethod
    def fiber_scaled(alpha: float, j: int) -> "Weight":
        return Weight("fiber_scaled", alpha=alpha, fiber_index=j)

    @property
    def exponent(self) -> float:
        """Power p with density = delta^p."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "neg_log_distance":
            return self.alpha
        return 2.0 * self.alpha * (self.fiber_index + 1)

    def density_from_delta(self, delta):
        p = self.exponent
        if p == 0.0:
            return np.ones_like(np.asarray(delta, dtype=np.float64))
        return np.power(np.maximum(np.asarray(delta, dtype=np.float64), 0.0), p)
