"""Every threshold and budget of the learning stack as a named knob."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class LearnerConfig:
    """Desk-scale defaults.

    The distance knobs must satisfy
    d_pt < W_drop_distance < far_drop_distance <= d_far <= expand_radius.
    ``None`` budgets are derived from n or eps at call time.
    """

    prune_trials_per_term: int | None = None  # 100 n
    expand_radius: int = 4
    far_term_threshold: int = 4
    far_point_threshold: int = 2
    prune_accept_radius: int = 2
    noise_rate_scale: float = 4.0
    noise_budget: int = 50
    noise_margin: int = 1
    noise_outer_budget: int = 200
    popular_frac: float = 0.005
    super_popular_frac: float = 0.01
    superpop_required_frac: float = 0.01
    covered_coord_cap: int = 3
    W_drop_distance: int = 3
    far_drop_distance: int = 4
    S_bruteforce_gap: int = 2
    outer_iterations: int | None = None  # ceil(64 / eps)
    expand_cap: int = 200_000
    node_budget: int = 2_000
    depth_guard: int | None = None  # 4 n + 16
    C_cap: float = 8.0
    rejection_budget_factor: float = 64.0
    delta: float | None = None
    positive_floor: float = 2.0**-20

    def __post_init__(self):
        order = [
            ("far_point_threshold", self.far_point_threshold),
            ("W_drop_distance", self.W_drop_distance),
            ("far_drop_distance", self.far_drop_distance),
            ("far_term_threshold", self.far_term_threshold),
            ("expand_radius", self.expand_radius),
        ]
        for (na, a), (nb, b), strict in zip(order, order[1:], (True, True, False, False)):
            if a > b or (strict and a == b):
                raise ValueError(f"need {na} {'<' if strict else '<='} {nb}, got {a} and {b}")
        if not self.popular_frac < self.super_popular_frac:
            raise ValueError("popular_frac must be below super_popular_frac")
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None or f.name in ("noise_rate_scale",):
                continue
            if v <= 0:
                raise ValueError(f"{f.name} must be positive")
        if self.noise_rate_scale < 0:
            raise ValueError("noise_rate_scale must be nonnegative")

    def prune_trials(self, n: int) -> int:
        return self.prune_trials_per_term or 100 * n

    def iterations(self, eps: float) -> int:
        return self.outer_iterations or math.ceil(64 / eps)

    def max_depth(self, n: int) -> int:
        return self.depth_guard or 4 * n + 16

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "LearnerConfig":
        names = {f.name for f in fields(cls)}
        extra = set(data) - names
        if extra:
            raise ValueError(f"unknown learner config keys: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "LearnerConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))
