"""Exact-DNF learning: list pruning and expansion, far points, weak term
learners, boosting and the small/large-k corner cases."""
from .booster import BoostingFailed, BoostResult, PositiveNegativeMixture, dnf_learn
from .config import LearnerConfig
from .corners import (
    SMALL_K_CAP,
    BudgetExceeded,
    GuessResult,
    LargeKResult,
    ModelViolation,
    PaddedDistribution,
    PaddedTarget,
    SmallKResult,
    estimate_error,
    guess_k_and_s,
    large_k_reduction,
    learn_small_k,
    restrict_dnf,
    sampled_error_radius,
    small_k_sample_size,
)
from .far_point import FarPointDepthExceeded, FarPointResult, FarPointSearchState, far_from_list, find_far_point, is_far_point
from .primitives import ExpandTooLarge, ball_size_bound, expand, literal_counts, noise, noise_flip_probability, popular_coordinates, prune
from .weak_learners import (
    FAIL,
    FOUND,
    SPARSE,
    WeakResult,
    cheat_weak_learner,
    exact_learn,
    fixed_weak_learner,
    plugin_weak_learner,
    simple_learning,
)
