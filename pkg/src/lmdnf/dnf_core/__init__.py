"""Boolean-formula domain model: terms, DNFs, distributions and oracles."""
from .distributions import (
    SampleDistribution,
    TargetTooSparse,
    read_distribution,
    rejection_sample,
    write_distribution,
)
from .oracle import MembershipOracle
from .terms import (
    Dnf,
    Literal,
    Term,
    all_terms,
    assignment,
    bits_of,
    count_terms,
    dedup,
    flip,
    format_dnf,
    induced_term,
    largest_common_term,
    largest_common_terms_batch,
    terms_to_arrays,
    parse_dnf,
    read_dnf,
    restrict_term,
    sample_term_satisfying,
    sat_distance,
    term_distance,
    write_dnf,
)
from .weak import (
    WeakTermDecision,
    default_delta,
    first_weak_term,
    hoeffding_size,
    is_weak_term,
    weak_term_decisions,
    weak_thresholds,
)

__all__ = [name for name in dir() if not name.startswith("_")]
