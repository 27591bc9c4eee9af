"""Instance generators, fixtures, seeded experiments and the command line."""
from .experiments import (
    CSV_COLUMNS,
    TASKS,
    ExperimentReport,
    ExperimentSpec,
    RunRecord,
    derive_seed,
    find_plateau,
    materialize_sat_graph,
    run,
    run_one,
)
from .fixtures import (
    gen_random_exact_dnf,
    gen_wacky_fixture,
    random_connected_graph,
    random_cover,
    random_partition_cover,
    two_expanders_fixture,
)
