"""Odd-cycle counting workbench: planar graphs, tumor cleaning, and
simplex-constrained polynomial optimization over edge measures."""

from .blowups import BlowupSpec, build_blowup, expected_good_count
from .counting import (
    Pattern,
    count_cycles,
    count_paths,
    count_pattern,
    for_each_copy,
)
from .errors import (
    BudgetExceededError,
    InvariantViolationError,
    MalformedEmbeddingError,
    NotATumorGraphError,
)
from .graphs import (
    Embedding,
    Graph,
    contract_uncontract,
    generate_planar,
    graph_from_json,
    graph_to_json,
    planar_sanity,
    trace_faces,
    validate_embedding,
)
from .measures import (
    EdgeMeasure,
    beta,
    check_rooted_path_bound,
    check_vertex_bound,
    kkt_residual,
    known_bound,
    measure_from_dict,
    measure_to_dict,
    objective,
    optimize,
    sample_objectives,
    vertex_mass,
)
from .pipeline import BoundReport, degree_partition, reduce
from .tumor import (
    TumorGraph,
    classify_bad_cycles,
    count_good_cycles,
    good_census,
    is_benign,
    is_stage1,
    is_stage2,
    make_tumor,
    separate,
    stage1,
    stage2,
    stage3,
)

__version__ = "0.1.0"
