"""Triangle-problem reduction chain, exact oracles, quantum-search cost model,
and scaling-exponent benchmarks."""

from .config import distinct_triples, get_distinct_triples, set_distinct_triples
from .errors import (
    DimensionMismatch,
    EmptyDomain,
    FgtError,
    InternalInconsistency,
    InvalidColourCount,
    InvalidDelta,
    NegativeCycle,
    ParseError,
    PlantInfeasible,
    UnsupportedCombination,
)
from .instances import (
    INF,
    ColourBuckets,
    ColouredGraph,
    MinPlusMatrix,
    PlantedDmt,
    TripartiteGraph,
    WeightedGraph,
    gen_apsp_instance,
    gen_coloured_graph,
    gen_minplus,
    gen_planted_dmt,
    gen_tripartite,
    gen_weighted_graph,
    parse,
    parse_coloured,
    parse_weighted,
    sat_add,
    serialize,
    weight_bound,
)
from .oracles import (
    ApspResult,
    PairFlags,
    admissible_triples_exist,
    apnt_exact,
    apsp_exact,
    count_triangles_per_triple,
    dmt_exact,
    minplus_exact,
    nt_exact,
    tc_exact,
    trace_count_triangles,
    zwt_exact,
)
from .qcost import (
    CostLedger,
    boost_factor,
    ceil_sqrt,
    grover_cost,
    merge_ledgers,
    threshold_grover_cost,
    vtgs_cost,
    vtgs_cost_sq,
    vtgs_execute,
)
from .reductions import (
    PIPELINES,
    ReductionTrace,
    apnt_via_nt,
    apsp_via_minplus,
    minplus_via_apnt,
    minplus_via_apsp,
    nt_via_zwt,
    pipeline_run,
    scaled_floor_hits,
    tripartite_copies,
)
from .triangles import (
    DmtConfig,
    count_for_multiset_scan,
    count_for_multiset_trace,
    dmt_large_alpha,
    dmt_small_alpha,
    dmt_solve,
    preprocess_buckets,
    tc_solve,
)
from .harness import (
    BenchRow,
    ScalingReport,
    VerifyResult,
    bench,
    fit_loglog,
    report_emit,
    report_load_json,
    splitmix64,
    trial_seed,
    verify,
)

__version__ = "0.1.0"
