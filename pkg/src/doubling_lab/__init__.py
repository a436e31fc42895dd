"""Exact tools for sumsets, product sets and the structure of small-doubling subsets of B.B."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ArithmeticOverflow,
    CertificateError,
    DoublingLabError,
    GraphNotDenseEnough,
    InvalidArgument,
    MalformedGraph,
    PipelineFailed,
    PreconditionError,
    RefinementFailed,
    TooLarge,
    TooSmall,
)
from .intset import (  # noqa: E402
    GrowthParams,
    IntSet,
    check_polynomial_growth,
    difference_set,
    doubling_ratio,
    iterated_sum_difference,
    dump_set,
    load_set,
    product_set,
    restricted_sumset,
    sumset,
)
from .energy import energy, energy_bruteforce, representation_counts  # noqa: E402
from .gaps import (  # noqa: E402
    Gap,
    cover_with_ap,
    cover_with_gap_rank2,
    format_gap,
    gap_elements,
    is_proper,
    longest_side,
    membership,
    parse_gap,
)
from .graphs import (  # noqa: E402
    BipartiteGraph,
    PipelineResult,
    codegree,
    containment_graph_multi,
    deduplicate,
    dense_bsg_extract,
    gowers_pair_refine,
    recheck_pipeline,
    small_doubling_pipeline,
)
from .incidence import (  # noqa: E402
    IncidenceInstance,
    count_incidences,
    count_incidences_bruteforce,
    st_bound_check,
    st_instance,
)
from .divisors import (  # noqa: E402
    OmegaStats,
    PrimePowerTable,
    mertens_sum,
    omega_restricted,
    omega_stats_over_gap,
    omega_tension,
    prime_power_count_in_gap,
    restricted_primes,
    sieve_prime_powers,
)
