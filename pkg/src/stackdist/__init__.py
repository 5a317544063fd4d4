"""stackdist: stack-number statistics of k-noncrossing canonical RNA structures.

Two independent exact pipelines (inclusion-exclusion counting and formal
power series), a brute-force enumeration oracle for small sizes, and a
numeric singularity solver for the limit-law parameters of the stack-number
distribution.
"""

from stackdist.combinat import BigCount, ExactRatio, binomial, placement_multinomial
from stackdist.exact import (
    CountTable,
    StackDistribution,
    count_beta_free,
    count_cores,
    count_structures,
    distribution,
    moments,
)
from stackdist.matchings import MatchingTable, count_partial, count_perfect
from stackdist.asymptotics import (
    SingularityResult,
    clt_params,
    dominant_singularity,
    matching_radius,
    normal_compare,
)
from stackdist.series import (
    BivariateSeries,
    PowerSeries,
    UPoly,
    matching_series,
    stack_series,
    structure_series,
)

__version__ = "0.1.0"

__all__ = [
    "BigCount",
    "ExactRatio",
    "BivariateSeries",
    "CountTable",
    "MatchingTable",
    "PowerSeries",
    "SingularityResult",
    "StackDistribution",
    "UPoly",
    "binomial",
    "clt_params",
    "count_beta_free",
    "count_cores",
    "count_partial",
    "count_perfect",
    "count_structures",
    "distribution",
    "dominant_singularity",
    "matching_radius",
    "matching_series",
    "moments",
    "normal_compare",
    "placement_multinomial",
    "stack_series",
    "structure_series",
    "__version__",
]
