"""rgproc: seedable random graph process simulator.

Processes: Erdos-Renyi, two Achlioptas bounded-size rules (min-product,
min-sum), and a half-restricted process where one endpoint is uniform over
all vertices and the other is uniform over the beta*n vertices lying in the
smallest components.
"""

from .dsu import Partition, MergeOutcome, new_partition
from .order_index import OrderIndex, build, reference_select, reference_ordering
from .rand import RandomStream
from .processes import (
    EdgeSet,
    StepRecord,
    rule_choose,
    er_step,
    achlioptas_step,
    half_restricted_step,
    run_step,
)
from .harness import (
    NOT_REACHED,
    ProcessConfig,
    RunSummary,
    WindowReport,
    EnsembleSummary,
    run_process,
    detect_T_k,
    explosive_window,
    sqrt_to_half_window,
    run_ensemble,
)
from .geomsum import (
    GeomSumSpec,
    TailEstimate,
    expected_partial_collect,
    simulate_partial_collect,
    lemma1_tail_estimate,
    lemma1_bound,
)
from .seriesio import TimeSeries, write_csv, read_csv

__version__ = "0.1.0"

__all__ = [
    "Partition",
    "MergeOutcome",
    "new_partition",
    "OrderIndex",
    "build",
    "reference_select",
    "reference_ordering",
    "RandomStream",
    "EdgeSet",
    "StepRecord",
    "rule_choose",
    "er_step",
    "achlioptas_step",
    "half_restricted_step",
    "run_step",
    "NOT_REACHED",
    "ProcessConfig",
    "RunSummary",
    "WindowReport",
    "EnsembleSummary",
    "run_process",
    "detect_T_k",
    "explosive_window",
    "sqrt_to_half_window",
    "run_ensemble",
    "GeomSumSpec",
    "TailEstimate",
    "expected_partial_collect",
    "simulate_partial_collect",
    "lemma1_tail_estimate",
    "lemma1_bound",
    "TimeSeries",
    "write_csv",
    "read_csv",
    "__version__",
]
