"""Multi-period co-prime samplers under sampling-time jitter.

Exact difference-set enumeration, weight functions, blind and non-blind
autocorrelation estimation, and estimator operation counts.
"""
__version__ = "0.1.0"

from .complexity import ComplexityReport, complexity_comparison, complexity_report
from .core_model import (
    CoprimeConfig,
    JitterRealization,
    PerturbedGrid,
    build_grid,
    draw_jitter,
    ideal_grid,
    validate_config,
)
from .difference_analysis import (
    DifferenceSet,
    Kind,
    Prop1Report,
    Side,
    check_genericity,
    cross_differences,
    difference_set,
    distinct_count,
    self_differences,
    verify_proposition1,
)
from .estimator import (
    AutocorrEstimate,
    Component,
    CoprimeAutocorrelation,
    SignalSpec,
    SnapshotBatch,
    compare_schemes,
    estimate_autocorrelation,
    generate_snapshots,
)
from .exceptions import (
    DegenerateGrid,
    EmptyLag,
    LengthMismatch,
    NonIntegerResult,
    NotCoprime,
    RangeError,
)
from .weights import (
    Scheme,
    WeightTable,
    additional_contributors,
    weight_by_enumeration,
    weight_mapped_blind,
    weight_mapped_nonblind,
    weight_unmapped,
)
