"""First-passage percolation simulation and verification laboratory.

Edge-weight laws with exact CDF/quantile access, a Bernoulli bit encoding
of general laws, seeded lattice weight fields, exact geodesic machinery
(passage times, Geo(x,y), edge thresholds), an entropy/martingale toolbox
on enumerable environments, greedy lattice animals, and a Monte Carlo
experiment harness with deterministic CSV output.
"""

__version__ = "0.1.0"

from .distributions import (
    AssumptionReport,
    DiracPlusUniform,
    EdgeWeightLaw,
    Exponential,
    FiniteAtomic,
    Mixture,
    Pareto,
    TwoPoint,
    Uniform,
    cdf_eval,
    check_assumptions,
    law_from_config,
    quantile_eval,
    sample,
)
from .encoding import (
    DyadicPartition,
    bit_flip_pair,
    encode_eval,
    partition_level,
    verify_pushforward,
)
from .lattice import BoxDomain, EdgeId, WeightField
from .shortest_path import (
    GeodesicReport,
    count_first_geodesic_edges_in_range,
    count_geo_edges_in_range,
    d_threshold,
    geo_intersection,
    max_intersection_with,
    passage_time,
    passage_time_exact,
    some_geodesic,
)
from .entropy_lab import (
    FiniteDist,
    MartingaleTable,
    MiniEnvironment,
    bonami_gross_check,
    entropy,
    fs_lower_bound_check,
    ibp_check,
    martingale_decompose,
    tensorization_check,
    variational_check,
)
from .animals import (
    AnimalCover,
    animal_cover,
    enumerate_saws,
    exact_Nn,
    scaling_ratio,
)
from .experiments import (
    AssumptionError,
    ConfigError,
    ExperimentConfig,
    ResultRow,
    config_from_dict,
    config_from_json,
    run_experiment,
    run_to_files,
    write_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
