"""Extremal functions, capacities and sup bounds for normalized plurisubharmonic functions.

Compact sets and domains live in :mod:`pshlab.geometry`, relative extremal
functions in :mod:`pshlab.envelope`, Siciak extremal functions and
capacities in :mod:`pshlab.siciak`, the bounds and checks built on them in
:mod:`pshlab.functionals`, sampled function classes in :mod:`pshlab.corpus`
and the config-driven runner in :mod:`pshlab.cli`.
"""
from .errors import *  # noqa: F401,F403
from .geometry import (CompactSetSpec, DomainSpec, Grid, SetMask, build_grid, measure_1d,
                       random_compact_set, rasterize_set, real_intervals)
from .envelope import (ExtremalSolution, concentric_disk_u, laplacian_mass, region_inf,
                       region_sup, relative_extremal, sample_field)
from .siciak import (LejaSequence, SiciakEstimator, ball_siciak, leja_points, product_siciak,
                     robin_from_field, siciak_estimate, siciak_estimator, siciak_field,
                     transfinite_diameter)
from .toric import toric_region_sup, toric_relative_extremal, toric_value
from .functionals import (InequalityReport, capacity_bracket_check, capacity_sup_check,
                          conjecture_quantity, klimek_check, product_compose,
                          relative_sup_check, sandwich_bounds, small_ball_condition,
                          submultiplicativity_check)
from .corpus import (CorpusConfig, PshFunctionSpec, bernstein_check, brudnyi_check,
                     empirical_h, normalize_to_class, normalized_corpus, sample_psh)
from .config import ExperimentConfig, load_config, parse_config

__version__ = "0.1.0"
