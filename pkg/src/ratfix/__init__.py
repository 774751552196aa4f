"""ratfix: certification and fixed-point iteration for rational-type
contractions on concrete metric spaces.

The library certifies contraction conditions over point-pair samples,
runs orbit iteration with geometric error envelopes, verifies that map
powers introduce no new fixed points (property P), and builds
Cauchy-violation witnesses for sequences with vanishing steps.
"""

__version__ = "0.1.0"

from .altering import (AlteringFunction, ControlPropertyReport, Density,
                       check_control_properties, integral_control)
from .config import (ConfigError, RunConfig, build_control,
                     build_space_and_map, config_digest, parse_config,
                     serialize_config)
from .contraction import (CONDITION_KINDS, NUM_TOL, ContractionCertificate,
                          ContractionCondition, InequalityCheck,
                          all_ordered_pairs, certify, certify_exhaustive,
                          check_inequality, feasible_region_vertices,
                          rational_term, sample_box_pairs)
from .fixedset import (PeriodicChainReport, PropertyPReport, PropertyPRow,
                       check_property_p, fixed_points, refute_periodic_chain)
from .picard import (DEFAULT_FIX_TOL, DEFAULT_MAX_ITERS, CauchyWitness,
                     IterationTrace, a_priori_bound, find_cauchy_witness,
                     iterate, iters_to_tolerance)
from .quadrature import composite_simpson, integrate
from .spaces import (AffineMap, AxiomViolation, BoxMap, ConstantMap,
                     FiniteMetricSpace, IteratedMap, MetricAxiomError,
                     RationalMap, RealBoxSpace, SelfMap, TableMap, apply,
                     compose, distance, points_equal, validate_distance_matrix,
                     validate_space)

__all__ = [
    "AffineMap", "AlteringFunction", "AxiomViolation", "BoxMap",
    "CauchyWitness", "CONDITION_KINDS", "ConfigError", "ConstantMap",
    "ContractionCertificate", "ContractionCondition", "ControlPropertyReport",
    "DEFAULT_FIX_TOL", "DEFAULT_MAX_ITERS", "Density", "FiniteMetricSpace",
    "InequalityCheck", "IteratedMap", "IterationTrace", "MetricAxiomError",
    "NUM_TOL", "PeriodicChainReport", "PropertyPReport", "PropertyPRow",
    "RationalMap", "RealBoxSpace", "RunConfig", "SelfMap", "TableMap",
    "a_priori_bound", "all_ordered_pairs", "apply", "build_control",
    "build_space_and_map", "certify", "certify_exhaustive",
    "check_control_properties", "check_inequality", "check_property_p",
    "compose", "composite_simpson", "config_digest", "distance",
    "feasible_region_vertices", "find_cauchy_witness", "fixed_points",
    "integral_control", "integrate", "iterate", "iters_to_tolerance",
    "parse_config", "points_equal", "rational_term", "refute_periodic_chain",
    "sample_box_pairs", "serialize_config", "validate_distance_matrix",
    "validate_space",
]
