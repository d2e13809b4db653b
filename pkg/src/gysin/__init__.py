"""Exact-arithmetic engine for tautological classes of surface bundles
and their universal Picard fibrations.

The package computes fiber-integration (pushforward) classes in exact
rational arithmetic, expands the degree-2 Chern character of index
bundles, certifies integral bases and torsion orders with unimodular
matrix algebra, and enumerates stable cohomology rings with their
Hilbert series.  A FastAPI service exposes every computation over HTTP
and the ``gysin`` CLI is a thin client of that service.
"""

from .algebra import (
    BUNDLE,
    CLASSES,
    DEFAULT_DEGREE_CAP,
    SCHEMA_VERSION,
    DomainError,
    Element,
    Generator,
    GysinError,
    ParityError,
    ParseError,
    Universe,
    UniverseError,
    element_to_json_dict,
    element_to_text,
    kappa,
    m,
    param_r,
    param_s,
    parse_element,
)
from .bundles import (
    DeclaredModel,
    FourManifoldModel,
    ModelError,
    TrivialFamilyModel,
    TruncationError,
    example_models,
    formal_pushforward,
)
from .grr import (
    ConsistencyError,
    IndexExpansion,
    IntegralityError,
    PowerSeries2,
    RealizationReport,
    closed_form_degree2,
    corollary_realizations,
    index_chern_character,
    integrality_witness,
    todd_coefficients,
    todd_series,
)
from .lattices import (
    BasisCertificate,
    EdgeKernel,
    IntMatrix,
    TorsionReport,
    cokernel_invariants,
    cokernel_order,
    edge_kernel,
    edge_map_coefficients,
    kernel_basis,
    smith_normal_form,
    torsion_orders,
    torsion_sweep,
    verify_free_basis,
)
from .stable_rings import (
    BigradedSeries,
    CollapseReport,
    HilbertSeries,
    RingSpec,
    bigraded,
    bigraded_hilbert,
    boundary,
    closed,
    collapse_consistency,
    enumerate_generators,
    hilbert_series,
    hol,
    pic,
    stable_range,
)

__version__ = "0.1.0"

__all__ = [
    "BUNDLE",
    "BasisCertificate",
    "BigradedSeries",
    "CLASSES",
    "CollapseReport",
    "ConsistencyError",
    "DEFAULT_DEGREE_CAP",
    "DeclaredModel",
    "DomainError",
    "EdgeKernel",
    "Element",
    "FourManifoldModel",
    "Generator",
    "GysinError",
    "HilbertSeries",
    "IndexExpansion",
    "IntMatrix",
    "IntegralityError",
    "ModelError",
    "ParityError",
    "ParseError",
    "PowerSeries2",
    "RealizationReport",
    "RingSpec",
    "SCHEMA_VERSION",
    "TorsionReport",
    "TrivialFamilyModel",
    "TruncationError",
    "Universe",
    "UniverseError",
    "bigraded",
    "bigraded_hilbert",
    "boundary",
    "closed",
    "closed_form_degree2",
    "cokernel_invariants",
    "cokernel_order",
    "collapse_consistency",
    "corollary_realizations",
    "edge_kernel",
    "edge_map_coefficients",
    "element_to_json_dict",
    "element_to_text",
    "enumerate_generators",
    "example_models",
    "formal_pushforward",
    "hilbert_series",
    "hol",
    "index_chern_character",
    "integrality_witness",
    "kappa",
    "kernel_basis",
    "m",
    "param_r",
    "param_s",
    "parse_element",
    "pic",
    "smith_normal_form",
    "stable_range",
    "todd_coefficients",
    "todd_series",
    "torsion_orders",
    "torsion_sweep",
    "verify_free_basis",
]
