"""Approximate perimeter-guard placement in simple polygons via epsilon-nets."""

from .fragmentation import (
    Fragment,
    FragmentTree,
    GuardSite,
    NetParams,
    QuadraticFallback,
    RootHasNoComplement,
    SiteSet,
    WeightState,
    build_hierarchy,
    complement_fragment,
    equal_weight_fragments,
    net_params,
)
from .geometry import (
    Arc,
    BoundaryPoint,
    Location,
    Point,
    SimplePolygon,
    Turn,
    boundary_between,
    locate,
    orient,
    validate_polygon,
)
from .nets import (
    GuardSet,
    build_hierarchical_net,
    build_quadratic_net,
    extremal_guards,
    random_comparator_net,
)
from .solver import (
    Infeasible,
    Instance,
    LimitExceeded,
    NoSiteSeesWitness,
    bg_solve,
    brute_force_opt,
    discretize_targets,
    double_weights,
    greedy_cover,
    phase_budget,
)
from .visibility import (
    Covered,
    Tangent,
    TangentLabel,
    VisibilityRegion,
    WholePolygon,
    Witness,
    classify_fragments,
    sees,
    uncovered_witness,
    visibility_region,
    weakly_sees,
)

__version__ = "0.1.0"

__all__ = [
    "Fragment",
    "FragmentTree",
    "GuardSite",
    "NetParams",
    "QuadraticFallback",
    "RootHasNoComplement",
    "SiteSet",
    "WeightState",
    "build_hierarchy",
    "complement_fragment",
    "equal_weight_fragments",
    "net_params",
    "Arc",
    "BoundaryPoint",
    "Location",
    "Point",
    "SimplePolygon",
    "Turn",
    "boundary_between",
    "locate",
    "orient",
    "validate_polygon",
    "GuardSet",
    "build_hierarchical_net",
    "build_quadratic_net",
    "extremal_guards",
    "random_comparator_net",
    "Infeasible",
    "Instance",
    "LimitExceeded",
    "NoSiteSeesWitness",
    "bg_solve",
    "brute_force_opt",
    "discretize_targets",
    "double_weights",
    "greedy_cover",
    "phase_budget",
    "Covered",
    "Tangent",
    "TangentLabel",
    "VisibilityRegion",
    "WholePolygon",
    "Witness",
    "classify_fragments",
    "sees",
    "uncovered_witness",
    "visibility_region",
    "weakly_sees",
]
