"""Siegel leaves, L^p links and moment-angle complexes of vector configurations.

Exact rational combinatorics (admissibility, Gale duality, the complex
``K_A`` and its dual polytope) sit under a floating-point layer that
minimises norms along the leaves of the exponential action and projects
onto the moment-angle complex.
"""

__version__ = "0.1.0"

from .configuration import (
    AdmissibilityReport,
    AmbientPoint,
    Configuration,
    admissibility,
    gale_dual,
    gale_transform,
    siegel_membership,
)
from .leaf import LeafMinimum, SolverSettings, chart, chart_invert, flow, minimize, retract, xap_residual
from .projection import (
    MomentAngleMembership,
    ProjectionResult,
    escape_check,
    mac_contains,
    project_combinatorial,
    project_plimit,
    sweep,
)
from .simplicial import SimplicialComplex, build_complex, link, realize_polytope, star, verify_isomorphism
from .verification import JacobianCertificate, RigidityReport, Stratum, jacobian_rank, rigidity_check

__all__ = [
    "AdmissibilityReport",
    "AmbientPoint",
    "Configuration",
    "JacobianCertificate",
    "LeafMinimum",
    "MomentAngleMembership",
    "ProjectionResult",
    "RigidityReport",
    "SimplicialComplex",
    "SolverSettings",
    "Stratum",
    "admissibility",
    "build_complex",
    "chart",
    "chart_invert",
    "escape_check",
    "flow",
    "gale_dual",
    "gale_transform",
    "jacobian_rank",
    "link",
    "mac_contains",
    "minimize",
    "project_combinatorial",
    "project_plimit",
    "realize_polytope",
    "retract",
    "rigidity_check",
    "siegel_membership",
    "star",
    "sweep",
    "verify_isomorphism",
    "xap_residual",
]
