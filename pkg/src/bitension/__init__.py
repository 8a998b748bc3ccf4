"""Symbolic certification and numeric verification of biharmonic-type sphere maps.

The package splits into exact and floating halves.  `symbolic`, `catalog`,
`functionals`, and `deformer` work over exact rationals end to end: maps are
certified at construction, residuals reduce to exact zero or carry a nonzero
witness term, and mixing angles come out as fractions.  `verifier` adds an
independent finite-difference oracle and drives the full solution matrix;
`cli` wraps everything for the command line.
"""

from bitension._rational import BACKEND_NAME, RAT
from bitension.catalog import (
    AngleSolution,
    DomainSpec,
    SphereMap,
    arc_length,
    cone,
    constant_map,
    join,
    make_cubic_eigenmap,
    make_curve_s2,
    make_curve_s3,
    make_eigenmap,
    make_hopf_eigenmap,
    make_identity_sphere,
    make_mu,
    make_nu,
    make_pi,
    make_quadratic_eigenmap,
    punctured,
    round_sphere,
)
from bitension.deformer import (
    admissible_range,
    degree_bound_admissible,
    density_shape,
    solve_cone_biharmonic,
    solve_cone_cbiharmonic,
    solve_join_biharmonic,
    solve_join_cbiharmonic,
)
from bitension.errors import (
    BitensionError,
    CertificationError,
    InadmissibleAngle,
    MapParseError,
    UnsupportedDensity,
    UnsupportedDomain,
)
from bitension.functionals import (
    EnergyValue,
    ResidualField,
    bienergy,
    bitension_residual,
    c_bitension_residual,
    conformal_bienergy,
    energy,
    energy_density,
    tension_norm_squared,
    tension_residual,
)
from bitension.verifier import (
    ResidualReport,
    SamplePlan,
    SuiteSummary,
    certify_solution_suite,
    fd_bilaplacian,
    fd_laplacian,
    residual_scan,
    verify_curve,
)

__version__ = "0.1.0"

__all__ = [
    "RAT",
    "BACKEND_NAME",
    "__version__",
    "AngleSolution",
    "DomainSpec",
    "SphereMap",
    "arc_length",
    "punctured",
    "round_sphere",
    "cone",
    "join",
    "constant_map",
    "make_pi",
    "make_mu",
    "make_nu",
    "make_eigenmap",
    "make_identity_sphere",
    "make_quadratic_eigenmap",
    "make_cubic_eigenmap",
    "make_hopf_eigenmap",
    "make_curve_s2",
    "make_curve_s3",
    "admissible_range",
    "degree_bound_admissible",
    "density_shape",
    "solve_cone_biharmonic",
    "solve_cone_cbiharmonic",
    "solve_join_biharmonic",
    "solve_join_cbiharmonic",
    "BitensionError",
    "CertificationError",
    "InadmissibleAngle",
    "MapParseError",
    "UnsupportedDensity",
    "UnsupportedDomain",
    "EnergyValue",
    "ResidualField",
    "energy",
    "bienergy",
    "conformal_bienergy",
    "energy_density",
    "tension_residual",
    "bitension_residual",
    "c_bitension_residual",
    "tension_norm_squared",
    "ResidualReport",
    "SamplePlan",
    "SuiteSummary",
    "certify_solution_suite",
    "fd_laplacian",
    "fd_bilaplacian",
    "residual_scan",
    "verify_curve",
]
