"""Split-form nodal DG spectral element solver for the 3D compressible Euler equations.

The solver collocates interpolation and quadrature at Legendre-Gauss-Lobatto
nodes, evaluates the volume terms in two-point flux-differencing form, and
couples elements through matched stabilized surface fluxes on fully periodic
Cartesian meshes.
"""

from .basis import PolyBasis, build_basis, differentiate, quadrature_integrate
from .euler import (
    GasModel,
    InvalidStateError,
    conserved_from_primitive,
    entropy_jacobian,
    entropy_variables,
    log_mean,
    max_wave_speed,
    physical_flux,
    primitive_from_conserved,
)
from .fluxes import (
    PAIRED_STABILIZATION,
    SCHEMES,
    STABILIZATIONS,
    check_kep_structure,
    stabilization,
    surface_flux,
    volume_flux,
)
from .mesh import CartesianMesh, build_cartesian_mesh, node_coordinates
from .solver import (
    Field,
    SemidiscreteConfig,
    compute_residual,
    init_field,
    ke_balance_decomposition,
    split_form_reference_residual,
)
from .timestepping import compute_dt, lsrk_step
from .diagnostics import (
    DiagnosticsRecord,
    discrete_l2_error,
    enstrophy,
    ke_dissipation_rate,
    numerical_viscosity,
    total_quantities,
)
from .cases import get_case

__all__ = [
    "PolyBasis",
    "build_basis",
    "differentiate",
    "quadrature_integrate",
    "GasModel",
    "InvalidStateError",
    "conserved_from_primitive",
    "primitive_from_conserved",
    "physical_flux",
    "max_wave_speed",
    "entropy_variables",
    "entropy_jacobian",
    "log_mean",
    "SCHEMES",
    "STABILIZATIONS",
    "PAIRED_STABILIZATION",
    "volume_flux",
    "stabilization",
    "surface_flux",
    "check_kep_structure",
    "CartesianMesh",
    "build_cartesian_mesh",
    "node_coordinates",
    "Field",
    "SemidiscreteConfig",
    "init_field",
    "compute_residual",
    "split_form_reference_residual",
    "ke_balance_decomposition",
    "compute_dt",
    "lsrk_step",
    "DiagnosticsRecord",
    "total_quantities",
    "enstrophy",
    "ke_dissipation_rate",
    "numerical_viscosity",
    "discrete_l2_error",
    "get_case",
]
