"""Balanced 4-body configurations near the regular tetrahedron.

Numerical library and CLI covering: the mass-weighted basis and constants,
inertia and force matrices, balance residuals, repeated-eigenvalue
detection, the linearized bifurcation analysis with its mass cubic,
continuation of the curves of degenerate balanced shapes, construction and
verification of relative equilibria in 4 and 6 ambient dimensions, and
angular-momentum frequency polytopes.
"""

from .massspace import MassSystem, OrthonormalBasis, build_basis, verify_orthonormal
from .shape import (
    PointConfiguration,
    SquaredDistances,
    Sym3,
    cayley_menger,
    distances_from_points,
    inertia_matrix,
    inertia_trace,
)
from .forces import (
    NEWTON,
    PotentialLaw,
    SymmetricCoords,
    WcMatrix,
    phi_to_entries_matrix,
    symmetric_coords,
    symmetric_coords_to_wc,
    wc_matrix,
    wc_to_distances,
)
from .balance import (
    BalanceResidual,
    balance_residuals_4body,
    balance_residuals_general,
    is_balanced,
    symmetric_balance_residual,
)
from .degeneracy import (
    DegeneracyCertificate,
    check_c1,
    check_c2,
    commutant_matrix,
    degeneracy_gap,
    tetra_inertia_degenerate,
)
from .tetra import (
    MassCubic,
    k_matrix,
    kernel_vectors,
    l_matrix,
    mass_cubic,
    tangent_directions,
    verify_proportionality,
)
from .continuation import (
    Branch,
    BranchPoint,
    continue_branch,
    polish_point,
    z2_branch_oracle,
    z3_branch_oracle,
)
from .dynamics import (
    AngularMomentum,
    RelativeEquilibrium,
    angular_momentum,
    build_relative_equilibrium,
    config_matrix,
    integrate_newton,
    points_from_distances,
    re_angular_momentum,
    rho_bivector,
    rhombus_embedding,
    theta_family,
)
from .polytope import (
    ComplexStructure,
    FrequencyPoint,
    HornSpec,
    bifurcation_vertices,
    frequency_map,
    horn_membership,
    sample_polytope,
)
from .planar import (
    PlanarRhombus,
    central_planar_rhombus,
    planar_degenerate_ratio,
    planar_inertia_round,
    planar_K,
    planar_wc_restricted,
)

__version__ = "0.1.0"
