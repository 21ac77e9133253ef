"""Computational differential geometry of radiation structures on
isotropic (null) hypersurfaces: degenerate orthogonal groups, radiation
connections with their curvature and invariants, the induced-connection
obstruction, automorphism algebras, and stress-energy shape constraints.
"""

from .tensor_core import FrameMatrix, TensorError, TensorValue, contract, change_frame
from .groups import (
    LEVEL_G,
    LEVEL_GI,
    LEVEL_GR,
    GroupElement,
    compose,
    embed_in_gl_n,
    embed_in_lorentz,
    extract_parameters,
    factor_dense_subset,
    identity_element,
    inverse,
    is_member,
    lorentz_pairing,
    random_element,
)
from .fields import (
    Chart,
    ScalarField,
    TensorFieldOnChart,
    constant_tensor_field,
    lie_bracket_fields,
    lie_derivative_tensor,
    make_scalar_field,
)
from .hypersurface import (
    DegenerateMetric,
    NullStructure,
    kernel_direction,
    koszul_term,
    pullback_metric,
    quasi_inverse,
)
from .connections import (
    ConnectionCoefficients,
    bianchi_check,
    chi_oneform,
    connection_difference,
    curvature,
    curvature_decomposition_check,
    divergence,
    g_connection,
    gi_connection,
    gr_connection,
)
from .ambient import (
    AdaptedFrameField,
    HypersurfaceEmbedding,
    LorentzMetric,
    decompose_blocks,
    induced_radiation_connection,
    levi_civita,
    reduction_obstruction,
    ricci_coefficients,
    ricci_in_adapted_frame,
)
from .automorphisms import (
    AffineVectorFieldAnsatz,
    LieAlgebraBasis,
    lie_bracket,
    lie_derivative_of_connection,
    radiation_killing_residual,
    solve_standard_automorphisms,
)
from .stress_energy import StressEnergyPattern, classify, pattern_matrix
from .scenarios import ScenarioBundle, get_scenario, list_scenarios

__version__ = "1.0.0"
