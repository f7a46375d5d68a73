"""Toolkit for coherence measures, quantum measurement processes and
incoherent channels, with unitary dilation models and a seeded self-check
suite. All entropic quantities are in bits.
"""

from .channels import (
    GIO,
    IO_NOT_SIO,
    NOT_IO,
    SIO_NOT_GIO,
    CorrelationMatrix,
    FixedPointResult,
    IndexMap,
    KrausChannel,
    apply_channel,
    apply_to_operator,
    channel_superoperator,
    classify,
    commutant,
    correlation_matrix_of,
    evolve_path,
    factor_kraus,
    fixed_point_check,
    gio_from_correlation,
    io_completeness_check,
    iterate_channel,
    kraus_channel,
    phase_damping,
    random_gio,
    random_io,
    random_mixed_unitary,
    random_sio,
)
from .coherence import (
    c_l1,
    c_l1_coarse,
    c_re,
    c_re_coarse,
    classical_correlation,
    hierarchy_gap,
    luders_discord,
    luders_on_b,
    mutual_information,
    povm_coherence,
    povm_coherence_modified,
    qi_coherence,
)
from .dilation import (
    DilationModel,
    dilate,
    dilate_gio,
    dilate_incoherent,
    dilate_luders,
    dilate_von_neumann,
    extend_to_unitary,
    extract_kraus,
    generalized_cnot,
)
from .errors import CohkitError, ParseError, ValidationError
from .instruments import (
    born_probabilities,
    dephase,
    generalized_luders,
    luders,
    luders_outcome,
    optimal_fine_grain,
    repeatable_instrument,
    unitary_mixing,
)
from .linalg import (
    hermitian_eig,
    majorizes,
    partial_trace,
    relative_entropy,
    schur_product,
    shannon_entropy,
    tensor,
    von_neumann_entropy,
    weakly_majorizes,
)
from .states import (
    BipartiteState,
    DensityMatrix,
    FineGraining,
    Observable,
    Povm,
    bipartite,
    fine_graining,
    make_povm,
    observable_from_projectors,
    random_bipartite,
    random_density,
    random_observable,
    random_povm,
    random_pure,
    random_unitary,
    spectral_decompose,
    validate_density,
)
from .verify import PropertyResult, VerifyConfig, run_all

__version__ = "0.1.0"
