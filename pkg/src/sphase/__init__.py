"""Numerical toolkit for ordering-parameterized phase-space quantization:
Gaussian operator kernels with an ordering tag, closed-form conversion
between normal / Weyl / antinormal / intermediate orderings, quasiprobability
symbols of density operators on a truncated number basis, and reconstruction
of density operators from symbols or coherent cross elements.
"""

from .errors import (
    DivergenceError,
    GridCoverageError,
    InvalidDimensionError,
    InvalidParameterError,
    OrderingRangeError,
    ParseError,
    PhaseSpaceError,
    PSingularError,
    SingularConversionError,
    SingularParameterError,
    StateSpecError,
    TruncationError,
)
from .fock import (
    DEFAULT_DIM,
    DensityMatrix,
    FockOperator,
    FockVector,
    coherent_vector,
    cross_element,
    displacement_matrix,
    embed,
    expm_oracle,
    hs_distance,
    ladder_matrices,
    leading_block,
    number_state,
    outer,
    thermal_density,
    trace,
)
from .grid import PhaseGrid, SymbolField, read_symbol_csv, write_symbol_csv
from .ordering import (
    ANTINORMAL,
    NORMAL,
    WEYL,
    DisplacedGaussian,
    LinearGaussian,
    SOrderedGaussian,
    coherent_projector,
    density_kernel,
    displacement_ordered,
    exp_number,
    fourier_oracle,
    realization_is_bounded,
    realize,
    render,
    reorder,
    vacuum_projector,
    wigner_kernel,
)
from .quasiprob import (
    ReconstructionResult,
    completeness_check,
    cross_symbol_weight,
    mehta_p,
    orthogonality_probe,
    reconstruct_from_elements,
    reconstruct_from_symbol,
    s_symbol,
    s_symbol_field,
    symbol_of_operator,
    weyl_monomial,
)
from .statespec import build_density, parse, render as render_state
from .verify import VerifyReport, run_verify

__version__ = "0.1.0"
