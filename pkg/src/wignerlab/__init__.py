"""Phase-space quantum mechanics: Weyl-Wigner transforms, nonlinear superposition
of Wigner functions, and factorization of phase-space symmetry generators."""
from .config import DEFAULT_TOLERANCES, RunConfig, Tolerances
from .errors import (
    AnchorError,
    DecayError,
    DegenerateError,
    FormatError,
    GridMismatchError,
    GridTooLargeError,
    ImpureStateError,
    NonHermitianError,
    ValidationError,
    WignerLabError,
)
from .grid import PhaseGrid, RealField2D, SampleGrid1D, integrate_1d, integrate_2d, make_conjugate_grid
from .kernels import BACKEND
from .states import (
    OperatorKernel,
    WaveFunction,
    density_kernel,
    fidelity,
    gaussian_state,
    harmonic_oscillator_state,
    inner_product,
    superpose_wavefunctions,
)
from .superpose import (
    AUTO,
    SuperpositionResult,
    SuperpositionSpec,
    choose_anchors,
    cross_term_direct,
    cross_term_fast,
    recover_hilbert_superposition,
    superpose_wigner,
    validate_pair,
)
from .symmetry import (
    GroupElementHW,
    PhaseSpaceGenerator,
    act_heisenberg_weyl,
    act_time_reversal,
    conjugation_action,
    derivative_generator,
    factorizability_residual,
    generator_symbol,
    modulation_unitary,
    quantize_generator,
    r_kernel,
    random_skew_generator,
    rotation_generator,
    translation_unitary,
)
from .transforms import (
    WignerFunction,
    marginal,
    reconstruct_wavefunction,
    weyl_quantize,
    weyl_wigner_forward,
    wigner_from_wavefunction,
)
from .verify import CheckReport, check_hermitian, check_norm, check_orthogonality, check_purity, compare_fields

__version__ = "0.1.0"
