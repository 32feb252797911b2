"""Sparse recovery for signals sparse in redundant dictionaries.

Greedy (OMP, CoSaMP, NOMP, eps-OMP), convex (debiased basis pursuit) and
signal-space (SSCoSaMP, USSCoSaMP) solvers, structured sparse signal
generators, and a deterministic benchmark harness.
"""

from .model import (
    Dictionary,
    MeasurementMatrix,
    ProblemInstance,
    SeededRng,
    build_overcomplete_dft,
    dirichlet_correlation,
    gaussian_measurement,
    is_perfect_recovery,
    measure,
    snr_db,
    support_set,
    synthesize,
)
from .signals import (
    CoefficientDistribution,
    StructureSpec,
    draw_coefficients,
    generate_support,
    parse_structure,
    validate_support,
)
from .solvers import (
    BasisPursuitResult,
    RecoveryResult,
    SolverConfig,
    bp_admm,
    cosamp,
    eps_extension,
    eps_omp,
    l1_recover,
    nomp,
    omp,
)
from .projections import ProjectionKind, sd_project
from .sscosamp import SscosampConfig, UsscosampVariant, sscosamp, usscosamp
from .harness import (
    ALGORITHM_IDS,
    PRESET_NAMES,
    ExperimentConfig,
    ResultTable,
    Sweep,
    TrialRecord,
    emit_csv,
    emit_svg,
    preset,
    run_experiment,
    run_trial,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
