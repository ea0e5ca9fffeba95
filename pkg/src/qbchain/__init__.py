"""Dimerized XY chain in a transverse field, treated as a quantum battery.

Free-fermion spectra and phase boundaries, sudden-quench charging curves and
their exact infinite-time averages, and a brute-force many-body cross-check
on small chains.
"""

__version__ = "0.1.0"

from .bdg import (
    BdgBlock,
    ModeDecomposition,
    OverlapMatrix,
    bdg_block,
    bdg_block_stack,
    decompose_stack,
    ground_state_projector,
    mode_decomposition,
    overlap_matrix,
)
from .ed import (
    ParitySector,
    SpinHamiltonian,
    build_spin_hamiltonian,
    dephased_energy,
    evolved_energy,
    ground_state,
    parity_sector,
    sector_energies,
)
from .errors import (
    ConfigParseError,
    EigensolverFailure,
    GaplessAmbiguity,
    MomentumMismatch,
    NegativeRadicand,
    NonFiniteParameter,
    NumericalError,
    OddDimerCount,
    QbChainError,
    SizeLimit,
    UsageError,
)
from .model import (
    BoundaryResidual,
    ModelParams,
    MomentumGrid,
    boundary_residuals,
    dispersion,
    momentum_grid,
    spectral_gap,
    structure_functions,
    validate_params,
)
from .quench import (
    EnergyCurve,
    SweepResult,
    stored_energy_asymptotic,
    stored_energy_curve,
    stored_energy_time_average,
    stored_energy_two_channel,
    sweep_scenario,
)
from .scenarios import (
    CriticalPoint,
    QuenchScenario,
    critical_points_on_segment,
    scenario_params,
)

__all__ = [
    "__version__",
    "BdgBlock",
    "BoundaryResidual",
    "ConfigParseError",
    "CriticalPoint",
    "EigensolverFailure",
    "EnergyCurve",
    "GaplessAmbiguity",
    "ModeDecomposition",
    "ModelParams",
    "MomentumGrid",
    "MomentumMismatch",
    "NegativeRadicand",
    "NonFiniteParameter",
    "NumericalError",
    "OddDimerCount",
    "OverlapMatrix",
    "ParitySector",
    "QbChainError",
    "QuenchScenario",
    "SizeLimit",
    "SpinHamiltonian",
    "SweepResult",
    "UsageError",
    "bdg_block",
    "bdg_block_stack",
    "boundary_residuals",
    "build_spin_hamiltonian",
    "critical_points_on_segment",
    "decompose_stack",
    "dephased_energy",
    "dispersion",
    "evolved_energy",
    "ground_state",
    "ground_state_projector",
    "mode_decomposition",
    "momentum_grid",
    "overlap_matrix",
    "parity_sector",
    "scenario_params",
    "sector_energies",
    "spectral_gap",
    "stored_energy_asymptotic",
    "stored_energy_curve",
    "stored_energy_time_average",
    "stored_energy_two_channel",
    "structure_functions",
    "sweep_scenario",
    "validate_params",
]
