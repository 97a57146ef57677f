"""Off-resonant quantum-state transfer through XX spin chains with weakly coupled ends."""

__version__ = "0.1.0"

from .chain import (
    CouplingPattern,
    EndCouplings,
    make_random_paired,
    make_staggered,
    make_uniform,
    read_pattern_csv,
    validate,
    write_pattern_csv,
)
from .dynamics import (
    TransferSeries,
    average_fidelity,
    correlation_amplitude,
    evolve_series,
    peak_fidelity,
    rabi_amplitude,
    transition_amplitude,
)
from .effective import (
    EffectiveModel,
    effective_two_level,
    lambda_all,
    lambda_closed_form,
    lambda_recursion_appendix,
    lambda_recursion_centered,
    lambda_spectral,
    onsite_shifts,
    perturbative_xi_for_equal_time,
)
from .errors import *  # noqa: F403
from .experiments import (
    SweepConfig,
    SweepResult,
    equal_time_compare,
    sweep_random_paired,
    sweep_staggered,
    write_results,
)
from .spectral import (
    EigenDecomposition,
    TridiagonalHamiltonian,
    build_channel_hamiltonian,
    build_full_hamiltonian,
    diagonalize,
    particle_hole_report,
)
