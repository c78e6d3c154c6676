"""Two-qubit anisotropic Ising dynamics in the Bell basis.

Closed-form evolution operators with an exponential oracle, two-pulse
synthesis of controlled Bell-block gates, and a teleportation protocol
built on them, including the n-qubit tensor generalization.
"""

__version__ = "0.1.0"

from .algebra import (
    apply_gate,
    bell_change_of_basis,
    bell_state,
    conjugate_from_bell,
    conjugate_to_bell,
    exp_hermitian,
    fidelity,
    global_phase_distance,
    kron,
)
from .ising import CouplingConfig, eigenvalues, hamiltonian_matrix, reduced_quantities, scaled_params
from .evolution import (
    EvolutionOperator,
    block_pattern,
    evolution_closed_form,
    evolution_oracle,
    extract_blocks,
    subgroup_closure_check,
)
from .synthesis import (
    GateTarget,
    PulseSequence,
    SearchBounds,
    SynthesisProblem,
    SynthesisReport,
    gate_library,
    solve_two_pulse,
)
from .teleport import (
    MultiQubitPlan,
    TeleportConfig,
    TeleportOutcome,
    WirePlan,
    audit_corrections,
    brute_force_correction,
    general_correction,
    linearity_check,
    prepare_input,
    run_multiqubit,
    run_single,
    table1_correction,
)

__all__ = [name for name in dir() if not name.startswith("_")]
