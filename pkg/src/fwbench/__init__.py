"""Numerical workbench for relativistic position and spin operator algebra.

Natural units (hbar = c = 1) throughout.
"""

from .dirac import GAMMA, Kinematics, build_gamma_set, energy
from .grids import Grid1D
from .linalg import (
    BranchError,
    LinalgError,
    anticommutator,
    commutator,
    mat_exp,
    mat_fn,
    mat_sqrt,
)
from .phase_ops import (
    DomainError,
    NonUnitaryError,
    OperatorFamily,
    PhaseOpValue,
    PhaseSpaceOperator,
    Rep,
    build_operator,
    conjugate,
    evaluate,
    fw_unitary_free,
    fw_unitary_free_inv,
    op_commutator,
)
from .algebra import (
    AlgebraReport,
    ClassicalState,
    poisson_bracket,
    run_classical_suite,
    run_quantum_suite,
)
from .eriksen import (
    BlockedHamiltonian,
    approx_fw,
    discretize_dirac_1d,
    eriksen_unitary,
)
from .spin_dynamics import (
    FieldConfig,
    omega_noninertial,
    omega_total,
    propagate_classical,
    propagate_quantum,
)
from .zitter import (
    dirac_position_closed,
    dirac_velocity_closed,
    dominant_frequency,
    fv_closed,
    fw_velocity,
    heisenberg_numeric,
)
from .wavepacket import (
    Observable,
    WavePacket1D,
    density,
    evolve_free,
    expectation,
    make_gaussian_packet,
    picture_change_error,
)

__version__ = "0.1.0"
