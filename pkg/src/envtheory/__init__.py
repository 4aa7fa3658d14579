"""Envelope theory for N identical particles with K-body forces.

The three-body machinery (symmetrised oscillator states, observables and a
variational oracle) targets N = D = 3 with hyperradius forces.
"""
from .analytic import exponential_delta, exponential_solution, lambert_w0, powerlaw_solution
from .envelope import (
    BoundCharacter,
    EtSolution,
    calibrate_phi,
    dos_phi,
    effective_Q,
    solve_et,
    variational_character,
)
from .errors import (
    DomainError,
    EmptyBasis,
    EnvelopeError,
    MixedQ0,
    NegativeStiffness,
    NoBoundState,
    NoMinimum,
    NonConvergence,
    NoRoot,
    UnsupportedSystem,
)
from .model import (
    CustomKinetic,
    CustomPotential,
    ExponentialWell,
    PowerLawKinetic,
    PowerLawPotential,
    StateSpec,
    SystemSpec,
    binomial,
    coulomb_system,
    gaussian_system,
    hyperradius_squared,
    linear_system,
    nonrelativistic,
    quantum_numbers,
)
from .observables import (
    ObservableReport,
    compute_nu,
    envelope_state,
    observable_approx,
    observable_report,
    observable_rk,
)
from .oracle import (
    HamiltonianAssembler,
    OracleConfig,
    OracleSolution,
    build_basis,
    hamiltonian_matrix,
    solve_oracle,
    truncated_diagnostics,
)
from .oscillator import (
    CoupledBasisState,
    SymmetrizedState,
    band_rotation,
    enumerate_band,
    moshinsky_bracket,
    permutation_matrices,
    radial_function,
    radial_moment,
    radial_moment_quad,
    scale_parameters,
    symmetrize,
)

__version__ = "0.1.0"
