"""Relative-phase dynamics of a three-level lambda atom in a two-mode cavity.

The package provides the bare atomic phase operators (:mod:`.algebra`),
the exact block-diagonal dynamics (:mod:`.dynamics`), relative-phase
eigenstates and distributions (:mod:`.relphase`), a brute-force
full-space reference (:mod:`.oracle`) and a CLI (:mod:`.cli`).
"""

from .algebra import (generator, inversion, lowering, noncomposition_witness,
                      phase_distribution, phase_eigensystem,
                      phase_exponential, phase_function_mean, phase_operator,
                      raising, verify_polar_identity)
from .dynamics import (BasisMember, BlockDiagonalPropagator, BlockOperator,
                       SubspaceBasis, SubspaceIndex, SystemParams,
                       SystemState, block_evolution, block_hamiltonian,
                       evolve, initial_state, level_populations,
                       poisson_weight, subspace_basis, truncation_cutoff)
from .oracle import (FullSpaceOperator, build_full_hamiltonian, embed_state,
                     excitation_diagonals, full_evolve)
from .relphase import (PhaseDistribution, RelPhaseEigenstates,
                       joint_distribution, marginal_distribution,
                       rel_phase_eigenstates, time_series, trapping_config,
                       verify_deformed_algebra, verify_deformed_polar)

__version__ = "0.1.0"
