"""Exact dynamics of a lambda atom coupled to two quantized cavity modes.

Mode a drives the 1<->3 transition, mode b drives 2<->3, in the dipole and
rotating-wave approximations.  One excitation number per mode is conserved,
so the state space splits into invariant subspaces labelled by the pair
(N_a, N_b).  Each subspace holds at most three product states, one per
atomic level, with photon numbers fixed by the offsets MU and NU below;
states that would need a negative photon number are dropped.  On a
subspace the interaction Hamiltonian is a real symmetric matrix of
dimension <= 3 and the exact propagator follows from its
eigendecomposition.

Initial states are an atomic superposition times a two-mode coherent state
with real (zero-phase) Poissonian amplitudes.  The coherent ensemble is
truncated once, up front: because the excitation numbers are conserved,
the truncated set of subspaces is closed under the evolution and no
amplitude ever leaks out of it.

States are treated as immutable; evolution returns new objects.
Per-subspace work is independent, and reductions always run in ascending
(N_a, N_b) order so results do not depend on how the work is scheduled.
"""

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional

import numpy as np

# Photon-number offsets per atomic level: the basis member for level i in
# subspace (N_a, N_b) is |i; N_a - MU[i-1], N_b - NU[i-1]>.
MU = (0, 1, 1)
NU = (1, 0, 1)


class SubspaceIndex(NamedTuple):
    """Conserved excitation pair labelling one invariant subspace."""

    na: int
    nb: int


class BasisMember(NamedTuple):
    """One atom-field product state: atomic level and photon occupations."""

    level: int
    n_a: int
    n_b: int


@dataclass(frozen=True)
class SubspaceBasis:
    """Valid basis members of one subspace, ordered by atomic level."""

    index: SubspaceIndex
    members: tuple[BasisMember, ...]

    @property
    def dim(self) -> int:
        return len(self.members)

    def positions(self) -> dict[int, int]:
        """Map atomic level -> row/column position within the block."""
        return {m.level: k for k, m in enumerate(self.members)}


@dataclass(frozen=True)
class SystemParams:
    """Full experiment configuration.

    Couplings and detunings are in the same frequency units; time is their
    inverse.  ``c`` holds the three initial atomic amplitudes and must be
    normalized.  ``epsilon`` is the probability weight allowed in the
    discarded Poisson tail of each mode.
    """

    g_a: float
    g_b: float
    nbar_a: float
    nbar_b: float
    c: tuple[complex, complex, complex]
    delta_a: float = 0.0
    delta_b: float = 0.0
    epsilon: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(complex(x) for x in self.c))
        if len(self.c) != 3:
            raise ValueError(f"c must have three amplitudes, got {len(self.c)}")
        norm_sq = sum(abs(x) ** 2 for x in self.c)
        if abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"c must be normalized, |c|^2 = {norm_sq:.15g}")
        if self.g_a < 0 or self.g_b < 0:
            raise ValueError("couplings g_a, g_b must be >= 0")
        if self.nbar_a < 0 or self.nbar_b < 0:
            raise ValueError("mean photon numbers nbar_a, nbar_b must be >= 0")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")


def poisson_weight(nbar: float, n: int) -> float:
    """Coherent-state amplitude sqrt(exp(-nbar) nbar^n / n!).

    Evaluated in log space so that large nbar and n (say nbar ~ 50,
    n ~ 150) do not overflow the intermediate factorial.
    """
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")
    if nbar == 0.0:
        return 1.0 if n == 0 else 0.0
    log_p = -nbar + n * math.log(nbar) - math.lgamma(n + 1)
    return math.exp(0.5 * log_p)


def truncation_cutoff(nbar: float, epsilon: float) -> int:
    """Smallest N with cumulative Poisson weight sum(Q_n^2, n<=N) >= 1 - epsilon."""
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    prob = math.exp(-nbar)
    cumulative = prob
    n = 0
    target = 1.0 - epsilon
    while cumulative < target:
        n += 1
        if n > 100_000:
            raise RuntimeError("Poisson cutoff search did not converge")
        prob *= nbar / n
        cumulative += prob
    return n


def subspace_basis(index: SubspaceIndex) -> SubspaceBasis:
    """Valid members of subspace (N_a, N_b), ascending in atomic level.

    The basis is empty for (0, 0), one-dimensional when exactly one
    excitation number vanishes, and three-dimensional otherwise.
    """
    index = SubspaceIndex(*index)
    if index.na < 0 or index.nb < 0:
        raise ValueError(f"excitation numbers must be >= 0, got {index}")
    members = []
    for level in (1, 2, 3):
        n_a = index.na - MU[level - 1]
        n_b = index.nb - NU[level - 1]
        if n_a >= 0 and n_b >= 0:
            members.append(BasisMember(level, n_a, n_b))
    return SubspaceBasis(index, tuple(members))


@dataclass(frozen=True)
class BlockOperator:
    """A dense complex matrix attached to one invariant subspace."""

    index: SubspaceIndex
    matrix: np.ndarray


def block_hamiltonian(params: SystemParams, basis: SubspaceBasis) -> BlockOperator:
    """Interaction Hamiltonian restricted to one subspace.

    In a full (dim 3) block, with rows/columns ordered by atomic level,

        [[-delta_a,        0,  g_a sqrt(N_a)],
         [       0, -delta_b,  g_b sqrt(N_b)],
         [g_a sqrt(N_a), g_b sqrt(N_b),   0]]

    since the detunings weigh the two lower-level projectors and each mode
    couples its lower level to level 3 with the usual sqrt(photon) matrix
    element.  Degenerate blocks are the restriction of this matrix to the
    surviving member.  The result is exactly Hermitian by construction.
    """
    if basis.dim == 0:
        raise ValueError(f"subspace {basis.index} has an empty basis")
    pos = basis.positions()
    h = np.zeros((basis.dim, basis.dim), dtype=complex)
    if 1 in pos:
        h[pos[1], pos[1]] = -params.delta_a
    if 2 in pos:
        h[pos[2], pos[2]] = -params.delta_b
    if 1 in pos and 3 in pos:
        coupling = params.g_a * math.sqrt(basis.index.na)
        h[pos[1], pos[3]] = coupling
        h[pos[3], pos[1]] = coupling
    if 2 in pos and 3 in pos:
        coupling = params.g_b * math.sqrt(basis.index.nb)
        h[pos[2], pos[3]] = coupling
        h[pos[3], pos[2]] = coupling
    return BlockOperator(basis.index, h)


def block_evolution(block: BlockOperator, t: float) -> BlockOperator:
    """Propagator exp(-i H t) of a Hermitian block, via eigendecomposition."""
    h = block.matrix
    if np.max(np.abs(h - h.conj().T)) > 1e-12:
        raise ValueError(f"block {block.index} is not Hermitian")
    w, v = np.linalg.eigh(h)
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    return BlockOperator(block.index, u)


@dataclass
class SystemState:
    """Global wavefunction as per-subspace amplitude vectors.

    ``amplitudes`` maps a SubspaceIndex to a complex vector in the
    ordering of ``subspace_basis``.  ``time`` is the elapsed interaction
    time.  Treat instances as immutable snapshots.
    """

    amplitudes: dict[SubspaceIndex, np.ndarray]
    time: float = 0.0

    def norm(self) -> float:
        total = 0.0
        for index in sorted(self.amplitudes):
            total += float(np.sum(np.abs(self.amplitudes[index]) ** 2))
        return math.sqrt(total)

    def items(self) -> Iterator[tuple[SubspaceIndex, np.ndarray]]:
        """Amplitudes in ascending (N_a, N_b) order."""
        for index in sorted(self.amplitudes):
            yield index, self.amplitudes[index]


def initial_state(params: SystemParams, cutoff_a: Optional[int] = None,
                  cutoff_b: Optional[int] = None) -> SystemState:
    """Product of the atomic superposition and the two-mode coherent state.

    Each mode's Fock ladder is truncated at the epsilon tail cutoff (or the
    explicit override).  The amplitude of the level-j member of subspace
    (N_a, N_b) is Q_a(N_a - MU[j-1]) Q_b(N_b - NU[j-1]) c_j whenever both
    photon numbers fall inside the kept range.  Subspaces with no weight
    are dropped and the captured state, of squared norm at least
    (1 - epsilon)^2, is renormalized to exactly 1.
    """
    if cutoff_a is None:
        cutoff_a = truncation_cutoff(params.nbar_a, params.epsilon)
    if cutoff_b is None:
        cutoff_b = truncation_cutoff(params.nbar_b, params.epsilon)
    weights_a = np.array([poisson_weight(params.nbar_a, n) for n in range(cutoff_a + 1)])
    weights_b = np.array([poisson_weight(params.nbar_b, n) for n in range(cutoff_b + 1)])

    amplitudes: dict[SubspaceIndex, np.ndarray] = {}
    for na in range(cutoff_a + 2):
        for nb in range(cutoff_b + 2):
            basis = subspace_basis(SubspaceIndex(na, nb))
            if basis.dim == 0:
                continue
            vec = np.zeros(basis.dim, dtype=complex)
            for k, member in enumerate(basis.members):
                if member.n_a <= cutoff_a and member.n_b <= cutoff_b:
                    vec[k] = (weights_a[member.n_a] * weights_b[member.n_b]
                              * params.c[member.level - 1])
            if np.any(vec != 0):
                amplitudes[basis.index] = vec

    state = SystemState(amplitudes, time=0.0)
    total = state.norm()
    for vec in amplitudes.values():
        vec /= total
    return state


def evolve(state: SystemState, params: SystemParams, t: float) -> SystemState:
    """Apply the block propagators for a time increment t.

    Amplitude never moves between subspaces, so each block's weight is
    individually conserved.  Negative t runs the conjugate evolution.
    """
    evolved: dict[SubspaceIndex, np.ndarray] = {}
    for index, vec in state.items():
        basis = subspace_basis(index)
        block = block_hamiltonian(params, basis)
        u = block_evolution(block, t).matrix
        evolved[index] = u @ vec
    return SystemState(evolved, time=state.time + t)


def level_populations(state: SystemState) -> np.ndarray:
    """Occupation probability of each atomic level, summed over subspaces."""
    pops = np.zeros(3)
    for index, vec in state.items():
        for k, member in enumerate(subspace_basis(index).members):
            pops[member.level - 1] += abs(vec[k]) ** 2
    return pops


class BlockDiagonalPropagator:
    """Amortized evolution over a time grid.

    Blocks are time independent, so every populated block is
    eigendecomposed once at construction; evaluating the state at a time t
    then costs one phase twist and one small matrix product per block,
    vectorized across all full blocks.  Degenerate (single-member) blocks
    only pick up a detuning phase and are handled separately.
    """

    def __init__(self, params: SystemParams, cutoff_a: Optional[int] = None,
                 cutoff_b: Optional[int] = None):
        self.params = params
        state0 = initial_state(params, cutoff_a, cutoff_b)

        tri_indices: list[SubspaceIndex] = []
        tri_amp0: list[np.ndarray] = []
        one_indices: list[SubspaceIndex] = []
        one_levels: list[int] = []
        one_amp0: list[complex] = []
        for index, vec in state0.items():
            basis = subspace_basis(index)
            if basis.dim == 3:
                tri_indices.append(index)
                tri_amp0.append(vec)
            else:
                member = basis.members[0]
                one_indices.append(index)
                one_levels.append(member.level)
                one_amp0.append(vec[0])

        self.tri_indices = tuple(tri_indices)
        self.one_indices = tuple(one_indices)
        self.one_levels = np.array(one_levels, dtype=int)
        self.one_amp0 = np.array(one_amp0, dtype=complex)
        # A lone member is level 1 or 2; level 3 needs both partners present.
        energies = {1: -params.delta_a, 2: -params.delta_b}
        self.one_energies = np.array([energies[lv] for lv in one_levels])

        if tri_indices:
            blocks = np.stack([
                block_hamiltonian(params, subspace_basis(ix)).matrix.real
                for ix in tri_indices
            ])
            eigvals, eigvecs = np.linalg.eigh(blocks)
            self.tri_eigvals = eigvals
            self.tri_eigvecs = eigvecs.astype(complex)
            amp0 = np.stack(tri_amp0)
            self.tri_coeff0 = np.einsum("bji,bj->bi", self.tri_eigvecs.conj(), amp0)
        else:
            self.tri_eigvals = np.zeros((0, 3))
            self.tri_eigvecs = np.zeros((0, 3, 3), dtype=complex)
            self.tri_coeff0 = np.zeros((0, 3), dtype=complex)

    def amplitudes_at(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Block amplitudes at time t.

        Returns ``(tri, one)`` where ``tri[b, k]`` is the amplitude of the
        level-(k+1) member of the b-th full subspace and ``one[d]`` the
        amplitude of the d-th single-member subspace.
        """
        phases = np.exp(-1j * self.tri_eigvals * t)
        tri = np.einsum("bij,bj->bi", self.tri_eigvecs, phases * self.tri_coeff0)
        one = np.exp(-1j * self.one_energies * t) * self.one_amp0
        return tri, one

    def state_at(self, t: float) -> SystemState:
        """Materialize the full SystemState at time t."""
        tri, one = self.amplitudes_at(t)
        amplitudes: dict[SubspaceIndex, np.ndarray] = {}
        for b, index in enumerate(self.tri_indices):
            amplitudes[index] = tri[b].copy()
        for d, index in enumerate(self.one_indices):
            amplitudes[index] = np.array([one[d]])
        return SystemState(amplitudes, time=t)

    def populations_at(self, t: float) -> np.ndarray:
        """Level populations at time t without materializing a state."""
        tri, one = self.amplitudes_at(t)
        pops = np.sum(np.abs(tri) ** 2, axis=0) if tri.size else np.zeros(3)
        for level in (1, 2):
            mask = self.one_levels == level
            if np.any(mask):
                pops[level - 1] += float(np.sum(np.abs(one[mask]) ** 2))
        return pops
