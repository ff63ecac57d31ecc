"""Phase operators for a bare three-level atom in the lambda configuration.

Levels are labelled 1, 2, 3 in order of increasing energy.  The dipole
transitions 1<->3 and 2<->3 are allowed, 1<->2 is forbidden.  The nine
transition generators |j><i| span u(3); each allowed transition carries
an su(2)-like triple (raising, lowering, inversion).  Polar decomposition
of a lowering operator yields a unitary "phase exponential" whose
spectrum has exactly three points, so a phase measurement on a single
transition can return only 0 or +-pi/2.

All operators are dense 3x3 complex arrays and all functions are pure,
so values can be shared freely between threads.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

LEVELS = (1, 2, 3)

# Transitions with an allowed dipole and hence a bare polar decomposition.
POLAR_TRANSITIONS = ("13", "23")
ALL_TRANSITIONS = ("13", "23", "12")

PHASE_LABELS = ("0", "+", "-")
PHASE_EIGENVALUES = np.array([0.0, np.pi / 2, -np.pi / 2])

# Unitarity leaves one free phase in the polar decomposition.  Requiring
# that complex conjugation of a lower/upper superposition negate the mean
# phase fixes it to -1 for both allowed transitions.
CONVENTION_PHASE = -1.0


def _check_level(i: int) -> int:
    if i not in LEVELS:
        raise ValueError(f"atomic level must be 1, 2 or 3, got {i!r}")
    return i


def transition_levels(transition: str) -> tuple[int, int]:
    """Return the (lower, upper) level pair of a transition label."""
    pairs = {"13": (1, 3), "23": (2, 3), "12": (1, 2)}
    try:
        return pairs[str(transition)]
    except KeyError:
        raise ValueError(f"unknown transition {transition!r}, expected one of "
                         f"{ALL_TRANSITIONS}") from None


def generator(i: int, j: int) -> np.ndarray:
    """u(3) generator |j><i|: transfers level i to level j.

    The matrix has a single unit entry at row j, column i (1-based
    level indices).  Diagonal generators are the level projectors.
    """
    _check_level(i)
    _check_level(j)
    op = np.zeros((3, 3), dtype=complex)
    op[j - 1, i - 1] = 1.0
    return op


def raising(transition: str) -> np.ndarray:
    """Ladder operator taking the lower level of the transition to the upper."""
    lower, upper = transition_levels(transition)
    return generator(lower, upper)


def lowering(transition: str) -> np.ndarray:
    """Ladder operator taking the upper level of the transition to the lower."""
    lower, upper = transition_levels(transition)
    return generator(upper, lower)


def inversion(transition: str) -> np.ndarray:
    """Traceless population-inversion operator (upper minus lower)/2."""
    lower, upper = transition_levels(transition)
    return (generator(upper, upper) - generator(lower, lower)) / 2.0


def spectator_level(transition: str) -> int:
    """The level not taking part in the transition."""
    lower, upper = transition_levels(transition)
    (spect,) = set(LEVELS) - {lower, upper}
    return spect


def phase_exponential(transition: str) -> np.ndarray:
    """Unitary solution of the polar decomposition of the lowering operator.

    For transition l<->u with spectator s:

        E = |l><u| + c |u><l| - conj(c) |s><s|,    c = CONVENTION_PHASE

    It satisfies  lowering = sqrt(lowering @ raising) @ E  and is unitary.
    Only the allowed transitions 13 and 23 are accepted; the 1<->2
    transition has no dipole and no bare polar decomposition.
    """
    if transition not in POLAR_TRANSITIONS:
        raise ValueError(f"no polar decomposition for transition {transition!r}; "
                         f"expected one of {POLAR_TRANSITIONS}")
    lower, upper = transition_levels(transition)
    spect = spectator_level(transition)
    c = complex(CONVENTION_PHASE)
    return (generator(upper, lower) + c * generator(lower, upper)
            - np.conj(c) * generator(spect, spect))


@dataclass(frozen=True)
class PhaseEigensystem:
    """Eigenvalues and eigenvectors of the phase operator of one transition.

    Labels are reported in the fixed order ("0", "+", "-") with phase
    eigenvalues (0, +pi/2, -pi/2); ``eigenvectors[:, k]`` belongs to
    ``eigenvalues[k]``.
    """

    transition: str
    labels: tuple[str, ...]
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def phase_eigensystem(transition: str) -> PhaseEigensystem:
    """Eigensystem of the phase exponential of an allowed transition.

    The spectator level carries phase 0.  The "+" and "-" labels are tied
    to the operator: the phase exponential has eigenvalue exp(+i pi/2) on
    the "+" eigenvector (upper - i lower)/sqrt(2) and exp(-i pi/2) on the
    "-" eigenvector (upper + i lower)/sqrt(2).
    """
    if transition not in POLAR_TRANSITIONS:
        raise ValueError(f"no phase eigensystem for transition {transition!r}; "
                         f"expected one of {POLAR_TRANSITIONS}")
    lower, upper = transition_levels(transition)
    spect = spectator_level(transition)
    e = np.eye(3, dtype=complex)
    v0 = e[:, spect - 1]
    vplus = (e[:, upper - 1] - 1j * e[:, lower - 1]) / np.sqrt(2.0)
    vminus = (e[:, upper - 1] + 1j * e[:, lower - 1]) / np.sqrt(2.0)
    vectors = np.column_stack([v0, vplus, vminus])
    return PhaseEigensystem(transition, PHASE_LABELS, PHASE_EIGENVALUES.copy(), vectors)


def phase_operator(transition: str) -> np.ndarray:
    """Hermitian phase operator, log of the phase exponential."""
    eig = phase_eigensystem(transition)
    v = eig.eigenvectors
    return (v * eig.eigenvalues) @ v.conj().T


def verify_polar_identity(transition: str) -> float:
    """Max-entry residual of lowering - sqrt(lowering @ raising) @ E.

    The operator under the square root is a diagonal projector, so the
    root is entrywise exact.
    """
    low = lowering(transition)
    high = raising(transition)
    modulus_sq = low @ high
    modulus = np.diag(np.sqrt(np.real(np.diag(modulus_sq))))
    residual = low - modulus @ phase_exponential(transition)
    return float(np.max(np.abs(residual)))


def validate_density_matrix(rho: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Check that rho is a 3x3 density matrix; returns it as a complex array.

    Raises ValueError describing the violated property (shape, hermiticity,
    unit trace or positivity).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise ValueError(f"density matrix must be 3x3, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix trace is {np.trace(rho):.6g}, expected 1")
    if np.min(np.linalg.eigvalsh(rho)) < -tol:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def phase_distribution(rho: np.ndarray, transition: str) -> np.ndarray:
    """Probabilities of the three phase outcomes (0, +pi/2, -pi/2) in rho."""
    rho = validate_density_matrix(rho)
    vectors = phase_eigensystem(transition).eigenvectors
    probs = np.real(np.einsum("ik,ij,jk->k", vectors.conj(), rho, vectors))
    return probs


def phase_function_mean(func: Callable[[float], float], transition: str,
                        rho: np.ndarray) -> float:
    """Mean of a scalar function of the transition phase in the state rho.

    The operator function is diagonal in the phase eigenbasis, so the mean
    is the probability-weighted sum of the function over the three
    eigenvalues.
    """
    probs = phase_distribution(rho, transition)
    values = PHASE_EIGENVALUES
    return float(sum(func(v) * p for v, p in zip(values, probs)))


def noncomposition_witness() -> float:
    """Distance showing the phase exponentials do not compose across transitions.

    Multiplying the 1<->3 exponential by the adjoint of the 2<->3 one does
    not produce anything of the 1<->2 exponential form
    |1><2| + c|2><1| - conj(c)|3><3|.  Returns the max-entry distance from
    the fixed-convention member of that family; the distance is 1 for any
    choice of the free phase c on the unit circle.
    """
    product = phase_exponential("13") @ phase_exponential("23").conj().T
    c = complex(CONVENTION_PHASE)
    target = (generator(2, 1) + c * generator(1, 2)
              - np.conj(c) * generator(3, 3))
    return float(np.max(np.abs(product - target)))
