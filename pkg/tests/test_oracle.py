"""Tests for the full-space brute-force reference."""

import numpy as np
import pytest

from lambdaphase import oracle
from lambdaphase.dynamics import (BlockDiagonalPropagator, SubspaceIndex,
                                  SystemParams, block_hamiltonian,
                                  subspace_basis)

GROUND = (1.0, 0.0, 0.0)


def make_params(**overrides):
    defaults = dict(g_a=1.0, g_b=1.0, nbar_a=1.0, nbar_b=1.0, c=GROUND,
                    epsilon=1e-10)
    defaults.update(overrides)
    return SystemParams(**defaults)


def test_zero_coupling_hamiltonian_is_diagonal():
    params = make_params(g_a=0.0, g_b=0.0, delta_a=0.4, delta_b=0.9)
    full = oracle.build_full_hamiltonian(params, 2, 2)
    h = full.matrix
    assert np.max(np.abs(h - np.diag(np.diag(h)))) == 0.0
    for n_a in range(3):
        for n_b in range(3):
            assert h[full.state_index(1, n_a, n_b), full.state_index(1, n_a, n_b)] == -0.4
            assert h[full.state_index(2, n_a, n_b), full.state_index(2, n_a, n_b)] == -0.9
            assert h[full.state_index(3, n_a, n_b), full.state_index(3, n_a, n_b)] == 0.0


def test_hamiltonian_hermitian_and_conserves_excitations():
    params = make_params(delta_a=0.2, delta_b=-0.3, g_b=0.7)
    full = oracle.build_full_hamiltonian(params, 4, 3)
    h = full.matrix
    assert np.max(np.abs(h - h.conj().T)) < 1e-14
    diag_a, diag_b = oracle.excitation_diagonals(4, 3)
    for diag in (diag_a, diag_b):
        n_mat = np.diag(diag)
        assert np.max(np.abs(h @ n_mat - n_mat @ h)) < 1e-12


def test_full_hamiltonian_matches_embedded_blocks():
    # restricting the full matrix to each subspace's members reproduces the
    # block Hamiltonian, and no entries connect different subspaces
    params = make_params(delta_a=0.15, delta_b=0.25, g_a=1.3, g_b=0.6)
    cut = 3
    full = oracle.build_full_hamiltonian(params, cut, cut)
    accounted = np.zeros_like(full.matrix, dtype=bool)
    for na in range(2 * cut + 2):
        for nb in range(2 * cut + 2):
            basis = subspace_basis(SubspaceIndex(na, nb))
            if basis.dim == 0:
                continue
            # members beyond the Fock cutoff fall outside the full space;
            # the full matrix sees the block restricted to the rest
            kept = [k for k, m in enumerate(basis.members)
                    if m.n_a <= cut and m.n_b <= cut]
            if not kept:
                continue
            idx = [full.state_index(m.level, m.n_a, m.n_b)
                   for k, m in enumerate(basis.members) if k in kept]
            sub = full.matrix[np.ix_(idx, idx)]
            blk = block_hamiltonian(params, basis).matrix[np.ix_(kept, kept)]
            assert np.max(np.abs(sub - blk)) == 0.0
            accounted[np.ix_(idx, idx)] = True
    # entries connecting different subspaces must vanish
    assert np.max(np.abs(full.matrix[~accounted])) == 0.0


def test_dimension_guard():
    params = make_params()
    with pytest.raises(ValueError, match="dimension"):
        oracle.build_full_hamiltonian(params, 100, 100)
    with pytest.raises(ValueError, match="cutoff"):
        oracle.build_full_hamiltonian(params, 0, 4)


def test_full_evolve_identity_at_zero():
    params = make_params()
    full = oracle.build_full_hamiltonian(params, 2, 2)
    psi0 = np.zeros(full.dim, dtype=complex)
    psi0[full.state_index(1, 1, 1)] = 1.0
    assert np.allclose(oracle.full_evolve(full, psi0, 0.0), psi0, atol=1e-14)


def test_full_evolve_validates_inputs():
    params = make_params()
    full = oracle.build_full_hamiltonian(params, 1, 1)
    psi0 = np.zeros(full.dim, dtype=complex)
    psi0[0] = 2.0
    with pytest.raises(ValueError, match="norm"):
        oracle.full_evolve(full, psi0, 1.0)
    broken = oracle.FullSpaceOperator(np.diag([1.0 + 0j] * full.dim), 1, 1)
    broken.matrix[0, 1] = 1j
    with pytest.raises(ValueError, match="Hermitian"):
        oracle.full_evolve(broken, psi0 / 2.0, 1.0)


def test_block_and_full_evolution_agree():
    # the equivalence this reference exists to establish, desk scale
    params = make_params()
    cut = 8
    full = oracle.build_full_hamiltonian(params, cut, cut)
    prop = BlockDiagonalPropagator(params, cutoff_a=cut - 1, cutoff_b=cut - 1)
    psi0 = oracle.embed_state(prop.state_at(0.0), cut, cut)
    assert abs(np.linalg.norm(psi0) - 1.0) < 1e-12
    worst = 0.0
    for tau in np.linspace(0.0, 2.0, 11):
        t = 2 * np.pi * tau
        block_vec = oracle.embed_state(prop.state_at(t), cut, cut)
        full_vec = oracle.full_evolve(full, psi0, t)
        worst = max(worst, float(np.max(np.abs(block_vec - full_vec))))
    assert worst < 1e-8


def test_full_evolution_conserves_norm_and_excitations():
    params = make_params(nbar_a=0.8, nbar_b=0.8, c=(0.6, 0.8, 0.0))
    cut = 6
    full = oracle.build_full_hamiltonian(params, cut, cut)
    prop = BlockDiagonalPropagator(params, cutoff_a=cut - 1, cutoff_b=cut - 1)
    psi0 = oracle.embed_state(prop.state_at(0.0), cut, cut)
    diag_a, diag_b = oracle.excitation_diagonals(cut, cut)
    exp_a0 = float(np.sum(np.abs(psi0) ** 2 * diag_a))
    exp_b0 = float(np.sum(np.abs(psi0) ** 2 * diag_b))
    for t in np.linspace(0.0, 12.0, 7):
        vec = oracle.full_evolve(full, psi0, t)
        assert abs(np.linalg.norm(vec) - 1.0) < 1e-10
        assert float(np.sum(np.abs(vec) ** 2 * diag_a)) == pytest.approx(exp_a0, abs=1e-8)
        assert float(np.sum(np.abs(vec) ** 2 * diag_b)) == pytest.approx(exp_b0, abs=1e-8)


def test_embed_state_rejects_members_outside_space():
    params = make_params()
    prop = BlockDiagonalPropagator(params, cutoff_a=4, cutoff_b=4)
    with pytest.raises(ValueError, match="outside"):
        oracle.embed_state(prop.state_at(0.0), 4, 4)
