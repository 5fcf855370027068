import numpy as np
import pytest

from spinstab.clifford import SymTensor, build_gamma_rep
from spinstab.curvature import (
    CurvatureSymmetryError,
    bochner_curvature_identity,
    curvature_from_chirality_block,
    curvature_symmetry_violations,
    joint_kernel_dimension,
    k3_sample,
    ring_action,
    spin_compatible_from_block,
    validate_curvature,
)


def sphere_pattern():
    r = np.zeros((2,) * 4)
    r[0, 1, 0, 1] = r[1, 0, 1, 0] = 1.0
    r[0, 1, 1, 0] = r[1, 0, 0, 1] = -1.0
    return r


def test_validate_zero():
    r = validate_curvature(np.zeros((4,) * 4))
    assert r.is_ricci_flat
    assert r.scalar == 0.0


def test_validate_sphere_ricci():
    r = validate_curvature(sphere_pattern())
    assert np.array_equal(r.ricci, np.eye(2))


def test_validate_rejects_with_named_identity():
    bad = sphere_pattern()
    bad[0, 1, 1, 0] = 1.0
    with pytest.raises(CurvatureSymmetryError) as err:
        validate_curvature(bad)
    assert "antisymmetry-second-pair" in str(err.value)


def test_validate_shape_guard():
    with pytest.raises(ValueError):
        validate_curvature(np.zeros((3, 3, 3)))


def test_ring_zero_curvature():
    r = validate_curvature(np.zeros((4,) * 4))
    h = SymTensor(np.eye(4))
    assert np.abs(ring_action(r, h).components).max() == 0.0


def test_ring_identity_gives_ricci():
    sample = k3_sample(5)
    out = ring_action(sample.base, SymTensor(np.eye(4)))
    assert np.array_equal(out.components, sample.base.ricci)


def test_ring_bruteforce_oracle():
    # independent four-loop summation of R_ikjl h_kl
    rng = np.random.default_rng(2)
    sample = k3_sample(11)
    a = rng.standard_normal((4, 4))
    h = SymTensor(0.5 * (a + a.T))
    brute = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            acc = 0.0
            for k in range(4):
                for l in range(4):
                    acc += sample.base.tensor[i, k, j, l] * h.components[k, l]
            brute[i, j] = acc
    out = ring_action(sample.base, h).components
    assert np.abs(out - 0.5 * (brute + brute.T)).max() <= 1e-13
    # pair symmetry makes the contraction symmetric already
    assert np.abs(brute - brute.T).max() <= 1e-13


def test_ring_dimension_guard():
    sample = k3_sample(0)
    with pytest.raises(ValueError):
        ring_action(sample.base, SymTensor(np.zeros((3, 3))))


def test_block_sample_is_exactly_ricci_flat():
    sample = spin_compatible_from_block(np.diag([2.0, -1.0, -1.0]))
    assert np.abs(sample.base.ricci).max() == 0.0
    viol = [resid for _, resid in
            curvature_symmetry_violations(sample.base.tensor)]
    assert max(viol) == 0.0
    assert joint_kernel_dimension(sample) == 2


def test_block_guards():
    with pytest.raises(ValueError):
        curvature_from_chirality_block(np.eye(3))  # trace 3
    with pytest.raises(ValueError):
        curvature_from_chirality_block(np.zeros((2, 2)))


def test_zero_block_annihilates_everything():
    r = curvature_from_chirality_block(np.zeros((3, 3)))
    rep = build_gamma_rep(4)
    assert np.abs(r.tensor).max() == 0.0
    # every spinor is in the kernel of the zero action
    stack = []
    for k in range(4):
        for l in range(4):
            stack.append(np.zeros((4, 4)))
    assert all(np.abs(m).max() == 0.0 for m in stack)


def test_k3_sample_kernel_spinor_exact():
    for seed in (1, 2, 3):
        sample = k3_sample(seed)
        assert sample.compatibility_residual() <= 1e-11
        assert joint_kernel_dimension(sample) == 2


def test_generic_spinor_not_annihilated():
    sample = k3_sample(1)
    sigma = np.ones(4, dtype=complex) / 2.0
    worst = max(
        float(np.linalg.norm(sample.spinor_action(k, l) @ sigma))
        for k in range(4) for l in range(4))
    assert worst > 1e-3


def test_bochner_zero_curvature_trivial():
    rep = build_gamma_rep(4)
    from spinstab.clifford import Spinor, unit_spinor
    from spinstab.curvature import AlgCurvature, SpinCompatibleCurvature

    c = SpinCompatibleCurvature(
        AlgCurvature(4, np.zeros((4,) * 4)), rep, unit_spinor(rep))
    out = bochner_curvature_identity(c, SymTensor(np.eye(4)))
    assert max(out["ring_contraction"]) == 0.0
    assert max(out["ricci_contraction"]) == 0.0


def test_bochner_identity_on_seeded_data():
    rng = np.random.default_rng(9)
    worst = 0.0
    for seed in range(5):
        sample = k3_sample(seed)
        for _ in range(5):
            a = rng.standard_normal((4, 4))
            h = SymTensor(0.5 * (a + a.T))
            out = bochner_curvature_identity(sample, h)
            worst = max(worst, max(out["ring_contraction"]),
                        max(out["ricci_contraction"]))
    assert worst <= 1e-10


def test_bochner_identity_on_identity_tensor():
    sample = k3_sample(4)
    out = bochner_curvature_identity(sample, SymTensor(np.eye(4)))
    assert max(out["ring_contraction"]) <= 1e-10
    assert max(out["ricci_contraction"]) <= 1e-10
