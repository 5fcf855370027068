import numpy as np
import pytest

from spinstab.torus.eigen import (
    conformal_coefficient,
    conformal_eigenvalue,
    conformal_rescale,
    eigenvalue_variations,
    tt_quadratic_form,
)
from spinstab.torus.fields import (
    FourierMetric,
    FourierScalarField,
    FourierSymTensor,
    Grid,
)

GRID3 = Grid(3, 16)


def test_coefficient_values():
    assert conformal_coefficient(3) == 1.0 / 8.0
    assert conformal_coefficient(4) == 1.0 / 6.0


def test_flat_ground_state():
    pair = conformal_eigenvalue(FourierMetric.flat(3), GRID3)
    assert pair.lam == 0.0
    assert pair.residual <= 1e-12
    assert abs(pair.normalization - 1.0) < 1e-14
    assert pair.min_psi > 0.0
    assert np.abs(pair.psi - pair.psi.flat[0]).max() < 1e-13


def test_eigen_contract_on_perturbed_metric():
    rng = np.random.default_rng(5)
    h = FourierSymTensor.random_real(3, 1, rng, scale=0.02, count=2)
    pair = conformal_eigenvalue(FourierMetric.from_perturbation(h), GRID3)
    assert pair.residual <= 1e-8
    assert pair.min_psi > 0.0
    assert abs(pair.normalization - 1.0) < 1e-12
    assert pair.lam < 0.0  # TT content makes flat a strict local max


def test_scaling_law_power_of_two():
    rng = np.random.default_rng(5)
    h = FourierSymTensor.random_real(3, 1, rng, scale=0.03, count=2)
    g = FourierMetric.from_perturbation(h)
    p1 = conformal_eigenvalue(g, GRID3)
    p2 = conformal_eigenvalue(2.0 * g.sample_matrix(GRID3), GRID3)
    assert abs(p2.lam - p1.lam / 2.0) < 1e-11


def test_conformal_rescale_guard():
    g = FourierMetric.flat(3)
    with pytest.raises(ValueError):
        conformal_rescale(g, -np.ones(GRID3.shape), GRID3)


def test_sign_invariance_sampled():
    rng = np.random.default_rng(17)
    flips = 0
    checked = 0
    while checked < 3:
        h = FourierSymTensor.random_real(3, 1, rng, scale=0.05, count=2)
        g = FourierMetric.from_perturbation(h)
        base = conformal_eigenvalue(g, GRID3)
        if abs(base.lam) < 1e-4:
            continue
        checked += 1
        v = FourierScalarField.random_real(3, 1, rng, scale=0.05, count=2)
        w = np.exp(v.sample(GRID3))
        new = conformal_eigenvalue(conformal_rescale(g, w, GRID3), GRID3)
        flips += int(np.sign(new.lam) != np.sign(base.lam))
    assert flips == 0


def test_second_variation_closed_form_n3():
    # oracle: lambda''(0) = -(n-2)/(8(n-1)) |k|^2 |A|^2 / 2 for a TT cosine
    amat = np.diag([0.0, 1.0, -1.0])
    h = FourierSymTensor.from_mode(3, (1, 0, 0), amat)
    est = eigenvalue_variations(FourierMetric.flat(3), h, GRID3)
    expect = -(1.0 / 16.0) * 1.0 * (2.0 / 2.0)
    assert abs(est.second - expect) / abs(expect) < 2e-2
    assert abs(est.second - tt_quadratic_form(h)) / abs(expect) < 2e-2
    assert abs(est.first) < 1e-7


def test_second_variation_closed_form_n4():
    amat = np.diag([1.0, -1.0, 0.0, 0.0])
    h = FourierSymTensor.from_mode(4, (0, 0, 1, 0), amat)
    est = eigenvalue_variations(FourierMetric.flat(4), h, Grid(4, 12))
    expect = -(1.0 / 12.0) * 1.0 * (2.0 / 2.0)
    assert abs(est.second - expect) / abs(expect) < 2e-2


def test_conformal_direction_second_variation_vanishes():
    u = FourierScalarField.cosine(3, (1, 0, 0), 1.0)
    h = FourierSymTensor.conformal(u)
    est = eigenvalue_variations(FourierMetric.flat(3), h, GRID3)
    assert abs(est.second) < 1e-4  # compare with TT scale ~ 6e-2


def test_lie_direction_leaves_lambda_flat():
    n, k, v = 3, (1, 1, 0), np.array([0.25, 0.0, 0.15])
    comp = {}
    for i in range(n):
        for j in range(i, n):
            c = -(k[i] * v[j] + k[j] * v[i])
            if c != 0:
                comp[(i, j)] = FourierScalarField.cosine(n, k, c, phase=np.pi / 2)
    hlie = FourierSymTensor(n, comp)
    for t in (1e-2, 5e-3):
        gt = FourierMetric.from_perturbation(hlie, t)
        assert abs(conformal_eigenvalue(gt, GRID3).lam) <= 1e-8


def test_tt_quadratic_form_value():
    # h = A cos(x1), A = diag(0,1,-1): mean of <Lich h, h> = |k|^2 |A|^2 / 2
    amat = np.diag([0.0, 1.0, -1.0])
    h = FourierSymTensor.from_mode(3, (1, 0, 0), amat)
    assert abs(tt_quadratic_form(h) + (1.0 / 16.0)) < 1e-14
