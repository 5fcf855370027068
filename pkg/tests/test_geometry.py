import numpy as np
import pytest

from spinstab.torus.fields import (
    FourierMetric,
    FourierScalarField,
    FourierSymTensor,
    Grid,
)
from spinstab.torus.geometry import (
    MetricGeometry,
    fd_variation,
    linearized_formulas,
    metric_curvature,
    tensor_calculus,
)


def test_flat_metric_curvature_vanishes():
    grid = Grid(2, 16)
    out = metric_curvature(FourierMetric.flat(2), grid)
    assert np.abs(out["riemann"]).max() == 0.0
    assert np.abs(out["ricci"]).max() == 0.0
    assert np.abs(out["scalar"]).max() == 0.0


def test_conformal_2d_scalar_closed_form():
    # S(e^{2u} delta) = -2 e^{-2u} Lap u on a surface
    grid = Grid(2, 32)
    u = FourierScalarField.cosine(2, (1, 0), 0.1)
    g = FourierMetric.conformal_flat(u, grid)
    out = metric_curvature(g, grid)
    uv = u.sample(grid)
    lap = grid.deriv(grid.deriv(uv, 0), 0) + grid.deriv(grid.deriv(uv, 1), 1)
    assert np.abs(out["scalar"] + 2.0 * np.exp(-2.0 * uv) * lap).max() < 1e-9


def test_riemann_symmetries_pointwise():
    rng = np.random.default_rng(7)
    h = FourierSymTensor.random_real(3, 2, rng, scale=0.004, count=2)
    geo = MetricGeometry(FourierMetric.from_perturbation(h), Grid(3, 32))
    r = geo.riemann()
    rest = tuple(range(4, r.ndim))
    assert np.abs(r + np.swapaxes(r, 0, 1)).max() < 1e-9
    assert np.abs(r + np.swapaxes(r, 2, 3)).max() < 1e-9
    assert np.abs(r - np.transpose(r, (2, 3, 0, 1) + rest)).max() < 1e-9
    bianchi = r + np.transpose(r, (1, 2, 0, 3) + rest) + np.transpose(r, (2, 0, 1, 3) + rest)
    assert np.abs(bianchi).max() < 1e-9
    # contraction convention agrees with the direct ricci computation
    contr = np.einsum("ik...,ijkl...->jl...", geo.ginv, r)
    assert np.abs(contr - geo.ricci()).max() < 1e-9


def test_non_positive_metric_rejected():
    h = FourierSymTensor.from_mode(2, (1, 0), np.diag([3.0, 0.0]))
    with pytest.raises(ValueError):
        MetricGeometry(FourierMetric.from_perturbation(h), Grid(2, 16))


def test_ricci_perturbation_slope():
    rng = np.random.default_rng(1)
    h = FourierSymTensor.random_real(3, 1, rng, scale=1.0, count=1)
    grid = Grid(3, 16)
    sizes = []
    for eps in (1e-2, 1e-3):
        geo = MetricGeometry(FourierMetric.from_perturbation(h, eps), grid)
        sizes.append(np.abs(geo.ricci()).max())
    slope = np.log(sizes[0] / sizes[1]) / np.log(10.0)
    assert abs(slope - 1.0) < 0.05


def test_flat_symbols():
    grid = Grid(3, 16)
    f = FourierScalarField.cosine(3, (1, 2, 0), 1.0)
    out = tensor_calculus(FourierMetric.flat(3), f=f, grid=grid)
    assert np.abs(out["laplacian"] + 5.0 * f.sample(grid)).max() < 1e-11
    h = FourierSymTensor.from_constant(np.diag([1.0, 2.0, 3.0]))
    out_h = tensor_calculus(FourierMetric.flat(3), h=h, grid=grid)
    assert np.abs(out_h["divergence"]).max() < 1e-12
    assert np.abs(out_h["trace"] - 6.0).max() < 1e-12


def test_divergence_sign_by_hand():
    # flat g, h = A cos(k.x): (delta h)_j = (A k)_j sin(k.x)
    grid = Grid(3, 16)
    amat = np.array([[1.0, 0.5, 0.0], [0.5, -2.0, 1.0], [0.0, 1.0, 0.3]])
    k = (1, 0, 1)
    h = FourierSymTensor.from_mode(3, k, amat)
    out = tensor_calculus(FourierMetric.flat(3), h=h, grid=grid)
    x = grid.points()
    sin_kx = np.sin(x[0] + x[2])
    target = np.stack([(amat @ np.array(k, dtype=float))[j] * sin_kx
                       for j in range(3)])
    assert np.abs(out["divergence"] - target).max() < 1e-12


def test_adjointness_of_delta_star():
    rng = np.random.default_rng(2)
    grid = Grid(3, 24)
    h = FourierSymTensor.random_real(3, 1, rng, scale=0.02, count=2)
    geo = MetricGeometry(FourierMetric.from_perturbation(h), grid)
    hv = FourierSymTensor.random_real(3, 2, rng, scale=0.4, count=2).sample_matrix(grid)
    wv = np.stack([
        FourierScalarField.random_real(3, 2, rng, scale=0.4, count=2).sample(grid)
        for _ in range(3)])
    lhs = grid.integrate(np.einsum(
        "ia...,jb...,ij...,ab...->...", geo.ginv, geo.ginv,
        geo.sym_derivative_oneform(wv), hv) * geo.sqrt_det)
    rhs = grid.integrate(np.einsum(
        "ij...,i...,j...->...", geo.ginv, geo.divergence_sym2(hv), wv)
        * geo.sqrt_det)
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


def test_linearized_formulas_against_finite_differences():
    rng = np.random.default_rng(11)
    grid = Grid(3, 24)
    base = FourierMetric.from_perturbation(
        FourierSymTensor.random_real(3, 1, rng, scale=0.02, count=2))
    hdir = FourierSymTensor.random_real(3, 1, rng, scale=0.3, count=2)
    fdir = FourierScalarField.random_real(3, 2, rng, scale=0.5, count=3)
    lin = linearized_formulas(base, hdir, fdir, grid)
    for name, quantity in (
        ("dric", lambda g: g.ricci()),
        ("dscalar", lambda g: g.scalar()),
        ("dlaplacian", lambda g: g.laplacian(fdir.sample(grid))),
    ):
        fd = fd_variation(base, hdir, quantity, 1e-4, grid)
        scale = max(1e-12, float(np.abs(fd["richardson"]).max()))
        assert np.abs(lin[name] - fd["richardson"]).max() / scale < 1e-6
        # convergence order of the plain central difference
        e1 = float(np.abs(lin[name] - fd["step"]).max())
        e2 = float(np.abs(lin[name] - fd["half_step"]).max())
        assert np.log2(e1 / e2) > 1.9


def test_linearized_constant_direction():
    # constant h: all derivative terms vanish; dRic = sym(Ric.h) at flat = 0,
    # dS = 0, dLap f = -<h, Hess f>
    grid = Grid(3, 16)
    h = FourierSymTensor.from_constant(np.diag([1.0, -0.5, 0.25]))
    f = FourierScalarField.cosine(3, (1, 1, 0), 1.0)
    lin = linearized_formulas(FourierMetric.flat(3), h, f, grid)
    assert np.abs(lin["dric"]).max() < 1e-12
    assert np.abs(lin["dscalar"]).max() < 1e-12
    geo = MetricGeometry(FourierMetric.flat(3), grid)
    target = -np.einsum("ij...,ij...->...", h.sample_matrix(grid),
                        geo.hessian(f.sample(grid)))
    assert np.abs(lin["dlaplacian"] - target).max() < 1e-12


def test_linearized_conformal_direction_closed_form():
    # flat background, h = u g: dS = (1 - n) Lap u
    grid = Grid(3, 24)
    u = FourierScalarField.cosine(3, (0, 1, 1), 0.4)
    h = FourierSymTensor.conformal(u)
    f = FourierScalarField.cosine(3, (1, 0, 0), 1.0)
    lin = linearized_formulas(FourierMetric.flat(3), h, f, grid)
    geo = MetricGeometry(FourierMetric.flat(3), grid)
    target = -2.0 * geo.laplacian(u.sample(grid))
    scale = np.abs(target).max()
    assert np.abs(lin["dscalar"] - target).max() / scale < 1e-6


def test_lichnerowicz_reduces_to_rough_laplacian_on_flat():
    grid = Grid(3, 16)
    geo = MetricGeometry(FourierMetric.flat(3), grid)
    h = FourierSymTensor.from_mode(3, (1, 1, 0), np.diag([1.0, -1.0, 0.0]))
    hv = h.sample_matrix(grid)
    out = geo.lichnerowicz(hv)
    assert np.abs(out - 2.0 * hv).max() < 1e-11  # |k|^2 = 2
