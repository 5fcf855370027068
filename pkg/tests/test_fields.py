import json

import numpy as np
import pytest

from spinstab.torus.fields import (
    FourierMetric,
    FourierScalarField,
    FourierSymTensor,
    Grid,
)


def test_reality_enforced():
    with pytest.raises(ValueError):
        FourierScalarField(2, 1, {(1, 0): 1.0 + 0j})  # missing conjugate


def test_cosine_sampling_matches_formula():
    grid = Grid(2, 32)
    f = FourierScalarField.cosine(2, (2, -1), 0.7, phase=0.3)
    x, y = grid.points()
    expect = 0.7 * np.cos(2 * x - y + 0.3)
    assert np.abs(f.sample(grid) - expect).max() < 1e-14


def test_sample_roundtrip():
    rng = np.random.default_rng(0)
    grid = Grid(3, 16)
    f = FourierScalarField.random_real(3, 2, rng, count=4)
    vals = f.sample(grid)
    spec = np.fft.fftn(vals) / grid.size**3
    for k, a in f.modes.items():
        assert abs(spec[tuple(v % grid.size for v in k)] - a) < 1e-13


def test_grid_deriv_is_exact_for_band_limited():
    grid = Grid(2, 32)
    f = FourierScalarField.cosine(2, (3, 1), 1.0)
    x, y = grid.points()
    expect = -3.0 * np.sin(3 * x + y)
    assert np.abs(grid.deriv(f.sample(grid), 0) - expect).max() < 1e-12


def test_deriv_and_laplacian_symbols():
    f = FourierScalarField.cosine(3, (1, 2, 2), 1.0)
    lap = f.laplacian_flat()
    for k, a in lap.modes.items():
        assert abs(a + 9.0 * f.modes[k]) == 0.0
    d0 = f.deriv(0)
    for k, a in d0.modes.items():
        assert a == 1j * k[0] * f.modes[k]


def test_l2_inner_matches_grid_quadrature():
    rng = np.random.default_rng(5)
    grid = Grid(2, 32)
    f = FourierScalarField.random_real(2, 3, rng, count=5)
    g = FourierScalarField.random_real(2, 3, rng, count=5)
    spectral = complex(f.l2_inner(g)).real
    quad = grid.integrate(f.sample(grid) * g.sample(grid))
    assert abs(spectral - quad) < 1e-10 * max(1.0, abs(spectral))


def test_scalar_field_json_roundtrip():
    rng = np.random.default_rng(1)
    f = FourierScalarField.random_real(2, 2, rng, count=3)
    obj = json.loads(json.dumps(f.to_json_obj()))
    g = FourierScalarField.from_json_obj(obj)
    assert set(f.modes) == set(g.modes)
    for k in f.modes:
        assert f.modes[k] == g.modes[k]


def test_sym_tensor_constructors_and_trace():
    h = FourierSymTensor.from_constant(np.diag([1.0, 2.0, 3.0]))
    tr = h.trace_flat()
    assert tr.modes == {(0, 0, 0): 6.0 + 0j}
    div = h.divergence_flat()
    assert all(not d.modes for d in div)


def test_conformal_tensor_is_trace_only():
    u = FourierScalarField.cosine(3, (1, 0, 0), 0.5)
    h = FourierSymTensor.conformal(u)
    assert set(h.components) == {(0, 0), (1, 1), (2, 2)}
    tr = h.trace_flat()
    for k, a in tr.modes.items():
        assert abs(a - 3 * u.modes[k]) == 0.0


def test_metric_positivity_guard():
    grid = Grid(2, 16)
    h = FourierSymTensor.from_mode(2, (1, 0), np.diag([3.0, 0.0]))
    g = FourierMetric.from_perturbation(h)  # 1 + 3 cos dips negative
    assert g.check_positive(grid) < 0


def test_metric_mode_matrix_symmetry():
    rng = np.random.default_rng(3)
    h = FourierSymTensor.random_real(3, 1, rng, count=2)
    for k in h.mode_set():
        m = h.mode_matrix(k)
        assert np.abs(m - m.T).max() == 0.0


def test_grid_cutoff_guard():
    f = FourierScalarField.cosine(2, (8, 0), 1.0)
    with pytest.raises(ValueError):
        f.sample(Grid(2, 16))
