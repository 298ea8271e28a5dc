import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src import config
from src.models.beam_path import BeamPath
from src.models.flux_source import FluxSource, SourceKind
from src.models.vector import Vec3
from src.physics.quadrature import (
    QuadratureConfig,
    Region3,
    integrate_planned,
    integrate_polyline,
    integrate_region,
    integrate_time,
)

TIGHT = QuadratureConfig(rel_tol=1e-11, abs_tol=0.0)
coefficient = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def gaussian(points):
    return np.exp(-np.einsum("ij,ij->i", points, points))


def test_default_config_reads_environment(monkeypatch):
    monkeypatch.setenv("AB_REL_TOL", "1e-8")
    monkeypatch.setenv("AB_GAUSS_ORDER", "6")
    config.reset_settings()
    cfg = QuadratureConfig.default()
    assert cfg.rel_tol == 1e-8
    assert cfg.order == 6
    assert QuadratureConfig.from_dict({"abs_tol": 0.0}).rel_tol == 1e-8


def test_config_errors():
    cfg = QuadratureConfig(rel_tol=0.0, abs_tol=-1.0, max_subdivisions=0, order=1)
    assert cfg.errors() == [
        "quadrature.rel_tol must be > 0",
        "quadrature.abs_tol must be >= 0",
        "quadrature.max_subdivisions must be >= 1",
        "quadrature.order must be >= 2",
    ]


def test_time_integral_of_exponential():
    result = integrate_time(np.exp, 0.0, 1.0, TIGHT)
    assert result.converged
    assert result.value == pytest.approx(math.e - 1.0, rel=1e-10)


def test_time_integral_with_kink_at_break():
    result = integrate_time(lambda t: np.abs(t - 0.3), 0.0, 1.0, TIGHT, breaks=[0.3])
    assert result.subdivisions_used == 0
    assert result.value == pytest.approx(0.5 * (0.09 + 0.49), rel=1e-13)


@settings(max_examples=30, deadline=None)
@given(coefficient, coefficient, coefficient, coefficient, st.floats(min_value=0.1, max_value=10.0))
def test_cubics_are_integrated_exactly(a, b, c, d, span):
    cfg = QuadratureConfig(rel_tol=1e-6, abs_tol=1e-9)
    result = integrate_time(lambda t: ((a * t + b) * t + c) * t + d, 0.0, span, cfg)
    exact = a * span ** 4 / 4 + b * span ** 3 / 3 + c * span ** 2 / 2 + d * span
    scale = abs(a) * span ** 4 + abs(b) * span ** 3 + abs(c) * span ** 2 + abs(d) * span + 1.0
    assert abs(result.value - exact) <= 1e-11 * scale


def test_invalid_time_interval():
    with pytest.raises(ValueError):
        integrate_time(np.exp, 1.0, 1.0)


def test_non_finite_integrand_is_rejected():
    with pytest.raises(ValueError):
        integrate_time(lambda t: np.full_like(t, np.nan), 0.0, 1.0)


def test_budget_exhaustion_reports_non_convergence():
    cfg = QuadratureConfig(rel_tol=1e-12, abs_tol=0.0, max_subdivisions=1)
    result = integrate_time(lambda t: 1.0 / np.sqrt(t + 1e-9), 0.0, 1.0, cfg)
    assert not result.converged
    assert result.subdivisions_used == 1
    assert result.error_estimate > 0


def test_finite_cylinder_gaussian():
    src = FluxSource(SourceKind.FINITE_SOLENOID, radius=3.0, B0=1.0, length=6.0)
    result = integrate_region(gaussian, Region3.from_source(src), TIGHT)
    exact = math.pi * (1.0 - math.exp(-9.0)) * math.sqrt(math.pi) * math.erf(3.0)
    assert result.converged
    assert result.value == pytest.approx(exact, rel=1e-9)


def test_infinite_cylinder_gaussian_through_compactified_axis():
    src = FluxSource(SourceKind.INFINITE_SOLENOID, radius=3.0, B0=1.0)
    result = integrate_region(gaussian, Region3.from_source(src), TIGHT)
    exact = math.pi * (1.0 - math.exp(-9.0)) * math.sqrt(math.pi)
    assert result.value == pytest.approx(exact, rel=1e-9)


def test_torus_volume():
    src = FluxSource(SourceKind.TOROID, radius=2.0, B0=1.0, minor_radius=0.5)
    result = integrate_region(lambda p: np.ones(len(p)), Region3.from_source(src), TIGHT)
    assert result.value == pytest.approx(math.pi ** 2, rel=1e-9)


def test_vector_integrand_returns_array():
    src = FluxSource(SourceKind.FINITE_SOLENOID, radius=1.0, B0=1.0, length=2.0)
    result = integrate_region(lambda p: np.column_stack([np.ones(len(p)), p[:, 2] ** 2]),
                              Region3.from_source(src), TIGHT)
    assert result.value.shape == (2,)
    assert result.value[0] == pytest.approx(2.0 * math.pi, rel=1e-10)
    assert result.value[1] == pytest.approx(2.0 * math.pi / 3.0, rel=1e-10)


def test_region_is_deterministic():
    src = FluxSource(SourceKind.FINITE_SOLENOID, radius=1.0, B0=1.0, length=10.0)
    region = Region3.from_source(src, [3.0, 0.0, 1.0])

    def kernel(points):
        d = np.array([3.0, 0.0, 1.0]) - points
        return 1.0 / np.linalg.norm(d, axis=1) ** 3

    cfg = QuadratureConfig(rel_tol=1e-8, abs_tol=0.0)
    first = integrate_region(kernel, region, cfg)
    second = integrate_region(kernel, region, cfg)
    assert first.value == second.value
    assert first.subdivisions_used == second.subdivisions_used


def test_planned_integral_reuses_partition():
    src = FluxSource(SourceKind.FINITE_SOLENOID, radius=1.0, B0=1.0, length=4.0)
    region = Region3.from_source(src, [2.0, 0.0, 0.0])

    def kernel(points):
        d = np.array([2.0, 0.0, 0.0]) - points
        return 1.0 / np.linalg.norm(d, axis=1) ** 2

    cfg = QuadratureConfig(rel_tol=1e-7, abs_tol=0.0)
    plan = integrate_region(kernel, region, cfg, keep_leaves=True)
    assert plan.leaves
    again = integrate_planned(kernel, region, plan, cfg)
    assert again.value == pytest.approx(plan.value, rel=1e-12)
    assert again.subdivisions_used == 0
    with pytest.raises(ValueError):
        integrate_planned(kernel, region, integrate_region(kernel, region, cfg), cfg)


def test_polyline_integral_of_constant_field():
    path = BeamPath((Vec3(0.0, 0.0, 0.0), Vec3(2.0, 0.0, 0.0), Vec3(2.0, 3.0, 0.0)))
    result = integrate_polyline(lambda p: np.tile([1.0, 2.0, 0.0], (len(p), 1)), path, TIGHT)
    assert result.value == pytest.approx(2.0 + 6.0, rel=1e-14)


def test_polyline_integral_of_gradient_depends_on_endpoints_only():
    path = BeamPath((Vec3(0.0, 0.0, 0.0), Vec3(1.0, 2.0, 0.0), Vec3(-1.0, 1.0, 3.0), Vec3(2.0, 2.0, 2.0)))
    # ∇(x·y·z) = (yz, xz, xy)
    result = integrate_polyline(
        lambda p: np.column_stack([p[:, 1] * p[:, 2], p[:, 0] * p[:, 2], p[:, 0] * p[:, 1]]), path, TIGHT
    )
    assert result.value == pytest.approx(8.0, rel=1e-12)


def test_sine_over_half_period():
    result = integrate_time(np.sin, 0.0, math.pi, TIGHT)
    assert result.value == pytest.approx(2.0, rel=1e-10)


def test_zero_integrand_is_exactly_zero():
    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=0.0)
    assert integrate_time(np.zeros_like, 0.0, 1.0, cfg).value == 0.0
    src = FluxSource(SourceKind.FINITE_SOLENOID, radius=1.0, B0=1.0, length=2.0)
    result = integrate_region(lambda p: np.zeros(len(p)), Region3.from_source(src), cfg)
    assert result.value == 0.0
    assert result.converged


@settings(max_examples=30, deadline=None)
@given(coefficient, coefficient)
def test_time_integral_is_linear(a, b):
    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-12)
    combined = integrate_time(lambda t: a * np.sin(t) + b * np.exp(t), 0.0, 2.0, cfg).value
    separate = a * integrate_time(np.sin, 0.0, 2.0, cfg).value + b * integrate_time(np.exp, 0.0, 2.0, cfg).value
    assert abs(combined - separate) <= 1e-8 * (abs(a) + abs(b))


@pytest.mark.parametrize("a, b", [(1.0, 0.5), (-2.0, 3.0), (0.25, -0.1)])
def test_region_integral_is_linear(a, b):
    src = FluxSource(SourceKind.FINITE_SOLENOID, radius=3.0, B0=1.0, length=6.0)
    region = Region3.from_source(src)
    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=0.0)
    combined = integrate_region(lambda p: a * gaussian(p) + b, region, cfg).value
    separate = (a * integrate_region(gaussian, region, cfg).value
                + b * integrate_region(lambda p: np.ones(len(p)), region, cfg).value)
    assert combined == pytest.approx(separate, rel=1e-8)


@pytest.mark.parametrize(
    "integrand, upper, exact",
    [(np.exp, 1.0, math.e - 1.0), (np.sin, math.pi, 2.0), (lambda t: 1.0 / np.sqrt(t + 0.01), 1.0,
                                                          2.0 * (math.sqrt(1.01) - 0.1))],
)
def test_tightening_tolerance_never_increases_the_error(integrand, upper, exact):
    tolerances = [1e-4 / 2.0 ** k for k in range(20)]
    results = [integrate_time(integrand, 0.0, upper, QuadratureConfig(rel_tol=tol, abs_tol=0.0))
               for tol in tolerances]
    errors = [abs(r.value - exact) for r in results]
    for looser, tighter in zip(errors, errors[1:]):
        assert tighter <= looser + 1e-14
    used = [r.subdivisions_used for r in results]
    assert used == sorted(used)
    for tol, result in zip(tolerances, results):
        assert result.converged
        assert result.error_estimate <= tol * abs(result.value) * (1.0 + 1e-9)


def test_closed_square_circulation_is_the_enclosed_area():
    square = BeamPath((Vec3(0.0, 0.0, 0.0), Vec3(2.0, 0.0, 0.0), Vec3(2.0, 2.0, 0.0),
                       Vec3(0.0, 2.0, 0.0), Vec3(0.0, 0.0, 0.0)))
    result = integrate_polyline(lambda p: np.column_stack([-p[:, 1], p[:, 0], np.zeros(len(p))]) / 2.0,
                                square, TIGHT)
    assert result.value == pytest.approx(4.0, rel=1e-14)
