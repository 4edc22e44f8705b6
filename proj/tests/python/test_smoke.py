import math

import pytest

import randcurve as rc


def test_path_sampling_is_deterministic():
    grid = rc.TimeGrid.uniform(64)
    a = rc.sample_path(2, grid, rc.RngStream(7, 1))
    b = rc.sample_path(2, grid, rc.RngStream(7, 1))
    assert a.points == b.points
    assert a.points[0] == [0.0, 0.0]


def test_hit_constant_and_ball_probability():
    assert rc.wiener_hit_constant(3) == pytest.approx(1.0 / (2.0 * math.pi))
    with pytest.raises(Exception):
        rc.wiener_hit_constant(2)
    p = rc.gaussian_ball_prob([0.0, 0.0], 1.0, 1.0, 2)
    assert p == pytest.approx(1.0 - math.exp(-0.5), rel=1e-8)


def test_transport_split_mass():
    mu = rc.EmpiricalMeasure()
    mu.atoms = [[0.0, 0.0], [1.0, 0.0]]
    mu.weights = [0.5, 0.5]
    nu = rc.EmpiricalMeasure()
    nu.atoms = [[0.0, 0.0]]
    nu.weights = [1.0]
    assert rc.rho_value(mu, nu) == pytest.approx(0.25, abs=1e-12)


def test_silt_constant_path_value():
    grid = rc.TimeGrid.uniform(50)
    path = rc.sample_path(2, grid, rc.RngStream(0, 0))
    # silt of the zero path at the origin: simplex area over the disc volume
    zero = rc.PinSet()  # unrelated object, just exercising construction
    est = rc.silt_estimate(path, 1e-9, [50.0, 50.0])
    assert est.value == 0.0
    assert zero.times == []


def test_conditional_silt_roundtrip():
    q = rc.PinnedSiltQuery()
    q.u = 0.5
    pins = rc.PinSet()
    pins.times = [1.0]
    pins.values = [[2.0 / math.sqrt(2), -2.0 / math.sqrt(2)]]
    q.pins = pins
    quad = rc.cond_silt_quadrature(q)
    mc = rc.cond_silt_mc(q, 0.05, 500, rc.RngStream(11, 0))
    assert quad.value > 0
    assert abs(mc.value - quad.value) < 4 * mc.std_error + 0.1 * quad.value
    derived = rc.pinned_derived(q)
    assert derived.v_star == pytest.approx(2.0)
    assert derived.s_star == pytest.approx(1.0)


def test_flow_closed_form_and_match():
    z = rc.cauchy_closed_form(rc.Vec2(2.0, 2.0), 1.0)
    assert z.x == pytest.approx(1.0 + math.exp(-1.0))
    spec = rc.TypeSpec()
    spec.centers = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]
    spec.radius = 0.3
    spec.sequence = [1, 1, 2, 2, 1]
    curve = rc.weave_curve()
    pts = [[p.x, p.y] for p in curve]
    params = [(i + 1) / len(curve) for i in range(len(curve))]
    assert rc.match_type_points(pts, params, spec).matched


def test_flow_rho_series_decreases():
    curve = rc.brownian_curve(60, rc.RngStream(5, 0))
    series = rc.flow_rho_series(curve, [1.0, 4.0], dt=5e-3, oracle_weight=True)
    assert series[0][1] > series[1][1]
