import math

import pytest

import degen


def test_power_geometry_closed_forms():
    g = degen.power_geometry(1.0)
    assert g.F(0.5) == pytest.approx(2.0)
    assert g.f(0.5) == pytest.approx(math.exp(-2.0))
    assert g.Finv(g.F(0.1)) == pytest.approx(0.1, rel=1e-12)
    assert all(degen.structure_conditions(g).values())


def test_domain_errors_map_to_value_error():
    with pytest.raises(ValueError):
        degen.power_geometry(-1.0)
    with pytest.raises(degen.DomainError):
        degen.power_geometry(1.0).F(2.0)


def test_turning_abscissa():
    g = degen.power_geometry(1.0)
    lam = 1e-5
    assert degen.turning_data(g, lam)["X"] == pytest.approx(1.0 / math.log(1.0 / lam), rel=1e-10)


def test_distance_horizontal_and_symmetric():
    g = degen.power_geometry(1.0)
    assert degen.distance(g, [0.1, 0.0], [0.3, 0.0]) == pytest.approx(0.2)
    a = degen.distance(g, [0.1, 0.0], [0.2, 0.01])
    b = degen.distance(g, [0.2, 0.01], [0.1, 0.0])
    assert a == pytest.approx(b, rel=1e-9)


def test_ball_volume_comparable():
    g = degen.power_geometry(1.0)
    v = degen.ball_volume(g, 0.0, 0.125, oracle=True)
    assert 1e-2 < v["ratio"] < 1e2


def test_young_function():
    yf = degen.YoungFunction(2.0)
    assert yf.E == pytest.approx(math.exp(4.0))
    assert yf.phi_inverse(yf.phi(100.0)) == pytest.approx(100.0)
    assert yf.gamma(1e-3) * yf.conj_inverse(1e3) == pytest.approx(1.0)
    assert degen.orlicz_norm(yf, [3.0, 3.0], [0.5, 0.5]) == pytest.approx(3.0 / yf.phi_inverse(1.0))
    with pytest.raises(degen.ZeroFunction):
        degen.orlicz_norm(yf, [0.0], [1.0])


def test_iteration_thresholds():
    assert degen.b0_threshold(2.0, 1.0) > 0.0
    assert degen.b0_threshold(2.0, 4.0) > degen.b0_threshold(2.0, 1.0)
    assert degen.max_principle_b0() > 0.0


def test_endpoint_growth_condition():
    assert degen.sobolev_endpoint(0.4)["gammacond_ok"]
    assert not degen.sobolev_endpoint(0.6)["gammacond_ok"]


def test_spectral():
    assert degen.least_eigenvalue(1.0, 1e-8) == pytest.approx(math.pi**2 / 4, rel=1e-4)
    assert degen.mu0(0.5) == pytest.approx(math.pi**2 + 1.0, rel=1e-5)
    assert degen.l4_partial_sums([1.0, 2.0, 3.0], [2, 3, 4]) == [1.0, 17.0, 117.0]
    assert degen.convolution_lower_bound(0.25, 200) > 0.0
