import numpy as np
import pytest

from surflink.cover import PLANE, TORUS
from surflink.errors import UnknownZooEntry
from surflink.isotopy import lift
from surflink.measures import (AtomicMeasure, GridDensity, RadialClosedForm, RadialPiece,
                               batch_estimate, invariance_residual)
from surflink.zoo import ZOO_NAMES, chart_point, torus_chart, zoo


class TestGrid:
    def test_lebesgue_mass(self):
        assert GridDensity.lebesgue_box(TORUS, n=(8, 8)).total_mass == pytest.approx(1.0)

    def test_integrate_linear(self):
        mu = GridDensity.lebesgue_box(TORUS, n=(16, 16))
        v, se = mu.integrate(lambda P: P[:, 0] + 2 * P[:, 1], rng=0)
        assert v == pytest.approx(1.5, abs=4 * se + 1e-3)

    def test_polar_disk_area(self):
        mu = GridDensity.polar_disks(PLANE, [[0, 0], [3, 0]], [1.0, 0.5], n_r=8)
        assert mu.total_mass == pytest.approx(np.pi * 1.25)
        P, w, b = mu.sample(4, rng=0)
        r = np.minimum(np.hypot(*P.T), np.hypot(*(P - [3, 0]).T))
        assert np.all(r <= 1.0)

    def test_rejects_negative_mass(self):
        with pytest.raises(ValueError):
            GridDensity(TORUS, rects=[[0, 1, 0, 1]], rect_mass=[-1.0])

    def test_stratified_batches(self):
        mu = GridDensity.lebesgue_box(TORUS, n=(4, 4))
        P, w, b = mu.sample(5, rng=1)
        assert len(P) == 80 and np.bincount(b).tolist() == [16] * 5


def test_batch_estimate():
    vals = np.array([1.0, 3.0, 1.0, 3.0])
    est, se = batch_estimate(vals, np.full(4, 0.5), np.array([0, 0, 1, 1]), 2)
    assert est == pytest.approx(2.0) and se == pytest.approx(0.0)


def test_atomic_integral():
    mu = AtomicMeasure([[0, 0], [0.5, 0.5]], [0.25, 0.75], TORUS)
    assert mu.integrate(lambda P: P[:, 0])[0] == pytest.approx(0.375)


def test_radial_mass():
    mu = RadialClosedForm([RadialPiece((0, 0), 0.0, 1.0, density=lambda r: 2 * np.pi * r,
                                       rate=lambda r: 1.0)])
    assert mu.total_mass == pytest.approx(np.pi)


def test_cosine_flow_moves_lebesgue_keeps_lines():
    e = zoo("cosine-flow")
    worst, se = invariance_residual(GridDensity.lebesgue_box(TORUS, n=(16, 16)), e.iso.time_one)
    assert worst > 10 * se
    worst, se = invariance_residual(e.measure(), e.iso.time_one)
    assert worst < 4 * se + 1e-3


@pytest.mark.parametrize("name", ["shear", "pendulum"])
def test_lebesgue_invariant(name):
    e = zoo(name)
    mu = GridDensity.lebesgue_box(TORUS, n=(16, 16))
    worst, se = invariance_residual(mu, e.iso.time_one)
    assert worst < 4 * se + 1e-3


def test_stock_measures_invariant():
    for name in ("bump-annuli", "radial-fast"):
        e = zoo(name)
        worst, _ = invariance_residual(e.measure(), e.iso.time_one)
        assert worst < 1e-9


def test_zoo_names():
    assert ZOO_NAMES == ("shear", "cosine-flow", "radial-fast", "bump-annuli", "pendulum")
    with pytest.raises(UnknownZooEntry):
        zoo("lorenz")


@pytest.mark.parametrize("name", [n for n in ZOO_NAMES if n != "cosine-flow"])
def test_listed_points_are_fixed(name):
    e = zoo(name)
    # radial-fast also lists recurrent points c_k on invariant circles (half-turn per step)
    P = np.stack([v for k, v in e.fixed.items() if not k.startswith("c")])
    d = e.iso.time_one(P) - P
    if e.iso.surface != PLANE:
        d = d - np.round(d)
    assert np.abs(d).max() < 1e-9


def test_radial_fast_circle_points_period_two():
    e = zoo("radial-fast")
    C = np.stack([v for k, v in e.fixed.items() if k.startswith("c")])
    np.testing.assert_allclose(e.iso.time_one(C), -C, atol=1e-9)
    np.testing.assert_allclose(e.iso.iterate_map(C, 2), C, atol=1e-9)


def test_bump_profile_integrals():
    # each profile integrates to (-1)^k k turns over its disk
    e = zoo("bump-annuli", k_max=4)
    B = e.extra["profiles"]
    from scipy import integrate
    for k in range(1, 5):
        v = integrate.quad(lambda r: 2 * np.pi * r * B.alpha(k, r), 0, B.radii[k - 1],
                           limit=400)[0]
        assert v == pytest.approx((-1) ** k * k, abs=1e-8)
        # the circle through w_k turns 2 (-1)^k (k+1)^5 times
        assert B.alpha(k, B.radii[k - 1] / 2) == pytest.approx(2 * (-1) ** k * (k + 1) ** 5)


def test_torus_chart_points():
    e = zoo("bump-annuli", k_max=3)
    T = torus_chart(e.iso)
    z = chart_point(e.fixed["w2"])
    np.testing.assert_allclose(T.time_one(z[None])[0], z, atol=1e-12)
    # outside the chart disk the map is the identity
    p = np.array([[0.02, 0.98]])
    np.testing.assert_allclose(T.time_one(p), p)
    assert lift(T).K < 1.0
