import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from surflink.cover import PLANE, TORUS
from surflink.errors import NotFixed
from surflink.isotopy import identity, lift
from surflink.linking import (deck_summed_linking, planar_linking, pointwise_linking,
                              trajectory_angle, triple_linking_fixed, triple_linking_recurrent,
                              two_puncture_rotation, wb_diagnostic)
from surflink.zoo import chart_point, plane_rotation, rotation_loop, torus_chart, zoo


@pytest.fixture(scope="module")
def bump():
    e = zoo("bump-annuli", k_max=5)
    return e, lift(e.iso, window=((-1, -1), (1, 1)))


class TestPlanar:
    def test_identity_is_zero(self):
        assert planar_linking(lift(identity(PLANE)), [0, 0], [1, 0]) == 0

    @given(st.floats(0.1, 3), st.floats(0, 2 * np.pi))
    def test_full_rotation_links_once(self, r, th):
        L = lift(rotation_loop())
        assert planar_linking(L, [0, 0], [r * np.cos(th), r * np.sin(th)]) == 1

    def test_symmetric(self):
        L = lift(rotation_loop())
        assert planar_linking(L, [0.3, 0.1], [0, 0]) == planar_linking(L, [0, 0], [0.3, 0.1])

    def test_requires_fixed(self):
        with pytest.raises(NotFixed):
            planar_linking(lift(plane_rotation(1.0)), [0, 0], [1, 0])

    def test_same_point(self):
        with pytest.raises(ValueError):
            planar_linking(lift(rotation_loop()), [1, 0], [1, 0])

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_bump_pairs(self, bump, k):
        e, L = bump
        v = planar_linking(L, e.fixed["z%d" % k], e.fixed["w%d" % k])
        assert v == 2 * (-1) ** k * (k + 1) ** 5


class TestDeckSummed:
    def test_identity_torus(self):
        r = deck_summed_linking(lift(identity(TORUS)), [0.2, 0.2], [0.7, 0.6])
        assert r.value == 0 and all(v == 0 for _, v in r.deck_terms)

    def test_chart_matches_planar(self):
        # one cell carries the whole planar isotopy: the deck sum is the chart linking
        e = zoo("bump-annuli", k_max=3)
        T = torus_chart(e.iso)
        z, w = chart_point(e.fixed["z2"]), chart_point(e.fixed["w2"])
        r = deck_summed_linking(lift(T), z, w)
        assert r.value == 2 * 3 ** 5
        assert sum(v for _, v in r.deck_terms) == r.value

    @given(st.integers(-2, 2), st.integers(-2, 2))
    def test_invariant_under_deck_shift(self, i, j):
        e = zoo("bump-annuli", k_max=2)
        L = lift(torus_chart(e.iso))
        z, w = chart_point(e.fixed["z1"]), chart_point(e.fixed["w1"])
        assert (deck_summed_linking(L, z, w).value
                == deck_summed_linking(L, z, w + np.array([i, j])).value)


class TestTriple:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_shear(self, k):
        e = zoo("shear")
        L = lift(e.iso)
        v = triple_linking_fixed(L, e.fixed["a0"], e.fixed["a%d" % k], e.fixed["z"]).value
        assert v == k

    def test_antisymmetric_in_punctures(self):
        e = zoo("shear")
        L = lift(e.iso)
        a, b, z = e.fixed["a0"], e.fixed["a2"], e.fixed["z"]
        assert (triple_linking_fixed(L, a, b, z).value
                == -triple_linking_fixed(L, b, a, z).value)

    def test_radial_recurrent(self):
        e = zoo("radial-fast")
        L = lift(e.iso)
        r = triple_linking_recurrent(L, e.fixed["z0"], e.fixed["z1"], e.fixed["c3"], tol=1e-9)
        assert r.value == pytest.approx(8.5, abs=1e-9)

    def test_bump_invariant_circle(self, bump):
        # a point on the circle of radius r_k/2 around z_k turns alpha_k times per step;
        # z_0 sits outside every disk and z_k at its center
        e, L = bump
        B = e.extra["profiles"]
        k = 2
        r = B.radii[k - 1] / 3
        z = e.fixed["z%d" % k] + np.array([0.0, r])
        res = triple_linking_recurrent(L, e.fixed["z0"], e.fixed["z%d" % k], z, tol=1e-6)
        assert res.value == pytest.approx(-B.alpha(k, r), rel=1e-6)

    def test_two_puncture_rotation(self, bump):
        e, L = bump
        for k in (1, 2):
            v = two_puncture_rotation(L, e.fixed["z0"], e.fixed["z%d" % k], e.fixed["w%d" % k])
            assert v == -2 * (-1) ** k * (k + 1) ** 5

    def test_trajectory_angle(self):
        e = zoo("radial-fast")
        L = lift(e.iso)
        ang = trajectory_angle(L, e.fixed["c2"], e.fixed["z0"])
        assert ang == pytest.approx(9 * np.pi, rel=1e-9)


def test_pointwise_counters_agree(bump):
    # the ray counter (planar default) and the segment counter give the same block values
    e, L = bump
    rng = np.random.default_rng(7)
    c = e.fixed["z1"]
    R = e.extra["profiles"].radii[0]
    th = rng.uniform(0, 2 * np.pi, 6)
    rr = R * rng.uniform(0.2, 0.9, 6)
    pts = c + np.stack([rr * np.cos(th), rr * np.sin(th)], 1)
    pairs = [(e.fixed["z0"], e.fixed["z1"])]
    a = pointwise_linking(L, pairs, pts, counter="ray", tol=1e-6)
    b = pointwise_linking(L, pairs, pts, counter="segment", tol=1e-6)
    np.testing.assert_allclose(a.values, b.values, rtol=1e-9)


class TestWB:
    def test_identity_bounded(self):
        pts = np.random.default_rng(0).uniform(-1, 1, (12, 2))
        r = wb_diagnostic(lift(identity(PLANE)), pts)
        assert r.max_abs_linking == 0 and r.verdict == "BoundedAtHorizon"

    def test_bump_grows(self):
        e = zoo("bump-annuli", k_max=8)
        L = lift(e.iso, window=((-1, -1), (1, 1)))
        pts = []
        for k in range(1, 9):
            pts += [e.fixed["z%d" % k], e.fixed["w%d" % k]]
        r = wb_diagnostic(L, pts, pair_budget=400)
        assert r.verdict == "GrowthDetected"
        assert r.max_abs_linking == 2 * 9 ** 5

    def test_shear_fixed_lifts_bounded(self):
        e = zoo("shear")
        L = lift(e.iso)
        pts = [e.fixed["a%d" % k] for k in range(0, 4)]
        r = wb_diagnostic(L, pts)
        assert r.verdict == "BoundedAtHorizon"


def test_half_turn_moves_point():
    with pytest.raises(NotFixed):
        planar_linking(lift(plane_rotation(np.pi)), [0, 0], [1, 0])
