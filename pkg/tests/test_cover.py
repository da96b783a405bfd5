import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from surflink.cover import (ANNULUS, PLANE, TORUS, SampledPath, apply_deck, intersection_number,
                            lattice_crossings, project, segment_crossings, swept_angle,
                            winding_number)
from surflink.errors import CenterOnPath, DegenerateCrossing

coord = st.floats(-3, 3, allow_nan=False)


def circle(n=64, turns=1, r=1.0, c=(0.0, 0.0)):
    t = np.linspace(0, 2 * np.pi * turns, n * abs(turns) + 1)
    return np.stack([c[0] + r * np.cos(t), c[1] + r * np.sin(t)], axis=1)


class TestProject:
    def test_torus(self):
        np.testing.assert_allclose(project([1.25, -0.5], TORUS), [0.25, 0.5])

    def test_annulus(self):
        np.testing.assert_allclose(project([1.25, -0.5], ANNULUS), [0.25, -0.5])

    def test_plane(self):
        np.testing.assert_allclose(project([0.3, 0.7], PLANE), [0.3, 0.7])

    @given(coord, coord)
    def test_idempotent_and_in_cell(self, x, y):
        p = project([x, y], TORUS)
        assert np.all((0 <= p) & (p < 1))
        np.testing.assert_array_equal(project(p, TORUS), p)


class TestDeck:
    def test_examples(self):
        np.testing.assert_allclose(apply_deck((1, 0), [0.25, 0.5]), [1.25, 0.5])
        np.testing.assert_allclose(apply_deck((0, 0), [0.7, -2.0]), [0.7, -2.0])
        np.testing.assert_allclose(apply_deck((2, -1), [0.0, 0.0]), [2.0, -1.0])

    def test_annulus_rejects_vertical(self):
        with pytest.raises(ValueError):
            apply_deck((0, 1), [0.0, 0.0], ANNULUS)

    def test_plane_has_no_deck(self):
        with pytest.raises(ValueError):
            apply_deck((1, 0), [0.0, 0.0], PLANE)

    @given(st.integers(-5, 5), st.integers(-5, 5), coord, coord)
    def test_projection_invariant(self, a, b, x, y):
        p = np.array([x, y])
        np.testing.assert_allclose(project(apply_deck((a, b), p), TORUS), project(p, TORUS),
                                   atol=1e-12)


class TestWinding:
    def test_once_ccw(self):
        assert winding_number(circle(), (0, 0)) == 1

    def test_outside(self):
        assert winding_number(circle(), (5, 0)) == 0

    def test_three_times_cw(self):
        assert winding_number(circle(turns=-3), (0, 0)) == -3

    def test_pentagram(self):
        # oracle: unwrapped angle of a finely resampled copy
        k = np.arange(6)
        P = np.stack([np.cos(4 * np.pi * k / 5 + np.pi / 2), np.sin(4 * np.pi * k / 5 + np.pi / 2)], 1)
        assert winding_number(P, (0.02, 0.01)) == 2

    def test_center_on_path(self):
        with pytest.raises(CenterOnPath):
            winding_number(circle(n=4), (1.0, 0.0))

    def test_open_loop(self):
        with pytest.raises(ValueError):
            winding_number(circle()[:-5], (0, 0))

    def test_refinement_with_curve(self):
        # three samples of a once-around circle: too coarse without the curve
        f = lambda t: np.stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)], -1)
        path = SampledPath(f(np.array([0.0, 0.5, 1.0])), np.array([0.0, 0.5, 1.0]))
        assert winding_number(path, (0.0, 0.3), curve=f) == 1

    @given(st.integers(-4, 4), st.floats(0.1, 0.9), st.floats(0, 2 * np.pi))
    def test_matches_turns(self, turns, rad, th):
        c = (rad * np.cos(th), rad * np.sin(th))
        if turns == 0:
            return
        assert winding_number(circle(n=32, turns=turns), c) == turns


class TestIntersection:
    def test_single_crossing_sign(self):
        # det(gamma', Gamma') = det((0, 1), (1, 0)) < 0
        assert intersection_number([[0, -1], [0, 1]], [[-1, 0], [1, 0]]) == -1

    def test_disjoint(self):
        assert intersection_number([[0, 0], [1, 0]], [[0, 1], [1, 1]]) == 0

    def test_horizontal_against_three_verticals(self):
        g = [[0, 0.5], [3, 0.5]]
        total = sum(intersection_number(g, [[0.25 + m, 0], [0.25 + m, 1]]) for m in range(3))
        assert total == 3

    def test_degenerate_at_endpoint(self):
        with pytest.raises(DegenerateCrossing):
            intersection_number([[0, 0], [1, 0]], [[0.5, 0], [0.5, 1]])

    def test_antisymmetric(self, rng):
        for _ in range(20):
            g, G = rng.normal(size=(5, 2)), rng.normal(size=(7, 2))
            assert intersection_number(g, G) == -intersection_number(G, g)

    def test_closed_loop_counts_winding_difference(self, rng):
        # a path from a to b meets a closed loop wind(b) - wind(a) times (up to sign)
        loop = circle(n=50, turns=2, r=1.0)
        a, b = np.array([0.0, 0.1]), np.array([3.0, 0.2])
        n = intersection_number(np.stack([a, b]), loop)
        assert abs(n) == 2


class TestLatticeCrossings:
    def _brute(self, p, q, A, B, surface, R=6):
        tot = np.zeros(len(A), int)
        rng_ = range(-R, R + 1)
        for i in rng_:
            for j in (rng_ if surface == TORUS else [0]):
                c, _ = segment_crossings(p, q, A + (i, j), B + (i, j))
                tot += c
        return tot

    @pytest.mark.parametrize("surface", [TORUS, ANNULUS])
    def test_matches_brute_force(self, rng, surface):
        for _ in range(10):
            p, q = rng.uniform(-1, 2, 2), rng.uniform(-1, 2, 2)
            A = rng.uniform(-1, 2, (40, 2))
            B = A + rng.normal(0, 0.5, (40, 2))
            c, d = lattice_crossings(p, q, A, B, surface)
            assert not d.any()
            np.testing.assert_array_equal(c, self._brute(p, q, A, B, surface))

    @pytest.mark.parametrize("surface", [TORUS, ANNULUS, PLANE])
    def test_halfopen_agrees_on_generic_input(self, rng, surface):
        p, q = rng.uniform(-1, 2, 2), rng.uniform(-1, 2, 2)
        A = rng.uniform(-2, 3, (200, 2))
        B = A + rng.normal(0, 0.7, (200, 2))
        c1, _ = lattice_crossings(p, q, A, B, surface)
        c2, _ = lattice_crossings(p, q, A, B, surface, halfopen=True)
        np.testing.assert_array_equal(c1, c2)

    @given(st.floats(0.05, 0.95), st.sampled_from([TORUS, ANNULUS, PLANE]))
    def test_halfopen_vertex_on_path(self, s, surface):
        # a polyline with a vertex exactly on [p, q] crosses once
        p, q = np.array([0.0, 0.25]), np.array([1.0, 0.25])
        v = np.array([s, 0.25])
        P = np.stack([v + (-0.01, -0.1), v, v + (0.02, 0.1)])
        c, d = lattice_crossings(p, q, P[:-1], P[1:], surface, halfopen=True)
        assert not d.any() and c.sum() == 1
        # touching the line and turning back does not count
        P2 = np.stack([v + (-0.01, -0.1), v, v + (0.02, -0.1)])
        c2, _ = lattice_crossings(p, q, P2[:-1], P2[1:], surface, halfopen=True)
        assert c2.sum() == 0


def test_swept_angle_half_turn():
    t = np.linspace(0, np.pi, 9)
    assert swept_angle(np.stack([np.cos(t), np.sin(t)], 1), (0, 0)) == pytest.approx(np.pi)


def test_sampled_path_rejects_nonfinite():
    with pytest.raises(ValueError):
        SampledPath(np.array([[0.0, 0.0], [np.nan, 1.0]]))
