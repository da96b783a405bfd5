import numpy as np
import pytest

from surflink.action import (action_difference, action_differences, action_on_contractible,
                             action_on_fixlift, classical_action, classical_delta, spectrum,
                             swept_area)
from surflink.cover import ANNULUS, TORUS
from surflink.errors import NonContractibleLoop, RotationVectorNonzero
from surflink.isotopy import HamiltonianIsotopy, identity, lift
from surflink.measures import AtomicMeasure, GridDensity
from surflink.zoo import pendulum, translation_flow, zoo


@pytest.fixture(scope="module")
def bump():
    e = zoo("bump-annuli", k_max=5)
    return e, lift(e.iso, window=((-1, -1), (1, 1)))


class TestClosedForm:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_bump_center_pairs(self, bump, k):
        e, L = bump
        v = action_difference(L, e.fixed["z0"], e.fixed["z%d" % k], e.measure())
        assert v.value == pytest.approx((-1) ** (k + 1) * k, abs=1e-9)
        assert v.stderr == 0.0

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_bump_neighbour_pairs(self, bump, k):
        e, L = bump
        v = action_difference(L, e.fixed["z%d" % (k + 1)], e.fixed["z%d" % k], e.measure())
        assert v.value == pytest.approx((-1) ** (k + 1) * (2 * k + 1), abs=1e-9)

    def test_measured_rates_agree(self, bump):
        e, L = bump
        pairs = [(e.fixed["z0"], e.fixed["z%d" % k]) for k in (1, 2)]
        a = action_differences(L, pairs, e.measure(), rates="metadata")
        b = action_differences(L, pairs, e.measure(), rates="measured", n_gauss=24, n_sub=24)
        for x, y in zip(a, b):
            assert y.value == pytest.approx(x.value, abs=1e-6)

    def test_radial_circles(self):
        # sum over k = 2..8 of 2^{-(k-1)} (2^k + 1/2): z0 is enclosed by every circle, z1 by none
        e = zoo("radial-fast")
        v = action_difference(lift(e.iso), e.fixed["z0"], e.fixed["z1"], e.measure())
        assert v.value == pytest.approx(14.49609375, abs=1e-9)

    def test_antisymmetric(self, bump):
        e, L = bump
        a, b = e.fixed["z1"], e.fixed["z3"]
        mu = e.measure()
        assert (action_difference(L, a, b, mu).value
                == pytest.approx(-action_difference(L, b, a, mu).value, abs=1e-12))


def test_atom_at_fixed_point_gives_triple_linking():
    e = zoo("shear")
    mu = AtomicMeasure([e.fixed["z"]], [1.0], TORUS)
    v = action_difference(lift(e.iso), e.fixed["a0"], e.fixed["a3"], mu)
    assert v.value == 3 and v.method == "atomic"


def test_identity_monte_carlo_is_zero():
    mu = GridDensity.lebesgue_box(TORUS, n=(6, 6))
    v = action_difference(lift(identity(TORUS)), [0.1, 0.1], [0.6, 0.3], mu, n_batches=4)
    assert v.value == 0.0 and v.n_dropped == 0


class TestSpectrum:
    def test_fixlift_width(self, bump):
        e, L = bump
        pts = [e.fixed["z%d" % k] for k in range(5)]
        sp = action_on_fixlift(L, pts, e.measure())
        np.testing.assert_allclose(sp.values, [0, 1, -2, 3, -4], atol=1e-9)
        assert sp.width == pytest.approx(7, abs=1e-9)
        # every triple residual vanishes for the exact method
        assert max(abs(r[1]) for r in sp.residuals) < 1e-9

    def test_sorted_and_rebased(self, bump):
        e, L = bump
        pts = [e.fixed["z%d" % k] for k in range(4)]
        sp = spectrum(L, e.measure(), pts)
        assert list(sp.values) == sorted(sp.values)
        rb = sp.rebased(0)
        assert rb.values[0] == 0 and rb.width == pytest.approx(sp.width)

    def test_iterates_scale(self, bump):
        e, L = bump
        pts = [e.fixed["z0"], e.fixed["z1"]]
        sp = spectrum(L, e.measure(), pts, n_iter=3, check_triples=False, rates="measured",
                      n_sub=6)
        w = [x[1] for x in sp.info["width_series"]]
        # coarse radial quadrature (n_sub=6): error of order 1e-5
        np.testing.assert_allclose(w, [1, 2, 3], atol=1e-4)

    def test_rotation_vector_must_vanish(self):
        mu = GridDensity.lebesgue_box(TORUS, n=(4, 4))
        with pytest.raises(RotationVectorNonzero):
            action_on_contractible(lift(translation_flow(0.3)), [[0.1, 0.1]], mu)


class TestClassical:
    def test_constant_loop(self):
        e = pendulum(h=1e-2)
        a = classical_action(e.iso, e.fixed["min0"])
        assert a.area == pytest.approx(0.0, abs=1e-14)
        assert a.value == pytest.approx(1 / (2 * np.pi), abs=1e-12)

    def test_delta_is_action_difference(self):
        e = pendulum(h=1e-2)
        x, y = e.fixed["min0"], e.fixed["saddle0"]
        d = classical_delta(e.iso, x, y)
        ax, ay = classical_action(e.iso, x), classical_action(e.iso, y)
        assert d == pytest.approx(ay.value - ax.value, abs=1e-4)

    def test_non_contractible(self):
        I = HamiltonianIsotopy(ANNULUS, lambda t, p: p[..., 1],
                               lambda t, p: np.stack([np.zeros(len(p)), np.ones(len(p))], -1),
                               h=0.1)
        with pytest.raises(NonContractibleLoop):
            classical_action(I, [0.2, 0.3])

    def test_swept_area_identity(self):
        L = lift(identity(TORUS))
        assert swept_area(L, [0.1, 0.1], [0.4, 0.7]) == 0.0
