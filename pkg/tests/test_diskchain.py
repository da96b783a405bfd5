import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from surflink.cover import ANNULUS
from surflink.diskchain import (DiskChain, FreeDisk, chain_width_algebra, check_equal_or_disjoint,
                                find_periodic_chain, find_periodic_chains, is_free,
                                locate_fixed_point, rot_hull, shifted_chain, translate,
                                verify_chain_bound)
from surflink.errors import HypothesisUnverified, Inconclusive
from surflink.isotopy import identity
from surflink.zoo import rigid_rotation, standard_twist

D = FreeDisk("D", (0.2, 0.4), 0.05)


class TestFree:
    def test_identity_not_free(self):
        free, w = is_free(identity(ANNULUS), D)
        assert not free and w is not None

    def test_half_rotation_free(self):
        assert is_free(rigid_rotation(0.5), D) == (True, None)

    def test_small_rotation_not_free(self):
        assert not is_free(rigid_rotation(0.05), D)[0]

    def test_tangent_inconclusive(self):
        with pytest.raises(Inconclusive):
            is_free(rigid_rotation(0.1), D)

    def test_radius_bounds(self):
        with pytest.raises(ValueError):
            FreeDisk("X", (0, 0), 0.5)

    def test_overlap_detected(self):
        with pytest.raises(ValueError):
            check_equal_or_disjoint([D, FreeDisk("E", (0.25, 0.4), 0.05)])
        check_equal_or_disjoint([D, FreeDisk("E", (1.2, 0.6), 0.05)])


class TestChains:
    def test_rotation_third(self):
        ch = find_periodic_chain(rigid_rotation(1 / 3), [D], 10)
        assert ch.periodic and ch.length == 3 and ch.width == 1
        assert len(ch.certify(rigid_rotation(1 / 3))) == len(ch.powers)

    def test_rejects_non_free(self):
        with pytest.raises(ValueError):
            find_periodic_chains(identity(ANNULUS), [D], 5)

    @given(st.integers(-3, 3))
    def test_width_algebra(self, p):
        rot = rigid_rotation(1 / 3)
        ch = find_periodic_chain(rot, [D], 10)
        w, wp = chain_width_algebra(ch, p)
        assert (w, wp) == (1, 3 * p + 1)
        moved = shifted_chain(ch, p)
        moved.certify(translate(rot, p))
        assert moved.width == wp

    def test_width_algebra_numbers(self):
        ch = DiskChain([D, D], [3], [0, 1], [np.array(D.center)])
        assert chain_width_algebra(ch, 1) == (1, 4)
        assert chain_width_algebra(ch, -2) == (1, -5)

    def test_concat_adds(self):
        ch = find_periodic_chain(rigid_rotation(1 / 3), [D], 10)
        two = ch.concat(ch)
        assert two.length == 6 and two.width == 2
        two.certify(rigid_rotation(1 / 3))


@pytest.mark.parametrize("p,q", [(1, 3), (2, 5), (1, 2), (3, 7)])
def test_rot_hull_rigid(p, q):
    lo, hi, ratios = rot_hull(rigid_rotation(p / q), D, 30)
    assert lo == hi == p / q


def test_rot_hull_without_returns():
    lo, hi, ratios = rot_hull(rigid_rotation(0.5), FreeDisk("E", (0.2, 0.4), 0.05), 1)
    assert lo is None and hi is None and ratios == []


class TestBound:
    def test_holds_for_small_width(self):
        ch = find_periodic_chain(rigid_rotation(1 / 3), [D], 10)
        assert verify_chain_bound(ch, 1).holds

    def test_violation(self):
        fake = DiskChain([D, D], [3], [0, 6], [np.zeros(2)])
        rep = verify_chain_bound(fake, 1)
        assert not rep.holds and rep.width == 6 and rep.length == 3

    def test_checks_listed_fixed_points(self):
        tw = standard_twist(1.5)
        z = locate_fixed_point(tw, 1, box=((0, -1), (1, 2)))
        ch = DiskChain([D, D], [1], [0, 0], [np.array(D.center)])
        with pytest.raises(HypothesisUnverified):
            verify_chain_bound(ch, 0, tw, [z])
        rep = verify_chain_bound(ch, 1, tw, [z])
        assert any("located fixed points only" in n for n in rep.notes)


class TestLocate:
    @pytest.mark.parametrize("k", [-1, 0, 1])
    def test_twist(self, k):
        tw = standard_twist(1.5)
        z = locate_fixed_point(tw, k, box=((0, -2), (1, 2)))
        np.testing.assert_allclose(tw.time_one(z[None])[0], z + (k, 0), atol=1e-9)
        # fixed points of the standard map sit at y = k, x in {0, 1/2}
        assert z[1] == pytest.approx(k, abs=1e-8)

    def test_period_two(self):
        z = locate_fixed_point(rigid_rotation(0.5), 1, q=2)
        np.testing.assert_allclose(rigid_rotation(0.5).iterate_map(z[None], 2)[0], z + (1, 0))

    def test_failure_is_inconclusive(self):
        with pytest.raises(Inconclusive):
            locate_fixed_point(rigid_rotation(0.3), 0, n_starts=4, maxiter=5)
