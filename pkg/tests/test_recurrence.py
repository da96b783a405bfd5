import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from surflink.cover import ANNULUS, TORUS
from surflink.errors import NoReturn, NotConverged
from surflink.isotopy import identity, lift
from surflink.measures import AtomicMeasure, GridDensity
from surflink.recurrence import (Disk, cauchy_converged, first_return, kac_check,
                                 return_times_power, rotation_number_annulus,
                                 rotation_vector_measure, rotation_vector_torus)
from surflink.zoo import rigid_rotation, translation_flow, zoo

GOLDEN = (np.sqrt(5) - 1) / 2


class TestFirstReturn:
    def test_identity(self):
        I = identity(TORUS)
        orb = first_return(I.time_one, Disk((0.3, 0.3), 0.1), [0.3, 0.3], 5)
        np.testing.assert_array_equal(orb.times, [1] * 5)
        np.testing.assert_allclose(orb.points, [[0.3, 0.3]] * 5)

    def test_rotation_two_fifths(self):
        R = rigid_rotation(0.4)
        orb = first_return(R.time_one, Disk((0.2, 0.5), 0.05), [0.2, 0.5], 50, ANNULUS)
        assert set(orb.times) == {5}
        # lifted return points advance by 2 per period
        np.testing.assert_allclose(np.diff(orb.points[:, 0]), 2.0)

    def test_golden_three_gaps(self):
        # oracle: plain-Python iteration of x -> x + golden mean
        R = rigid_rotation(GOLDEN)
        U = Disk((0.2, 0.3), 0.01)
        orb = first_return(R.time_one, U, [0.2, 0.3], 2999, ANNULUS)
        assert sorted(set(orb.times)) == [34, 55, 89]
        assert len(orb.times) == 59
        assert all(U.contains(p, ANNULUS) for p in orb.points)

    def test_no_return(self):
        with pytest.raises(NoReturn):
            first_return(rigid_rotation(GOLDEN).time_one, Disk((0.2, 0.3), 1e-4), [0.2, 0.3],
                         10, ANNULUS)

    def test_start_outside(self):
        with pytest.raises(ValueError):
            first_return(identity(TORUS).time_one, Disk((0.3, 0.3), 0.1), [0.6, 0.6], 5)

    @given(st.integers(2, 4), st.integers(1, 6))
    def test_power_recurrence(self, q, p):
        # recurrence survives passing to F^q (periodic rotation p/7)
        R = rigid_rotation(p / 7)
        orb = return_times_power(R.time_one, Disk((0.5, 0.5), 0.02), [0.5, 0.5], q, 30, ANNULUS)
        assert len(orb.times) > 0 and set(orb.times) == {7}


class TestRotation:
    @given(st.floats(-2, 2), st.floats(0, 1))
    def test_rigid_annulus(self, alpha, x):
        r = rotation_number_annulus(rigid_rotation(alpha).time_one, [x, 0.5], tol=1e-9)
        assert r.value == pytest.approx(alpha, abs=1e-9)

    def test_rigid_point_three(self):
        r = rotation_number_annulus(rigid_rotation(0.3).time_one, [0.1, 0.0])
        assert r.value == pytest.approx(0.3, abs=1e-3) and r.converged

    def test_shear_fixed_point(self):
        e = zoo("shear")
        r = rotation_vector_torus(lift(e.iso), [0.25, 0.0])
        np.testing.assert_array_equal(r.value, [0.0, 1.0])

    def test_contractible_fixed_point(self):
        e = zoo("pendulum")
        r = rotation_vector_torus(lift(e.iso), e.fixed["min0"])
        np.testing.assert_array_equal(r.value, [0.0, 0.0])

    def test_translation_flow(self):
        r = rotation_vector_torus(translation_flow(0.3), [0.1, 0.1], tol=1e-6)
        np.testing.assert_allclose(r.value, [0.3, 0.0], atol=1e-6)

    def test_strict_not_converged(self):
        with pytest.raises(NotConverged):
            # a nonlinear circle map: partial averages fluctuate at order 1/n
            F = lambda p: p + np.stack([0.3 + 0.1 * np.sin(2 * np.pi * p[:, 0]),
                                        np.zeros(len(p))], 1)
            rotation_number_annulus(F, [0.1, 0.0], n_max=10, tol=1e-12, U_radius=0.2,
                                    strict=True)

    def test_shear_measure(self):
        e = zoo("shear")
        mu = GridDensity.lebesgue_box(TORUS, n=(16, 16))
        v, se = rotation_vector_measure(lift(e.iso), mu)
        assert abs(v[0]) < 1e-12 and abs(v[1]) < 3 * se[1] + 1e-12

    def test_cosine_flow_measure(self):
        e = zoo("cosine-flow")
        mu = GridDensity.lebesgue_box(TORUS, n=(16, 16))
        v, se = rotation_vector_measure(lift(e.iso), mu)
        assert np.all(np.abs(v) < 3 * np.asarray(se) + 1e-12)

    def test_atom_on_contractible_point(self):
        e = zoo("pendulum")
        mu = AtomicMeasure([e.fixed["min0"]], [1.0], TORUS)
        v, se = rotation_vector_measure(lift(e.iso), mu)
        np.testing.assert_allclose(v, [0.0, 0.0])


def test_cauchy():
    assert cauchy_converged([1.0, 1.0, 1.0, 1.0, 1.0], 1e-9)
    assert not cauchy_converged([1.0, 1.0, 1.0, 1.0], 1e-9)
    assert not cauchy_converged([1.0, 1.1, 1.0, 1.0, 1.0], 1e-3)
    assert cauchy_converged([100.0, 100.05, 100.0, 100.0, 100.0], 1e-3, relative=True)


class TestKac:
    def test_rotation_third_arc(self):
        # U: vertical strip of measure 0.1 in the unit box; three translates tile the invaded set
        R = rigid_rotation(1 / 3)
        mu = GridDensity.lebesgue_box(ANNULUS, ((0, 0), (1, 1)), n=(60, 1))
        U = Disk((0.5, 0.5), 0.05)
        # thin boxes: restrict to the line y = 1/2 so the disk is an arc of length 0.1
        mu = GridDensity(ANNULUS, rects=np.c_[np.linspace(0, 1, 61)[:-1],
                                              np.linspace(0, 1, 61)[1:],
                                              np.full(60, 0.5), np.full(60, 0.5)],
                         rect_mass=np.full(60, 1 / 60))
        rep = kac_check(R.time_one, U, mu, 10, ANNULUS, R.inverse_time_one, rng=3)
        assert rep.lhs == pytest.approx(0.3, abs=0.02)
        assert rep.rhs == pytest.approx(0.3, abs=0.02)
        assert rep.passed

    def test_identity(self):
        I = identity(TORUS)
        mu = GridDensity.lebesgue_box(TORUS, n=(20, 20))
        U = Disk((0.5, 0.5), 0.2)
        rep = kac_check(I.time_one, U, mu, 5, TORUS, I.inverse_time_one, rng=1)
        assert rep.lhs == pytest.approx(rep.rhs, abs=1e-12)
        assert rep.lhs == pytest.approx(np.pi * 0.04, abs=0.01)

    def test_needs_inverse(self):
        with pytest.raises(ValueError):
            kac_check(identity(TORUS).time_one, Disk((0.5, 0.5), 0.1),
                      GridDensity.lebesgue_box(TORUS, n=(4, 4)), 5)

    def test_shear_small_disk(self):
        e = zoo("shear")
        mu = GridDensity.lebesgue_box(TORUS, n=(32, 32))
        rep = kac_check(e.iso.time_one, Disk((0.3, 0.5), 0.08), mu, 40, TORUS,
                        e.iso.inverse_time_one, rng=5)
        assert rep.passed
