import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from surflink.cover import ANNULUS, PLANE, TORUS, project
from surflink.errors import NotFixed
from surflink.isotopy import (HamiltonianIsotopy, check_identity_at_zero, compose,
                              conjugate_translation, continuation_lift, deck_commutation_residual,
                              displacement_bound, identity, inverse, iterate, lift,
                              mobius_normalize)
from surflink.zoo import pendulum, plane_rotation, rigid_rotation, rotation_loop, zoo

unit = st.floats(0, 1, allow_nan=False)


def test_shear_fixes_quarter_point():
    e = zoo("shear")
    np.testing.assert_allclose(project(e.iso.lift_eval(1.0, np.array([[0.25, 0.0]])), TORUS),
                               [[0.25, 0.0]], atol=1e-12)


def test_cosine_flow_time_one():
    e = zoo("cosine-flow")
    np.testing.assert_allclose(e.iso.evaluate(1.0, np.array([[0.0, 0.0]])),
                               [[1 / (2 * np.pi), 0.0]], atol=1e-12)


@pytest.mark.parametrize("name", ["shear", "cosine-flow", "radial-fast", "bump-annuli",
                                  "pendulum"])
def test_zoo_identity_at_zero(name):
    assert check_identity_at_zero(zoo(name).iso)


@pytest.mark.parametrize("name", ["shear", "cosine-flow", "pendulum"])
def test_torus_lifts_commute_with_deck(name):
    assert deck_commutation_residual(zoo(name).iso) < 1e-8


def test_compose_single():
    I = zoo("shear").iso
    assert compose([I]) is I


def test_iterate_one_is_original():
    I = zoo("shear").iso
    assert iterate(I, 1) is I


def test_iterate_rejects_zero():
    with pytest.raises(ValueError):
        iterate(zoo("shear").iso, 0)


@given(unit, unit, st.integers(2, 4))
def test_iterate_time_one_is_power(x, y, n):
    I = zoo("shear").iso
    p = np.array([[x, y]])
    np.testing.assert_allclose(iterate(I, n).time_one(p), I.iterate_map(p, n), atol=1e-10)


@given(unit, unit, st.sampled_from(["shear", "cosine-flow"]))
def test_inverse_undoes_time_one(x, y, name):
    # the cosine flow is only a homeomorphism along y = 1/2 (zero derivative there)
    if name == "cosine-flow" and abs(y - 0.5) < 0.05:
        y = 0.4
    I = zoo(name).iso
    p = np.array([[x, y]])
    J = inverse(I)
    np.testing.assert_allclose(J.time_one(I.time_one(p)), p, atol=1e-9)
    np.testing.assert_allclose(J.lift_eval(0.0, p), p, atol=1e-12)


def test_compose_endpoints():
    a, b = rigid_rotation(0.2), rigid_rotation(0.3)
    C = compose([a, b])
    p = np.array([[0.1, 0.4]])
    np.testing.assert_allclose(C.lift_eval(0.5, p), [[0.3, 0.4]])
    np.testing.assert_allclose(C.time_one(p), [[0.6, 0.4]])
    with pytest.raises(ValueError):
        compose([a, zoo("shear").iso])


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-2, 2), st.floats(-2, 2))
def test_conjugate_translation(x, y, vx, vy):
    I = zoo("shear").iso
    v = np.array([vx, vy])
    C = conjugate_translation(I, v)
    p = np.array([[x, y]])
    np.testing.assert_allclose(C.lift_eval(0.6, p + v), I.lift_eval(0.6, p) + v, atol=1e-12)


def test_mobius_identity():
    I = identity(PLANE)
    N = mobius_normalize(I, [[0, 0], [1, 0]])
    p = np.random.default_rng(0).normal(size=(10, 2))
    np.testing.assert_allclose(N.lift_eval(0.37, p), p)


def test_mobius_fixes_points_of_rotation():
    # rotation about 0 moves (1, 0) during the isotopy; normalize at 0 and (1, 0)
    R = rotation_loop()
    N = mobius_normalize(R, [[0, 0], [1, 0]])
    v = np.array([[0.0, 0.0], [1.0, 0.0]])
    for t in np.linspace(0, 1, 7):
        np.testing.assert_allclose(N.lift_eval(t, v), v, atol=1e-12)
    # the normalized rotation is the identity
    p = np.array([[0.3, -0.2]])
    np.testing.assert_allclose(N.lift_eval(0.4, p), p, atol=1e-12)


def test_mobius_requires_fixed_points():
    with pytest.raises(NotFixed):
        mobius_normalize(plane_rotation(1.0), [[1.0, 0.0]])


def test_displacement_bound_translation():
    from surflink.zoo import translation_flow
    assert displacement_bound(translation_flow(0.3, 0.4)) == pytest.approx(0.5)


def test_lift_bound_scales_with_safety():
    I = rigid_rotation(0.25)
    assert lift(I).K == pytest.approx(0.5)


def test_continuation_lift_tracks_branch():
    # base map z -> z + (t/2, 0) mod 1: continuation recovers the straight lift
    f = lambda t, z: project(z + np.outer(np.atleast_1d(t), [0.5, 0.0]), TORUS)
    I = continuation_lift(TORUS, f)
    np.testing.assert_allclose(I.lift_eval(1.0, np.array([[0.9, 0.1]])), [[1.4, 0.1]], atol=1e-9)


class TestHamiltonian:
    def test_energy_conserved(self, rng):
        e = pendulum(h=1e-2)
        H = e.iso
        P = rng.uniform(0, 1, (20, 2))
        Q = H.time_one(P)
        np.testing.assert_allclose(H.H(1.0, Q), H.H(0.0, P), atol=1e-8)

    def test_area_preserving(self):
        H = pendulum(h=1e-2).iso
        p = np.array([[0.13, 0.41]])
        h = 1e-6
        J = np.stack([(H.time_one(p + [h, 0]) - H.time_one(p - [h, 0]))[0] / (2 * h),
                      (H.time_one(p + [0, h]) - H.time_one(p - [0, h]))[0] / (2 * h)], 1)
        assert np.linalg.det(J) == pytest.approx(1.0, abs=1e-6)

    def test_critical_points_fixed(self):
        e = pendulum(h=1e-2)
        P = np.stack(list(e.fixed.values()))
        np.testing.assert_allclose(e.iso.time_one(P), P, atol=1e-12)

    def test_custom_hamiltonian(self):
        # H = y: flow (x - t, y) on the annulus, so omega(X_H, .) = dH
        I = HamiltonianIsotopy(ANNULUS, lambda t, p: p[..., 1],
                               lambda t, p: np.stack([np.zeros(len(p)), np.ones(len(p))], -1),
                               h=0.1)
        np.testing.assert_allclose(I.time_one(np.array([[0.2, 0.3]])), [[-0.8, 0.3]], atol=1e-12)
