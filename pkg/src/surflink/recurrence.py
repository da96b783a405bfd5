"""First returns, Birkhoff averages, rotation numbers and rotation vectors."""
from dataclasses import dataclass, field

import numpy as np

from .cover import ANNULUS, PLANE, TORUS, base_distance, check_surface, periodic_mask
from .errors import NoReturn, NotConverged
from .measures import AtomicMeasure, GridDensity, batch_estimate


@dataclass(frozen=True)
class Disk:
    """Round disk on the surface: ``center`` (base point) and ``radius``."""
    center: tuple
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")

    def contains(self, p, surface):
        return base_distance(p, np.asarray(self.center, float), surface) < self.radius


@dataclass
class ReturnOrbit:
    z: np.ndarray
    U: Disk
    times: np.ndarray       # tau_i
    points: np.ndarray      # lifted return points Phi^i(z~)

    @property
    def partial_sums(self):
        return np.cumsum(self.times)

    @property
    def displacements(self):
        return self.points - self.z


@dataclass
class BirkhoffEstimate:
    value: object
    n_used: int
    history: list = field(default_factory=list)
    converged: bool = False
    tol: float = 1e-3
    stderr: object = None

    def __float__(self):
        return float(self.value)


def cauchy_converged(history, tol, m=5, relative=False):
    """Last ``m`` partial averages within ``tol`` of each other."""
    if len(history) < m:
        return False
    h = np.asarray(history[-m:], dtype=float)
    spread = np.max(h, axis=0) - np.min(h, axis=0)
    scale = np.maximum(1.0, np.abs(h[-1])) if relative else 1.0
    return bool(np.all(spread < tol * scale))


def first_return(F, U, z, max_steps, surface=TORUS, verify=True):
    """Successive returns of the orbit of ``z`` to the disk ``U``.

    ``F`` is the lifted time-one map; returned points are lifts along the
    orbit of ``z`` (read as its own lift).
    """
    check_surface(surface)
    z = np.asarray(z, dtype=float)
    if not U.contains(z, surface):
        raise ValueError("starting point must lie in U")
    times, pts = [], []
    p = z.copy()
    last = 0
    for n in range(1, int(max_steps) + 1):
        p = np.asarray(F(p[None]), dtype=float)[0]
        if U.contains(p, surface):
            times.append(n - last)
            pts.append(p.copy())
            last = n
    if not times:
        raise NoReturn("no return to U within %d steps" % max_steps)
    orbit = ReturnOrbit(z, U, np.array(times, dtype=int), np.array(pts))
    if verify:
        q = z.copy()
        for n in range(1, int(orbit.partial_sums[-1]) + 1):
            q = np.asarray(F(q[None]), dtype=float)[0]
        if np.abs(q - orbit.points[-1]).max() > 1e-9 * max(1.0, np.abs(q).max()):
            raise NoReturn("return point does not reproduce on re-evaluation")
    return orbit


def _displacement_estimate(F, z, n_max, tol, comp, U_radius, surface, strict):
    z = np.asarray(z, dtype=float)
    one = np.asarray(F(z[None]), dtype=float)[0]
    d1 = one - z
    # fixed point of the base map: the one-step displacement is exact
    if np.all(np.abs(base_wrap(d1, surface)) <= 1e-12):
        v = d1[comp]
        return BirkhoffEstimate(v, 1, [v], True, tol)
    U = Disk(tuple(z), U_radius)
    orbit = first_return(F, U, z, n_max, surface, verify=False)
    hist = list((orbit.points[:, comp] - z[comp]) / orbit.partial_sums[:, None])
    if np.ndim(comp) == 0:
        hist = [float(h) for h in hist]
    est = BirkhoffEstimate(hist[-1], int(orbit.partial_sums[-1]), hist[-5:],
                           cauchy_converged(hist, tol), tol)
    if strict and not est.converged:
        raise NotConverged("partial averages did not settle within %g" % tol)
    return est


def base_wrap(d, surface):
    d = np.array(d, dtype=float)
    mask = periodic_mask(surface)
    d[..., mask] -= np.round(d[..., mask])
    return d


def rotation_number_annulus(H, z, n_max=1000, tol=1e-3, U_radius=0.05, strict=False):
    """Rotation number of ``z`` for the annulus lift ``H`` (first coordinate periodic).

    Estimated as ``(p1(H^{tau_n} z~) - p1(z~)) / tau_n`` along returns to a
    disk around ``z``; a fixed point gives the exact one-step value.
    """
    z = np.asarray(z, dtype=float)
    hist_est = _displacement_estimate(H, z, n_max, tol, np.array([0]), U_radius, ANNULUS, strict)
    hist_est.value = float(np.asarray(hist_est.value).reshape(-1)[0])
    hist_est.history = [float(np.asarray(h).reshape(-1)[0]) for h in hist_est.history]
    return hist_est


def rotation_vector_torus(L, z, n_max=1000, tol=1e-3, U_radius=0.05, strict=False):
    """Rotation vector of ``z`` under the lifted isotopy ``L`` on the torus."""
    F = L.time_one if hasattr(L, "time_one") else L
    est = _displacement_estimate(F, z, n_max, tol, np.array([0, 1]), U_radius, TORUS, strict)
    est.value = np.asarray(est.value, dtype=float)
    return est


def rotation_vector_measure(L, mu, n_batches=10, rng=0):
    """Rotation vector ``int rho dmu`` of an invariant measure.

    For invariant ``mu`` the Birkhoff averages integrate to the mean one-step
    displacement ``int (F~(z~) - z~) dmu``, which is what is computed.
    Returns ``(vector, stderr)``.
    """
    F = L.time_one if hasattr(L, "time_one") else L
    if isinstance(mu, AtomicMeasure):
        d = F(mu.points) - mu.points
        return (np.sum(mu.weights[:, None] * d, axis=0) / 1.0,
                np.zeros(2))
    if isinstance(mu, GridDensity):
        P, w, b = mu.sample(n_batches, rng)
        d = F(P) - P
        ex, sx = batch_estimate(d[:, 0], w, b, n_batches)
        ey, sy = batch_estimate(d[:, 1], w, b, n_batches)
        return np.array([ex, ey]), np.array([sx, sy])
    # radially symmetric pieces rotate around their centers: no drift on a cover
    return np.zeros(2), np.zeros(2)


@dataclass
class KacReport:
    lhs: float
    rhs: float
    stderr: float
    horizon: int

    @property
    def difference(self):
        return self.lhs - self.rhs

    @property
    def passed(self):
        d = abs(self.difference)
        return d < 2 * self.stderr or d < 1e-12


def kac_check(F, U, mu, horizon, surface=TORUS, F_inv=None, n_batches=10, rng=0):
    """Finite-horizon Kac identity ``int_U min(tau, H) dmu = mu(U_{k<H} F^k(U))``.

    Both sides come from the same stratified samples of ``mu``: the left
    side from forward return times of samples in ``U``, the right side from
    membership ``F^{-k}(z) in U`` (which needs ``F_inv``).  The standard error
    is the batch-means error of the difference.
    """
    if F_inv is None:
        raise ValueError("the invaded region is computed with the inverse map")
    if isinstance(mu, AtomicMeasure):
        P, w, b, nb = mu.points, mu.weights, np.zeros(len(mu.points), int), 1
    else:
        P, w, b = mu.sample(n_batches, rng)
        nb = n_batches
    c = np.asarray(U.center, dtype=float)
    inU = lambda X: base_distance(X, c, surface) < U.radius
    in0 = inU(P)
    tau = np.full(len(P), horizon, dtype=float)
    fwd = P.copy()
    pending = in0.copy()
    for k in range(1, horizon):
        fwd = F(fwd)
        hit = pending & inU(fwd)
        tau[hit] = k
        pending &= ~hit
    back = P.copy()
    reached = in0.copy()
    for k in range(1, horizon):
        back = F_inv(back)
        reached |= inU(back)
    lhs_v = np.where(in0, tau, 0.0)
    rhs_v = reached.astype(float)
    lhs = float(np.bincount(b, lhs_v * w, nb).mean())
    rhs = float(np.bincount(b, rhs_v * w, nb).mean())
    _, se = batch_estimate(lhs_v - rhs_v, w, b, nb) if nb > 1 else (0.0, 0.0)
    return KacReport(lhs, rhs, se, horizon)


def return_times_power(F, U, z, q, max_steps, surface=TORUS):
    """Return times of ``z`` for ``F^q`` (used to check recurrence under powers)."""
    Fq = lambda p: _power(F, p, q)
    return first_return(Fq, U, z, max_steps, surface, verify=False)


def _power(F, p, q):
    for _ in range(q):
        p = F(p)
    return p


__all__ = ["Disk", "ReturnOrbit", "BirkhoffEstimate", "first_return", "rotation_number_annulus",
           "rotation_vector_torus", "rotation_vector_measure", "kac_check", "KacReport",
           "cauchy_converged", "return_times_power", "PLANE"]
