"""Example isotopies with known fixed points, invariant measures and constants.

Entries (see ``zoo``):

``shear``
    ``(x, y) -> (x, y + t sin 2 pi x)`` on the torus.
``cosine-flow``
    ``(x, y) -> (x + t cos(2 pi y) / 2 pi, y + t sin(2 pi y) / 2 pi)`` on the
    torus, with the measure of constant density on the lines ``y = 0`` and
    ``y = 1/2``.
``radial-fast``
    A disk map in polar coordinates combining a radial north-south map
    ``rho`` with the rotation ``alpha(r) (2^{1/r} + 1/2)``; the circles
    ``|z| = 1/k`` are invariant.  Lives in a planar chart.
``bump-annuli``
    Rotations of the balls ``B_k`` on the real axis by ``t alpha_k(r)`` turns,
    identity elsewhere.  Planar chart.
``pendulum``
    Hamiltonian flow of ``H = -cos(2 pi x) cos(2 pi y) / 2 pi`` on the torus.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .cover import ANNULUS, PLANE, TORUS
from .errors import UnknownZooEntry
from .isotopy import HamiltonianIsotopy, IdentityIsotopy, compose, speed_fn
from .measures import GridDensity, RadialClosedForm, RadialPiece

TWO_PI = 2 * np.pi


@dataclass
class ZooEntry:
    name: str
    iso: IdentityIsotopy
    fixed: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    summary: str = ""
    measure_factory: object = None
    extra: dict = field(default_factory=dict)

    def measure(self, **kw):
        if self.measure_factory is None:
            raise ValueError("%s has no stock invariant measure" % self.name)
        return self.measure_factory(**kw)


# smooth building blocks

def _f(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = x > 0
    out[m] = np.exp(-1.0 / x[m])
    return out


def smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    a = _f(x)
    b = _f(1.0 - np.asarray(x, dtype=float))
    return a / (a + b)


def bump(u, center, half_width):
    """C-infinity bump equal to 1 at ``center``, supported in ``center +- half_width``."""
    s = (np.asarray(u, dtype=float) - center) / half_width
    out = np.zeros_like(s)
    m = np.abs(s) < 1
    out[m] = np.exp(1.0 - 1.0 / (1.0 - s[m] ** 2))
    return out


# shear

def shear():
    def func(t, p):
        return np.stack([p[:, 0], p[:, 1] + t * np.sin(TWO_PI * p[:, 0])], axis=-1)

    def inv(p):
        return np.stack([p[:, 0], p[:, 1] - np.sin(TWO_PI * p[:, 0])], axis=-1)

    speed = speed_fn(lambda p: np.abs(np.sin(TWO_PI * p[:, 0])), sup=1.0)
    iso = IdentityIsotopy(TORUS, func, speed=speed, inverse=inv, name="shear")
    fixed = {"a%d" % k: np.array([float(k), 0.5]) for k in range(-2, 7)}
    fixed["z"] = np.array([0.25, 0.0])
    return ZooEntry(
        "shear", iso, fixed=fixed,
        constants={"triple_a0_ak_z": "k", "contractible_fixed": "x in Z/2"},
        summary="(x, y) -> (x, y + t sin 2 pi x) on T^2",
        measure_factory=lambda n=32: GridDensity.lebesgue_box(TORUS, n=(n, n)))


# cosine flow

def _invert_increasing(g, y, lo, hi, tol=1e-14, maxiter=200):
    """Solve ``g(x) = y`` for strictly increasing ``g`` on a bracket (bisection)."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        below = g(mid) < y
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.max(hi - lo, initial=0) < tol:
            break
    return 0.5 * (lo + hi)


def cosine_flow():
    c = 1.0 / TWO_PI

    def func(t, p):
        x, y = p[:, 0], p[:, 1]
        return np.stack([x + t * c * np.cos(TWO_PI * y), y + t * c * np.sin(TWO_PI * y)], -1)

    def inv(p):
        g = lambda y: y + c * np.sin(TWO_PI * y)
        # |g(y) - y| <= 1/(2 pi) brackets the root
        y = _invert_increasing(g, p[:, 1], p[:, 1] - 0.2, p[:, 1] + 0.2)
        return np.stack([p[:, 0] - c * np.cos(TWO_PI * y), y], axis=-1)

    iso = IdentityIsotopy(TORUS, func, speed=c, inverse=inv, name="cosine-flow")
    return ZooEntry(
        "cosine-flow", iso,
        constants={"speed": c, "rotation_vector_measure": (0.0, 0.0)},
        summary="(x + t cos(2 pi y)/2 pi, y + t sin(2 pi y)/2 pi) on T^2",
        measure_factory=lambda n=64: GridDensity.lines(TORUS, [0.0, 0.5], 0.5, n=n))


# radial-fast

RADIAL_CAP = 40.0  # cap on 1/r in 2^{1/r}; avoids overflow near the center


def _phi(x):
    return bump(x, 0.5, 0.5)


def _phi_slope():
    x = np.linspace(0, 1, 20001)
    return float(np.max(np.abs(np.gradient(_phi(x), x))))


class RadialFastMaps:
    """Radial profile functions of the radial-fast example."""

    def __init__(self, k_max=8):
        self.k_max = int(k_max)
        self.c = 0.5 / _phi_slope()

    def alpha(self, r):
        return 1.0 - smooth_step((np.asarray(r, float) - 0.5) / 0.2)

    def rho(self, r):
        r = np.asarray(r, dtype=float)
        out = r.copy()
        for k in range(2, self.k_max + 1):
            a, b = 1.0 / (k + 1), 1.0 / k
            m = (r > a) & (r < b)
            out[m] = r[m] + (b - a) * self.c * _phi((r[m] - a) / (b - a))
        return out

    def turns(self, r):
        """Turns per unit time at radius ``r`` (times the cutoff ``alpha``)."""
        r = np.asarray(r, dtype=float)
        inv = np.minimum(1.0 / np.maximum(r, 1e-300), RADIAL_CAP)
        return self.alpha(r) * (2.0 ** inv + 0.5)


def radial_fast(k_max=8):
    R = RadialFastMaps(k_max)

    def func(t, p):
        r = np.hypot(p[:, 0], p[:, 1])
        m = (r < 0.75) & (r > 0)
        out = p.copy()
        if np.any(m):
            rm, tm = r[m], t[m]
            th = np.arctan2(p[m, 1], p[m, 0])
            rr = (1 - tm) * rm + tm * R.rho(rm)
            th = th + TWO_PI * tm * R.turns(rm)
            out[m] = np.stack([rr * np.cos(th), rr * np.sin(th)], axis=-1)
        return out

    def speed(p):
        r = np.hypot(p[:, 0], p[:, 1])
        rho = R.rho(r)
        s = np.abs(rho - r) + TWO_PI * np.maximum(r, rho) * R.turns(r)
        return np.where(r < 0.75, s, 0.0)

    iso = IdentityIsotopy(PLANE, func, speed=speed_fn(speed), name="radial-fast",
                          params={"k_max": k_max})
    fixed = {"z0": np.array([0.0, 0.0]), "z1": np.array([0.8, 0.0])}
    for k in range(2, k_max + 1):
        fixed["c%d" % k] = np.array([1.0 / k, 0.0])

    def measure(k_max=k_max):
        pieces = [RadialPiece((0.0, 0.0), 1.0 / k, 1.0 / k, mass=2.0 ** (-(k - 1)),
                              rate=lambda r, k=k: 2.0 ** k + 0.5)
                  for k in range(2, k_max + 1)]
        return RadialClosedForm(pieces)

    return ZooEntry(
        "radial-fast", iso, fixed=fixed,
        constants={"circle_angle": lambda k: (2.0 ** (k + 1) + 1) * np.pi,
                   "triple_z0_z1_ck": lambda k: 2.0 ** k + 0.5},
        summary="rho(r) e^{2 pi i (theta + alpha(r)(2^{1/r} + 1/2))} in a disk chart",
        measure_factory=measure, extra={"maps": R})


# bump-annuli

S_HALF = 0.35
C_CENTER, C_HALF = 0.765, 0.215


def _s(u):
    return bump(u, 0.5, S_HALF)


def _c(u):
    return bump(u, C_CENTER, C_HALF)


class BumpProfiles:
    """Ball geometry and rotation profiles ``alpha_k`` of the bump example.

    ``alpha_k(r) = A_k s(r / r_k) + B_k c(r / r_k)`` with ``s(1/2) = 1``,
    ``c(1/2) = 0``; ``A_k`` fixes the value at ``r_k / 2`` and ``B_k`` is solved
    from ``2 pi int_0^{r_k} alpha_k(r) r dr = (-1)^k k``.
    """

    def __init__(self, k_max=8):
        self.k_max = int(k_max)
        k = np.arange(1, self.k_max + 1)
        self.k = k
        self.centers = 1.0 / (k + 1) + 1.0 / (2 * k * (k + 1))
        self.radii = 1.0 / (2 * (k + 1) ** 2)
        self.S1 = integrate.quad(lambda u: _s(np.array(u)) * u, 0.5 - S_HALF, 0.5 + S_HALF,
                                 epsabs=1e-14, epsrel=1e-13)[0]
        self.C1 = integrate.quad(lambda u: _c(np.array(u)) * u, C_CENTER - C_HALF,
                                 C_CENTER + C_HALF, epsabs=1e-14, epsrel=1e-13)[0]
        self.A = 2.0 * (-1.0) ** k * (k + 1.0) ** 5
        target = (-1.0) ** k * k / (TWO_PI * self.radii ** 2)
        self.B = (target - self.A * self.S1) / self.C1

    def alpha(self, k, r):
        i = k - 1
        u = np.asarray(r, dtype=float) / self.radii[i]
        return self.A[i] * _s(u) + self.B[i] * _c(u)

    def alpha_many(self, k, r):
        """``alpha`` with one ball index per radius."""
        i = np.asarray(k, dtype=int) - 1
        u = np.asarray(r, dtype=float) / self.radii[i]
        return self.A[i] * _s(u) + self.B[i] * _c(u)

    def flux(self, k):
        """``2 pi int alpha_k r dr`` by quadrature (should be ``(-1)^k k``)."""
        rk = self.radii[k - 1]
        f = lambda r: self.alpha(k, np.array(r)) * r
        pts = [rk * (0.5 - S_HALF), rk * (C_CENTER - C_HALF), rk * 0.5,
               rk * (0.5 + S_HALF), rk * (C_CENTER + C_HALF)]
        return TWO_PI * integrate.quad(f, 0, rk, points=pts, limit=200,
                                       epsabs=1e-13, epsrel=1e-12)[0]


def bump_annuli(k_max=8):
    B = BumpProfiles(k_max)

    order = np.argsort(B.centers - B.radii)   # balls are disjoint along the x-axis
    lo = (B.centers - B.radii)[order]

    def locate(p):
        i = order[np.clip(np.searchsorted(lo, p[:, 0], side="right") - 1, 0, B.k_max - 1)]
        dx = p[:, 0] - B.centers[i]
        r = np.hypot(dx, p[:, 1])
        m = r < B.radii[i]
        return i[m], m, dx[m], p[m, 1], r[m]

    def rotate(p, turns):
        i, m, dx, dy, r = locate(p)
        out = p.copy()
        ang = TWO_PI * turns(i, m) * B.alpha_many(i + 1, r)
        c, s = np.cos(ang), np.sin(ang)
        out[m, 0] = B.centers[i] + c * dx - s * dy
        out[m, 1] = s * dx + c * dy
        return out

    def func(t, p):
        return rotate(p, lambda i, m: np.broadcast_to(t, (len(p),))[m])

    def inv(p):
        return rotate(p, lambda i, m: -1.0)

    def speed(p):
        i, m, _, _, r = locate(p)
        out = np.zeros(len(p))
        out[m] = TWO_PI * r * np.abs(B.alpha_many(i + 1, r))
        return out

    iso = IdentityIsotopy(PLANE, func, speed=speed_fn(speed), inverse=inv, name="bump-annuli",
                          params={"k_max": k_max})
    fixed = {"z0": np.array([0.0, 0.0])}
    for k in range(1, k_max + 1):
        fixed["z%d" % k] = np.array([B.centers[k - 1], 0.0])
        fixed["w%d" % k] = np.array([B.centers[k - 1] + B.radii[k - 1] / 2, 0.0])

    def measure(k_max=k_max):
        pieces = [RadialPiece((B.centers[k - 1], 0.0), 0.0, B.radii[k - 1],
                              density=lambda r: TWO_PI * np.asarray(r),
                              rate=lambda r, k=k: B.alpha(k, r))
                  for k in range(1, k_max + 1)]
        return RadialClosedForm(pieces)

    def grid_measure(k_max=k_max, n_r=32):
        return GridDensity.polar_disks(PLANE, np.stack([B.centers[:k_max], np.zeros(k_max)], 1),
                                       B.radii[:k_max], n_r=n_r)

    return ZooEntry(
        "bump-annuli", iso, fixed=fixed,
        constants={
            "pair_zk_wk": lambda k: 2 * (-1) ** k * (k + 1) ** 5,
            "triple_z0_zk_wk": lambda k: 2 * (-1) ** (k + 1) * (k + 1) ** 5,
            "imu_z0_zk": lambda k: (-1) ** (k + 1) * k,
            "imu_zk1_zk": lambda k: (-1) ** (k + 1) * (2 * k + 1),
        },
        summary="balls B_k rotated by t alpha_k(r) turns in a disk chart",
        measure_factory=measure, extra={"profiles": B, "grid_measure": grid_measure})


# pendulum

def pendulum(h=1e-3):
    def H(t, p):
        return -np.cos(TWO_PI * p[..., 0]) * np.cos(TWO_PI * p[..., 1]) / TWO_PI

    def grad(t, p):
        x, y = TWO_PI * p[..., 0], TWO_PI * p[..., 1]
        return np.stack([np.sin(x) * np.cos(y), np.cos(x) * np.sin(y)], axis=-1)

    iso = HamiltonianIsotopy(TORUS, H, grad, h=h, lipschitz=TWO_PI, speed=1.0,
                             name="pendulum", params={"h": h})
    fixed = {
        "min0": np.array([0.0, 0.0]), "min1": np.array([0.5, 0.5]),
        "max0": np.array([0.0, 0.5]), "max1": np.array([0.5, 0.0]),
        "saddle0": np.array([0.25, 0.25]), "saddle1": np.array([0.25, 0.75]),
        "saddle2": np.array([0.75, 0.25]), "saddle3": np.array([0.75, 0.75]),
    }
    return ZooEntry(
        "pendulum", iso, fixed=fixed,
        constants={"H_min": -1 / TWO_PI, "H_max": 1 / TWO_PI, "H_saddle": 0.0},
        summary="Hamiltonian flow of H = -cos(2 pi x) cos(2 pi y) / 2 pi on T^2",
        measure_factory=lambda n=32: GridDensity.lebesgue_box(TORUS, n=(n, n)))


# small helpers used by tests and the disk-chain module

def rotation_loop():
    """Full rigid rotation ``z -> e^{2 pi i t} z`` of the plane."""
    def func(t, p):
        c, s = np.cos(TWO_PI * t), np.sin(TWO_PI * t)
        return np.stack([c * p[:, 0] - s * p[:, 1], s * p[:, 0] + c * p[:, 1]], axis=-1)
    speed = speed_fn(lambda p: TWO_PI * np.hypot(p[:, 0], p[:, 1]))
    return IdentityIsotopy(PLANE, func, speed=speed, inverse=lambda p: p.copy(), name="R")


def rigid_rotation(alpha, surface=ANNULUS):
    """``(x, y) -> (x + alpha t, y)``: rigid rotation of the annulus (or torus)."""
    alpha = float(alpha)

    def func(t, p):
        return np.stack([p[:, 0] + alpha * t, p[:, 1]], axis=-1)

    def inv(p):
        return np.stack([p[:, 0] - alpha, p[:, 1]], axis=-1)

    return IdentityIsotopy(surface, func, speed=abs(alpha), inverse=inv,
                           name="rotation(%g)" % alpha)


def translation_flow(beta, gamma=0.0):
    """Torus translation ``(x + beta t, y + gamma t)``."""
    v = np.array([beta, gamma], dtype=float)
    return IdentityIsotopy(TORUS, lambda t, p: p + t[:, None] * v, speed=float(np.hypot(*v)),
                           inverse=lambda p: p - v, name="translation(%g, %g)" % (beta, gamma))


def plane_rotation(theta, center=(0.0, 0.0)):
    """Rotation by ``theta t`` radians around ``center``."""
    c0 = np.asarray(center, dtype=float)

    def func(t, p):
        a = theta * t
        d = p - c0
        return c0 + np.stack([np.cos(a) * d[:, 0] - np.sin(a) * d[:, 1],
                              np.sin(a) * d[:, 0] + np.cos(a) * d[:, 1]], axis=-1)

    speed = speed_fn(lambda p: abs(theta) * np.hypot(*(p - c0).T))
    return IdentityIsotopy(PLANE, func, speed=speed, name="plane-rotation")


def standard_twist(K=1.5):
    """Standard map of the annulus as a composition of two shears.

    ``(x, y) -> (x + y', y')`` with ``y' = y + K sin(2 pi x) / 2 pi``; ``x`` is
    the periodic coordinate.
    """
    k = K / TWO_PI

    def kick(t, p):
        return np.stack([p[:, 0], p[:, 1] + t * k * np.sin(TWO_PI * p[:, 0])], axis=-1)

    def drift(t, p):
        return np.stack([p[:, 0] + t * p[:, 1], p[:, 1]], axis=-1)

    a = IdentityIsotopy(ANNULUS, kick, speed=abs(k), name="kick",
                        inverse=lambda p: np.stack([p[:, 0], p[:, 1] - k * np.sin(TWO_PI * p[:, 0])], 1))
    b = IdentityIsotopy(ANNULUS, drift, speed=speed_fn(lambda p: np.abs(p[:, 1])), name="drift",
                        inverse=lambda p: np.stack([p[:, 0] - p[:, 1], p[:, 1]], 1))
    iso = compose([a, b])
    iso.name = "standard-twist(K=%g)" % K
    return iso


def torus_chart(iso, center=(0.5, 0.5), scale=0.45, name=None):
    """Plant a planar isotopy supported in the unit disk into every cell of the torus.

    ``F~_t(p) = n + c + s G_t((p - n - c) / s)`` on the disk of radius ``s``
    around ``n + c`` (``n`` the integer cell of ``p``), identity elsewhere.
    """
    c = np.asarray(center, dtype=float)
    s = float(scale)

    def local(p):
        n = np.floor(p)
        u = (p - n - c) / s
        m = np.hypot(u[:, 0], u[:, 1]) < 1.0
        return n, u, m

    def func(t, p):
        n, u, m = local(p)
        out = p.copy()
        if np.any(m):
            out[m] = n[m] + c + s * iso.lift_eval(t[m], u[m])
        return out

    def inv(p):
        n, u, m = local(p)
        out = p.copy()
        if np.any(m):
            out[m] = n[m] + c + s * iso.inverse_time_one(u[m])
        return out

    def speed(p):
        n, u, m = local(p)
        out = np.zeros(len(p))
        if np.any(m):
            out[m] = s * iso.speed_bound(u[m])
        return out

    return IdentityIsotopy(TORUS, func, speed=speed_fn(speed), inverse=inv,
                           name=name or "torus-chart(%s)" % iso.name,
                           params={"center": tuple(c), "scale": s})


def chart_point(p, center=(0.5, 0.5), scale=0.45):
    """Image in the torus cell ``[0, 1]^2`` of a point of the planar chart."""
    return np.asarray(center, dtype=float) + scale * np.asarray(p, dtype=float)


_ENTRIES = {
    "shear": shear,
    "cosineflow": cosine_flow,
    "radialfast": radial_fast,
    "bumpannuli": bump_annuli,
    "hamiltonianpendulum": pendulum,
    "pendulum": pendulum,
}

ZOO_NAMES = ("shear", "cosine-flow", "radial-fast", "bump-annuli", "pendulum")


def zoo(name, **params):
    """Look up a zoo entry by name (case, dashes and underscores ignored)."""
    key = str(name).lower().replace("-", "").replace("_", "").replace(" ", "")
    try:
        factory = _ENTRIES[key]
    except KeyError:
        raise UnknownZooEntry("unknown zoo entry %r; known: %s" % (name, ", ".join(ZOO_NAMES)))
    return factory(**params)
