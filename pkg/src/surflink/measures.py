"""Finite invariant measures in three representations.

* ``AtomicMeasure``: weighted points (typically fixed or periodic points).
* ``GridDensity``: a density on cells (rectangles, segments or polar
  sectors); integrals are estimated by stratified sampling, one point per
  cell and batch.
* ``RadialClosedForm``: rotationally symmetric pieces (annuli, balls or
  circles) around centers that the isotopy rotates about.  Integrals of
  radial functions are done by adaptive quadrature.
"""
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .cover import check_surface, project


class AtomicMeasure:
    def __init__(self, points, weights, surface):
        self.surface = check_surface(surface)
        self.points = np.asarray(points, dtype=float).reshape(-1, 2)
        self.weights = np.asarray(weights, dtype=float).reshape(-1)
        if len(self.weights) != len(self.points):
            raise ValueError("one weight per atom")
        if np.any(self.weights < 0):
            raise ValueError("weights must be nonnegative")
        if self.weights.sum() <= 0:
            raise ValueError("total mass must be positive")

    kind = "atomic"

    @property
    def total_mass(self):
        return float(self.weights.sum())

    def integrate(self, f):
        """Exact weighted sum of ``f`` over the atoms."""
        vals = np.asarray(f(self.points), dtype=float)
        return float(np.sum(self.weights * vals)), 0.0


class GridDensity:
    """Piecewise-constant density on cells.

    Cells are rectangles ``[x0, x1] x [y0, y1]`` (degenerate ones are
    segments) or polar sectors around a center, with radii ``[r0, r1]`` and
    angles ``[a0, a1]`` in turns.  ``mass`` holds the measure of each cell.
    """

    kind = "grid"

    def __init__(self, surface, rects=None, rect_mass=None, sectors=None, sector_mass=None):
        self.surface = check_surface(surface)
        self.rects = np.zeros((0, 4)) if rects is None else np.asarray(rects, float).reshape(-1, 4)
        self.rect_mass = np.zeros(0) if rect_mass is None else np.asarray(rect_mass, float)
        self.sectors = (np.zeros((0, 6)) if sectors is None
                        else np.asarray(sectors, float).reshape(-1, 6))
        self.sector_mass = np.zeros(0) if sector_mass is None else np.asarray(sector_mass, float)
        if len(self.rect_mass) != len(self.rects) or len(self.sector_mass) != len(self.sectors):
            raise ValueError("one mass per cell")
        if np.any(self.rect_mass < 0) or np.any(self.sector_mass < 0):
            raise ValueError("cell masses must be nonnegative")
        if self.total_mass <= 0:
            raise ValueError("total mass must be positive")

    @property
    def n_cells(self):
        return len(self.rects) + len(self.sectors)

    @property
    def total_mass(self):
        return float(self.rect_mass.sum() + self.sector_mass.sum())

    @property
    def masses(self):
        return np.concatenate([self.rect_mass, self.sector_mass])

    @classmethod
    def lebesgue_box(cls, surface, box=((0, 0), (1, 1)), n=(32, 32), density=None):
        (x0, y0), (x1, y1) = box
        nx, ny = n
        xs = np.linspace(x0, x1, nx + 1)
        ys = np.linspace(y0, y1, ny + 1)
        X0, Y0 = np.meshgrid(xs[:-1], ys[:-1], indexing="ij")
        X1, Y1 = np.meshgrid(xs[1:], ys[1:], indexing="ij")
        rects = np.stack([X0, X1, Y0, Y1], axis=-1).reshape(-1, 4)
        area = (rects[:, 1] - rects[:, 0]) * (rects[:, 3] - rects[:, 2])
        if density is not None:
            mid = np.stack([(rects[:, 0] + rects[:, 1]) / 2, (rects[:, 2] + rects[:, 3]) / 2], 1)
            area = area * density(mid)
        return cls(surface, rects=rects, rect_mass=area)

    @classmethod
    def lines(cls, surface, ys, mass_per_line=1.0, n=64, x_range=(0.0, 1.0)):
        """Uniform densities on horizontal segments ``y = const``."""
        xs = np.linspace(x_range[0], x_range[1], n + 1)
        rects = [(a, b, y, y) for y in ys for a, b in zip(xs[:-1], xs[1:])]
        mass = np.full(len(rects), mass_per_line / n)
        return cls(surface, rects=rects, rect_mass=mass)

    @classmethod
    def polar_disks(cls, surface, centers, radii, n_r=32, n_theta=1, mass=None):
        """Lebesgue measure on disks, split into ``n_r`` annular cells each.

        ``mass`` rescales each disk's total mass (default: its area).
        """
        centers = np.asarray(centers, float).reshape(-1, 2)
        radii = np.asarray(radii, float).reshape(-1)
        secs, ms = [], []
        for i, (c, R) in enumerate(zip(centers, radii)):
            # equal-area radial strata
            r = R * np.sqrt(np.linspace(0, 1, n_r + 1))
            a = np.linspace(0, 1, n_theta + 1)
            tot = np.pi * R ** 2 if mass is None else mass[i]
            for j in range(n_r):
                for m in range(n_theta):
                    secs.append((c[0], c[1], r[j], r[j + 1], a[m], a[m + 1]))
                    ms.append(tot / (n_r * n_theta))
        return cls(surface, sectors=secs, sector_mass=ms)

    def _place(self, u_rect, u_sec):
        R = self.rects
        pr = np.stack([R[:, 0] + u_rect[:, 0] * (R[:, 1] - R[:, 0]),
                       R[:, 2] + u_rect[:, 1] * (R[:, 3] - R[:, 2])], axis=-1)
        S = self.sectors
        r = np.sqrt(S[:, 2] ** 2 + u_sec[:, 0] * (S[:, 3] ** 2 - S[:, 2] ** 2))
        a = 2 * np.pi * (S[:, 4] + u_sec[:, 1] * (S[:, 5] - S[:, 4]))
        ps = np.stack([S[:, 0] + r * np.cos(a), S[:, 1] + r * np.sin(a)], axis=-1)
        return np.concatenate([pr, ps])

    def sample(self, n_batches=10, rng=None, systematic=False):
        """Stratified samples: one point per cell in each batch.

        Returns ``(points, weights, batch)``; ``weights`` are cell masses, so
        ``sum(weights * f)`` over one batch is an unbiased estimate of the
        integral.  With ``systematic=True`` all cells of a batch share the
        same position inside the cell.
        """
        rng = np.random.default_rng(rng)
        pts, w, b = [], [], []
        for k in range(n_batches):
            if systematic:
                u = rng.random(2)
                ur = np.broadcast_to(u, (len(self.rects), 2))
                us = np.broadcast_to(u, (len(self.sectors), 2))
            else:
                ur = rng.random((len(self.rects), 2))
                us = rng.random((len(self.sectors), 2))
            pts.append(self._place(ur, us))
            w.append(self.masses)
            b.append(np.full(self.n_cells, k))
        return np.concatenate(pts), np.concatenate(w), np.concatenate(b)

    def integrate(self, f, n_batches=10, rng=None, systematic=False):
        """Batch-means estimate of ``int f dmu`` and its standard error."""
        P, w, b = self.sample(n_batches, rng, systematic)
        vals = np.asarray(f(P), dtype=float)
        return batch_estimate(vals, w, b, n_batches)


def batch_estimate(vals, weights, batch, n_batches):
    """Mean of per-batch weighted sums and the batch-means standard error."""
    sums = np.bincount(batch, weights=vals * weights, minlength=n_batches)
    est = float(sums.mean())
    se = float(sums.std(ddof=1) / np.sqrt(n_batches)) if n_batches > 1 else np.nan
    return est, se


@dataclass
class RadialPiece:
    """Rotationally symmetric piece of a measure around ``center``.

    ``density(r)`` is the mass per unit radius on ``[r0, r1]``; a circle is
    given by ``r0 == r1`` and its total ``mass``.  ``rate(r)`` is the number
    of turns per iterate of the circle of radius ``r`` around ``center``.
    """
    center: tuple
    r0: float
    r1: float
    density: object = None
    mass: float = 0.0
    rate: object = None

    @property
    def is_circle(self):
        return self.r0 == self.r1

    def total_mass(self):
        if self.is_circle:
            return float(self.mass)
        return float(integrate.quad(self.density, self.r0, self.r1, limit=200)[0])


class RadialClosedForm:
    kind = "radial"

    def __init__(self, pieces, surface="plane"):
        self.surface = check_surface(surface)
        self.pieces = list(pieces)
        if not self.pieces:
            raise ValueError("no pieces")

    @property
    def total_mass(self):
        return float(sum(p.total_mass() for p in self.pieces))

    def sample_circles(self, n_r=16, n_theta=16):
        """Points spread over the supports (for invariance checks)."""
        out = []
        for p in self.pieces:
            rs = [p.r0] if p.is_circle else np.linspace(p.r0, p.r1, n_r + 2)[1:-1]
            th = 2 * np.pi * np.arange(n_theta) / n_theta
            for r in rs:
                out.append(np.stack([p.center[0] + r * np.cos(th),
                                     p.center[1] + r * np.sin(th)], axis=-1))
        return np.concatenate(out)


def invariance_residual(measure, F, n_test=64, rng=0, n_batches=10):
    """Invariance diagnostics ``max |mu(F^{-1}(A)) - mu(A)|`` over test sets ``A``.

    Test sets are random axis-parallel boxes; for ``RadialClosedForm`` the
    residual is instead the largest radial drift of the support under ``F``.
    Returns ``(residual, stderr)``.
    """
    rng = np.random.default_rng(rng)
    if isinstance(measure, RadialClosedForm):
        worst = 0.0
        for piece in measure.pieces:
            tmp = RadialClosedForm([piece], measure.surface)
            P = tmp.sample_circles()
            c = np.asarray(piece.center)
            d = np.abs(np.hypot(*(F(P) - c).T) - np.hypot(*(P - c).T))
            worst = max(worst, float(d.max()))
        return worst, 0.0
    if isinstance(measure, AtomicMeasure):
        P, w = measure.points, measure.weights
        b = np.zeros(len(P), dtype=int)
        nb = 1
    else:
        P, w, b = measure.sample(n_batches, rng)
        nb = n_batches
    # compare on the surface, not on the cover
    P = project(P, measure.surface)
    Q = project(F(P), measure.surface)
    lo = np.min(P, axis=0)
    hi = np.max(P, axis=0)
    span = np.maximum(hi - lo, 1e-3)
    worst, worst_se = 0.0, 0.0
    for _ in range(n_test):
        a = lo + rng.random(2) * span
        size = span * (0.1 + 0.4 * rng.random(2))
        inA = lambda X: np.all((X >= a) & (X <= a + size), axis=1).astype(float)
        diff = inA(Q) - inA(P)
        est, se = batch_estimate(diff, w, b, nb) if nb > 1 else (float(np.sum(diff * w)), 0.0)
        if abs(est) > worst:
            worst, worst_se = abs(est), se
    return worst, worst_se
