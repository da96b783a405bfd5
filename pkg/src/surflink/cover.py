"""Universal-cover geometry for the torus, the open annulus and the plane.

Points of the cover are arrays of shape ``(..., 2)``.  The torus is
``R^2 / Z^2``, the annulus is ``R/Z x R`` (first coordinate periodic) and the
plane is its own cover.  Deck transformations are integer translations.

Sign convention for intersection numbers: a transverse crossing of ``gamma``
by ``Gamma`` counts ``+1`` when ``(gamma', Gamma')`` is a positively oriented
frame of R^2 with its counterclockwise orientation, i.e. when
``det(gamma', Gamma') > 0``.  With this convention the intersection of a
path from ``a`` to ``b`` with a closed loop equals the winding number of the
loop around ``a`` minus its winding number around ``b``.
"""
import numpy as np

from .errors import CenterOnPath, DegenerateCrossing, RefinementExhausted

TORUS = "torus"
ANNULUS = "annulus"
PLANE = "plane"
SURFACES = (TORUS, ANNULUS, PLANE)

EPS_GEO = 1e-9


def check_surface(surface):
    if surface not in SURFACES:
        raise ValueError("unknown surface %r (expected one of %s)" % (surface, SURFACES))
    return surface


def periodic_mask(surface):
    """Boolean mask of the periodic coordinates."""
    check_surface(surface)
    return np.array([surface != PLANE, surface == TORUS])


def _as_points(p):
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 2:
        raise ValueError("points must have a trailing dimension of size 2")
    if not np.all(np.isfinite(p)):
        raise ValueError("non-finite coordinates")
    return p


def project(p, surface):
    """Covering map: reduce periodic coordinates to [0, 1)."""
    p = _as_points(p).copy()
    mask = periodic_mask(surface)
    p[..., mask] = np.mod(p[..., mask], 1.0)
    # np.mod can return 1.0 for tiny negative inputs
    p[..., mask] = np.where(p[..., mask] >= 1.0, 0.0, p[..., mask])
    return p


def deck_vector(alpha, surface):
    """Translation vector of a deck transformation.

    ``alpha`` is a pair of integers on the torus, an integer power of
    ``T: (x, y) -> (x + 1, y)`` on the annulus and ``0``/``None`` on the plane.
    """
    check_surface(surface)
    if surface == PLANE:
        if alpha is not None and np.any(np.asarray(alpha) != 0):
            raise ValueError("the plane has no nontrivial deck transformation")
        return np.zeros(2)
    if surface == ANNULUS:
        a = np.asarray(alpha)
        if a.ndim == 0:
            k = int(a)
        elif a.shape == (2,) and a[1] == 0:
            k = int(a[0])
        else:
            raise ValueError("annulus deck transformations are powers of T")
        if k != a.flat[0]:
            raise ValueError("deck powers must be integers")
        return np.array([float(k), 0.0])
    a = np.asarray(alpha)
    if a.shape != (2,) or np.any(a != np.round(a)):
        raise ValueError("torus deck transformations are integer pairs")
    return a.astype(float)


def apply_deck(alpha, p, surface=TORUS):
    """Translate cover points by the deck transformation ``alpha``."""
    return _as_points(p) + deck_vector(alpha, surface)


def wrap(d, surface):
    """Reduce displacement vectors to the representative nearest to 0."""
    d = np.array(d, dtype=float)
    mask = periodic_mask(surface)
    d[..., mask] -= np.round(d[..., mask])
    return d


def base_distance(p, q, surface):
    """Distance on the surface (flat metric lifted from the cover)."""
    return np.hypot(*np.moveaxis(wrap(np.asarray(p) - np.asarray(q), surface), -1, 0))


def lattice_points(surface, radius):
    """Deck translation vectors of norm at most ``radius``."""
    check_surface(surface)
    if surface == PLANE:
        return np.zeros((1, 2))
    n = int(np.ceil(radius))
    ks = np.arange(-n, n + 1)
    if surface == ANNULUS:
        v = np.stack([ks, np.zeros_like(ks)], axis=1)
    else:
        v = np.stack(np.meshgrid(ks, ks, indexing="ij"), axis=-1).reshape(-1, 2)
    return v[np.hypot(v[:, 0], v[:, 1]) <= radius].astype(float)


class SampledPath:
    """Piecewise-linear path through time-stamped samples."""

    def __init__(self, points, times=None, max_gap=None):
        points = _as_points(points)
        if points.ndim != 2 or len(points) < 2:
            raise ValueError("a sampled path needs at least two samples")
        if times is None:
            times = np.linspace(0.0, 1.0, len(points))
        times = np.asarray(times, dtype=float)
        if times.shape != (len(points),):
            raise ValueError("times must match points")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if max_gap is not None:
            gaps = np.hypot(*np.diff(points, axis=0).T)
            if np.any(gaps > max_gap):
                raise ValueError("consecutive samples exceed the refinement bound")
        self.points = points
        self.times = times
        self.points.flags.writeable = False
        self.times.flags.writeable = False

    def __len__(self):
        return len(self.points)

    @property
    def closed(self):
        return bool(np.hypot(*(self.points[-1] - self.points[0])) <= EPS_GEO)

    def reversed(self):
        return SampledPath(self.points[::-1], 1.0 - self.times[::-1])

    def concat(self, other):
        """Concatenate with a path starting where this one ends."""
        if np.hypot(*(other.points[0] - self.points[-1])) > EPS_GEO:
            raise ValueError("paths do not match end to start")
        t = np.concatenate([self.times / 2, 0.5 + other.times[1:] / 2])
        return SampledPath(np.concatenate([self.points, other.points[1:]]), t)


def _points_of(path):
    if isinstance(path, SampledPath):
        return path.points
    return _as_points(path)


def _cross(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def point_segment_distance(c, A, B):
    """Distance from point(s) ``c`` to segments ``[A, B]`` (broadcasting)."""
    s = B - A
    ls2 = np.sum(s * s, axis=-1)
    w = c - A
    u = np.where(ls2 > 0, np.sum(w * s, axis=-1) / np.where(ls2 > 0, ls2, 1.0), 0.0)
    u = np.clip(u, 0.0, 1.0)
    d = w - u[..., None] * s
    return np.hypot(d[..., 0], d[..., 1])


def swept_angle(points, center):
    """Total signed angle swept by a polyline around ``center``.

    Each segment contributes its exact subtended angle, so the result is the
    continuous angle change of the piecewise-linear path.
    """
    d = _points_of(points) - np.asarray(center, dtype=float)
    a, b = d[:-1], d[1:]
    return float(np.sum(np.arctan2(_cross(a, b), np.sum(a * b, axis=-1))))


def winding_number(loop, center, curve=None, tol=EPS_GEO, max_depth=40):
    """Winding number of a closed sampled loop around ``center``.

    If ``curve`` (a vectorized map ``t -> point`` on the loop's time range) is
    given, segments whose angular step reaches pi/2 are bisected by
    re-evaluating the curve.  Without it the loop is taken to be exactly
    piecewise linear.
    """
    pts = _points_of(loop)
    c = np.asarray(center, dtype=float)
    if np.hypot(*(pts[-1] - pts[0])) > tol:
        raise ValueError("loop is not closed")
    if curve is not None:
        times = loop.times if isinstance(loop, SampledPath) else np.linspace(0, 1, len(pts))
        for _ in range(max_depth):
            d = pts - c
            step = np.abs(np.arctan2(_cross(d[:-1], d[1:]), np.sum(d[:-1] * d[1:], axis=-1)))
            bad = np.flatnonzero(step >= np.pi / 2)
            if len(bad) == 0:
                break
            tm = 0.5 * (times[bad] + times[bad + 1])
            pm = np.asarray(curve(tm), dtype=float).reshape(-1, 2)
            times = np.insert(times, bad + 1, tm)
            pts = np.insert(pts, bad + 1, pm, axis=0)
        else:
            raise RefinementExhausted("angular steps stay above pi/2 after %d bisections" % max_depth)
    dist = point_segment_distance(c, pts[:-1], pts[1:])
    if np.min(dist) <= tol:
        raise CenterOnPath("center lies within %g of the loop" % tol)
    w = swept_angle(pts, c) / (2 * np.pi)
    return int(np.round(w))


def segment_crossings(p, q, A, B, eps=EPS_GEO):
    """Signed crossings of the segment ``[p, q]`` by the segments ``[A_i, B_i]``.

    Returns ``(sign, degenerate)`` arrays of length ``len(A)``.  A crossing
    within ``eps`` of a segment end, or a collinear overlap, is flagged as
    degenerate and contributes 0 to ``sign``.
    """
    p = np.asarray(p, dtype=float)
    r = np.asarray(q, dtype=float) - p
    s = B - A
    lr = np.hypot(*r)
    ls = np.hypot(s[:, 0], s[:, 1])
    qp = A - p
    denom = _cross(r, s)
    par = np.abs(denom) <= 1e-12 * lr * np.maximum(ls, 1e-300)
    safe = np.where(par, 1.0, denom)
    t = _cross(qp, s) / safe
    u = _cross(qp, r) / safe
    et = eps / lr
    eu = eps / np.maximum(ls, 1e-300)
    hit = ~par & (t > -et) & (t < 1 + et) & (u > -eu) & (u < 1 + eu)
    near = (np.abs(t) <= et) | (np.abs(1 - t) <= et) | (np.abs(u) <= eu) | (np.abs(1 - u) <= eu)
    degenerate = hit & near
    # collinear overlaps (including zero-length segments lying on [p, q])
    if np.any(par):
        off = np.abs(_cross(qp, r)) / lr <= eps
        ta = np.sum(qp * r, axis=-1) / lr ** 2
        tb = np.sum((B - p) * r, axis=-1) / lr ** 2
        lo, hi = np.minimum(ta, tb), np.maximum(ta, tb)
        overlap = (hi >= -et) & (lo <= 1 + et)
        degenerate |= par & off & overlap
    sign = np.where(hit & ~degenerate, np.sign(denom), 0.0).astype(int)
    return sign, degenerate


def intersection_number(gamma, Gamma, eps=EPS_GEO):
    """Algebraic intersection number ``gamma ^ Gamma`` of two polylines."""
    g = _points_of(gamma)
    G = _points_of(Gamma)
    A, B = G[:-1], G[1:]
    total = 0
    for p, q in zip(g[:-1], g[1:]):
        if np.hypot(*(q - p)) == 0:
            continue
        sign, deg = segment_crossings(p, q, A, B, eps)
        if np.any(deg):
            raise DegenerateCrossing("crossing within %g of a sample or tangential" % eps)
        total += int(sign.sum())
    return total


def lattice_crossings(p, q, A, B, surface, eps=EPS_GEO, chunk=100000, halfopen=False):
    """Crossings of ``[p, q]`` with every deck translate of the segments ``[A_i, B_i]``.

    Computes ``sum_v [p, q] ^ ([A_i, B_i] + v)`` over deck vectors ``v`` for
    each segment ``i``.  Returns ``(count, degenerate)`` per segment.

    With ``halfopen`` the segments ``[A_i, B_i]`` are read as consecutive
    pieces of polylines: a vertex on the line through ``p, q`` counts as lying
    on its left, so a polyline through a vertex is counted once and exactly.
    Only crossings within ``eps`` of ``p`` or ``q`` are then degenerate.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    per = periodic_mask(surface)
    n = len(A)
    count = np.zeros(n, dtype=int)
    degen = np.zeros(n, dtype=bool)
    if n == 0:
        return count, degen
    if not per.any():
        if halfopen:
            return _halfopen_crossings(p, q, np.asarray(A, float) - p, np.asarray(B, float) - p,
                                       eps)
        return segment_crossings(p, q, A, B, eps)
    gmin = np.minimum(p, q) - 2 * eps
    gmax = np.maximum(p, q) + 2 * eps
    r = q - p
    lr = np.hypot(*r)
    for start in range(0, n, chunk):
        a = A[start:start + chunk]
        b = B[start:start + chunk]
        smin = np.minimum(a, b)
        smax = np.maximum(a, b)
        lo = np.ceil(gmin - smax)
        hi = np.floor(gmax - smin)
        lo[:, ~per] = 0
        hi[:, ~per] = 0
        span = (hi - lo + 1).astype(int)
        good = np.all(span > 0, axis=1)
        if not good.any():
            continue
        mx = span[good].max(axis=0)
        ox, oy = np.meshgrid(np.arange(mx[0]), np.arange(mx[1]), indexing="ij")
        offs = np.stack([ox.ravel(), oy.ravel()], axis=1).astype(float)
        idx = np.flatnonzero(good)
        s = b[idx] - a[idx]
        ls = np.hypot(s[:, 0], s[:, 1])
        qp0 = a[idx] - p
        denom = _cross(r, s)
        par = np.abs(denom) <= 1e-12 * lr * np.maximum(ls, 1e-300)
        safe = np.where(par, 1.0, denom)
        v = lo[idx][:, None, :] + offs[None, :, :]
        valid = np.all(v <= hi[idx][:, None, :], axis=2)
        if halfopen:
            sg, dg = _halfopen_crossings(p, q, (a[idx] - p)[:, None, :] + v,
                                         (b[idx] - p)[:, None, :] + v, eps)
            count[start + idx] = (sg * valid).sum(axis=1)
            degen[start + idx] = (dg & valid).any(axis=1)
            continue
        qp = qp0[:, None, :] + v
        t = _cross(qp, s[:, None, :]) / safe[:, None]
        u = _cross(qp, r) / safe[:, None]
        et = eps / lr
        eu = (eps / np.maximum(ls, 1e-300))[:, None]
        hit = valid & ~par[:, None] & (t > -et) & (t < 1 + et) & (u > -eu) & (u < 1 + eu)
        near = (np.abs(t) <= et) | (np.abs(1 - t) <= et) | (np.abs(u) <= eu) | (np.abs(1 - u) <= eu)
        dg = hit & near
        if np.any(par):
            off = np.abs(_cross(qp, r)) / lr <= eps
            ta = np.sum(qp * r, axis=-1) / lr ** 2
            tb = np.sum((qp + s[:, None, :]) * r, axis=-1) / lr ** 2
            overlap = (np.maximum(ta, tb) >= -et) & (np.minimum(ta, tb) <= 1 + et)
            dg |= valid & par[:, None] & off & overlap
        sg = np.where(hit & ~dg, np.sign(denom)[:, None], 0.0)
        count[start + idx] = sg.sum(axis=1).astype(int)
        degen[start + idx] = dg.any(axis=1)
    return count, degen


def _halfopen_crossings(p, q, PA, PB, eps):
    """Signed crossings of ``[p, q]`` by segments with ends ``p + PA``, ``p + PB``."""
    r = np.asarray(q, dtype=float) - p
    lr = np.hypot(*r)
    sa = _cross(r, PA)
    sb = _cross(r, PB)
    la, lb = sa >= 0, sb >= 0
    change = la != lb
    denom = np.where(change, sb - sa, 1.0)   # nonzero where the side changes
    t = _cross(PA, PB - PA) / denom
    et = eps / lr
    hit = change & (t > -et) & (t < 1 + et)
    degenerate = hit & ((np.abs(t) <= et) | (np.abs(1 - t) <= et))
    sign = np.where(hit & ~degenerate, np.sign(denom), 0.0).astype(int)
    return sign, degenerate


def adaptive_samples(curve, n_curves, speed=None, clearance=None, n0=8, safety=0.9,
                     max_step=None, max_rounds=60, min_dt=1e-13):
    """Sample curves ``t -> curve(t, idx)`` on [0, 1] adaptively.

    ``speed`` bounds ``|d/dt curve|`` per curve.  With ``clearance`` (distance
    from a point to the obstacles the sampling must respect), a segment from
    ``P_a`` to ``P_b`` is accepted once ``speed * dt < safety * (c_a + c_b)``.
    The curve piece has length at most ``speed * dt``, so it lies in the
    ellipse with foci ``P_a, P_b`` and that major axis; the ellipse misses
    every obstacle ``p`` because ``|p - P_a| + |p - P_b| >= c_a + c_b``.  The
    straight-line homotopy to the chord stays in the ellipse, so the polyline
    is homotopic to the curve relative to its endpoints in the complement of
    the obstacles.  Without a speed bound the observed chord length (doubled)
    stands in for ``speed * dt``; that is a heuristic.

    Returns ``(idx, t, points, failed)`` sorted by curve then time.
    """
    n0 = np.broadcast_to(np.asarray(n0, dtype=int), (n_curves,))
    n0 = np.maximum(n0, 1)
    idx = np.repeat(np.arange(n_curves), n0 + 1)
    starts = np.concatenate([[0], np.cumsum(n0 + 1)[:-1]])
    k = np.arange(len(idx)) - np.repeat(starts, n0 + 1)
    t = k / np.repeat(n0, n0 + 1)
    pts = np.asarray(curve(t, idx), dtype=float)
    clr = None if clearance is None else clearance(pts, idx)
    failed = np.zeros(n_curves, dtype=bool)
    if speed is not None:
        speed = np.broadcast_to(np.asarray(speed, dtype=float), (n_curves,))
    for _ in range(max_rounds):
        same = idx[1:] == idx[:-1]
        dt = t[1:] - t[:-1]
        if speed is not None:
            est = speed[idx[:-1]] * dt
        else:
            est = 2.0 * np.hypot(*(pts[1:] - pts[:-1]).T)
        bad = np.zeros(len(dt), dtype=bool)
        m = np.ones(len(dt), dtype=int)
        if clr is not None:
            room = safety * (clr[1:] + clr[:-1])
            b = est >= room
            bad |= b
            with np.errstate(divide="ignore", invalid="ignore"):
                m = np.where(b, np.ceil(2 * est / np.maximum(room, 1e-300)), m)
        if max_step is not None:
            b = est > max_step
            bad |= b
            m = np.maximum(m, np.where(b, np.ceil(2 * est / max_step), 1))
        bad &= same
        tiny = bad & (dt < min_dt)
        if np.any(tiny):
            failed[idx[:-1][tiny]] = True
        bad &= ~failed[idx[:-1]]
        if not np.any(bad):
            break
        j = np.flatnonzero(bad)
        m = np.clip(m[j], 2, 1024).astype(int)
        rep = m - 1
        jj = np.repeat(j, rep)
        kk = np.arange(rep.sum()) - np.repeat(np.cumsum(rep) - rep, rep) + 1
        tn = t[jj] + dt[jj] * kk / np.repeat(m, rep)
        inew = idx[jj]
        pn = np.asarray(curve(tn, inew), dtype=float)
        t = np.concatenate([t, tn])
        idx = np.concatenate([idx, inew])
        pts = np.concatenate([pts, pn])
        if clr is not None:
            clr = np.concatenate([clr, clearance(pn, inew)])
        order = np.lexsort((t, idx))
        t, idx, pts = t[order], idx[order], pts[order]
        if clr is not None:
            clr = clr[order]
    else:
        same = idx[1:] == idx[:-1]
        failed[np.unique(idx[:-1][same])] |= False
        raise RefinementExhausted("adaptive sampling did not settle in %d rounds" % max_rounds)
    return idx, t, pts, failed


def group_bounds(idx, n):
    """Start/stop offsets of each curve in an ``idx`` array sorted by curve."""
    counts = np.bincount(idx, minlength=n)
    stop = np.cumsum(counts)
    return stop - counts, stop
