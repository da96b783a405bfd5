"""Linking numbers of fixed and recurrent points.

Conventions: ``i(F~; a~, b~, z)`` is the winding of the orbit of ``z``
around ``a~`` minus its winding around ``b~`` (counted over all deck
translates).  It is computed as the algebraic intersection of a reference
path ``gamma`` from ``a~`` to ``b~`` with the closed-up trajectory blocks of
``z``: the trajectory up to the n-th return to a disk ``U``, followed by the
chord inside the lift of ``U`` back to the matching lift of ``z``.
Counting ``(gamma - v) ^ Gamma`` over deck vectors ``v`` is the same as
counting ``gamma ^ (Gamma + v)``, which ``lattice_crossings`` does in one go.
"""
from dataclasses import dataclass, field

import numpy as np

from .cover import (EPS_GEO, PLANE, adaptive_samples, base_distance, lattice_crossings,
                    lattice_points, periodic_mask, segment_crossings, swept_angle)
from .errors import (Collision, DegenerateCrossing, IdentityMismatch, NotConverged, NotFixed,
                     PathThroughPuncture, RefinementExhausted)
from .isotopy import LiftedIsotopy, lift, mobius_normalize
from .recurrence import BirkhoffEstimate, Disk, cauchy_converged


@dataclass
class LinkingRecord:
    kind: str
    value: float
    deck_terms: list = field(default_factory=list)
    truncation_radius: float = 0.0
    estimate: BirkhoffEstimate = None
    info: dict = field(default_factory=dict)

    def __int__(self):
        return int(round(self.value))


def _as_lifted(L):
    if isinstance(L, LiftedIsotopy):
        return L
    return lift(L)


def _check_fixed(L, pts, tol=1e-9):
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    moved = np.hypot(*(L.time_one(pts) - pts).T)
    if np.any(moved > tol):
        raise NotFixed("point moves by %.3g under the lifted time-one map" % moved.max())


def _deck_round(d, surface):
    d = np.asarray(d, dtype=float)
    v = np.round(d)
    v[..., ~periodic_mask(surface)] = 0.0
    return v


# planar linking of two fixed points

def planar_linking(iso, z, z2, tol=1e-9, eps=EPS_GEO):
    """Degree of ``t -> F~_t(z2) - F~_t(z)`` over one period (both points fixed)."""
    z = np.asarray(z, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    if np.hypot(*(z2 - z)) <= eps:
        raise ValueError("points must be distinct")
    _check_fixed(iso, np.stack([z, z2]), tol)
    pair = np.stack([z, z2])

    def curve(t, idx):
        tt = np.repeat(t, 2)
        q = iso.lift_eval(tt, np.tile(pair, (len(t), 1))).reshape(-1, 2, 2)
        return q[:, 1] - q[:, 0]

    clearance = lambda d, idx: np.hypot(d[:, 0], d[:, 1])
    sp = iso.speed_bound(pair) if iso.has_speed else np.array([np.inf])
    speed = float(np.sum(sp)) if np.all(np.isfinite(sp)) else None
    d0 = np.hypot(*(z2 - z))
    n0 = 16 if speed is None else int(np.clip(np.ceil(speed / (0.7 * d0)), 8, 5_000_000))
    try:
        _, _, d, failed = adaptive_samples(curve, 1, speed=speed, clearance=clearance, n0=n0)
    except RefinementExhausted as exc:
        raise Collision("trajectories come within sampling resolution: %s" % exc)
    dist = np.hypot(d[:, 0], d[:, 1])
    if failed.any() or dist.min() < eps:
        raise Collision("the two trajectories meet (min distance %.3g)" % dist.min())
    return int(np.round(swept_angle(d, (0.0, 0.0)) / (2 * np.pi)))


def deck_summed_linking(L, z, z2, boundary_check=True):
    """``I(F~; z, z2) = sum_v i(F~; z~, z2~ + v)`` over deck vectors ``v``.

    Terms with ``|z2~ + v - z~| <= 3K`` are summed; a band of width 1 beyond the
    truncation radius is evaluated as well and must contribute nothing.
    """
    L = _as_lifted(L)
    z = np.asarray(z, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    R = 3.0 * L.K
    band = R + 1.0 if boundary_check else R
    vs = lattice_points(L.surface, band + np.hypot(*(z2 - z)) + 1.0)
    dist = np.hypot(*(z2 + vs - z).T)
    terms = []
    total = 0
    for v, d in sorted(zip(map(tuple, vs), dist), key=lambda x: (x[1], x[0])):
        if d > band or d <= EPS_GEO:
            continue
        val = planar_linking(L, z, z2 + np.array(v))
        if d > R:
            if val != 0:
                raise IdentityMismatch("term at distance %.3g beyond 3K = %.3g is %d" % (d, R, val))
            continue
        terms.append((tuple(int(c) for c in v), val))
        total += val
    return LinkingRecord("DeckSummed", total, terms, R)


# crossing counters for closed-up trajectory blocks

class _SegmentCounter:
    """Signed crossings of trajectory segments with reference paths (all deck translates)."""

    def __init__(self, surface, pairs, bend=None):
        self.surface = surface
        self.pairs = [(np.asarray(a, float), np.asarray(b, float)) for a, b in pairs]
        self.paths = []
        for a, b in self.pairs:
            if bend is None:
                self.paths.append(np.stack([a, b]))
            else:
                d = b - a
                n = np.array([-d[1], d[0]])
                self.paths.append(np.stack([a, (a + b) / 2 + bend * n, b]))
        self.punctures = np.unique(np.concatenate([np.stack(p) for p in self.pairs]), axis=0)

    @property
    def n_pairs(self):
        return len(self.pairs)

    def count(self, owner, A, B, n_owner):
        out, bad = self.count_flagged(owner, A, B, n_owner)
        if bad.any():
            raise DegenerateCrossing("trajectory crosses the reference path degenerately")
        return out

    def count_flagged(self, owner, A, B, n_owner):
        """Like ``count``, but returns the owners with a degenerate crossing instead."""
        out = np.zeros((n_owner, self.n_pairs))
        bad = np.zeros(n_owner, dtype=bool)
        for j, path in enumerate(self.paths):
            for p, q in zip(path[:-1], path[1:]):
                c, deg = lattice_crossings(p, q, A, B, self.surface, halfopen=True)
                if np.any(deg):
                    bad[owner[deg]] = True
                out[:, j] += np.bincount(owner, weights=c, minlength=n_owner)
        return out, bad

    def clearance(self, X):
        d = np.full(len(X), np.inf)
        for p in self.punctures:
            d = np.minimum(d, base_distance(X, p, self.surface))
        return d


class _RayCounter:
    """Windings of closed planar loops around punctures, by horizontal rays.

    Crossings of the ray ``{p + s e_x, s > 0}`` are counted with the half-open
    rule, so the per-puncture counts of a closed loop are its winding numbers.
    For a pair ``(a, b)`` the count ``w_a - w_b`` equals the intersection of any
    path from ``a`` to ``b`` with the loop.
    """

    def __init__(self, pairs, punctures=None):
        self.surface = PLANE
        self.pairs = [(np.asarray(a, float), np.asarray(b, float)) for a, b in pairs]
        if punctures is None:
            punctures = np.unique(np.concatenate([np.stack(p) for p in self.pairs]), axis=0)
        self.punctures = np.asarray(punctures, dtype=float).reshape(-1, 2)
        idx = lambda x: int(np.flatnonzero(np.all(np.abs(self.punctures - x) < 1e-15, axis=1))[0])
        self.ia = np.array([idx(a) for a, _ in self.pairs])
        self.ib = np.array([idx(b) for _, b in self.pairs])
        ys = np.unique(self.punctures[:, 1])
        self._levels = [(y, np.flatnonzero(self.punctures[:, 1] == y)) for y in ys]

    @property
    def n_pairs(self):
        return len(self.pairs)

    def windings(self, owner, A, B, n_owner):
        W = np.zeros((n_owner, len(self.punctures)))
        # punctures on a common horizontal line share their crossing points
        for y, cols in self._levels:
            ya = A[:, 1] - y
            yb = B[:, 1] - y
            up = (ya <= 0) & (yb > 0)
            down = (yb <= 0) & (ya > 0)
            m = np.flatnonzero(up | down)
            if not len(m):
                continue
            s = ya[m] / (ya[m] - yb[m])
            xc = A[m, 0] + s * (B[m, 0] - A[m, 0])
            sgn = np.where(up[m], 1.0, -1.0)
            for j in cols:
                w = sgn * (xc > self.punctures[j, 0])
                W[:, j] += np.bincount(owner[m], weights=w, minlength=n_owner)
        return W

    def count(self, owner, A, B, n_owner):
        W = self.windings(owner, A, B, n_owner)
        return W[:, self.ia] - W[:, self.ib]

    def count_flagged(self, owner, A, B, n_owner):
        return self.count(owner, A, B, n_owner), np.zeros(n_owner, dtype=bool)

    def clearance(self, X):
        d2 = np.full(len(X), np.inf)
        for p in self.punctures:
            d2 = np.minimum(d2, (X[:, 0] - p[0]) ** 2 + (X[:, 1] - p[1]) ** 2)
        return np.sqrt(d2)


@dataclass
class BlockResult:
    values: np.ndarray        # (N, n_pairs) last partial averages L_n / tau_n
    converged: np.ndarray     # (N,)
    status: np.ndarray        # 0 converged, 1 horizon, 2 no return, 3 sampling failed,
                              # 4 degenerate crossing
    n_returns: np.ndarray
    tau: np.ndarray
    history: list
    last_deck: np.ndarray


def linking_blocks(iso, counter, starts, radii, n_max=2000, tol=1e-3, m=5, relative=True,
                   min_returns=None, flag_degenerate=False):
    """Def.-4.1 partial averages ``L_n / tau_n`` for a batch of starting lifts.

    ``iso`` must fix every puncture of ``counter`` along the whole isotopy.
    Each sample ``i`` uses the disk ``U_i`` of radius ``radii[i]`` around its
    own starting point.  Iteration stops per sample once the last ``m``
    partial averages agree to ``tol`` (relative to ``max(1, |value|)`` when
    ``relative``).  With ``flag_degenerate`` a degenerate crossing stops only
    the sample it belongs to (status 4); otherwise it raises.
    """
    surface = counter.surface
    starts = np.asarray(starts, dtype=float).reshape(-1, 2)
    N = len(starts)
    radii = np.broadcast_to(np.asarray(radii, dtype=float), (N,)).copy()
    k = counter.n_pairs
    P = starts.copy()
    acc = np.zeros((N, k))
    tau = np.zeros(N, dtype=int)
    hist = [[] for _ in range(N)]
    running = np.ones(N, dtype=bool)
    status = np.full(N, 1)
    nret = np.zeros(N, dtype=int)
    last_deck = np.zeros((N, 2))
    min_returns = m if min_returns is None else min_returns
    clearance = lambda X, idx: counter.clearance(X)
    for _ in range(int(n_max)):
        act = np.flatnonzero(running)
        if len(act) == 0:
            break
        o, t, pts, failed = iso.polyline(P[act], clearance=clearance)
        seg = o[1:] == o[:-1]
        c, bad = counter.count_flagged(o[:-1][seg], pts[:-1][seg], pts[1:][seg], len(act))
        acc[act] += c
        if bad.any():
            if not flag_degenerate:
                raise DegenerateCrossing("trajectory crosses the reference path degenerately")
            failed = failed | bad
            status[act[bad]] = 4
        last = np.r_[np.flatnonzero(o[1:] != o[:-1]), len(o) - 1]
        P[act] = pts[last]
        tau[act] += 1
        if np.any(failed):
            bad = act[failed]
            status[bad] = np.where(status[bad] == 4, 4, 3)
            running[bad] = False
        ok = act[~failed]
        back = base_distance(P[ok], starts[ok], surface) < radii[ok]
        ret = ok[back]
        if len(ret) == 0:
            continue
        v = _deck_round(P[ret] - starts[ret], surface)
        target = starts[ret] + v
        chord, bad = counter.count_flagged(np.arange(len(ret)), P[ret], target, len(ret))
        if bad.any():
            if not flag_degenerate:
                raise DegenerateCrossing("closing chord crosses the reference path degenerately")
            status[ret[bad]] = 4
            running[ret[bad]] = False
            ret, chord = ret[~bad], chord[~bad]
            if len(ret) == 0:
                continue
            v, target = v[~bad], target[~bad]
        part = (acc[ret] + chord) / tau[ret, None]
        nret[ret] += 1
        last_deck[ret] = v
        for i, r in enumerate(ret):
            hist[r].append(part[i])
            if nret[r] >= min_returns and cauchy_converged(hist[r], tol, m, relative):
                running[r] = False
                status[r] = 0
    status[(nret == 0) & (status == 1)] = 2
    vals = np.array([h[-1] if h else np.full(k, np.nan) for h in hist])
    return BlockResult(vals, status == 0, status, nret, tau, hist, last_deck)


def _run_with_perturbation(run, make_counter, seed=0):
    """Run with a straight reference path; on a degenerate crossing bend it once."""
    try:
        return run(make_counter(None)), False
    except DegenerateCrossing:
        rng = np.random.default_rng(seed)
        bend = (1e-4 + 1e-4 * rng.random()) * (1 if rng.random() < 0.5 else -1)
        try:
            return run(make_counter(bend)), True
        except DegenerateCrossing as exc:
            raise PathThroughPuncture("reference path still degenerate after perturbation: %s"
                                      % exc)


def _requires_fixed_punctures(L, pts):
    if not L.fixes(pts):
        raise ValueError("the isotopy must fix the punctures for all t; normalize it first")


# triple linking

def triple_linking_fixed(L, a, b, z, cross_check=True, seed=0):
    """``i(F~; a~, b~, z)`` for a fixed point ``z`` (read as its own lift).

    Computed from one closed-up trajectory block.  For a contractible ``z``
    the difference ``I(F~; a, z) - I(F~; b, z)`` of deck-summed linkings is
    computed as well and must agree.
    """
    L = _as_lifted(L)
    a, b, z = (np.asarray(x, dtype=float) for x in (a, b, z))
    _check_fixed(L, np.stack([a, b]))
    Fz = L.time_one(z[None])[0]
    v0 = _deck_round(Fz - z, L.surface)
    if np.abs(Fz - z - v0).max() > 1e-9:
        raise NotFixed("z is not fixed by the time-one map")
    if min(base_distance(z, a, L.surface), base_distance(z, b, L.surface)) <= EPS_GEO:
        raise ValueError("z must lie off the projections of a~ and b~")
    if L.fixes(np.stack([a, b])):
        def run(counter):
            return linking_blocks(L, counter, z[None], 1e-8, n_max=1, tol=np.inf,
                                  m=1, min_returns=1)
        res, bent = _run_with_perturbation(
            run, lambda bend: _SegmentCounter(L.surface, [(a, b)], bend), seed)
        if res.status[0] == 3:
            raise Collision("trajectory of z could not be sampled away from the punctures")
        value = int(np.round(res.values[0, 0]))
    elif L.surface == PLANE:
        N = mobius_normalize(L.iso, [a, b])
        return triple_linking_fixed(LiftedIsotopy(N, L.K), a, b, z, cross_check, seed)
    else:
        value, bent = _triple_fixed_general(L, a, b, z, v0, seed)
    rec = LinkingRecord("TripleFixed", value, info={"deck": tuple(v0), "perturbed": bent})
    if cross_check and np.all(v0 == 0):
        Ia = deck_summed_linking(L, a, z).value
        Ib = deck_summed_linking(L, b, z).value
        rec.info["deck_sum_difference"] = Ia - Ib
        if Ia - Ib != value:
            raise IdentityMismatch("block count %d differs from I(a,z) - I(b,z) = %d"
                                   % (value, Ia - Ib))
    return rec


def _triple_fixed_general(L, a, b, z, v0, seed, n_t=4096):
    """Fixed-point triple linking when ``a~, b~`` move during the isotopy.

    The normalized trajectory of ``z~ + v`` is ``M_t(F~_t(z~)) + lambda_t v`` with
    ``M_t`` the complex affine map sending ``F~_t(a~), F~_t(b~)`` back to ``a~, b~``
    and ``lambda_t = (b~ - a~) / (F~_t(b~) - F~_t(a~))``.
    """
    ts = np.linspace(0, 1, n_t + 1)
    Pz = L.lift_eval(ts, np.broadcast_to(z, (len(ts), 2)))
    Pa = L.lift_eval(ts, np.broadcast_to(a, (len(ts), 2)))
    Pb = L.lift_eval(ts, np.broadcast_to(b, (len(ts), 2)))
    ca = Pa[:, 0] + 1j * Pa[:, 1]
    cb = Pb[:, 0] + 1j * Pb[:, 1]
    lam = complex(*(b - a)) / (cb - ca)
    base = complex(*a) + lam * (Pz[:, 0] + 1j * Pz[:, 1] - ca)
    span = np.abs(base - complex(*a)).max() + np.hypot(*(b - a))
    R = span / np.abs(lam).min() + 2.0
    vs = lattice_points(L.surface, R)
    gamma = [(a, b)]

    def count(bend):
        counter = _SegmentCounter(PLANE, gamma, bend)
        path = counter.paths[0]
        total = 0
        for v in vs:
            q = base + lam * complex(*v)
            Q = np.stack([q.real, q.imag], axis=-1)
            # close with the (tiny) chord back to z + v + v0
            Q = np.vstack([Q, z + v + v0])
            for p0, p1 in zip(path[:-1], path[1:]):
                c, deg = segment_crossings(p0, p1, Q[:-1], Q[1:])
                if np.any(deg):
                    raise DegenerateCrossing("degenerate crossing")
                total += int(c.sum())
        return total

    return _run_with_perturbation(count, lambda bend: bend, seed)


def default_radius(counter, z, frac=0.9, cap=0.45):
    z = np.asarray(z, dtype=float).reshape(-1, 2)
    return np.minimum(frac * counter.clearance(z), cap)


def triple_linking_recurrent(L, a, b, z, U=None, n_max=2000, tol=1e-3, relative=True,
                             strict=False, seed=0):
    """Estimate ``i(F~; a~, b~, z)`` for a recurrent point ``z`` as ``L_n / tau_n``.

    ``U`` defaults to the disk around ``z`` of radius 0.9 times its distance
    to the nearest puncture translate.
    """
    L = _as_lifted(L)
    a, b, z = (np.asarray(x, dtype=float) for x in (a, b, z))
    if not L.fixes(np.stack([a, b])):
        if L.surface == PLANE:
            L = LiftedIsotopy(mobius_normalize(L.iso, [a, b]), L.K)
        else:
            _requires_fixed_punctures(L, np.stack([a, b]))

    def make(bend):
        return _SegmentCounter(L.surface, [(a, b)], bend)

    probe = make(None)
    if U is None:
        U = Disk(tuple(z), float(default_radius(probe, z)[0]))
    if np.hypot(*(np.asarray(U.center) - z)) > 1e-12:
        raise ValueError("U must be centered at z")
    if probe.clearance(z[None])[0] <= U.radius:
        raise ValueError("U must avoid the punctures")

    def run(counter):
        return linking_blocks(L, counter, z[None], U.radius, n_max=n_max, tol=tol,
                              relative=relative)

    res, bent = _run_with_perturbation(run, make, seed)
    hist = [float(h[0]) for h in res.history[0]]
    est = BirkhoffEstimate(float(res.values[0, 0]), int(res.tau[0]), hist[-5:],
                           bool(res.converged[0]), tol)
    if res.status[0] == 2:
        from .errors import NoReturn
        raise NoReturn("z did not return to U within %d iterates" % n_max)
    if strict and not est.converged:
        raise NotConverged("L_n / tau_n did not settle within %g" % tol)
    kind = "multi-loop" if np.all(res.last_deck[0] == 0) else "multi-path"
    return LinkingRecord("TripleRecurrent", est.value, estimate=est,
                         truncation_radius=3 * L.K,
                         info={"returns": int(res.n_returns[0]), "U": U, "block": kind,
                               "perturbed": bent})


def pointwise_linking(L, pairs, points, radii=None, n_max=2000, tol=1e-3, relative=True,
                      counter="auto", punctures=None, seed=0):
    """Triple linkings of many points against many puncture pairs at once.

    Returns a ``BlockResult`` with one row per point and one column per pair.
    Planar problems use ray windings (one pass per puncture); other surfaces
    use reference segments.
    """
    L = _as_lifted(L)
    pts_all = np.unique(np.concatenate([np.stack(p) for p in pairs]), axis=0)
    _requires_fixed_punctures(L, pts_all)
    if counter == "auto":
        counter = "ray" if L.surface == PLANE else "segment"
    if counter == "ray":
        make = lambda bend: _RayCounter(pairs, punctures)
    else:
        make = lambda bend: _SegmentCounter(L.surface, pairs, bend)
    probe = make(None)
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if radii is None:
        radii = default_radius(probe, points)
    run = lambda c, P, r: linking_blocks(L, c, P, r, n_max=n_max, tol=tol, relative=relative,
                                         flag_degenerate=True)
    radii = np.broadcast_to(np.asarray(radii, dtype=float), (len(points),))
    res = run(make(None), points, radii)
    redo = np.flatnonzero(res.status == 4)
    if len(redo) and counter == "segment":
        # bend the reference paths once and rerun only the affected samples
        rng = np.random.default_rng(seed)
        bend = (1e-4 + 1e-4 * rng.random()) * (1 if rng.random() < 0.5 else -1)
        sub = run(make(bend), points[redo], radii[redo])
        for f in ("values", "converged", "status", "n_returns", "tau", "last_deck"):
            getattr(res, f)[redo] = getattr(sub, f)
        for i, r in enumerate(redo):
            res.history[r] = sub.history[i]
    return res


def trajectory_angle(L, z, center):
    """Total angle swept by ``t -> F~_t(z)`` around ``center`` (kept fixed)."""
    c = np.asarray(center, dtype=float)
    z = np.asarray(z, dtype=float)
    clear = lambda X, idx: np.hypot(X[:, 0] - c[0], X[:, 1] - c[1])
    o, _, pts, failed = L.polyline(z[None], clearance=clear)
    if np.any(failed):
        raise Collision("trajectory could not be sampled away from the center")
    return float(swept_angle(pts, c))


# two-puncture rotation number

def two_puncture_rotation(L, a, b, z):
    """Rotation number of ``z~`` in the annulus ``S^2 - {a~, b~}``.

    Left side: normalize the isotopy at ``a~, b~, infinity`` and count
    crossings of the closed trajectory of ``z~`` with a path from ``a~`` to
    ``b~``.  Right side: ``i(F~; a~, z~) - i(F~; b~, z~)`` from planar linkings of
    the original isotopy.  The two must agree.
    """
    L = _as_lifted(L)
    a, b, z = (np.asarray(x, dtype=float) for x in (a, b, z))
    _check_fixed(L, np.stack([a, b, z]))
    N = mobius_normalize(L.iso, [a, b])
    counter = _SegmentCounter(PLANE, [(a, b)])

    def run(c):
        return linking_blocks(N, c, z[None], 1e-8, n_max=1, tol=np.inf, m=1, min_returns=1)

    res, _ = _run_with_perturbation(run, lambda bend: _SegmentCounter(PLANE, [(a, b)], bend))
    del counter
    left = int(np.round(res.values[0, 0]))
    right = planar_linking(L, a, z) - planar_linking(L, b, z)
    if left != right:
        raise IdentityMismatch("normalized count %d differs from linking difference %d"
                               % (left, right))
    return left


# weak boundedness diagnostic

@dataclass
class WBReport:
    sampled_pairs: int
    max_abs_linking: float
    histogram: tuple
    verdict: str
    growth: list = field(default_factory=list)


def wb_diagnostic(L, fixed_points, pair_budget=200, n_scales=4):
    """Largest pairwise linking among sampled fixed lifts, and its growth.

    Pairs are drawn in order from the list of fixed lifts; the running
    maximum is recorded each time the number of points doubles.  Growth is
    reported when the maximum increases strictly over at least three
    consecutive doublings.
    """
    L = _as_lifted(L)
    pts = np.asarray(fixed_points, dtype=float).reshape(-1, 2)
    n = len(pts)
    vals = {}
    count = 0
    for j in range(1, n):
        for i in range(j):
            if count >= pair_budget:
                break
            if np.hypot(*(pts[i] - pts[j])) <= EPS_GEO:
                continue
            vals[(i, j)] = planar_linking(L, pts[i], pts[j])
            count += 1
    sizes = sorted({max(2, int(np.ceil(n / 2 ** s))) for s in range(n_scales)})
    growth = []
    for s in sizes:
        sub = [abs(v) for (i, j), v in vals.items() if j < s]
        growth.append((s, max(sub) if sub else 0))
    mags = np.array([abs(v) for v in vals.values()]) if vals else np.zeros(1)
    edges = np.unique(np.r_[0, 2.0 ** np.arange(0, 1 + np.ceil(np.log2(mags.max() + 1)))])
    hist = np.histogram(mags, bins=np.r_[edges, np.inf])
    g = [m for _, m in growth]
    inc = sum(1 for x, y in zip(g[:-1], g[1:]) if y > x)
    verdict = "GrowthDetected" if inc >= 3 and g[-1] > 2 * max(g[0], 1) else "BoundedAtHorizon"
    return WBReport(count, float(mags.max()), (hist[0].tolist(), hist[1].tolist()), verdict,
                    growth)
