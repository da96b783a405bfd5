"""Disk chains of annulus homeomorphisms.

The annulus is ``R/Z x R`` with deck generator ``T(x, y) = (x + 1, y)``; maps
are given by a lift ``H`` of ``R^2`` commuting with ``T``.  Overlaps
``H^m(D~_i) meets T^q(D~_j)`` are certified by witness points: sampled
points of ``D~_i`` whose ``m``-th image lies inside ``T^q(D~_j)`` with margin
``eps``.  The test is sound (every claim carries a witness) and incomplete
(an overlap thinner than the sampling is missed).
"""
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .cover import EPS_GEO
from .errors import HypothesisUnverified, Inconclusive


def _as_map(H):
    """Lifted time-one map from an isotopy, a lifted isotopy or a callable."""
    if hasattr(H, "time_one"):
        return H.time_one
    return H


def translate(H, p):
    """The lift ``T^p o H``."""
    H = _as_map(H)
    shift = np.array([float(p), 0.0])
    return lambda X: H(X) + shift


@dataclass(frozen=True)
class FreeDisk:
    id: str
    center: tuple
    radius: float

    def __post_init__(self):
        if not 0 < self.radius < 0.5:
            raise ValueError("disk radius must lie in (0, 1/2) so that lifts are disjoint")

    def samples(self, n_rings=12, n_angles=64, shrink=1.0):
        """Center, concentric rings and the boundary circle."""
        c = np.asarray(self.center, dtype=float)
        rs = self.radius * shrink * np.sqrt(np.linspace(0.0, 1.0, n_rings + 1)[1:])
        a = 2 * np.pi * np.arange(n_angles) / n_angles
        R, A = np.meshgrid(rs, a, indexing="ij")
        ring = np.stack([c[0] + R.ravel() * np.cos(A.ravel()),
                         c[1] + R.ravel() * np.sin(A.ravel())], axis=-1)
        return np.vstack([c[None], ring])


def _annulus_gap(X, disk):
    """Signed distance from points to the projected disk (negative inside)."""
    c = np.asarray(disk.center, dtype=float)
    dx = X[:, 0] - c[0]
    dx -= np.round(dx)
    return np.hypot(dx, X[:, 1] - c[1]) - disk.radius


def is_free(H, D, eps=EPS_GEO, n_rings=12, n_angles=64):
    """Whether ``h(D)`` misses ``D``, with a witness when it does not.

    Returns ``(free, witness)``.  A sampled margin within ``eps`` of zero
    raises ``Inconclusive``.
    """
    F = _as_map(H)
    P = D.samples(n_rings, n_angles)
    gap = _annulus_gap(F(P), D)
    i = int(np.argmin(gap))
    if gap[i] < -eps:
        return False, P[i]
    if gap[i] <= eps:
        raise Inconclusive("image of the disk touches it (margin %.3g)" % gap[i])
    return True, None


def check_equal_or_disjoint(disks):
    for i, a in enumerate(disks):
        for b in disks[i + 1:]:
            same = a.center == b.center and a.radius == b.radius
            if a.id == b.id and not same:
                raise ValueError("two disks share the id %r" % a.id)
            if same:
                continue
            dx = a.center[0] - b.center[0]
            dx -= round(dx)
            if np.hypot(dx, a.center[1] - b.center[1]) < a.radius + b.radius:
                raise ValueError("disks %r and %r overlap without being equal" % (a.id, b.id))


@dataclass
class DiskChain:
    disks: list             # FreeDisk, first == last for periodic chains
    powers: list            # m_i
    offsets: list = None    # deck offset of D~_i relative to D~_1 (lift data)
    witnesses: list = None  # points x_i in D~_i with H^{m_i}(x_i) in D~_{i+1}

    @property
    def periodic(self):
        return self.disks[0].id == self.disks[-1].id

    @property
    def length(self):
        return int(sum(self.powers))

    @property
    def width(self):
        return int(self.offsets[-1] - self.offsets[0])

    def certify(self, H, eps=EPS_GEO):
        """Re-check every witness by evaluation; returns the list of margins."""
        F = _as_map(H)
        margins = []
        for i, m in enumerate(self.powers):
            x = np.asarray(self.witnesses[i], dtype=float)[None]
            D0 = self.disks[i]
            if np.hypot(*(x[0] - np.asarray(D0.center) - (self.offsets[i], 0))) >= D0.radius:
                raise ValueError("witness %d lies outside its disk lift" % i)
            for _ in range(m):
                x = F(x)
            D1 = self.disks[i + 1]
            c = np.asarray(D1.center) + (self.offsets[i + 1], 0.0)
            margin = D1.radius - np.hypot(*(x[0] - c))
            if margin <= eps:
                raise ValueError("link %d is not witnessed (margin %.3g)" % (i, margin))
            margins.append(float(margin))
        return margins

    def concat(self, other):
        """Concatenation at the shared disk ``self.disks[-1] == other.disks[0]``."""
        if self.disks[-1].id != other.disks[0].id:
            raise ValueError("chains do not share the junction disk")
        shift = self.offsets[-1] - other.offsets[0]
        return DiskChain(self.disks + other.disks[1:], self.powers + other.powers,
                         self.offsets + [o + shift for o in other.offsets[1:]],
                         self.witnesses + [np.asarray(w) + (shift, 0.0) for w in other.witnesses])


# lifted chains carry their offsets; the alias mirrors the vocabulary
LiftedChain = DiskChain


class OverlapTable:
    """Certified overlaps ``H^m(D~_i) meets T^q(D~_j)`` for ``m = 1..horizon``."""

    def __init__(self, H, disks, horizon, eps=EPS_GEO, n_rings=12, n_angles=64):
        F = _as_map(H)
        self.disks = list(disks)
        self.horizon = int(horizon)
        self.edges = defaultdict(dict)     # (i, m) -> {(j, q): witness}
        for i, D in enumerate(self.disks):
            P = D.samples(n_rings, n_angles)
            X = P.copy()
            for m in range(1, self.horizon + 1):
                X = F(X)
                for j, E in enumerate(self.disks):
                    c = np.asarray(E.center, dtype=float)
                    q = np.round(X[:, 0] - c[0])
                    inside = np.hypot(X[:, 0] - c[0] - q, X[:, 1] - c[1]) < E.radius - eps
                    for qq in np.unique(q[inside]):
                        k = int(np.flatnonzero(inside & (q == qq))[0])
                        self.edges[(i, m)][(j, int(qq))] = P[k]

    def returns(self, i):
        """Sorted ``(q, p)`` with ``H^q(D~_i)`` meeting ``T^p(D~_i)``."""
        out = [(m, p) for m in range(1, self.horizon + 1)
               for (j, p) in self.edges.get((i, m), {}) if j == i]
        return sorted(out)


def find_periodic_chains(H, disks, horizon, start=None, designated=None, eps=EPS_GEO,
                         max_offset=None, table=None):
    """All periodic chains from ``start`` found by breadth-first search over lengths.

    States are ``(disk, deck offset)``; a chain closes when it reaches the
    start disk again.  Offsets are capped at ``max_offset`` (default:
    ``horizon`` times the largest single-iterate drift).  Returns one chain
    per ``(length, width)``, sorted.  ``designated`` names a disk exempt from
    the freeness requirement (it must return to itself only at offset 0).
    """
    disks = list(disks)
    check_equal_or_disjoint(disks)
    ids = [d.id for d in disks]
    for d in disks:
        if d.id == designated:
            continue
        free, w = is_free(H, d, eps)
        if not free:
            raise ValueError("disk %r is not free (witness %s)" % (d.id, w))
    if table is None:
        table = OverlapTable(H, disks, horizon, eps)
    s = ids.index(start if start is not None else (designated or ids[0]))
    if max_offset is None:
        drift = max([abs(q) for (i, m), e in table.edges.items() if m == 1 for (_, q) in e]
                    + [1])
        max_offset = horizon * drift
    # level[L] maps (j, off) -> parent (L', j', off', m, witness)
    level = defaultdict(dict)
    level[0][(s, 0)] = None
    found = {}
    for L in range(0, int(horizon)):
        for (j, off) in sorted(level[L]):
            if L > 0 and j == s:
                continue      # closed chains are not extended
            for m in range(1, int(horizon) - L + 1):
                for (k, q), wit in sorted(table.edges.get((j, m), {}).items()):
                    o2 = off + q
                    if abs(o2) > max_offset or (k, o2) in level[L + m]:
                        continue
                    level[L + m][(k, o2)] = (L, j, off, m, np.asarray(wit) + (off, 0.0))
                    if k == s and (L + m, o2) not in found:
                        found[(L + m, o2)] = _rebuild(level, L + m, k, o2, disks)
    return [found[key] for key in sorted(found, key=lambda x: (x[0], abs(x[1]), x[1]))]


def _rebuild(level, L, j, off, disks):
    path = []
    while level[L][(j, off)] is not None:
        L0, j0, off0, m, wit = level[L][(j, off)]
        path.append((j, off, m, wit))
        L, j, off = L0, j0, off0
    path.reverse()
    ds, offs, ms, wits = [disks[j]], [off], [], []
    for (k, o, m, w) in path:
        ds.append(disks[k])
        offs.append(o)
        ms.append(m)
        wits.append(w)
    return DiskChain(ds, ms, offs, wits)


def find_periodic_chain(H, disks, horizon, **kw):
    """Shortest periodic chain (ties: smallest ``|width|``), or ``None``."""
    chains = find_periodic_chains(H, disks, horizon, **kw)
    return chains[0] if chains else None


def chain_width_algebra(chain, p):
    """``(w(H; T^p C~), w(T^p o H; T^p . C~))`` for a periodic lifted chain."""
    if not chain.periodic:
        raise ValueError("width algebra is stated for periodic chains")
    w = chain.width
    return w, p * chain.length + w


def shifted_chain(chain, p):
    """The lift ``T^p . C~`` of the chain for ``T^p o H`` (offsets and witnesses moved)."""
    cum = np.r_[0, np.cumsum(chain.powers)]
    offs = [o + p * int(c) for o, c in zip(chain.offsets, cum)]
    wits = [np.asarray(w) + (p * int(c), 0.0) for w, c in zip(chain.witnesses, cum[:-1])]
    return DiskChain(list(chain.disks), list(chain.powers), offs, wits)


def rot_hull(H, D, horizon, eps=EPS_GEO, table=None):
    """Convex hull of ``p / q`` over witnessed returns ``H^q(D~) meets T^p(D~)``.

    Returns ``(lo, hi, ratios)``; ``lo, hi`` are ``None`` without returns.
    """
    if table is None:
        table = OverlapTable(H, [D], horizon, eps)
    i = [d.id for d in table.disks].index(D.id)
    ratios = sorted({p / q for q, p in table.returns(i)})
    if not ratios:
        return None, None, []
    return ratios[0], ratios[-1], ratios


@dataclass
class ChainBoundReport:
    width: int
    length: int
    N: int
    holds: bool
    hull_checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def verify_chain_bound(chain, N, H=None, fixed_points=(), designated=None, horizon=20,
                       eps=EPS_GEO):
    """Evaluate ``|w| < (N + 1) l`` for a periodic lifted chain.

    With ``H`` given, the declared hypotheses are spot-checked: each listed
    fixed point of ``h`` must satisfy ``H(z~) = T^k(z~)`` with ``|k| <= N``,
    and the ``designated`` disk must meet its image only at offset 0.  The
    hulls ``Rot_{D_i}(H)`` of the other disks are compared with
    ``(-(N + 1), N + 1)``.  Located fixed points are only a sample of
    ``Fix(h)``; that gap is noted in the report.
    """
    if not chain.periodic:
        raise ValueError("the bound is stated for periodic chains")
    w, l = chain.width, chain.length
    rep = ChainBoundReport(w, l, int(N), abs(w) < (N + 1) * l)
    if H is None:
        rep.notes.append("hypotheses not checked")
        return rep
    F = _as_map(H)
    for z in np.asarray(fixed_points, dtype=float).reshape(-1, 2):
        d = F(z[None])[0] - z
        k = np.round(d[0])
        if abs(d[0] - k) > 1e-8 or abs(d[1]) > 1e-8:
            raise HypothesisUnverified("listed point %s is not fixed by h" % (z,))
        if abs(k) > N:
            raise HypothesisUnverified("fixed point %s rotates by %d outside [-N, N]" % (z, k))
    rep.notes.append("Rot over Fix(h) checked on %d located fixed points only"
                     % len(np.atleast_2d(fixed_points)) if len(fixed_points) else
                     "no fixed points listed; Rot over Fix(h) unchecked")
    seen = set()
    for d in chain.disks:
        if d.id in seen:
            continue
        seen.add(d.id)
        if d.id == designated:
            table = OverlapTable(F, [d], 1, eps)
            qs = sorted(q for (_, q) in table.edges.get((0, 1), {}))
            if qs != [0]:
                raise HypothesisUnverified("designated disk meets its image at offsets %s" % qs)
            continue
        lo, hi, _ = rot_hull(F, d, horizon, eps)
        ok = lo is None or (-(N + 1) < lo and hi < N + 1)
        rep.hull_checks.append((d.id, lo, hi, ok))
    return rep


def locate_fixed_point(H, k=0, starts=None, q=1, tol=1e-10, maxiter=60, box=((0, 0), (1, 1)),
                       n_starts=64, rng=0):
    """Find ``z~`` with ``H^q(z~) = T^k(z~)`` by damped Newton from many starts.

    Failure raises ``Inconclusive``; it is never evidence of absence.
    """
    F = _as_map(H)
    if starts is None:
        (x0, y0), (x1, y1) = box
        u = np.random.default_rng(rng).random((n_starts, 2))
        starts = np.stack([x0 + u[:, 0] * (x1 - x0), y0 + u[:, 1] * (y1 - y0)], axis=-1)
    shift = np.array([float(k), 0.0])

    def G(X):
        Y = X
        for _ in range(q):
            Y = F(Y)
        return Y - X - shift

    X = np.asarray(starts, dtype=float).reshape(-1, 2).copy()
    h = 1e-7
    for _ in range(maxiter):
        g = G(X)
        res = np.hypot(g[:, 0], g[:, 1])
        if np.any(res < tol):
            break
        J = np.stack([(G(X + [h, 0]) - g) / h, (G(X + [0, h]) - g) / h], axis=-1)
        det = J[:, 0, 0] * J[:, 1, 1] - J[:, 0, 1] * J[:, 1, 0]
        det = np.where(np.abs(det) < 1e-14, 1e-14, det)
        dx = (J[:, 1, 1] * g[:, 0] - J[:, 0, 1] * g[:, 1]) / det
        dy = (-J[:, 1, 0] * g[:, 0] + J[:, 0, 0] * g[:, 1]) / det
        step = np.stack([dx, dy], axis=-1)
        norm = np.hypot(dx, dy)
        step *= np.minimum(1.0, 0.25 / np.maximum(norm, 1e-300))[:, None]
        # damping: halve the step while the residual grows
        lam = np.ones(len(X))
        for _ in range(8):
            Xn = X - lam[:, None] * step
            worse = np.hypot(*G(Xn).T) > res
            if not worse.any():
                break
            lam = np.where(worse, lam / 2, lam)
        X = X - lam[:, None] * step
    g = G(X)
    res = np.hypot(g[:, 0], g[:, 1])
    i = int(np.argmin(res))
    if not res[i] < tol:
        raise Inconclusive("no solution of H^%d(z) = T^%d(z) located (best residual %.3g)"
                           % (q, k, res[i]))
    return X[i]


__all__ = ["FreeDisk", "DiskChain", "LiftedChain", "OverlapTable", "is_free",
           "find_periodic_chain", "find_periodic_chains", "chain_width_algebra", "shifted_chain",
           "rot_hull", "verify_chain_bound", "ChainBoundReport", "locate_fixed_point",
           "translate", "check_equal_or_disjoint"]
