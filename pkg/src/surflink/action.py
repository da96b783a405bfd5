"""Integrated linking ``i_mu``, action functions, spectra and the classical action.

``i_mu(F~; a~, b~) = int i(F~; a~, b~, z) dmu(z)`` is computed in one of
three ways depending on how the invariant measure is represented:

* atoms: exact weighted sum of triple linkings at the atoms;
* grid densities: stratified Monte Carlo over pointwise triple linkings,
  with batch-means standard errors;
* radial pieces: a circle of radius ``r`` around ``c`` turns ``rate(r)``
  times per iterate, so it links ``rate(r)`` times with every puncture it
  encloses and not at all with the others.  The integral over ``r`` is a 1-D
  quadrature with breakpoints at the puncture distances.

Classical side (Hamiltonian isotopies): ``A_H(x) = area(D_x) - int H_t(F_t x) dt``
with ``D_x`` the cone on the trajectory loop, and the action difference
``delta(F; x, y)`` as the area of the 2-chain ``Sigma`` with boundary
``F(gamma) - gamma``.
"""
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy import integrate

from .cover import PLANE, periodic_mask, swept_angle
from .errors import (CoboundaryViolation, LiftDependence, NonContractibleLoop, NotFixed,
                     RotationVectorNonzero, TooManyDivergentSamples)
from .isotopy import LiftedIsotopy, iterate, mobius_normalize
from .linking import (_as_lifted, _deck_round, pointwise_linking, triple_linking_fixed,
                      triple_linking_recurrent)
from .measures import AtomicMeasure, GridDensity, RadialClosedForm, batch_estimate
from .recurrence import rotation_vector_measure

MAX_DROP = 0.10     # largest tolerated fraction of non-converged MC samples


@dataclass
class ActionValue:
    value: float
    stderr: float = 0.0
    method: str = ""
    n_samples: int = 0
    n_dropped: int = 0
    info: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)


# per-sample evaluation

@dataclass
class _Samples:
    """Per-sample linking values with their weights and batch labels."""
    values: np.ndarray      # (N, n_pairs)
    weights: np.ndarray     # (N,)
    batch: np.ndarray       # (N,)
    n_batches: int
    method: str
    n_dropped: int = 0

    def estimate(self, vals=None):
        vals = self.values if vals is None else vals
        vals = np.asarray(vals, dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        out = []
        for j in range(vals.shape[1]):
            if self.n_batches > 1:
                out.append(batch_estimate(vals[:, j], self.weights, self.batch, self.n_batches))
            else:
                out.append((float(np.sum(self.weights * vals[:, j])), 0.0))
        return out


def _atomic_samples(L, pairs, mu, n_max, tol, seed):
    vals = np.zeros((len(mu.points), len(pairs)))
    for i, z in enumerate(mu.points):
        Fz = L.time_one(z[None])[0]
        fixed = np.abs(Fz - z - _deck_round(Fz - z, L.surface)).max() <= 1e-9
        for j, (a, b) in enumerate(pairs):
            if fixed:
                vals[i, j] = triple_linking_fixed(L, a, b, z, cross_check=False, seed=seed).value
            else:
                vals[i, j] = triple_linking_recurrent(L, a, b, z, n_max=n_max, tol=tol,
                                                      strict=True, seed=seed).value
    return _Samples(vals, mu.weights, np.zeros(len(vals), dtype=int), 1, "atomic")


def _grid_samples(L, pairs, mu, n_batches, rng, n_max, tol, max_drop, systematic, seed):
    P, w, b = mu.sample(n_batches, rng, systematic=systematic)
    if L.surface == PLANE and len(pairs) == 1 and not L.fixes(np.stack(pairs[0])):
        L = LiftedIsotopy(mobius_normalize(L.iso, list(pairs[0])), L.K)
    res = pointwise_linking(L, pairs, P, n_max=n_max, tol=tol, seed=seed)
    ok = res.converged
    dropped = int(np.sum(~ok))
    if dropped > max_drop * len(P):
        raise TooManyDivergentSamples("%d of %d samples did not converge" % (dropped, len(P)))
    # dropped samples are removed and each batch is renormalized to its full mass
    w = np.where(ok, w, 0.0)
    kept = np.bincount(b, weights=w, minlength=n_batches)
    w = w * (mu.total_mass / np.where(kept > 0, kept, 1.0))[b]
    vals = np.where(ok[:, None], res.values, 0.0)
    return _Samples(vals, w, b, n_batches, "monte-carlo", dropped)


def _measured_rates(L, center, radii):
    """Turns per iterate of the points ``center + (r, 0)`` around ``center``."""
    c = np.asarray(center, dtype=float)
    P0 = np.stack([c[0] + np.asarray(radii, float), np.full(len(radii), c[1])], axis=-1)
    clear = lambda X, idx: np.hypot(X[:, 0] - c[0], X[:, 1] - c[1])
    o, _, pts, failed = L.polyline(P0, clearance=clear)
    if np.any(failed):
        raise NotFixed("circle trajectories could not be sampled around the center")
    cuts = np.r_[0, np.flatnonzero(o[1:] != o[:-1]) + 1, len(o)]
    return np.array([swept_angle(pts[s:e], c) for s, e in zip(cuts[:-1], cuts[1:])]) / (2 * np.pi)


def _gauss_nodes(breaks, n):
    x, wt = np.polynomial.legendre.leggauss(n)
    nodes, weights = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi <= lo:
            continue
        nodes.append(lo + (x + 1) * (hi - lo) / 2)
        weights.append(wt * (hi - lo) / 2)
    return np.concatenate(nodes), np.concatenate(weights)


def _radial_values(L, pairs, mu, rates, n_gauss, n_sub):
    """Exact-by-quadrature ``i_mu`` for rotationally symmetric measures."""
    if L.surface != PLANE:
        raise ValueError("radial measures live in a planar chart")
    pts = np.unique(np.concatenate([np.stack(p) for p in pairs]), axis=0)
    if not L.fixes(pts):
        raise ValueError("the enclosure-rate formula needs punctures fixed for all t")
    power = getattr(L, "power", 1)
    out = np.zeros(len(pairs))
    for piece in mu.pieces:
        c = np.asarray(piece.center, dtype=float)
        da = [np.hypot(*(np.asarray(a) - c)) for a, _ in pairs]
        db = [np.hypot(*(np.asarray(b) - c)) for _, b in pairs]
        if piece.is_circle:
            r = piece.r0
            if any(abs(d - r) < 1e-12 for d in da + db):
                raise ValueError("a puncture lies on a support circle")
            if rates == "metadata" and piece.rate is not None:
                rate = float(piece.rate(r)) * power
            else:
                rate = float(_measured_rates(L, c, [r])[0])
            out += [piece.mass * rate * (float(x < r) - float(y < r)) for x, y in zip(da, db)]
            continue
        br = np.unique(np.clip(np.r_[piece.r0, piece.r1, da, db], piece.r0, piece.r1))
        if rates == "metadata" and piece.rate is not None:
            for j, (x, y) in enumerate(zip(da, db)):
                f = lambda r: piece.density(r) * piece.rate(r) * (float(x < r) - float(y < r))
                tot = 0.0
                for lo, hi in zip(br[:-1], br[1:]):
                    if hi > lo:
                        tot += integrate.quad(f, lo, hi, limit=400, epsabs=1e-12,
                                              epsrel=1e-12)[0]
                out[j] += tot * power
        else:
            fine = np.unique(np.r_[br, np.linspace(piece.r0, piece.r1, n_sub + 1)])
            r, wt = _gauss_nodes(fine, n_gauss)
            rate = _measured_rates(L, c, r)
            dens = np.asarray(piece.density(r), dtype=float)
            for j, (x, y) in enumerate(zip(da, db)):
                out[j] += np.sum(wt * dens * rate * ((x < r).astype(float) - (y < r)))
    return out


def _collect(L, pairs, mu, n_batches=10, rng=0, n_max=2000, tol=1e-3, max_drop=MAX_DROP,
             systematic=False, rates="metadata", n_gauss=16, n_sub=12, seed=0):
    L = _as_lifted(L)
    pairs = [(np.asarray(a, float), np.asarray(b, float)) for a, b in pairs]
    if isinstance(mu, AtomicMeasure):
        return _atomic_samples(L, pairs, mu, n_max, tol, seed)
    if isinstance(mu, GridDensity):
        return _grid_samples(L, pairs, mu, n_batches, rng, n_max, tol, max_drop, systematic,
                             seed)
    if isinstance(mu, RadialClosedForm):
        vals = _radial_values(L, pairs, mu, rates, n_gauss, n_sub)
        return _Samples(vals[None], np.ones(1), np.zeros(1, dtype=int), 1,
                        "radial-" + rates)
    raise TypeError("unsupported measure representation %r" % type(mu).__name__)


def action_differences(L, pairs, mu, **kw):
    """``i_mu`` for several puncture pairs from one set of samples."""
    S = _collect(L, pairs, mu, **kw)
    n = len(S.values)
    return [ActionValue(v, se, S.method, n, S.n_dropped) for v, se in S.estimate()]


def action_difference(L, a, b, mu, **kw):
    """``i_mu(F~; a~, b~)`` with its standard error (zero for exact methods).

    Keywords: ``n_batches``, ``rng`` (sampling seed), ``n_max``, ``tol``
    (per-sample convergence), ``max_drop``, ``systematic``, ``rates``
    (``"metadata"`` or ``"measured"`` for radial measures).
    """
    return action_differences(L, [(a, b)], mu, **kw)[0]


# action functions

@dataclass
class ActionSpectrum:
    basepoint: np.ndarray
    points: np.ndarray
    values: np.ndarray
    stderr: np.ndarray
    converged: np.ndarray
    residuals: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def entries(self):
        return [(p, v, c) for p, v, c in zip(self.points, self.values, self.converged)]

    @property
    def width(self):
        v = self.values[self.converged]
        return float(v.max() - v.min()) if len(v) else 0.0

    @property
    def width_stderr(self):
        v = self.values[self.converged]
        if not len(v):
            return 0.0
        i, j = np.argmax(v), np.argmin(v)
        return float(np.hypot(self.stderr[self.converged][i], self.stderr[self.converged][j]))

    def sorted(self):
        o = np.argsort(self.values, kind="stable")
        return ActionSpectrum(self.basepoint, self.points[o], self.values[o], self.stderr[o],
                              self.converged[o], self.residuals, self.info)

    def rebased(self, i):
        """Same spectrum gauged so that entry ``i`` has value 0."""
        return ActionSpectrum(self.points[i], self.points, self.values - self.values[i],
                              self.stderr, self.converged, self.residuals, self.info)


def _floor(method):
    return 1e-9 if method != "monte-carlo" else 0.0


def action_on_fixlift(L, lifts, mu, basepoint=0, check_triples=True, **kw):
    """``l_mu`` on fixed lifts, gauged by ``l_mu(basepoint) = 0``.

    ``l_mu(b~) = i_mu(basepoint, b~)``.  With ``check_triples`` every triple
    residual ``i_mu(a,b) + i_mu(b,c) + i_mu(c,a)`` is evaluated on the same
    samples and must stay within 3 standard errors.
    """
    pts = np.asarray(lifts, dtype=float).reshape(-1, 2)
    n = len(pts)
    pairs = list(combinations(range(n), 2)) if check_triples else \
        [(basepoint, j) for j in range(n) if j != basepoint]
    S = _collect(L, [(pts[i], pts[j]) for i, j in pairs], mu, **kw)
    col = {p: k for k, p in enumerate(pairs)}

    def pair_vals(i, j):
        if i == j:
            return np.zeros(len(S.values))
        if (i, j) in col:
            return S.values[:, col[(i, j)]]
        return -S.values[:, col[(j, i)]]

    est = [S.estimate(pair_vals(basepoint, j))[0] for j in range(n)]
    vals = np.array([e[0] for e in est])
    se = np.array([e[1] for e in est])
    residuals = []
    if check_triples:
        for i, j, k in combinations(range(n), 3):
            r = pair_vals(i, j) + pair_vals(j, k) + pair_vals(k, i)
            rv, rs = S.estimate(r)[0]
            residuals.append(((i, j, k), rv, rs))
            if abs(rv) > 3 * rs + _floor(S.method):
                raise CoboundaryViolation("triple %s residual %.3g exceeds 3 stderr %.3g"
                                          % ((i, j, k), rv, 3 * rs))
    return ActionSpectrum(pts[basepoint], pts, vals, se, np.ones(n, dtype=bool), residuals,
                          {"method": S.method, "dropped": S.n_dropped})


def action_on_contractible(L, points, mu, basepoint=0, decks=((1, 0), (0, 1)), rot_tol=1e-6,
                           **kw):
    """``L_mu`` on contractible fixed points (given by any lifts).

    Needs a vanishing rotation vector of ``mu``; lift independence is checked
    through ``i_mu(x~, x~ + v)`` for the deck vectors ``decks``.
    """
    L = _as_lifted(L)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    mask = periodic_mask(L.surface)
    vs = [np.asarray(v, float) * mask for v in decks]
    vs = [v for v in vs if np.any(v != 0)]
    if vs:
        rv, rse = rotation_vector_measure(L, mu, kw.get("n_batches", 10), kw.get("rng", 0))
        if np.any(np.abs(rv) > 3 * np.asarray(rse) + rot_tol):
            raise RotationVectorNonzero("rotation vector of the measure is %s" % (rv,))
    base = [(pts[basepoint], p) for j, p in enumerate(pts) if j != basepoint]
    extra = [(p, p + v) for p in pts for v in vs]
    S = _collect(L, base + extra, mu, **kw)
    est = S.estimate()
    vals, se = np.zeros(len(pts)), np.zeros(len(pts))
    others = [j for j in range(len(pts)) if j != basepoint]
    for k, j in enumerate(others):
        vals[j], se[j] = est[k]
    residuals = []
    for k, (p, q) in enumerate(extra):
        rv, rs = est[len(base) + k]
        residuals.append((tuple(p), tuple(q - p), rv, rs))
        if abs(rv) > 3 * rs + _floor(S.method):
            raise LiftDependence("i_mu(x, x + %s) = %.3g exceeds 3 stderr %.3g"
                                 % (tuple(q - p), rv, 3 * rs))
    return ActionSpectrum(pts[basepoint], pts, vals, se, np.ones(len(pts), dtype=bool),
                          residuals, {"method": S.method, "dropped": S.n_dropped})


def spectrum(L, mu, points, kind="fixlift", basepoint=0, n_iter=None, **kw):
    """Sorted action spectrum and width; optionally the widths of ``F~^n``, n = 1..n_iter."""
    L = _as_lifted(L)
    fn = action_on_fixlift if kind == "fixlift" else action_on_contractible
    sp = fn(L, points, mu, basepoint=basepoint, **kw)
    if n_iter:
        series = []
        for n in range(1, int(n_iter) + 1):
            Ln = L if n == 1 else LiftedIsotopy(iterate(L.iso, n), n * L.K)
            s = sp if n == 1 else fn(Ln, points, mu, basepoint=basepoint, **kw)
            series.append((n, s.width, s.width_stderr))
        sp.info["width_series"] = series
    return sp.sorted()


# classical action of Hamiltonian isotopies

@dataclass
class ClassicalAction:
    value: float
    area: float
    hamiltonian_integral: float


def _loop(H, x, n_t):
    ts = np.linspace(0.0, 1.0, n_t + 1)
    x = np.asarray(x, dtype=float)
    P = H.lift_eval(ts, np.broadcast_to(x, (len(ts), 2)).copy())
    d = P[-1] - P[0]
    if np.abs(d).max() > 1e-7:
        v = _deck_round(d, H.surface)
        if np.any(v != 0) and np.abs(d - v).max() <= 1e-7:
            raise NonContractibleLoop("trajectory loop closes up with deck vector %s" % (v,))
        raise NotFixed("x moves by %.3g under the time-one map" % np.abs(d).max())
    return ts, P


def _shoelace(P):
    x, y = P[:, 0], P[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def classical_action(H, x, n_t=1024):
    """``A_H(x) = int_{D_x} omega - int_0^1 H_t(F_t(x)) dt``, ``D_x`` coned on the loop."""
    ts, P = _loop(H, x, n_t)
    area = _shoelace(P[:-1])
    h = H.H(ts, P)
    hint = float(integrate.simpson(np.asarray(h, dtype=float), x=ts))
    return ClassicalAction(area - hint, area, hint)


def _chain_area(S, density=None):
    """Signed area of a sampled map ``[0,1]^2 -> R^2`` (grid ``S[i, j]``, first index first)."""
    A, B, C, D = S[:-1, :-1], S[1:, :-1], S[1:, 1:], S[:-1, 1:]
    quad = np.stack([A, B, C, D], axis=2)
    x, y = quad[..., 0], quad[..., 1]
    area = 0.5 * np.sum(x * np.roll(y, -1, axis=2) - np.roll(x, -1, axis=2) * y, axis=2)
    if density is not None:
        mid = quad.mean(axis=2)
        area = area * np.asarray(density(mid.reshape(-1, 2)), float).reshape(area.shape)
    return float(area.sum())


def classical_delta(H, x, y, gamma=None, n_s=256, n_t=256):
    """``delta(F; x, y) = int_Sigma omega`` with ``Sigma = Delta + D_y - D_x``.

    ``Delta(t, s) = F_t(gamma(s))``; ``gamma`` defaults to the straight path.
    """
    x, y = np.asarray(x, float), np.asarray(y, float)
    s = np.linspace(0.0, 1.0, n_s + 1)
    g = gamma(s) if gamma is not None else x + s[:, None] * (y - x)
    ts = np.linspace(0.0, 1.0, n_t + 1)
    T, Si = np.meshgrid(ts, np.arange(len(s)), indexing="ij")
    D = H.lift_eval(T.ravel(), g[Si.ravel()]).reshape(len(ts), len(s), 2)
    ax = classical_action(H, x, n_t)
    ay = classical_action(H, y, n_t)
    return _chain_area(D) + ay.area - ax.area


def swept_area(L, a, b, density=None, n_s=256, n_t=256):
    """Signed ``mu``-area of a 2-chain with boundary ``F~(gamma) gamma^{-1}``.

    ``gamma`` is the straight path from ``a~`` to ``b~``; the chain is
    ``(s, t) -> F~_s(gamma(t))``.  In the plane the integral of a 2-form
    over a chain depends on its boundary only, so any chain with this
    boundary gives the same value.  ``density`` defaults to area.
    """
    L = _as_lifted(L)
    a, b = np.asarray(a, float), np.asarray(b, float)
    if not L.fixes(np.stack([a, b])):
        raise ValueError("a~ and b~ must be fixed for all t")
    ss = np.linspace(0.0, 1.0, n_s + 1)
    tt = np.linspace(0.0, 1.0, n_t + 1)
    g = a + tt[:, None] * (b - a)
    Sg, Ti = np.meshgrid(ss, np.arange(len(tt)), indexing="ij")
    S = L.lift_eval(Sg.ravel(), g[Ti.ravel()]).reshape(len(ss), len(tt), 2)
    return _chain_area(S, density)


__all__ = ["ActionValue", "ActionSpectrum", "ClassicalAction", "action_difference",
           "action_differences", "action_on_fixlift", "action_on_contractible", "spectrum",
           "classical_action", "classical_delta", "swept_area", "MAX_DROP"]
