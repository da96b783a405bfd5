"""Identity isotopies, their algebra, lifts and Moebius normalization.

An isotopy is stored through its lift to the universal cover: ``func(t, p)``
maps cover points ``p`` (shape ``(N, 2)``) at times ``t`` (shape ``(N,)``) to
cover points, with ``func(0, p) = p`` and ``func(t, p + v) = func(t, p) + v``
for deck vectors ``v``.  Base-point evaluation is the projection.
Isotopies given only on the base are lifted by continuation (see ``lift``).
"""
import numpy as np

from .cover import (ANNULUS, EPS_GEO, PLANE, TORUS, adaptive_samples, check_surface,
                    periodic_mask, project, wrap)
from .errors import (ContinuationAmbiguous, DegenerateMobius, IntegratorBlowup,
                     InverseUnavailable, NotFixed)


def _flat(t, p):
    p = np.asarray(p, dtype=float)
    shape = p.shape
    p = p.reshape(-1, 2)
    t = np.broadcast_to(np.asarray(t, dtype=float), shape[:-1]).reshape(-1)
    return t, p, shape


class IdentityIsotopy:
    """Identity isotopy ``t -> F_t`` given through its lift.

    Parameters
    ----------
    surface : str
        ``'torus'``, ``'annulus'`` or ``'plane'``.
    func : callable
        ``func(t, p)`` vectorized lift evaluator.
    speed : float or callable, optional
        Bound on ``|d/dt F_t(p)|`` over ``t in [0, 1]``, either global or as a
        function of the starting points.  Needed for homotopy-safe sampling.
    inverse : callable, optional
        Lift of ``F_1^{-1}``.
    """

    kind = "closed"

    def __init__(self, surface, func, speed=None, inverse=None, name=None, params=None):
        self.surface = check_surface(surface)
        self._func = func
        self._speed = speed
        self._inverse = inverse
        self.name = name or "isotopy"
        self.params = dict(params or {})

    def __repr__(self):
        return "%s(%r, surface=%r)" % (type(self).__name__, self.name, self.surface)

    def lift_eval(self, t, p):
        """``F~_t(p)`` for cover points ``p``."""
        t, q, shape = _flat(t, p)
        out = np.asarray(self._func(t, q), dtype=float).reshape(shape)
        if not np.all(np.isfinite(out)):
            raise IntegratorBlowup("non-finite value in %s" % self.name)
        return out

    def evaluate(self, t, z):
        """``F_t(z)`` as a base point."""
        return project(self.lift_eval(t, z), self.surface)

    def time_one(self, p):
        return self.lift_eval(1.0, p)

    def iterate_map(self, p, n):
        """``F~^n(p)`` for ``n >= 0``."""
        p = np.asarray(p, dtype=float)
        for _ in range(int(n)):
            p = self.time_one(p)
        return p

    def lift_eval_extended(self, t, p):
        """Extended isotopy ``F_{t+1} = F_t o F_1`` for ``t >= 0``."""
        t, q, shape = _flat(t, p)
        if np.any(t < 0):
            raise ValueError("extended evaluation needs t >= 0")
        k = np.minimum(np.floor(t), np.maximum(np.ceil(t) - 1, 0)).astype(int)
        out = q.copy()
        for j in range(int(k.max(initial=0))):
            m = k > j
            out[m] = self.time_one(out[m])
        return self.lift_eval(t - k, out).reshape(shape)

    def inverse_time_one(self, p, tol=1e-10, maxiter=100):
        """``F~_1^{-1}(p)``; Newton iteration when no closed form is known."""
        p = np.asarray(p, dtype=float)
        if self._inverse is not None:
            return np.asarray(self._inverse(p.reshape(-1, 2)), dtype=float).reshape(p.shape)
        return _newton_inverse(self.time_one, p, tol, maxiter)

    def speed_bound(self, p):
        """Per-trajectory speed bound (``inf`` when unknown)."""
        p = np.asarray(p, dtype=float).reshape(-1, 2)
        if self._speed is None:
            return np.full(len(p), np.inf)
        if callable(self._speed):
            return np.asarray(self._speed(p), dtype=float).reshape(len(p))
        return np.full(len(p), float(self._speed))

    @property
    def has_speed(self):
        return self._speed is not None

    def sup_speed(self):
        if self._speed is None:
            return np.inf
        if callable(self._speed):
            return float(getattr(self._speed, "sup", np.inf))
        return float(self._speed)

    def polyline(self, P0, clearance=None, n0=None, safety=0.9):
        """Sampled trajectories ``t -> F~_t(P0_i)`` on ``[0, 1]``.

        Returns flattened ``(owner, t, points, failed)``.  With a speed bound and
        a clearance function the polyline is homotopic to the trajectory in
        the complement of the obstacles seen by ``clearance``.
        """
        P0 = np.asarray(P0, dtype=float).reshape(-1, 2)
        n = len(P0)
        speed = self.speed_bound(P0) if self.has_speed else None
        if n0 is None:
            if speed is not None and clearance is not None:
                c0 = np.maximum(clearance(P0, np.arange(n)), 1e-12)
                n0 = np.clip(np.ceil(speed / (1.8 * safety * c0)), 4, 2_000_000).astype(int)
            else:
                n0 = 16
        if speed is not None and not np.all(np.isfinite(speed)):
            speed = None
        curve = lambda t, idx: self.lift_eval(t, P0[idx])
        max_step = None if (clearance is not None or speed is not None) else 0.05
        return adaptive_samples(curve, n, speed=speed, clearance=clearance, n0=n0,
                                safety=safety, max_step=max_step)

    def fixes(self, points, n_t=33, tol=1e-9):
        """True if every point is fixed by ``F~_t`` for all sampled ``t``."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        ts = np.linspace(0, 1, n_t)
        tt = np.repeat(ts, len(pts))
        pp = np.tile(pts, (n_t, 1))
        return bool(np.max(np.abs(self.lift_eval(tt, pp) - pp), initial=0.0) <= tol)


class _SpeedFn:
    """Callable speed bound with a global supremum attached."""

    def __init__(self, fn, sup):
        self.fn = fn
        self.sup = sup

    def __call__(self, p):
        return self.fn(p)


def speed_fn(fn, sup=np.inf):
    return _SpeedFn(fn, sup)


def _newton_inverse(F, p, tol=1e-10, maxiter=100, h=1e-7):
    """Solve ``F(q) = p`` pointwise by damped Newton with finite differences."""
    shape = p.shape
    p = p.reshape(-1, 2)
    q = p - (F(p) - p)
    done = np.zeros(len(p), dtype=bool)
    for _ in range(maxiter):
        r = F(q) - p
        err = np.hypot(r[:, 0], r[:, 1])
        done = err <= tol
        if np.all(done):
            return q.reshape(shape)
        a = ~done
        qa, ra = q[a], r[a]
        ex = np.array([h, 0.0])
        ey = np.array([0.0, h])
        J0 = (F(qa + ex) - F(qa - ex)) / (2 * h)
        J1 = (F(qa + ey) - F(qa - ey)) / (2 * h)
        det = J0[:, 0] * J1[:, 1] - J1[:, 0] * J0[:, 1]
        if np.any(np.abs(det) < 1e-14):
            break
        dx = (J1[:, 1] * ra[:, 0] - J1[:, 0] * ra[:, 1]) / det
        dy = (-J0[:, 1] * ra[:, 0] + J0[:, 0] * ra[:, 1]) / det
        step = np.stack([dx, dy], axis=1)
        # damping: halve until the residual decreases
        lam = np.ones(len(qa))
        base = np.hypot(ra[:, 0], ra[:, 1])
        for _ in range(30):
            trial = qa - lam[:, None] * step
            rt = F(trial) - p[a]
            worse = np.hypot(rt[:, 0], rt[:, 1]) > base
            if not np.any(worse):
                break
            lam[worse] *= 0.5
        q[a] = qa - lam[:, None] * step
    raise InverseUnavailable("inverse did not converge to %g in %d iterations" % (tol, maxiter))


def _rk4_to(field, t_target, p, h, box=None):
    """Integrate ``dp/dt = field(t, p)`` from 0 to ``t_target`` (per point)."""
    p = np.array(p, dtype=float)
    t_target = np.asarray(t_target, dtype=float)
    n = np.ceil(np.abs(t_target) / h - 1e-9).astype(int)
    dt = np.where(n > 0, t_target / np.maximum(n, 1), 0.0)
    t = np.zeros_like(t_target)
    for k in range(int(n.max(initial=0))):
        a = n > k
        if not np.all(a):
            idx = np.flatnonzero(a)
            p[idx] = _rk4_step(field, t[idx], p[idx], dt[idx])
            t[idx] += dt[idx]
        else:
            p = _rk4_step(field, t, p, dt)
            t = t + dt
        if not np.all(np.isfinite(p)):
            raise IntegratorBlowup("integration produced non-finite values")
        if box is not None and np.any((p < box[0]) | (p > box[1])):
            raise IntegratorBlowup("trajectory left the bounding box")
    return p


def _rk4_step(field, t, p, dt):
    d = dt[:, None]
    k1 = field(t, p)
    k2 = field(t + dt / 2, p + d / 2 * k1)
    k3 = field(t + dt / 2, p + d / 2 * k2)
    k4 = field(t + dt, p + d * k3)
    return p + d / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


class VectorFieldIsotopy(IdentityIsotopy):
    """Flow of a time-dependent vector field, integrated by classical RK4.

    ``field(t, p)`` returns velocities, ``h`` is the fixed step and
    ``lipschitz`` a Lipschitz constant of the field in space (used to bound
    the speed between grid points by Gronwall's inequality).
    """

    kind = "field"

    def __init__(self, surface, field, h=1e-3, lipschitz=None, speed=None, box=None,
                 name=None, params=None):
        self.field = field
        self.h = float(h)
        if not 0 < self.h <= 0.5:
            raise ValueError("integrator step must lie in (0, 0.5]")
        self.lipschitz = lipschitz
        self.box = None if box is None else (np.asarray(box[0], float), np.asarray(box[1], float))
        super().__init__(surface, self._integrate, speed=speed, name=name, params=params)

    def _integrate(self, t, p):
        if np.any(t < 0) or np.any(t > 1 + 1e-12):
            raise ValueError("isotopy time outside [0, 1]")
        return _rk4_to(self.field, t, p, self.h, self.box)

    def with_step(self, h):
        new = object.__new__(type(self))
        new.__dict__.update(self.__dict__)
        new.h = float(h)
        new._func = new._integrate
        return new

    def inverse_time_one(self, p, tol=1e-10, maxiter=100):
        # backward integration of the reversed field; exact up to the scheme error
        p = np.asarray(p, dtype=float)
        q = p.reshape(-1, 2)
        back = lambda t, x: -self.field(1.0 - t, x)
        out = _rk4_to(back, np.ones(len(q)), q, self.h, self.box)
        return out.reshape(p.shape)

    def grid(self):
        n = int(np.ceil(1.0 / self.h - 1e-9))
        return np.linspace(0.0, 1.0, n + 1)

    def polyline(self, P0, clearance=None, n0=None, safety=0.9, refine=4, levels=2):
        """RK4 grid trajectories; unsafe steps are re-integrated with ``h/refine``."""
        P0 = np.asarray(P0, dtype=float).reshape(-1, 2)
        N = len(P0)
        ts = self.grid()
        pts = np.empty((len(ts), N, 2))
        pts[0] = P0
        for k in range(1, len(ts)):
            dt = np.full(N, ts[k] - ts[k - 1])
            pts[k] = _rk4_step(self.field, np.full(N, ts[k - 1]), pts[k - 1], dt)
            if not np.all(np.isfinite(pts[k])):
                raise IntegratorBlowup("integration produced non-finite values")
            if self.box is not None and np.any((pts[k] < self.box[0]) | (pts[k] > self.box[1])):
                raise IntegratorBlowup("trajectory left the bounding box")
        owner = np.repeat(np.arange(N), len(ts))
        t = np.tile(ts, N)
        P = pts.transpose(1, 0, 2).reshape(-1, 2)
        failed = np.zeros(N, dtype=bool)
        if clearance is None:
            return owner, t, P, failed
        for level in range(levels + 1):
            same = owner[1:] == owner[:-1]
            dt = t[1:] - t[:-1]
            c = clearance(P, owner)
            v = np.hypot(*self.field(t, P).T)
            growth = np.exp((self.lipschitz or 0.0) * dt)
            est = np.maximum(v[1:], v[:-1]) * growth * dt
            if self.lipschitz is None:
                est = np.maximum(est, 2 * np.hypot(*(P[1:] - P[:-1]).T))
            bad = same & (est >= safety * (c[1:] + c[:-1]))
            if not np.any(bad):
                break
            if level == levels:
                failed[owner[:-1][bad]] = True
                break
            j = np.flatnonzero(bad)
            sub = refine ** (level + 1)
            new_t, new_p, new_o = [], [], []
            cur = P[j].copy()
            tc = t[j].copy()
            step = dt[j] / sub
            for s in range(1, sub):
                cur = _rk4_step(self.field, tc, cur, step)
                tc = tc + step
                new_t.append(tc.copy())
                new_p.append(cur.copy())
                new_o.append(owner[j])
            t = np.concatenate([t] + new_t)
            P = np.concatenate([P] + new_p)
            owner = np.concatenate([owner] + new_o)
            order = np.lexsort((t, owner))
            t, P, owner = t[order], P[order], owner[order]
        return owner, t, P, failed


class HamiltonianIsotopy(VectorFieldIsotopy):
    """Hamiltonian flow for the area form dx^dy.

    ``H(t, p)`` is the Hamiltonian and ``grad(t, p)`` its gradient; the
    field is ``(-dH/dy, dH/dx)``.
    """

    def __init__(self, surface, H, grad, h=1e-3, lipschitz=None, speed=None, name=None,
                 params=None):
        self.H = H
        self.grad = grad

        def field(t, p):
            g = grad(t, p)
            return np.stack([-g[..., 1], g[..., 0]], axis=-1)

        super().__init__(surface, field, h=h, lipschitz=lipschitz, speed=speed, name=name,
                         params=params)


def identity(surface=PLANE):
    return IdentityIsotopy(surface, lambda t, p: p.copy(), speed=0.0, inverse=lambda p: p.copy(),
                           name="identity")


def compose(isos):
    """Concatenate isotopies: on ``[(k-1)/n, k/n]`` run the k-th one after the
    time-one maps of its predecessors."""
    isos = list(isos)
    if not isos:
        raise ValueError("nothing to compose")
    if len(isos) == 1:
        return isos[0]
    surface = isos[0].surface
    if any(I.surface != surface for I in isos):
        raise ValueError("isotopies live on different surfaces")
    n = len(isos)

    def func(t, p):
        k = np.minimum(np.floor(t * n), n - 1).astype(int)
        s = t * n - k
        out = p.copy()
        for j in range(n):
            m = k > j
            if np.any(m):
                out[m] = isos[j].time_one(out[m])
            m = k == j
            if np.any(m):
                out[m] = isos[j].lift_eval(s[m], out[m])
        return out

    def inv(p):
        for I in reversed(isos):
            p = I.inverse_time_one(p)
        return p

    sups = [I.sup_speed() for I in isos]
    speed = n * max(sups) if all(np.isfinite(sups)) else None
    new = IdentityIsotopy(surface, func, speed=speed, inverse=inv,
                          name="compose(%s)" % ", ".join(I.name for I in isos))
    new.parts = isos
    return new


def inverse(iso):
    """Inverse isotopy ``t -> F_{1-t} o F_1^{-1}`` with time-one map ``F^{-1}``."""

    def func(t, p):
        q = iso.inverse_time_one(p)
        return iso.lift_eval(1.0 - t, q)

    sup = iso.sup_speed()
    new = IdentityIsotopy(iso.surface, func, speed=sup if np.isfinite(sup) else None,
                          inverse=iso.time_one, name="inverse(%s)" % iso.name)
    new.source = iso
    return new


def conjugate_translation(iso, v):
    """``t -> T_v o F_t o T_v^{-1}`` for the rigid translation ``T_v(p) = p + v``."""
    v = np.asarray(v, dtype=float)

    def func(t, p):
        return iso.lift_eval(t, p - v) + v

    speed = iso._speed
    if callable(speed):
        sup = getattr(speed, "sup", np.inf)
        speed = _SpeedFn(lambda p: iso.speed_bound(p - v), sup)
    new = IdentityIsotopy(iso.surface, func, speed=speed,
                          inverse=lambda p: iso.inverse_time_one(p - v) + v,
                          name="conj(%s, %s)" % (iso.name, tuple(v)))
    new.source = iso
    return new


def iterate(iso, n):
    """Isotopy ``(F_t)_{t in [0, n]}`` rescaled to ``[0, 1]``; time-one map ``F^n``."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n == 1:
        return iso
    new = compose([iso] * n)
    new.name = "%s^%d" % (iso.name, n)
    # trajectories of the iterate are concatenated unit trajectories
    new.polyline = _iterated_polyline(iso, n)
    new.base = iso
    new.power = n
    return new


def _iterated_polyline(iso, n):
    def polyline(P0, clearance=None, n0=None, safety=0.9):
        P0 = np.asarray(P0, dtype=float).reshape(-1, 2)
        parts = []
        cur = P0
        failed = np.zeros(len(P0), dtype=bool)
        for j in range(n):
            o, t, P, f = iso.polyline(cur, clearance=clearance, safety=safety)
            failed |= f
            parts.append((o, (t + j) / n, P))
            last = np.flatnonzero(np.r_[o[1:] != o[:-1], True])
            cur = P[last]
        o = np.concatenate([p[0] for p in parts])
        t = np.concatenate([p[1] for p in parts])
        P = np.concatenate([p[2] for p in parts])
        order = np.lexsort((t, o))
        o, t, P = o[order], t[order], P[order]
        keep = np.r_[True, (o[1:] != o[:-1]) | (t[1:] > t[:-1])]
        return o[keep], t[keep], P[keep], failed
    return polyline


class LiftedIsotopy:
    """A lifted isotopy with its deck group and displacement bound ``K``."""

    def __init__(self, iso, K):
        self.iso = iso
        self.K = float(K)
        self.surface = iso.surface

    def __getattr__(self, name):
        return getattr(self.iso, name)

    def __repr__(self):
        return "LiftedIsotopy(%r, K=%.4g)" % (self.iso, self.K)


def _fundamental_grid(surface, n, window=None):
    if window is None:
        window = ((0.0, 0.0), (1.0, 1.0)) if surface == TORUS else ((0.0, -1.0), (1.0, 1.0))
        if surface == PLANE:
            window = ((-1.0, -1.0), (1.0, 1.0))
    (x0, y0), (x1, y1) = window
    xs = x0 + (np.arange(n) + 0.5) / n * (x1 - x0)
    ys = y0 + (np.arange(n) + 0.5) / n * (y1 - y0)
    return np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1).reshape(-1, 2)


def displacement_bound(iso, n_grid=16, n_t=17, window=None):
    """Sampled ``sup |F~_t(z) - z|`` over a fundamental domain and ``t in [0, 1]``."""
    P = _fundamental_grid(iso.surface, n_grid, window)
    ts = np.linspace(0, 1, n_t)
    tt = np.repeat(ts, len(P))
    pp = np.tile(P, (n_t, 1))
    d = iso.lift_eval(tt, pp) - pp
    return float(np.max(np.hypot(d[:, 0], d[:, 1])))


def lift(iso, base_func=None, n_grid=16, window=None, safety=2.0):
    """Lift an isotopy to the universal cover.

    ``iso`` may already carry a lift (the usual case for formulas written in
    cover coordinates).  Otherwise pass ``base_func(t, z)``, an evaluator on
    the base, and the lift is built by continuation in ``t``.
    """
    if base_func is not None:
        iso = continuation_lift(iso.surface if isinstance(iso, IdentityIsotopy) else iso,
                                base_func)
    if isinstance(iso, LiftedIsotopy):
        return iso
    K = safety * displacement_bound(iso, n_grid=n_grid, window=window)
    return LiftedIsotopy(iso, K)


def continuation_lift(surface, base_func, n0=32, max_halvings=30, name="continued"):
    """Isotopy whose lift tracks ``base_func(t, z)`` continuously from ``t = 0``.

    At each time step the branch nearest to the previous position is chosen;
    steps are halved until every per-step motion is below 1/4 (so the
    choice is unambiguous), and ``ContinuationAmbiguous`` is raised when
    halving does not get there.
    """
    check_surface(surface)
    per = periodic_mask(surface)

    def func(t, p):
        out = p.copy()
        base = project(p, surface)
        shift = p - base
        todo = np.flatnonzero(t > 0)
        if len(todo) == 0:
            return out
        # every point runs on a grid of n0 * 2^j steps up to its own time
        start = base[todo]
        cur = start.copy()
        tt = t[todo]
        steps = np.full(len(todo), n0)
        tc = np.zeros(len(todo))
        while True:
            active = tc < tt - 1e-15
            if not np.any(active):
                break
            a = np.flatnonzero(active)
            dt = np.minimum(tt[a] / steps[a], tt[a] - tc[a])
            nxt = np.asarray(base_func(tc[a] + dt, start[a]), dtype=float)
            d = wrap(nxt - project(cur[a], surface), surface)
            d[:, ~per] = nxt[:, ~per] - cur[a][:, ~per]
            big = np.hypot(d[:, 0], d[:, 1]) >= 0.25
            if np.any(big):
                steps[a[big]] *= 2
                if np.any(steps[a[big]] > n0 * 2 ** max_halvings):
                    raise ContinuationAmbiguous("per-step motion stays above 1/4")
            ok = a[~big]
            cur[ok] += d[~big]
            tc[ok] += dt[~big]
        out[todo] = cur + shift[todo]
        return out

    return IdentityIsotopy(surface, func, name=name)


def _cmul(a, b):
    return np.stack([a[..., 0] * b[..., 0] - a[..., 1] * b[..., 1],
                     a[..., 0] * b[..., 1] + a[..., 1] * b[..., 0]], axis=-1)


def _cdiv(a, b):
    den = b[..., 0] ** 2 + b[..., 1] ** 2
    return np.stack([(a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1]) / den,
                     (a[..., 1] * b[..., 0] - a[..., 0] * b[..., 1]) / den], axis=-1)


def mobius_normalize(iso, fixpts, tol=1e-9):
    """Compose ``F_t`` with time-dependent Moebius maps fixing the given points.

    Returns ``I'(z)(t) = M_t(F~_t(z))`` where ``M_t`` sends ``F~_t(v_i)`` back
    to ``v_i``.  With fewer than three points ``infinity`` is fixed as well, so
    ``M_t`` is a translation (one point) or a complex affine map (two points).
    The result is an isotopy of the plane.
    """
    v = np.asarray(fixpts, dtype=float).reshape(-1, 2)
    if not 1 <= len(v) <= 3:
        raise ValueError("one to three points are required")
    for i in range(len(v)):
        for j in range(i):
            if np.hypot(*(v[i] - v[j])) <= tol:
                raise ValueError("normalizing points must be distinct")
    moved = np.hypot(*(iso.time_one(v) - v).T)
    if np.any(moved > tol):
        raise NotFixed("point moves by %.3g under the time-one map" % moved.max())
    nv = len(v)
    if iso.fixes(v, tol=tol):
        # M_t is the identity: keep the isotopy (and its speed bound) as it is
        new = IdentityIsotopy(PLANE, iso.lift_eval, speed=iso._speed, inverse=iso._inverse,
                              name="normalized(%s)" % iso.name)
        new.normalized_at = v.copy()
        new.source = iso
        return new

    def M(t, w):
        # images of the normalizing points at each time
        W = [iso.lift_eval(t, np.broadcast_to(v[i], w.shape)) for i in range(nv)]
        if nv == 1:
            return w + (v[0] - W[0])
        if nv == 2:
            dw = W[1] - W[0]
            if np.any(np.hypot(dw[:, 0], dw[:, 1]) <= tol):
                raise DegenerateMobius("normalizing points collide")
            lam = _cdiv(v[1] - v[0], dw)
            return v[0] + _cmul(lam, w - W[0])
        return _mobius3(W, v, w, tol)

    def func(t, p):
        return M(t, iso.lift_eval(t, p))

    new = IdentityIsotopy(PLANE, func, name="normalized(%s)" % iso.name)
    new.normalized_at = v.copy()
    new.source = iso
    return new


def _mobius3(W, v, w, tol):
    """Moebius map sending ``W_i`` to ``v_i`` (three points), applied to ``w``."""
    n = len(w)
    c = lambda a: a[..., 0] + 1j * a[..., 1]
    Wc = [c(x) for x in W]
    vc = [complex(*x) for x in v]
    # rows (W_i, 1, -W_i v_i, -v_i) . (a, b, c, d) = 0
    rows = np.stack([np.stack([Wc[i], np.ones(n), -Wc[i] * vc[i], -np.full(n, vc[i])], axis=-1)
                     for i in range(3)], axis=1)
    coef = np.empty((n, 4), dtype=complex)
    for j in range(4):
        minor = np.delete(rows, j, axis=2)
        coef[:, j] = (-1) ** j * np.linalg.det(minor)
    a, b, cc, d = coef.T
    wc = c(w)
    den = cc * wc + d
    scale = np.abs(coef).max(axis=1)
    if np.any(np.abs(den) <= tol * np.maximum(scale, 1e-300) * np.maximum(1, np.abs(wc))):
        raise DegenerateMobius("c z + d vanishes along the trajectory")
    z = (a * wc + b) / den
    return np.stack([z.real, z.imag], axis=-1)


def deck_commutation_residual(iso, n_grid=8, n_t=5, rng=None):
    """Max ``|F~_t(p + v) - F~_t(p) - v|`` over a grid and integer shifts."""
    if iso.surface == PLANE:
        return 0.0
    rng = np.random.default_rng(0 if rng is None else rng)
    P = _fundamental_grid(iso.surface, n_grid)
    per = periodic_mask(iso.surface)
    v = rng.integers(-3, 4, size=(len(P), 2)).astype(float)
    v[:, ~per] = 0.0
    worst = 0.0
    for t in np.linspace(0, 1, n_t):
        d = iso.lift_eval(t, P + v) - iso.lift_eval(t, P) - v
        worst = max(worst, float(np.abs(d).max()))
    return worst


def check_identity_at_zero(iso, n_grid=32, tol=1e-9):
    P = _fundamental_grid(iso.surface, n_grid)
    return float(np.abs(iso.lift_eval(0.0, P) - P).max()) <= tol


__all__ = ["IdentityIsotopy", "VectorFieldIsotopy", "HamiltonianIsotopy", "LiftedIsotopy",
           "identity", "compose", "inverse", "iterate", "lift", "continuation_lift",
           "mobius_normalize", "displacement_bound", "deck_commutation_residual",
           "check_identity_at_zero", "speed_fn", "TORUS", "ANNULUS", "PLANE", "EPS_GEO"]
