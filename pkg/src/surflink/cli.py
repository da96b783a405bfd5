"""Command-line front end.

Usage: ``python -m surflink SUBCOMMAND [--config FILE] [--seed N] ...``

A scenario config is a YAML (or JSON) mapping; the keys are listed in
``CONFIG_KEYS`` and unknown keys are rejected.  Command-line flags override
config values.  Records go to ``--out`` (default stdout) as JSON lines; the
human-readable matrix of ``reproduce-paper`` goes to stderr.

Exit status: 0 all checks pass, 1 a check failed, 2 config error,
3 numeric fault.
"""
import os
import sys

# thread budget has to be set before numpy is imported
_threads = os.environ.get("SURFLINK_THREADS")
if _threads:
    for _v in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_v, _threads)

import argparse
import csv
import inspect
import io
import json

import numpy as np
import yaml

from . import checks
from .action import action_difference, classical_action, classical_delta, spectrum
from .cover import PLANE, TORUS
from .diskchain import FreeDisk, find_periodic_chains, verify_chain_bound
from .errors import ConfigError, NumericFault, SurflinkError
from .isotopy import lift
from .linking import (deck_summed_linking, planar_linking, triple_linking_fixed,
                      triple_linking_recurrent, wb_diagnostic)
from .measures import AtomicMeasure, GridDensity
from .recurrence import Disk, kac_check, rotation_number_annulus, rotation_vector_torus
from .zoo import _ENTRIES, ZOO_NAMES, rigid_rotation, standard_twist, translation_flow, zoo

SUBCOMMANDS = ("rotnum", "linking", "triple", "action", "spectrum", "chain", "kac",
               "classical", "wb", "reproduce-paper", "zoo-list")

CONFIG_KEYS = {
    "map": "zoo name or one of rigid-rotation, standard-twist, translation-flow",
    "params": "keyword parameters of the map factory",
    "measure": "{kind: lebesgue|stock|grid-stock|atoms, n, n_r, points, weights}",
    "a": "first puncture (lift)", "b": "second puncture (lift)",
    "z": "point", "z2": "second point", "x": "fixed point", "y": "fixed point",
    "points": "list of points", "kind": "fixlift or contractible",
    "n_iter": "spectrum widths of iterates 1..n_iter",
    "deck_sum": "linking: sum over deck translates",
    "U": "{center, radius} for kac", "disks": "list of {id, center, radius}",
    "designated": "id of the non-free disk of a chain",
    "N": "bound parameter for chains (default: from wb)",
    "fixed_points": "fixed lifts for wb and chain",
    "h": "integrator step", "n_max": "iterate budget", "tol": "convergence tolerance",
    "seed": "random seed", "k_max": "truncation of the radial families",
    "horizon": "iterate horizon", "n_batches": "Monte Carlo batches",
    "rates": "metadata or measured (radial measures)", "window": "lift sampling window",
    "only": "reproduce-paper: subset of criteria",
}

EXTRA_MAPS = {"rigid-rotation": rigid_rotation, "standard-twist": standard_twist,
              "translation-flow": translation_flow}


def load_config(path):
    if path is None:
        return {}
    with open(path) as fh:
        text = fh.read()
    try:
        cfg = yaml.safe_load(text) if not path.endswith(".json") else json.loads(text)
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise ConfigError("cannot parse %s: %s" % (path, exc))
    if cfg is None:
        return {}
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a mapping")
    unknown = sorted(set(cfg) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError("unknown config keys: %s" % ", ".join(unknown))
    return cfg


def _point(cfg, key, required=True):
    if key not in cfg:
        if required:
            raise ConfigError("missing %r" % key)
        return None
    p = np.asarray(cfg[key], dtype=float)
    if p.shape != (2,):
        raise ConfigError("%r must be a pair of numbers" % key)
    return p


def _points(cfg, key):
    P = np.asarray(cfg.get(key, []), dtype=float)
    if P.ndim != 2 or P.shape[1] != 2 or len(P) == 0:
        raise ConfigError("%r must be a nonempty list of pairs" % key)
    return P


def _pos_int(cfg, key, default):
    v = cfg.get(key, default)
    if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v <= 0:
        raise ConfigError("%r must be a positive integer" % key)
    return int(v)


def _pos_float(cfg, key, default):
    v = cfg.get(key, default)
    try:
        v = float(v)
    except (TypeError, ValueError):
        raise ConfigError("%r must be a number" % key)
    if not v > 0:
        raise ConfigError("%r must be positive" % key)
    return v


def _zoo_factory(name):
    key = str(name).lower().replace("-", "").replace("_", "").replace(" ", "")
    if key not in _ENTRIES:
        raise ConfigError("unknown map %r; known: %s" % (name, ", ".join(
            list(ZOO_NAMES) + sorted(EXTRA_MAPS))))
    return _ENTRIES[key]


def resolve_map(cfg):
    """``(entry or None, isotopy)`` from the ``map`` and ``params`` keys."""
    name = cfg.get("map")
    if name is None:
        raise ConfigError("missing 'map'")
    params = dict(cfg.get("params") or {})
    factory = EXTRA_MAPS.get(name) or _zoo_factory(name)
    accepted = inspect.signature(factory).parameters
    for k in ("h", "k_max"):
        if k in cfg and k in accepted:
            params[k] = cfg[k]
    if name in EXTRA_MAPS:
        try:
            return None, EXTRA_MAPS[name](**params)
        except TypeError as exc:
            raise ConfigError("bad parameters for %s: %s" % (name, exc))
    try:
        e = zoo(name, **params)
    except TypeError as exc:
        raise ConfigError("bad parameters for %s: %s" % (name, exc))
    return e, e.iso


def resolve_lift(cfg, iso):
    win = cfg.get("window")
    if win is None and iso.surface == PLANE:
        win = ((-1, -1), (1, 1))
    return lift(iso, window=win)


def resolve_measure(cfg, entry, iso):
    desc = cfg.get("measure") or {"kind": "lebesgue"}
    if not isinstance(desc, dict):
        raise ConfigError("'measure' must be a mapping")
    kind = desc.get("kind", "lebesgue")
    if kind == "lebesgue":
        n = _pos_int(desc, "n", 16)
        if iso.surface == PLANE:
            raise ConfigError("no Lebesgue box for planar maps; use kind: stock or atoms")
        return GridDensity.lebesgue_box(iso.surface, n=(n, n))
    if kind == "stock":
        if entry is None:
            raise ConfigError("map has no stock measure")
        return entry.measure()
    if kind == "grid-stock":
        if entry is None or "grid_measure" not in entry.extra:
            raise ConfigError("map has no stock grid measure")
        return entry.extra["grid_measure"](n_r=_pos_int(desc, "n_r", 32))
    if kind == "atoms":
        P = _points(desc, "points")
        w = np.asarray(desc.get("weights", np.ones(len(P)) / len(P)), dtype=float)
        return AtomicMeasure(P, w, iso.surface)
    raise ConfigError("unknown measure kind %r" % kind)


# subcommands: each returns a list of records

def _rec(op, inputs, value, **kw):
    return checks.record(op, inputs, value, **kw)


def cmd_zoo_list(cfg):
    out = []
    for name in ZOO_NAMES:
        e = zoo(name)
        out.append(_rec("zoo-list", {"name": name}, name, summary=e.summary, surface=e.iso.surface,
                        params=e.iso.params, fixed=sorted(e.fixed)))
    return out


def cmd_rotnum(cfg):
    entry, iso = resolve_map(cfg)
    z = _point(cfg, "z")
    n_max = _pos_int(cfg, "n_max", 1000)
    tol = _pos_float(cfg, "tol", 1e-3)
    if iso.surface == TORUS:
        est = rotation_vector_torus(lift(iso), z, n_max=n_max, tol=tol)
    else:
        est = rotation_number_annulus(iso.time_one, z, n_max=n_max, tol=tol)
    return [_rec("rotnum", {"map": cfg["map"], "params": cfg.get("params"), "z": z}, est.value,
                 converged=est.converged, n_used=est.n_used)]


def cmd_linking(cfg):
    entry, iso = resolve_map(cfg)
    L = resolve_lift(cfg, iso)
    z, z2 = _point(cfg, "z"), _point(cfg, "z2")
    inputs = {"map": cfg["map"], "z": z, "z2": z2, "deck_sum": bool(cfg.get("deck_sum"))}
    if cfg.get("deck_sum"):
        r = deck_summed_linking(L, z, z2)
        return [_rec("deck-summed-linking", inputs, r.value, n_terms=len(r.deck_terms))]
    return [_rec("linking", inputs, planar_linking(L, z, z2))]


def cmd_triple(cfg):
    entry, iso = resolve_map(cfg)
    L = resolve_lift(cfg, iso)
    a, b, z = _point(cfg, "a"), _point(cfg, "b"), _point(cfg, "z")
    inputs = {"map": cfg["map"], "params": cfg.get("params"), "a": a, "b": b, "z": z}
    Fz = L.time_one(z[None])[0]
    moved = Fz - z
    fixed = np.abs(moved - np.round(moved)).max() < 1e-9
    if fixed:
        v = triple_linking_fixed(L, a, b, z, seed=cfg.get("seed", 0)).value
        extra = {}
        if entry is not None and entry.name == "shear" and np.allclose(z, (0.25, 0.0)) \
                and a[1] == b[1] == 0.5 and a[0] % 1 == 0 and b[0] % 1 == 0:
            extra = dict(expected=int(b[0] - a[0]), provenance="PAPER:shear-triple-linking",
                         tolerance=0, passed=v == int(b[0] - a[0]))
        return [_rec("triple", inputs, v, **extra)]
    r = triple_linking_recurrent(L, a, b, z, n_max=_pos_int(cfg, "n_max", 2000),
                                 tol=_pos_float(cfg, "tol", 1e-3), seed=cfg.get("seed", 0))
    return [_rec("triple", inputs, r.value, converged=r.estimate.converged,
                 returns=r.info["returns"])]


def cmd_action(cfg):
    entry, iso = resolve_map(cfg)
    L = resolve_lift(cfg, iso)
    mu = resolve_measure(cfg, entry, iso)
    a, b = _point(cfg, "a"), _point(cfg, "b")
    seed = int(cfg.get("seed", 0))
    v = action_difference(L, a, b, mu, n_batches=_pos_int(cfg, "n_batches", 10), rng=seed,
                          n_max=_pos_int(cfg, "n_max", 2000), tol=_pos_float(cfg, "tol", 1e-3),
                          rates=cfg.get("rates", "metadata"))
    inputs = {"map": cfg["map"], "measure": cfg.get("measure"), "a": a, "b": b, "seed": seed}
    return [_rec("action", inputs, v.value, stderr=v.stderr, method=v.method,
                 dropped=v.n_dropped)]


def cmd_spectrum(cfg):
    entry, iso = resolve_map(cfg)
    L = resolve_lift(cfg, iso)
    mu = resolve_measure(cfg, entry, iso)
    P = _points(cfg, "points")
    seed = int(cfg.get("seed", 0))
    kw = {"n_batches": _pos_int(cfg, "n_batches", 10), "rng": seed}
    if "rates" in cfg:
        kw["rates"] = cfg["rates"]
    sp = spectrum(L, mu, P, kind=cfg.get("kind", "fixlift"), n_iter=cfg.get("n_iter"), **kw)
    inputs = {"map": cfg["map"], "measure": cfg.get("measure"), "points": P, "seed": seed}
    out = [_rec("spectrum-entry", dict(inputs, point=p), v, stderr=s)
           for p, v, s in zip(sp.points, sp.values, sp.stderr)]
    out.append(_rec("spectrum-width", inputs, sp.width, stderr=sp.width_stderr))
    for n, w, s in sp.info.get("width_series", []):
        out.append(_rec("width-series", dict(inputs, n=n), w, stderr=s))
    return out


def cmd_chain(cfg):
    entry, iso = resolve_map(cfg)
    disks = [FreeDisk(str(d["id"]), tuple(d["center"]), float(d["radius"]))
             for d in cfg.get("disks") or []]
    if not disks:
        raise ConfigError("'disks' must list at least one disk")
    horizon = _pos_int(cfg, "horizon", 20)
    fixed = np.asarray(cfg.get("fixed_points", np.zeros((0, 2))), dtype=float).reshape(-1, 2)
    if "N" in cfg:
        N = int(cfg["N"])
    else:
        N = 0
        if len(fixed) >= 2:
            N = int(np.ceil(wb_diagnostic(resolve_lift(cfg, iso), fixed).max_abs_linking))
    out = []
    for d in disks:
        for ch in find_periodic_chains(iso, disks, horizon, start=d.id,
                                       designated=cfg.get("designated")):
            rep = verify_chain_bound(ch, N, iso, fixed, designated=cfg.get("designated"),
                                     horizon=horizon)
            out.append(_rec("chain", {"map": cfg["map"], "start": d.id, "N": N,
                                      "disks": [x.id for x in ch.disks]},
                            {"width": ch.width, "length": ch.length}, holds=rep.holds,
                            notes=rep.notes))
    return out


def cmd_kac(cfg):
    entry, iso = resolve_map(cfg)
    mu = resolve_measure(cfg, entry, iso)
    U = cfg.get("U")
    if not isinstance(U, dict) or "center" not in U or "radius" not in U:
        raise ConfigError("'U' must be {center, radius}")
    D = Disk(tuple(U["center"]), float(U["radius"]))
    seed = int(cfg.get("seed", 0))
    rep = kac_check(iso.time_one, D, mu, _pos_int(cfg, "horizon", 20), iso.surface,
                    iso.inverse_time_one, _pos_int(cfg, "n_batches", 10), seed)
    return [_rec("kac", {"map": cfg["map"], "U": U, "seed": seed}, rep.difference,
                 stderr=rep.stderr, lhs=rep.lhs, rhs=rep.rhs, passed=rep.passed,
                 expected=0.0, provenance="DERIVED:kac-both-sides",
                 tolerance=2 * rep.stderr)]


def cmd_classical(cfg):
    entry, iso = resolve_map(cfg)
    x, y = _point(cfg, "x"), _point(cfg, "y")
    ax, ay = classical_action(iso, x), classical_action(iso, y)
    d = classical_delta(iso, x, y)
    inputs = {"map": cfg["map"], "x": x, "y": y}
    return [_rec("classical-action", dict(inputs, point="x"), ax.value, area=ax.area),
            _rec("classical-action", dict(inputs, point="y"), ay.value, area=ay.area),
            _rec("classical-delta", inputs, d, expected=ay.value - ax.value,
                 provenance="PAPER:delta-equals-action-difference", tolerance=1e-6,
                 passed=abs(d - ay.value + ax.value) < 1e-6)]


def cmd_wb(cfg):
    entry, iso = resolve_map(cfg)
    L = resolve_lift(cfg, iso)
    P = _points(cfg, "fixed_points")
    rep = wb_diagnostic(L, P)
    return [_rec("wb", {"map": cfg["map"], "fixed_points": P}, rep.max_abs_linking,
                 verdict=rep.verdict, sampled_pairs=rep.sampled_pairs, growth=rep.growth)]


def reproduce(seed, only=None, progress=None):
    results = checks.run_all(seed=seed, only=only, progress=progress)
    records = [r for res in results for r in res.records]
    summary = checks.record("reproduce-paper", {"seed": seed, "only": only},
                            {"criteria": [res.criterion for res in results],
                             "passed": [res.passed for res in results]},
                            criterion=12, stream_digest=checks.stream_digest(records))
    return records + [summary], results


def _matrix(results, stream):
    stream.write("%-3s %-52s %-5s %9s %7s\n" % ("#", "criterion", "pass", "runtime", "budget"))
    for r in results:
        stream.write("%-3d %-52s %-5s %8.1fs %6ss\n"
                     % (r.criterion, r.title, "PASS" if r.passed else "FAIL", r.runtime,
                        "-" if r.budget is None else "%g" % r.budget))
    stream.flush()


# output

def format_records(records, fmt):
    if fmt == "records":
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    cols = ["criterion", "operation", "value", "stderr", "expected", "pass"]
    rows = [[_cell(r.get(c)) for c in cols] for r in records]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols + ["inputs"])
        for r, row in zip(records, rows):
            w.writerow(row + [json.dumps(r["inputs"], sort_keys=True)])
        return buf.getvalue()
    widths = [max(len(c), *(len(row[i]) for row in rows)) if rows else len(c)
              for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(x.ljust(w) for x, w in zip(row, widths)) for row in rows]
    return "\n".join(lines) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "%.10g" % v
    if isinstance(v, list):
        return json.dumps(v)
    return str(v)


def build_parser():
    p = argparse.ArgumentParser(prog="surflink", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", help="YAML or JSON scenario file")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write records here instead of stdout")
    p.add_argument("--format", choices=("records", "table", "csv"), default="records")
    p.add_argument("--tol", type=float)
    p.add_argument("--horizon", type=int)
    return p


COMMANDS = {"rotnum": cmd_rotnum, "linking": cmd_linking, "triple": cmd_triple,
            "action": cmd_action, "spectrum": cmd_spectrum, "chain": cmd_chain,
            "kac": cmd_kac, "classical": cmd_classical, "wb": cmd_wb,
            "zoo-list": cmd_zoo_list}


def main(argv=None, collect=None):
    """Entry point; returns the exit status.  ``collect`` receives check results."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = load_config(args.config)
        for k in ("seed", "tol", "horizon"):
            if getattr(args, k) is not None:
                cfg[k] = getattr(args, k)
        if args.subcommand == "reproduce-paper":
            only = cfg.get("only")
            prog = lambda r: sys.stderr.write("criterion %d done (%.1fs)\n"
                                              % (r.criterion, r.runtime))
            records, results = reproduce(int(cfg.get("seed", 42)), only, progress=prog)
            if collect is not None:
                collect.extend(results)
            _matrix(results, sys.stderr)
        else:
            records = COMMANDS[args.subcommand](cfg)
    except ConfigError as exc:
        sys.stderr.write("config error: %s\n" % exc)
        return 2
    except NumericFault as exc:
        sys.stderr.write("numeric fault (%s): %s\n" % (type(exc).__name__, exc))
        return 3
    except (SurflinkError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write("config error: %s\n" % exc)
        return 2
    text = format_records(records, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if any(r.get("pass") is False for r in records) else 0


def run():
    sys.exit(main())
