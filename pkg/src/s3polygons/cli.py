"""Command-line front end: ``s3polygons solve|flow|braid|verify|export``.

Exit codes: 0 ok, 1 bad config or parse error, 2 no solution, 3 degenerate
diagonal, 4 verification failure.  Errors are reported on stderr as one
line of JSON.
"""

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import bending, braid, moduli, verify
from .errors import (BadIndex, BadRadius, BraidParseError, DegenerateDiagonal,
                     DegenerateElement, DegeneratePoint, NoSolution)

SCHEMA_VERSION = 1

EXIT_OK, EXIT_CONFIG, EXIT_NOSOLUTION, EXIT_DEGENERATE, EXIT_VERIFY = 0, 1, 2, 3, 4

DEFAULTS = {
    "n": None,
    "side_lengths": None,
    "seed": 0,
    "tolerance": 1e-10,
    "output_path": None,
    "format": "json",
    "j": 2,
    "angle": 2 * np.pi,
    "samples": 100,
    "word": None,
    "suite": "all",
    "trials": None,
}


class ConfigError(ValueError):
    pass


class RunConfig:
    """Validated run settings: file values first, then command-line flags."""

    def __init__(self, **kw):
        unknown = set(kw) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values = dict(DEFAULTS, **{k: v for k, v in kw.items() if v is not None})
        self.__dict__.update(values)
        self._validate()

    def _validate(self):
        if self.side_lengths is None:
            n = 4 if self.n is None else int(self.n)
            self.side_lengths = [np.pi / 2] * max(n, 0)
        self.side_lengths = [float(r) for r in self.side_lengths]
        if self.n is None:
            self.n = len(self.side_lengths)
        self.n = int(self.n)
        if self.n != len(self.side_lengths):
            raise ConfigError(f"n = {self.n} but {len(self.side_lengths)} side lengths given")
        try:
            moduli.check_side_lengths(self.side_lengths)
        except BadRadius as exc:
            raise ConfigError(str(exc)) from None
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        if int(self.samples) < 1:
            raise ConfigError("samples must be >= 1")
        self.samples = int(self.samples)
        self.seed = int(self.seed)
        self.j = int(self.j)
        self.angle = float(self.angle)

    def as_dict(self):
        return {k: getattr(self, k) for k in DEFAULTS}


def _parse_sides(text):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad side-length list {text!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--n", type=int)
    common.add_argument("--sides", type=_parse_sides, dest="side_lengths",
                        help="comma-separated side lengths in (0, pi)")
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float, dest="tolerance")
    common.add_argument("--out", dest="output_path")
    common.add_argument("--format", choices=("json", "csv"))

    parser = argparse.ArgumentParser(prog="s3polygons",
                                     description="Polygons in the 3-sphere via SU(2) holonomies.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve for a closed polygon")
    for name in ("flow", "export"):
        p = sub.add_parser(name, parents=[common],
                           help="normalized bending trajectory" if name == "flow"
                           else "trajectory with stereographic vertex coordinates")
        p.add_argument("--j", type=int)
        p.add_argument("--angle", type=float)
        p.add_argument("--samples", type=int)
    p = sub.add_parser("braid", parents=[common], help="apply a braid word")
    p.add_argument("--word", required=False)
    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=verify.SUITES + ("all",))
    p.add_argument("--trials", type=int, help="cap on trials per check")
    return parser


def load_config(args):
    values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        if not isinstance(values, dict):
            raise ConfigError("config file must hold a JSON object")
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    # verify reads its tolerance override only when explicitly given
    if args.command == "verify":
        values.setdefault("tolerance", None)
        tol = values.pop("tolerance")
        cfg = RunConfig(**values)
        cfg.tolerance = tol
        if tol is not None and not tol > 0:
            raise ConfigError("tolerance must be positive")
        return cfg
    return RunConfig(**values)


# ---- document helpers

def _floats(a):
    return [float(v) for v in np.asarray(a, dtype=float).reshape(-1)]


def _quats(a):
    return [_floats(q) for q in np.asarray(a)]


def _diagonals(t):
    return {f"l_1_{k}": moduli.diagonal_length(t, 1, k) for k in range(2, t.n + 2)}


def _tuple_report(t):
    return {
        "tuple": _quats(t.g),
        "side_lengths": _floats(moduli.side_length(t.g)),
        "prefix_traces": [bending.f_val(t, j) for j in range(1, t.n + 1)],
        "residual": moduli.closure_residual(t),
    }


def _emit(cfg, doc, rows=None, header=None):
    if cfg.format == "csv" and rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
        text = buf.getvalue()
    else:
        text = json.dumps(doc, indent=2) + "\n"
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _solved(cfg):
    return moduli.solve_closure(cfg.side_lengths, seed=cfg.seed, tol=cfg.tolerance)


def load_tuple(path):
    """Holonomy tuple stored in a json document written by ``solve``."""
    with open(path) as fh:
        doc = json.load(fh)
    return moduli.HolonomyTuple(np.array(doc["tuple"]))


# ---- commands

def cmd_solve(cfg):
    t = _solved(cfg)
    poly = moduli.to_polygon(t)
    doc = {"schema_version": SCHEMA_VERSION, "command": "solve", "config": cfg.as_dict()}
    doc.update(_tuple_report(t))
    doc["vertices"] = _quats(poly.vertices)
    doc["closed"] = poly.closed
    doc["diagonals"] = _diagonals(t)
    header = ["k", "g_w", "g_x", "g_y", "g_z", "v_w", "v_x", "v_y", "v_z", "l_1_k"]
    rows = []
    for k in range(t.n + 1):
        g = _floats(t.g[k]) if k < t.n else ["", "", "", ""]
        ell = moduli.diagonal_length(t, 1, k + 1) if k > 0 else 0.0
        rows.append([k + 1] + g + _floats(poly.vertices[k]) + [ell])
    _emit(cfg, doc, rows, header)
    return EXIT_OK


def _trajectory(cfg, t):
    angles = np.linspace(0.0, cfg.angle, cfg.samples) if cfg.samples > 1 else np.zeros(1)
    start = np.array([bending.f_val(t, k) for k in range(1, t.n + 1)])
    for a in angles:
        moved = bending.flow_ell(t, cfg.j, a)
        f = np.array([bending.f_val(moved, k) for k in range(1, t.n + 1)])
        yield float(a), moved, float(np.abs(f - start).max())


def cmd_flow(cfg):
    t = _solved(cfg)
    if not 1 <= cfg.j <= t.n:
        raise BadIndex(f"j = {cfg.j} outside 1..{t.n}")
    records = []
    rows = []
    n = t.n
    for a, moved, drift in _trajectory(cfg, t):
        verts = moduli.to_polygon(moved).vertices
        ells = [moduli.diagonal_length(moved, 1, k) for k in range(2, n + 1)]
        records.append({"angle": a, "vertices": _quats(verts), "lengths": ells, "drift": drift})
        rows.append([a] + [v for q in verts for v in _floats(q)] + ells + [drift])
    header = (["angle"] + [f"v{k}_{c}" for k in range(1, n + 2) for c in "wxyz"]
              + [f"l_1_{k}" for k in range(2, n + 1)] + ["drift"])
    doc = {"schema_version": SCHEMA_VERSION, "command": "flow", "config": cfg.as_dict(),
           "input": _tuple_report(t), "records": records}
    _emit(cfg, doc, rows, header)
    return EXIT_OK


def stereographic(q):
    """Projection from ``-1`` of unit quaternions to R^3."""
    q = np.asarray(q, dtype=float)
    return q[..., 1:] / (1.0 + q[..., :1])


def cmd_export(cfg):
    t = _solved(cfg)
    if not 1 <= cfg.j <= t.n:
        raise BadIndex(f"j = {cfg.j} outside 1..{t.n}")
    rows = []
    points = []
    for a, moved, _ in _trajectory(cfg, t):
        xyz = stereographic(moduli.to_polygon(moved).vertices)
        points.append({"angle": a, "points": [_floats(p) for p in xyz]})
        rows.extend([a, k + 1] + _floats(p) for k, p in enumerate(xyz))
    doc = {"schema_version": SCHEMA_VERSION, "command": "export", "config": cfg.as_dict(),
           "projection": "stereographic from -1", "frames": points}
    _emit(cfg, doc, rows, ["angle", "vertex", "X", "Y", "Z"])
    return EXIT_OK


def cmd_braid(cfg):
    word = braid.BraidWord.parse(cfg.word or "")
    t = _solved(cfg)
    out = word.apply(t)
    doc = {"schema_version": SCHEMA_VERSION, "command": "braid", "config": cfg.as_dict(),
           "word": str(word), "input": _tuple_report(t), "output": _tuple_report(out)}
    rows = [[k + 1] + _floats(out.g[k]) + [float(moduli.side_length(out.g[k]))]
            for k in range(out.n)]
    _emit(cfg, doc, rows, ["k", "g_w", "g_x", "g_y", "g_z", "side_length"])
    return EXIT_OK


def cmd_verify(cfg):
    start = time.perf_counter()
    results = verify.run_suite(cfg.suite, seed=cfg.seed, tol=cfg.tolerance, trials=cfg.trials)
    ok = all(r.passed for r in results)
    doc = {"schema_version": SCHEMA_VERSION, "command": "verify", "suite": cfg.suite,
           "seed": cfg.seed, "passed": ok, "checks": [r.as_dict() for r in results]}
    rows = [[r.suite, r.name, r.measured, r.tolerance, r.trials, r.passed] for r in results]
    _emit(cfg, doc, rows, ["suite", "check", "measured", "tolerance", "trials", "passed"])
    elapsed = time.perf_counter() - start
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.suite}.{r.name} "
              f"{r.measured:.3e} < {r.tolerance:.1e}", file=sys.stderr)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed in {elapsed:.1f}s",
          file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {"solve": cmd_solve, "flow": cmd_flow, "export": cmd_export,
            "braid": cmd_braid, "verify": cmd_verify}


def _fail(code, kind, message, **extra):
    print(json.dumps(dict(error=kind, message=message, exit=code, **extra)), file=sys.stderr)
    return code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; here 2 means no solution
        return EXIT_OK if not exc.code else EXIT_CONFIG
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg)
    except BraidParseError as exc:
        return _fail(EXIT_CONFIG, "BraidParseError", str(exc), token=exc.token, offset=exc.offset)
    except (ConfigError, BadIndex) as exc:
        return _fail(EXIT_CONFIG, type(exc).__name__, str(exc))
    except NoSolution as exc:
        return _fail(EXIT_NOSOLUTION, "NoSolution", str(exc))
    except (DegenerateDiagonal, DegenerateElement, DegeneratePoint) as exc:
        return _fail(EXIT_DEGENERATE, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
