"""Command-line front end.

Every subcommand writes plot-ready JSON or CSV files into ``--out``. Exit
codes: 0 success, 2 invalid input, 3 numerical failure.
"""

import argparse
import csv
import json
import math
import os
import sys
import warnings

import numpy as np

from ._errors import InvalidArgument, InvalidData, NumericalFailure
from .cd_kernel import build_evaluator, f_zeta, uniform_grid, GridFunction
from .dynamics import (
    CatMapState, LorenzState, cat_map_trajectory, load_trajectory, lorenz_trajectory,
    random_cat_state, random_lorenz_state, write_trajectory,
)
from .moments import MomentSequence, estimate_moments
from .orthopoly import companion_roots, hankel_dmd, monic_orthogonal, poly_roots
from .projections import (
    apply_projection, build_partition, interval_coeffs, singleton_coeffs,
)
from .weak_approx import cesaro_cdf, quadrature, quadrature_cdf, singularity_indicator

SUBCOMMANDS = ("simulate", "moments", "cd", "cdf", "project", "partition", "dmd")


def _parser():
    p = argparse.ArgumentParser(prog="koopspec", description=(
        "Spectral analysis of Koopman operators from a single trajectory."))
    p.add_argument("command", choices=SUBCOMMANDS)
    src = p.add_argument_group("input")
    src.add_argument("--system", choices=("catmap", "lorenz", "file"), default="catmap")
    src.add_argument("--observable", default=None,
                     help="catmap: f1|f2 (default f1); lorenz: x1|x2|x3 (default x1)")
    src.add_argument("--input", help="trajectory CSV for --system file")
    src.add_argument("--moments", help="MomentSequence JSON used instead of a trajectory")
    src.add_argument("-M", type=int, default=100_000, help="number of samples")
    src.add_argument("--seed", type=int, default=0, help="seed for the initial state")
    src.add_argument("--x0", type=float, nargs="+", help="explicit initial state")
    src.add_argument("--ts", type=float, default=None,
                     help="sample period (lorenz default 0.2, catmap 1, file 1)")
    src.add_argument("--substeps", type=int, default=20, help="RK4 steps per sample")
    src.add_argument("--transient", type=float, default=100.0,
                     help="Lorenz time units discarded before sampling")
    ana = p.add_argument_group("analysis")
    ana.add_argument("-N", type=int, default=100, help="number of moments")
    ana.add_argument("--grid", type=int, default=None, help="grid size (default 10N+1)")
    ana.add_argument("--nq", type=int, default=None, help="quadrature grid (default 10N)")
    ana.add_argument("--bins", type=int, default=1000, help="singularity indicator bins")
    ana.add_argument("-K", type=int, default=10, help="partition size")
    ana.add_argument("--theta", type=float, help="project: singleton frequency")
    ana.add_argument("--interval", type=float, nargs=2, metavar=("A", "B"),
                     help="project: arc [A, B)")
    out = p.add_argument_group("output")
    out.add_argument("--out", default=".", help="output directory")
    out.add_argument("--check", action="store_true", help="re-validate written artifacts")
    return p


def _trajectory(args):
    if args.system == "file":
        if not args.input:
            raise InvalidArgument("--system file needs --input PATH")
        return load_trajectory(args.input, args.ts or 1.0)
    if args.input:
        raise InvalidArgument("--input is only valid with --system file")
    if args.system == "catmap":
        x0 = CatMapState(*args.x0) if args.x0 else random_cat_state(args.seed)
        return cat_map_trajectory(x0, args.M, args.observable or "f1")
    x0 = LorenzState(*args.x0) if args.x0 else random_lorenz_state(args.seed)
    return lorenz_trajectory(x0, args.M, args.ts or 0.2, args.substeps,
                             args.observable or "x1", args.transient)


def _moments(args, traj=None):
    if args.moments:
        with open(args.moments, encoding="utf-8") as fh:
            m = MomentSequence.from_json(fh.read())
        if args.N > m.order:
            raise InvalidArgument(f"-N {args.N} exceeds the order {m.order} of {args.moments}")
        return m.truncate(args.N)
    traj = _trajectory(args) if traj is None else traj
    return estimate_moments(traj, args.N)


def _period(args):
    if args.ts:
        return args.ts
    return 0.2 if args.system == "lorenz" and not args.moments else 1.0


def _grid_doc(grid, ts, **extra):
    d = grid.to_dict()
    d["omega"] = (2.0 * np.pi * grid.theta / ts).tolist()
    d.update(extra)
    return d


def _write_json(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, allow_nan=False)
        fh.write("\n")
    return path


def run(args):
    """Execute one subcommand; returns the list of written files."""
    if args.N < 0 or args.M < 1:
        raise InvalidArgument("-N must be >= 0 and -M >= 1")
    if args.moments and args.command in ("simulate", "project"):
        raise InvalidArgument(f"'{args.command}' needs a trajectory, not --moments")
    if args.moments and args.input:
        raise InvalidArgument("give exactly one input source")
    os.makedirs(args.out, exist_ok=True)
    out = lambda name: os.path.join(args.out, name)  # noqa: E731
    n = args.N
    size = args.grid or 10 * n + 1
    ts = _period(args)
    files = []

    if args.command == "simulate":
        path = out("trajectory.csv")
        write_trajectory(path, _trajectory(args))
        return [path]

    if args.command == "project":
        traj = _trajectory(args)
        if (args.theta is None) == (args.interval is None):
            raise InvalidArgument("project needs exactly one of --theta or --interval")
        c = (singleton_coeffs(args.theta, n) if args.theta is not None
             else interval_coeffs(args.interval[0], args.interval[1], n))
        path = out("projection.csv")
        write_trajectory(path, apply_projection(traj, c))
        return [path]

    if args.command == "dmd":
        m = _moments(args)
        zeros = poly_roots(monic_orthogonal(m, n)).zeros
        doc = {"N": n, "orthopoly_zeros": [[z.real, z.imag] for z in zeros]}
        if not args.moments:
            eig = companion_roots(hankel_dmd(_trajectory(args), n), tol=1e-6).zeros
            doc["dmd_eigenvalues"] = [[z.real, z.imag] for z in eig]
        return [_write_json(out("dmd.json"), doc)]

    m = _moments(args)
    if args.command == "moments":
        path = out("moments.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(m.to_json() + "\n")
        return [path]

    if args.command == "partition":
        return [_write_json(out("partition.json"),
                            json.loads(build_partition(m, args.K, n_q=args.nq).to_json()))]

    e = build_evaluator(m)
    th = uniform_grid(size)
    z = GridFunction(th, e.zeta(th))
    if args.command == "cd":
        files.append(_write_json(out("zeta.json"), _grid_doc(z, ts)))
        files.append(_write_json(out("atoms.json"),
                                 _grid_doc(GridFunction(th, z.values / (n + 1)), ts)))
        return files

    # cdf
    q = quadrature(m, args.nq)
    fz = f_zeta(z)
    doc = {"theta": th.tolist(), "omega": (2.0 * np.pi * th / ts).tolist(),
           "cesaro": cesaro_cdf(m, th).tolist(), "quadrature": quadrature_cdf(q, th).tolist(),
           "zeta": fz.values.tolist()}
    files.append(_write_json(out("cdf.json"), doc))
    files.append(_write_json(out("quadrature.json"), json.loads(q.to_json())))
    ind = singularity_indicator(lambda t: cesaro_cdf(m, t), fz, args.bins, mass=m.mass)
    files.append(_write_json(out("singularity.json"),
                             _grid_doc(ind.grid, ts, flagged_bins=list(ind.flagged_bins))))
    return files


_SCHEMAS = {
    "moments.json": {"order": int, "modified": bool, "values": list},
    "zeta.json": {"theta": list, "values": list, "omega": list},
    "atoms.json": {"theta": list, "values": list, "omega": list},
    "cdf.json": {"theta": list, "cesaro": list, "quadrature": list, "zeta": list},
    "quadrature.json": {"n_q": int, "weights": list, "residual": float},
    "singularity.json": {"theta": list, "values": list, "flagged_bins": list},
    "partition.json": {"elements": list, "representatives": list},
    "dmd.json": {"N": int, "orthopoly_zeros": list},
}


def _finite(x):
    if isinstance(x, (list, tuple)):
        return all(_finite(v) for v in x)
    if isinstance(x, dict):
        return all(_finite(v) for v in x.values())
    if isinstance(x, float):
        return math.isfinite(x)
    return True


def check_artifact(path):
    """Validate one artifact; raises :class:`InvalidData` with the reason."""
    name = os.path.basename(path)
    if name.endswith(".csv"):
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0] != ["index", "re", "im"]:
            raise InvalidData(f"{path}: bad CSV header")
        for i, row in enumerate(rows[1:], start=2):
            if len(row) != 3 or int(row[0]) != i - 2 or not all(
                    math.isfinite(float(v)) for v in row[1:]):
                raise InvalidData(f"{path}: bad row at line {i}")
        return
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    schema = _SCHEMAS.get(name)
    if schema is None:
        raise InvalidData(f"{path}: unknown artifact")
    for key, typ in schema.items():
        if key not in doc:
            raise InvalidData(f"{path}: missing key {key!r}")
        if typ is float and isinstance(doc[key], int):
            continue
        if not isinstance(doc[key], typ):
            raise InvalidData(f"{path}: key {key!r} should be {typ.__name__}")
    if not _finite(doc):
        raise InvalidData(f"{path}: non-finite values")
    lengths = {len(doc[k]) for k in ("theta", "values", "omega", "cesaro", "quadrature", "zeta")
               if k in doc}
    if len(lengths) > 1:
        raise InvalidData(f"{path}: array lengths differ")


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, *a, **k: print(f"warning: {msg}", file=sys.stderr)
            files = run(args)
        if args.check:
            for f in files:
                check_artifact(f)
    except (InvalidArgument, InvalidData) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for f in files:
        print(f, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
