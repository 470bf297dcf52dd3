"""Command-line interface: ``dppa generate|analyze|run|verify|plot|sweep``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .algorithms import ALGORITHMS, AlgoConfig, Trajectory, run
from .instance import (Instance, InstanceValidationError, canonical_json, generate_instance,
                       sha256_file)
from .mixing import WEIGHT_SCHEMES
from .netgraph import GraphGenerationError
from .svgplot import line_chart
from .theory import instance_constants
from .verify import TrajectoryMismatchError, verify_trajectory

EXIT_OK, EXIT_DIVERGED, EXIT_INVALID = 0, 2, 3

log = logging.getLogger("dppa")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _dump(obj, path=None):
    text = canonical_json(_jsonable(obj))
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def manifest_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + ".manifest.json")


def initial_point(kind: str, n: int, d: int, seed: int):
    if kind == "zeros":
        return None
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(2,))
    return np.random.Generator(np.random.Philox(ss)).standard_normal((n, d))


def execute_run(instance_path, algo, eta, rounds, out, init="zeros", init_seed=0,
                overflow_guard=1e12) -> tuple[Trajectory, dict]:
    inst = Instance.load(instance_path)
    consts = instance_constants(inst.costs, inst.mixing)
    cfg = AlgoConfig(eta, rounds, initial_point(init, inst.n, inst.d, init_seed), overflow_guard)
    traj = run(algo, cfg, inst.mixing, inst.costs, consts=consts)
    traj.to_csv(out)
    manifest = {
        "instance": str(instance_path),
        "instance_sha256": sha256_file(instance_path),
        "algo": algo,
        "eta": eta,
        "rounds": rounds,
        "init": init,
        "init_seed": init_seed,
        "overflow_guard": overflow_guard,
        "outputs": {"csv": str(out)},
        "constants": consts.to_dict(),
        "diverged": traj.diverged,
        "last_round": int(traj.rows[-1].t),
    }
    _dump(manifest, manifest_path(out))
    return traj, manifest


def cmd_generate(args) -> int:
    inst = generate_instance(args.n, args.m, args.d, args.link_prob, args.seed, args.scale,
                             args.weights)
    if args.out:
        inst.save(args.out)
        log.info("wrote %s (rho_w=%.6g, lambda_min=%.6g)", args.out, inst.mixing.rho_w,
                 inst.mixing.lambda_min)
    else:
        sys.stdout.write(inst.to_json())
    return EXIT_OK


def cmd_analyze(args) -> int:
    inst = Instance.load(args.instance)
    consts = instance_constants(inst.costs, inst.mixing)
    if not consts.theorem_checks_enabled:
        log.warning("aggregate Hessian is singular: alpha=0, theorem checks disabled")
    _dump(consts.to_dict(), args.out)
    return EXIT_OK


def cmd_run(args) -> int:
    if args.manifest:
        spec = json.loads(Path(args.manifest).read_text())
        out = args.out or spec["outputs"]["csv"]
        traj, _ = execute_run(spec["instance"], spec["algo"], spec["eta"], spec["rounds"], out,
                              spec.get("init", "zeros"), spec.get("init_seed", 0),
                              spec.get("overflow_guard", 1e12))
    else:
        if args.eta is None or not args.out:
            raise SystemExit("run needs --eta and --out (or --manifest)")
        out = args.out
        traj, _ = execute_run(args.instance, args.algo, args.eta, args.rounds, out,
                              args.init, args.init_seed, args.overflow_guard)
    last = traj.rows[-1]
    status = "diverged" if traj.diverged else "ok"
    print(f"{traj.algo} eta={traj.eta:g}: {status} at t={last.t}, "
          f"mean_err={last.mean_err:.6g} -> {out}")
    return EXIT_DIVERGED if traj.diverged else EXIT_OK


def cmd_verify(args) -> int:
    inst = Instance.load(args.instance)
    algo, eta = args.algo, args.eta
    mpath = Path(args.manifest) if args.manifest else manifest_path(args.trajectory)
    spec = {}
    if mpath.exists():
        spec = json.loads(mpath.read_text())
        if spec.get("instance_sha256") not in (None, sha256_file(args.instance)):
            raise TrajectoryMismatchError(
                f"{args.trajectory} was produced from a different instance")
        algo = algo or spec["algo"]
        eta = eta if eta is not None else spec["eta"]
    if algo is None or eta is None:
        raise SystemExit("verify needs --algo and --eta when no manifest is available")
    traj = Trajectory.from_csv(args.trajectory, algo=algo, eta=eta,
                               diverged=bool(spec.get("diverged", False)))
    report = verify_trajectory(inst, traj, algo, eta)
    for line in report.lines():
        print(line)
    if args.out:
        _dump(report.to_dict(), args.out)
    return EXIT_OK if report.passed else EXIT_INVALID


def _series(paths, labels):
    if labels and len(labels) != len(paths):
        raise SystemExit(f"{len(labels)} labels for {len(paths)} CSV files")
    out = []
    for k, p in enumerate(paths):
        traj = Trajectory.from_csv(p)
        out.append((labels[k] if labels else Path(p).stem, traj.t.astype(float),
                    traj.column("mean_err")))
    return [(lab, t, np.log10(np.where(v > 0, v, np.nan))) for lab, t, v in out]


def cmd_plot(args) -> int:
    svg = line_chart(_series(args.csv, args.labels), title=args.title or "",
                     xlabel="t", ylabel="log10 mean error")
    Path(args.out).write_text(svg)
    return EXIT_OK


def cmd_sweep(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    paths, labels, any_div = [], [], False
    for eta in args.etas:
        csv_path = outdir / f"{args.algo}_eta{eta:g}.csv"
        traj, _ = execute_run(args.instance, args.algo, eta, args.rounds, csv_path, args.init,
                              args.init_seed, args.overflow_guard)
        any_div |= traj.diverged
        last = traj.rows[-1]
        print(f"{args.algo} eta={eta:g}: {'diverged' if traj.diverged else 'ok'} "
              f"t={last.t} mean_err={last.mean_err:.6g}")
        paths.append(csv_path)
        labels.append(f"eta={eta:g}")
    if args.plot:
        Path(args.plot).write_text(line_chart(_series(paths, labels),
                                              title=f"{args.algo.upper()} stepsize sweep",
                                              ylabel="log10 mean error"))
    return EXIT_DIVERGED if any_div else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dppa", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random least-squares network instance")
    g.add_argument("--n", type=int, default=20)
    g.add_argument("--m", type=int, default=5)
    g.add_argument("--d", type=int, default=10)
    g.add_argument("--link-prob", type=float, default=0.4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--scale", type=float, default=0.5)
    g.add_argument("--weights", choices=WEIGHT_SCHEMES, default="metropolis-hastings")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="print the instance constants as JSON")
    a.add_argument("instance")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    def run_options(sp):
        sp.add_argument("--algo", choices=ALGORITHMS, default="dppa")
        sp.add_argument("--rounds", type=int, default=500)
        sp.add_argument("--init", choices=("zeros", "random"), default="zeros")
        sp.add_argument("--init-seed", type=int, default=0)
        sp.add_argument("--overflow-guard", type=float, default=1e12,
                        help="stop and report divergence once any |x| exceeds this")

    r = sub.add_parser("run", help="run DPPA or DGD and write the trajectory CSV")
    r.add_argument("instance", nargs="?")
    r.add_argument("--eta", type=float)
    r.add_argument("--out")
    r.add_argument("--manifest", help="replay a previous run from its manifest")
    run_options(r)
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="check a trajectory against the theory")
    v.add_argument("instance")
    v.add_argument("trajectory")
    v.add_argument("--manifest")
    v.add_argument("--algo", choices=ALGORITHMS)
    v.add_argument("--eta", type=float)
    v.add_argument("--out", help="write the report as JSON")
    v.set_defaults(func=cmd_verify)

    pl = sub.add_parser("plot", help="SVG chart of log10 mean error against t")
    pl.add_argument("csv", nargs="+")
    pl.add_argument("--labels", nargs="+")
    pl.add_argument("--title")
    pl.add_argument("--out", required=True)
    pl.set_defaults(func=cmd_plot)

    s = sub.add_parser("sweep", help="run over a list of stepsizes")
    s.add_argument("instance")
    s.add_argument("--etas", type=float, nargs="+", default=[0.001, 0.01, 0.1, 1.0, 2.0])
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--plot", help="also write an SVG of all runs")
    run_options(s)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InstanceValidationError, TrajectoryMismatchError, GraphGenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
