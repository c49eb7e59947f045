"""Command-line front end.

Every subcommand accepts ``--seed``, ``--config``, ``--out`` and repeatable
``--set section.key=value`` overrides. Without ``--out`` the results go to
``runs/<timestamp>-<command>``. Each command writes ``manifest.json`` with
the resolved config and SHA-256 digests of its inputs and outputs.

Exit codes: 0 success, 2 invalid input or config, 3 optimization failure,
4 I/O error. Errors are printed to stderr as one JSON object.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .alignment import MeanVarModel
from .config import load_config
from .demogen import generate, write_demoset
from .errors import InvalidInputError, LfdError, OptimizationFailedError
from .metrics import write_reports_csv, write_reports_json
from .pipeline import (
    CHECKPOINT,
    EPISODE_LOG,
    demo_files,
    evaluate,
    file_sha256,
    ingest,
    json_dump,
    load_checkpoint,
    model_from_demos,
    optimize,
    read_episode_log,
    train,
)
from .plots import plot_reports, plot_returns
from .trajectory import Frame, preprocess, read_joint_csv, read_pose_csv, write_joint_csv, write_pose_csv

log = logging.getLogger("constrained_lfd")


def out_dir(args, command):
    if args.out:
        d = Path(args.out)
    else:
        d = Path("runs") / f"{time.strftime('%Y%m%d-%H%M%S')}-{command}"
    d.mkdir(parents=True, exist_ok=True)
    return d


def write_manifest(directory, command, config, inputs=(), outputs=(), extra=None):
    doc = {"command": command,
           "version": __version__,
           "seed": config.seed,
           "config": config.to_dict(),
           "inputs": {str(p): file_sha256(p) for p in inputs},
           "outputs": {Path(p).name: file_sha256(p) for p in outputs}}
    if extra:
        doc.update(extra)
    json_dump(Path(directory) / "manifest.json", doc)


# ---------------------------------------------------------------- commands

def cmd_demogen(args, cfg):
    d = out_dir(args, "demogen")
    paths = write_demoset(generate(cfg.demogen), d, cfg.demogen)
    print(f"wrote {len(paths)} demos to {d}")
    return 0


def cmd_ingest(args, cfg):
    files = demo_files(args.inputs)
    demoset, summary = ingest(files)
    d = out_dir(args, "ingest")
    json_dump(d / "summary.json", summary)
    for s in summary:
        print(f"{s['name']:>12}  {s['samples']:5d} samples  {s['duration_s']:8.3f} s")
    print(f"{len(summary)} demos")
    write_manifest(d, "ingest", cfg, files, [d / "summary.json"])
    return 0


def cmd_model(args, cfg):
    files = demo_files(args.inputs)
    demoset, _ = ingest(files)
    model = model_from_demos(demoset, cfg.window)
    d = out_dir(args, "model")
    model.save(d / "model.json")
    print(f"model: {len(model)} steps from {model.count} demos -> {d / 'model.json'}")
    write_manifest(d, "model", cfg, files, [d / "model.json"])
    return 0


def cmd_train(args, cfg):
    model = MeanVarModel.load(args.model)
    d = out_dir(args, "train")
    res = train(model, cfg, d, resume=args.resume, stop_after=args.stop_after,
                checkpoint_every=args.checkpoint_every)
    outputs = [d / CHECKPOINT, d / EPISODE_LOG]
    if res.episodes:
        plot_returns(res.episodes, d / "returns.svg")
    print(f"trained to episode {res.episode}; return slope over last 20: {res.convergence_slope:.4g}")
    print(f"envelope violations {res.envelope_violations} of {res.states_checked} states")
    write_manifest(d, "train", cfg, [args.model], outputs,
                   {"episode": res.episode, "convergence_slope": res.convergence_slope})
    return 0


def cmd_optimize(args, cfg):
    agent, saved, _ = load_checkpoint(args.checkpoint)
    model = MeanVarModel.load(args.model)
    traj, joints = optimize(agent, model, saved)
    d = out_dir(args, "optimize")
    write_pose_csv(d / "optimized_pose.csv", traj)
    write_joint_csv(d / "optimized_joints.csv", traj.times, joints)
    print(f"optimized trajectory: {len(traj)} poses -> {d}")
    write_manifest(d, "optimize", saved, [args.checkpoint, args.model],
                   [d / "optimized_pose.csv", d / "optimized_joints.csv"])
    return 0


def _labelled_inputs(args, cfg):
    items = []
    if args.demos:
        files = demo_files(args.demos)
        demoset, _ = ingest(files)
        for name, traj in zip(demoset.names, preprocess(demoset, cfg.window)):
            items.append((name, traj, None))
    joints = list(args.joints or [])
    if joints and len(joints) != len(args.poses):
        raise InvalidInputError("--joints must be given once per pose file")
    for i, p in enumerate(args.poses):
        traj = read_pose_csv(p, Frame.MANDREL)
        q = read_joint_csv(joints[i])[1] if joints else None
        items.append((Path(p).stem, traj, q))
    if not items:
        raise InvalidInputError("nothing to evaluate")
    return items


def cmd_evaluate(args, cfg):
    items = _labelled_inputs(args, cfg)
    reports = evaluate(items)
    d = out_dir(args, "evaluate")
    write_reports_csv(d / "reports.csv", reports)
    write_reports_json(d / "reports.json", reports)
    plot_reports(reports, d / "comparison.svg", [(lab, t) for lab, t, _ in items])
    print(f"{'label':>20} {'pose length (m)':>16} {'joint (deg)':>12} {'smooth (deg)':>13}")
    for r in reports:
        jl = "-" if r.joint_length_deg is None else f"{r.joint_length_deg:.2f}"
        print(f"{r.label:>20} {r.pose_length_m:16.4f} {jl:>12} {r.smoothness_deg:13.2f}")
    write_manifest(d, "evaluate", cfg, [], [d / "reports.csv", d / "reports.json", d / "comparison.svg"])
    return 0


def cmd_plot(args, cfg):
    d = out_dir(args, "plot")
    outputs = []
    if args.episodes:
        outputs.append(plot_returns(read_episode_log(args.episodes), d / "returns.svg"))
    if args.poses or args.demos:
        items = _labelled_inputs(args, cfg)
        outputs.append(plot_reports(evaluate(items), d / "comparison.svg",
                                    [(lab, t) for lab, t, _ in items]))
    if not outputs:
        raise InvalidInputError("give --episodes and/or trajectory files to plot")
    for p in outputs:
        print(p)
    write_manifest(d, "plot", cfg, [], outputs)
    return 0


# ---------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for demo generation and training")
    common.add_argument("--config", type=Path, default=None, help="JSON or TOML run config")
    common.add_argument("--out", type=Path, default=None, help="output directory (default runs/<timestamp>-<cmd>)")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config value, e.g. train.num_episodes=50")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="constrained-lfd", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("demogen", parents=[common], help="write a synthetic demonstration set")
    s.set_defaults(func=cmd_demogen)

    s = sub.add_parser("ingest", parents=[common], help="validate demonstration CSVs")
    s.add_argument("inputs", nargs="+", help="CSV files or directories")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("model", parents=[common], help="build the mean/sigma model")
    s.add_argument("inputs", nargs="+", help="CSV files or directories")
    s.set_defaults(func=cmd_model)

    s = sub.add_parser("train", parents=[common], help="train the Q-network")
    s.add_argument("--model", required=True, type=Path)
    s.add_argument("--resume", action="store_true", help="continue from the checkpoint in --out")
    s.add_argument("--stop-after", type=int, default=None, help="stop after this episode")
    s.add_argument("--checkpoint-every", type=int, default=None)
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("optimize", parents=[common], help="greedy rollout of a trained agent")
    s.add_argument("--checkpoint", required=True, type=Path)
    s.add_argument("--model", required=True, type=Path)
    s.set_defaults(func=cmd_optimize)

    for name, func, text in (("evaluate", cmd_evaluate, "metric table and comparison plot"),
                             ("plot", cmd_plot, "SVG figures")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("poses", nargs="*", help="mandrel-frame pose CSVs (listed last in the table)")
        s.add_argument("--joints", nargs="*", help="joint CSVs matching the pose files")
        s.add_argument("--demos", nargs="*", help="demo CSVs or directories, shown first")
        if name == "plot":
            s.add_argument("--episodes", type=Path, help="episode log CSV")
        s.set_defaults(func=func)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "train" and args.resume and args.out is None:
            raise InvalidInputError("--resume needs --out pointing at the interrupted run")
        cfg = load_config(args.config, args.overrides, args.seed)
        return args.func(args, cfg)
    except OptimizationFailedError as exc:
        code, err = 3, exc
    except LfdError as exc:
        code, err = 2, exc
    except OSError as exc:
        code, err = 4, exc
    doc = {"error": type(err).__name__, "message": str(err)}
    for attr in ("path", "line", "step"):
        v = getattr(err, attr, None)
        if v is not None:
            doc[attr] = str(v) if attr == "path" else v
    print(json.dumps(doc), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
