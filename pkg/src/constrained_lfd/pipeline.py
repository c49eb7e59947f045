"""End-to-end steps: demos -> model -> trained agent -> optimized trajectory -> reports.

Training writes everything needed to continue bit-identically: network
(and target copy), generator state, update counter and the replay buffer.
"""

import csv
import hashlib
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .alignment import MeanVarModel, align_set, build_model
from .config import RunConfig
from .environment import TrajectoryEnv, rollout_greedy, run_episode
from .errors import InvalidInputError
from .kinematics import default_arm, default_scene, load_arm, load_scene
from .metrics import report
from .rl.dqn import DQNAgent, TrainConfig
from .rl.replay import ExperienceBuffer
from .trajectory import DemoSet, preprocess, read_demo_csv

log = logging.getLogger(__name__)

EPISODE_FIELDS = ("episode", "return", "steps", "collisions", "epsilon", "mean_loss",
                  "envelope_violations")
CHECKPOINT = "checkpoint.json"
BUFFER = "buffer.npz"
EPISODE_LOG = "episodes.csv"


def file_sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def json_dump(path, doc):
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")


# ---------------------------------------------------------------- ingest / model

def ingest(paths):
    """Read demo CSVs into a :class:`DemoSet` plus a per-file summary."""
    paths = [Path(p) for p in paths]
    if not paths:
        raise InvalidInputError("no demonstration files given")
    demos, summary = [], []
    for p in paths:
        dev, man = read_demo_csv(p)
        demos.append((dev, man))
        summary.append({"name": p.stem, "samples": len(dev), "duration_s": dev.duration})
    return DemoSet(tuple(demos), tuple(p.stem for p in paths)), summary


def demo_files(inputs):
    """Expand directories to their sorted ``*.csv`` files."""
    out = []
    for p in map(Path, inputs):
        out.extend(sorted(p.glob("*.csv")) if p.is_dir() else [p])
    return out


def model_from_demos(demoset, window=10):
    """Smooth, move to the mandrel frame, align and average."""
    return build_model(align_set(preprocess(demoset, window)))


# ---------------------------------------------------------------- environment

def arm_and_scene(config):
    arm = load_arm(config.arm) if config.arm else default_arm()
    scene = load_scene(config.scene) if config.scene else default_scene()
    return arm, scene


def make_env(model, config):
    arm, scene = arm_and_scene(config)
    return TrajectoryEnv(model, arm, scene, delta=config.delta,
                         collision_penalty=config.collision_penalty,
                         reward_constant=config.reward_constant,
                         sampling=config.sampling,
                         step_input=config.train.step_input,
                         seed=config.seed)


# ---------------------------------------------------------------- training

@dataclass
class TrainResult:
    agent: DQNAgent
    episodes: list          # rows of the episode log, as dicts
    episode: int            # last completed episode
    convergence_slope: float
    envelope_violations: int
    states_checked: int
    action_sets: int
    visited: list = field(default_factory=list, repr=False)  # (k, position), with record=True


def return_slope(returns, window=20):
    """Slope per episode of the moving-average return over the last ``window`` episodes."""
    r = np.asarray(returns, dtype=float)
    if len(r) < 2:
        return float("nan")
    w = min(window, len(r) // 2) or 1
    ma = np.convolve(r, np.ones(w) / w, mode="valid")
    tail = ma[-window:]
    return float(np.polyfit(np.arange(len(tail)), tail, 1)[0])


def _episode_row(st):
    return {"episode": st.episode, "return": st.ret, "steps": st.steps,
            "collisions": st.collisions, "epsilon": st.epsilon,
            "mean_loss": st.mean_loss, "envelope_violations": st.envelope_violations}


def write_episode_log(path, rows):
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(EPISODE_FIELDS)
        for row in rows:
            w.writerow([row[k] if isinstance(row[k], int) else repr(float(row[k]))
                        for k in EPISODE_FIELDS])


def read_episode_log(path):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    ints = {"episode", "steps", "collisions", "envelope_violations"}
    return [{k: (int(v) if k in ints else float(v)) for k, v in r.items()} for r in rows]


def checkpoint_doc(agent, config, episode, rng, env):
    doc = {"sizes": list(agent.net.sizes),
           "agent": agent.state_dict(),
           "config": config.to_dict(),
           "seed": config.seed,
           "episode": episode,
           "rng": rng.bit_generator.state}
    if env._sample_rng is not None:
        doc["sample_rng"] = env._sample_rng.bit_generator.state
    return doc


def save_checkpoint(out_dir, agent, config, episode, rng, env, buffer=None):
    out_dir = Path(out_dir)
    json_dump(out_dir / CHECKPOINT, checkpoint_doc(agent, config, episode, rng, env))
    if buffer is not None:
        buffer.save(out_dir / BUFFER)


def load_checkpoint(path):
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    config = RunConfig.from_dict(doc["config"])
    agent = DQNAgent.from_state_dict(doc["agent"], config.train)
    return agent, config, doc


def train(model, config, out_dir, resume=False, stop_after=None, record=False,
          checkpoint_every=None):
    """Run the training loop, writing checkpoint, buffer and episode log to ``out_dir``.

    Parameters
    ----------
    resume : bool
        Continue from the checkpoint and buffer already in ``out_dir``.
    stop_after : int, optional
        Stop after this episode number, as if interrupted.
    record : bool
        Keep every visited state for envelope checks (memory heavy).
    checkpoint_every : int, optional
        Also checkpoint every this many episodes.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tc: TrainConfig = config.train
    env = make_env(model, config)
    if resume:
        agent, saved, doc = load_checkpoint(out_dir / CHECKPOINT)
        if saved.to_dict() != config.to_dict():
            raise InvalidInputError("checkpoint was written with a different config")
        rng = np.random.default_rng()
        rng.bit_generator.state = doc["rng"]
        if "sample_rng" in doc:
            env._sample_rng.bit_generator.state = doc["sample_rng"]
        buffer = ExperienceBuffer.load(out_dir / BUFFER)
        rows = read_episode_log(out_dir / EPISODE_LOG)[:doc["episode"]]
        start = doc["episode"] + 1
    else:
        rng = np.random.default_rng(tc.seed)
        agent = DQNAgent.create(env.state_dim, 126, tc, rng)
        buffer = ExperienceBuffer(tc.capacity, env.state_dim)
        rows = []
        start = 1
    last = tc.num_episodes if stop_after is None else min(stop_after, tc.num_episodes)
    violations = 0
    visited = 0
    action_sets = 0
    states = []
    t0 = time.perf_counter()
    ep = start - 1
    for ep in range(start, last + 1):
        st = run_episode(agent, env, tc, rng, buffer, episode=ep, record=record)
        rows.append(_episode_row(st))
        violations += st.envelope_violations
        visited += st.states_checked
        action_sets += st.action_sets
        states.extend(st.visited)
        if ep % 10 == 0 or ep == last:
            log.info("episode %d  return %.2f  eps %.3f  loss %.4g  (%.0fs)",
                     ep, st.ret, st.epsilon, st.mean_loss, time.perf_counter() - t0)
        if checkpoint_every and ep % checkpoint_every == 0:
            save_checkpoint(out_dir, agent, config, ep, rng, env, buffer)
            write_episode_log(out_dir / EPISODE_LOG, rows)
    ep = max(ep, start - 1)
    save_checkpoint(out_dir, agent, config, ep, rng, env, buffer)
    write_episode_log(out_dir / EPISODE_LOG, rows)
    return TrainResult(agent, rows, ep, return_slope([r["return"] for r in rows]),
                       violations, visited, action_sets, states)


def optimize(agent, model, config):
    """Greedy rollout of a trained agent; returns ``(trajectory, joints)``."""
    return rollout_greedy(agent, make_env(model, config))


def evaluate(labelled):
    """Reports for ``[(label, trajectory, joints or None), ...]`` in the given order."""
    return [report(label, traj, joints) for label, traj, joints in labelled]


def load_model(path):
    return MeanVarModel.load(path)
