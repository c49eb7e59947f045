"""The trajectory-refinement MDP and the loops that train and roll out an agent.

A state is a mandrel-frame position at a step index of the mean trajectory.
Each action moves to one of the 126 targets around the next mean point;
the rotation is borrowed from the nearest mean sample and the arm follows
through IK. Collisions and IK failures end the episode with a penalty.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidInputError,
    OptimizationFailedError,
    UnreachablePoseError,
)
from .geometry import pose_to_matrix
from .kinematics import HOME, check_collision, inverse_kinematics, joint_delta, link_frames
from .rl.policy import epsilon_schedule, greedy, select_action
from .rl.replay import Transition
from .trajectory import Frame, Trajectory
from .workspace import N_ACTIONS, STATIONARY, action_targets, build_grid, in_envelope

log = logging.getLogger(__name__)

DEGENERATE = 1e-12


@dataclass(frozen=True)
class EnvState:
    position: np.ndarray
    k: int
    joints: np.ndarray
    prev_position: np.ndarray = None


@dataclass(frozen=True)
class StepOutcome:
    next_state: EnvState
    reward: float
    terminal: bool
    collided: bool


@dataclass
class EpisodeStats:
    episode: int
    ret: float
    steps: int
    collisions: int
    epsilon: float
    mean_loss: float = float("nan")
    envelope_violations: int = 0
    states_checked: int = 0
    action_sets: int = 0
    visited: list = field(default_factory=list, repr=False)


def turn_angle(prev_position, position, next_position):
    """Angle (rad) between the incoming and outgoing motion; 0 if either is null."""
    if prev_position is None:
        return 0.0
    u = np.asarray(position, dtype=float) - prev_position
    v = np.asarray(next_position, dtype=float) - position
    if np.linalg.norm(u) < DEGENERATE or np.linalg.norm(v) < DEGENERATE:
        return 0.0
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), u @ v))


def reward(state, next_position, delta_phi, mean_seg, fallback_length=None, constant=10.0):
    """``-dPhi/7 - |s'-s| / |mean_{k+1} - mean_k| - angle + constant``.

    ``delta_phi`` is in degrees and the angle in radians. When the mean
    segment is degenerate, ``fallback_length`` (the nearest non-degenerate
    segment) replaces its length.
    """
    seg = float(np.linalg.norm(np.asarray(mean_seg[1], dtype=float) - mean_seg[0]))
    if seg < DEGENERATE:
        if fallback_length is None:
            raise InvalidInputError("mean segment has zero length and no fallback was given")
        log.warning("degenerate mean segment at step %s; using neighbouring length", state.k)
        seg = fallback_length
    move = float(np.linalg.norm(np.asarray(next_position, dtype=float) - state.position))
    angle = turn_angle(state.prev_position, state.position, next_position)
    return -delta_phi / 7.0 - move / seg - angle + constant


def nearest_mean_orientation(model, position):
    """Rotation vector of the mean sample closest in translation (lowest index on ties)."""
    d = np.linalg.norm(model.mean_translations - np.asarray(position, dtype=float), axis=1)
    return model.mean[int(np.argmin(d)), 3:].copy()


def _segment_lengths(model):
    lengths = np.linalg.norm(np.diff(model.mean_translations, axis=0), axis=1)
    good = np.flatnonzero(lengths >= DEGENERATE)
    if len(good) == 0:
        return lengths, np.full_like(lengths, np.nan)
    fallback = lengths.copy()
    for i in np.flatnonzero(lengths < DEGENERATE):
        fallback[i] = lengths[good[np.argmin(np.abs(good - i))]]
    return lengths, fallback


class TrajectoryEnv:
    """Bundles the model, grid, arm and scene an episode needs.

    Parameters
    ----------
    model : MeanVarModel
    arm : ArmModel
    scene : Scene
        Obstacles and the mandrel pose, both in the arm base frame.
    delta : float
        Grid step (m).
    collision_penalty, reward_constant : float
    sampling : {"lattice", "random"}
    step_input : bool
        Append ``k / (T - 1)`` to the agent input.
    """

    def __init__(self, model, arm, scene, delta=0.002, collision_penalty=-10.0,
                 reward_constant=10.0, sampling="lattice", step_input=True, home=HOME,
                 seed=0):
        self.model = model
        self.arm = arm
        self.scene = scene
        self.grid = build_grid(model, delta)
        self.collision_penalty = float(collision_penalty)
        self.reward_constant = float(reward_constant)
        self.sampling = sampling
        self.step_input = step_input
        self.T = len(model)
        self.mandrel_T = scene.mandrel_transform()
        self._seg, self._seg_fallback = _segment_lengths(model)
        self._sample_rng = np.random.default_rng(seed) if sampling == "random" else None
        self._start_joints = inverse_kinematics(arm, self.base_pose(model.mean[0]), np.asarray(home, dtype=float))

    @property
    def state_dim(self):
        return 4 if self.step_input else 3

    def base_pose(self, pose6):
        return self.mandrel_T @ pose_to_matrix(pose6)

    def start_state(self):
        return EnvState(self.model.mean_translations[0].copy(), 0, self._start_joints.copy(), None)

    def features(self, state):
        x = self.grid.normalize(state.position)
        if self.step_input:
            return np.append(x, state.k / (self.T - 1))
        return x

    def targets(self, state):
        return action_targets(self.model, state.k, state.position, self.sampling, self._sample_rng)

    def valid_mask(self, state, targets):
        """Targets inside the grid and inside the next step's sigma envelope."""
        lo = self.grid.origin
        hi = self.grid.upper
        mask = np.all((targets >= lo) & (targets <= hi), axis=1)
        mask[STATIONARY] = mask[STATIONARY] and in_envelope(self.model, state.k + 1, targets[STATIONARY])
        return mask


def env_step(state, action, env, targets=None):
    """Apply one action; collisions and IK failures end the episode with the penalty."""
    if not 0 <= int(action) < N_ACTIONS:
        raise IndexError(f"action id {action} outside [0, {N_ACTIONS - 1}]")
    if targets is None:
        targets = env.targets(state)
    target = targets[int(action)].copy()
    k_next = state.k + 1
    terminal = k_next >= env.T - 1
    pose = np.concatenate([target, nearest_mean_orientation(env.model, target)])
    try:
        q = inverse_kinematics(env.arm, env.base_pose(pose), state.joints)
        collided = check_collision(env.arm, q, env.scene, link_frames(env.arm, q))
    except UnreachablePoseError:
        q = state.joints
        collided = True
    nxt = EnvState(target, k_next, q, state.position)
    if collided:
        return StepOutcome(nxt, env.collision_penalty, True, True)
    mean = env.model.mean_translations
    r = reward(state, target, joint_delta(state.joints, q), (mean[state.k], mean[k_next]),
               env._seg_fallback[state.k], env.reward_constant)
    return StepOutcome(nxt, r, terminal, False)


def run_episode(agent, env, config, rng, buffer=None, episode=1, train=True, record=False):
    """One epsilon-greedy episode from the first mean pose.

    Every transition goes to ``buffer``; once it holds a full batch the agent
    takes one gradient step per environment step.
    """
    eps = epsilon_schedule(episode, config.num_episodes, config.epsilon0)
    state = env.start_state()
    stats = EpisodeStats(episode, 0.0, 0, 0, eps)
    stats.states_checked = 1
    if not in_envelope(env.model, state.k, state.position):
        stats.envelope_violations += 1
    if record:
        stats.visited.append((state.k, state.position.copy()))
    losses = []
    disc = 1.0
    x = env.features(state)
    for _ in range(config.num_steps):
        targets = env.targets(state)
        stats.action_sets += 1
        if len(targets) != N_ACTIONS:
            raise InvalidInputError(f"action set has {len(targets)} entries, expected {N_ACTIONS}")
        mask = env.valid_mask(state, targets)
        a = select_action(agent.q_values(x), mask, eps, rng)
        out = env_step(state, a, env, targets)
        x_next = env.features(out.next_state)
        if buffer is not None:
            buffer.push(Transition(x, a, x_next, out.reward, out.terminal))
        stats.ret += disc * out.reward
        disc *= config.gamma
        stats.steps += 1
        if train and buffer is not None and len(buffer) >= config.batch:
            losses.append(agent.learn(buffer, rng))
        if out.collided:
            stats.collisions += 1
            break
        state = out.next_state
        x = x_next
        stats.states_checked += 1
        if not in_envelope(env.model, state.k, state.position):
            stats.envelope_violations += 1
        if record:
            stats.visited.append((state.k, state.position.copy()))
        if out.terminal:
            break
    if losses:
        stats.mean_loss = float(np.mean(losses))
    return stats


def rollout_greedy(agent, env):
    """Follow the highest-valued valid action from start to the last mean step.

    Returns the mandrel-frame trajectory (positions with nearest-mean
    rotations) and the joint path. Raises :class:`OptimizationFailedError`
    on collision or unreachable pose.
    """
    state = env.start_state()
    positions = [state.position]
    rotations = [env.model.mean[0, 3:].copy()]
    joints = [state.joints]
    while state.k < env.T - 1:
        targets = env.targets(state)
        mask = env.valid_mask(state, targets)
        q = agent.q_values(env.features(state))
        if not np.all(np.isfinite(q)):
            raise OptimizationFailedError(f"non-finite Q-values at step {state.k}", step=state.k)
        a = greedy(q, mask)
        out = env_step(state, a, env, targets)
        if out.collided:
            raise OptimizationFailedError(f"greedy rollout collided at step {state.k}", step=state.k)
        state = out.next_state
        positions.append(state.position)
        rotations.append(nearest_mean_orientation(env.model, state.position))
        joints.append(state.joints)
    poses = np.hstack([np.array(positions), np.array(rotations)])
    traj = Trajectory(env.model.times[:len(poses)], poses, Frame.MANDREL)
    return traj, np.array(joints)
