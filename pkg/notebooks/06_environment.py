# coding: utf-8

# # The trajectory environment
#
# State: grid-normalised position plus progress k / (T - 1). Reward per step:
#
#     r = -(joint motion in deg) / 7 - |step| / |mean step| - turn angle + 10
#
# and -10 on a collision, which also ends the episode.

# In[1]:

import numpy as np

from constrained_lfd.alignment import align_set, build_model
from constrained_lfd.demogen import DemoGenConfig, generate
from constrained_lfd.environment import EnvState, TrajectoryEnv, env_step, reward
from constrained_lfd.kinematics import default_arm, default_scene
from constrained_lfd.trajectory import preprocess
from constrained_lfd.workspace import CENTER_ACTION, STATIONARY

seg = (np.zeros(3), np.array([0.002, 0.0, 0.0]))
straight = EnvState(np.zeros(3), 1, np.zeros(7), -seg[1])
print("follow the mean step:", reward(straight, seg[1], 0.0, seg))
print("stand still at the start:", reward(EnvState(np.zeros(3), 0, np.zeros(7), None), np.zeros(3), 0.0, seg))
print("double step, right angle, 14 deg:", reward(straight, np.array([0.0, 0.004, 0.0]), 14.0, seg))


# Walk the mean path by always taking the center action.

# In[2]:

model = build_model(align_set(preprocess(generate(DemoGenConfig(seed=0)), 10)))
env = TrajectoryEnv(model, default_arm(), default_scene())
state, total, disc, steps = env.start_state(), 0.0, 0.0, 0
while True:
    out = env_step(state, CENTER_ACTION, env)
    disc += 0.99 ** steps * out.reward    # training logs the discounted return
    total += out.reward
    steps += 1
    if out.terminal:
        break
    state = out.next_state
print(f"{steps} steps, reward sum {total:.1f}, discounted return {disc:.1f}, collided {out.collided}")


# The stay-put action is only offered when the current point already lies in
# the next envelope.

# In[3]:

s0 = env.start_state()
print("stationary allowed at start:", env.valid_mask(s0, env.targets(s0))[STATIONARY])
