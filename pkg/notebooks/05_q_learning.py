# coding: utf-8

# # Q-learning: tabular check and the Q-network
#
# On a small grid world tabular Q-learning must land on the same table as
# value iteration. The Q-network is a plain ReLU perceptron trained by
# gradient descent on mini-batches drawn from a replay buffer.

# In[1]:

import numpy as np

from constrained_lfd.rl import (
    ExperienceBuffer,
    GridWorld,
    QNetwork,
    TrainConfig,
    Transition,
    epsilon_schedule,
    q_learning,
    train_step,
    value_iteration,
)

env = GridWorld()
qstar = value_iteration(env, 0.9)
table = q_learning(env, 2000, gamma=0.9, alpha=1.0, rng=np.random.default_rng(0))
live = [s for s in range(env.n_states) if not env.is_terminal(s)]
print("max |Q - Q*| =", np.abs(table.as_array(live) - qstar[live]).max())


# Exploration decays linearly to zero over the run.

# In[2]:

print([round(epsilon_schedule(ep, 200), 3) for ep in (1, 50, 100, 150, 200)])


# A small regression: teach the network Q(s, a) = s . w_a from random
# transitions with gamma = 0, so the targets are just the rewards.

# In[3]:

rng = np.random.default_rng(0)
w_true = rng.normal(size=(3, 2))
buf = ExperienceBuffer(500, 3)
for _ in range(500):
    s = rng.uniform(-1, 1, 3)
    a = int(rng.integers(2))
    buf.push(Transition(s, a, s, float(s @ w_true[:, a]), True))

net = QNetwork.initialized((3, 32, 2), rng)
cfg = TrainConfig(alpha=0.05, gamma=0.0, batch=32, capacity=500, hidden=(32,))
losses = [train_step(net, buf, cfg, rng) for _ in range(3000)]
print(f"loss first 100 steps {np.mean(losses[:100]):.4f}, last 100 {np.mean(losses[-100:]):.5f}")
