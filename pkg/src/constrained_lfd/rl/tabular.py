"""Tabular Q-learning and a small deterministic grid world to check it against.

The grid world has a value-iteration solution, which gives an exact
reference for the learned table.
"""

import numpy as np

from .policy import epsilon_schedule, select_action


class QTable:
    """Sparse state-action table.

    Rows are created on first access: all zeros with ``init="zero"``, or
    uniform draws in ``[low, high)`` from ``rng`` with ``init="random"``.
    """

    def __init__(self, n_actions, init="zero", rng=None, low=-1.0, high=1.0):
        if init not in ("zero", "random"):
            raise ValueError(f"unknown init {init!r}")
        if init == "random" and rng is None:
            raise ValueError("random init needs an rng")
        self.n_actions = int(n_actions)
        self.init = init
        self.rng = rng
        self.low, self.high = low, high
        self.rows = {}

    def row(self, s):
        r = self.rows.get(s)
        if r is None:
            if self.init == "random":
                r = self.rng.uniform(self.low, self.high, size=self.n_actions)
            else:
                r = np.zeros(self.n_actions)
            self.rows[s] = r
        return r

    def __getitem__(self, key):
        s, a = key
        return float(self.row(s)[a])

    def __setitem__(self, key, value):
        s, a = key
        self.row(s)[a] = value

    def as_array(self, states):
        return np.array([self.row(s) for s in states])


def q_update(table, s, a, r, s_next, alpha, gamma, terminal=False):
    """``Q(s,a) <- (1-alpha) Q(s,a) + alpha (r + gamma max_a' Q(s',a'))``; max is 0 at terminals."""
    future = 0.0 if terminal else float(np.max(table.row(s_next)))
    table[s, a] = (1.0 - alpha) * table[s, a] + alpha * (r + gamma * future)
    return table


class GridWorld:
    """Deterministic ``rows x cols`` grid; moving into the goal pays ``goal_reward``.

    Actions: 0 up, 1 down, 2 left, 3 right. Moves off the grid leave the
    agent in place. The goal cell is terminal.
    """

    MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))

    def __init__(self, rows=4, cols=4, goal=None, goal_reward=1.0, step_reward=0.0):
        self.rows, self.cols = rows, cols
        self.goal = rows * cols - 1 if goal is None else goal
        self.goal_reward = goal_reward
        self.step_reward = step_reward

    @property
    def n_states(self):
        return self.rows * self.cols

    n_actions = 4

    def is_terminal(self, s):
        return s == self.goal

    def step(self, s, a):
        r, c = divmod(s, self.cols)
        dr, dc = self.MOVES[a]
        r2 = min(max(r + dr, 0), self.rows - 1)
        c2 = min(max(c + dc, 0), self.cols - 1)
        s2 = r2 * self.cols + c2
        reward = self.goal_reward if s2 == self.goal else self.step_reward
        return s2, reward, s2 == self.goal


def value_iteration(env, gamma, tol=0.0, max_sweeps=100_000):
    """Optimal Q by synchronous Bellman backups until the table stops changing."""
    Q = np.zeros((env.n_states, env.n_actions))
    for _ in range(max_sweeps):
        new = np.zeros_like(Q)
        for s in range(env.n_states):
            if env.is_terminal(s):
                continue
            for a in range(env.n_actions):
                s2, r, done = env.step(s, a)
                new[s, a] = r + gamma * (0.0 if done else float(np.max(Q[s2])))
        if np.max(np.abs(new - Q)) <= tol:
            return new
        Q = new
    return Q


def q_learning(env, num_episodes, gamma, alpha, rng, epsilon0=0.75, max_steps=100,
               init="random", table=None):
    """Epsilon-greedy Q-learning with a linearly decaying exploration rate.

    Each episode starts from a uniformly drawn non-terminal state.
    """
    if table is None:
        table = QTable(env.n_actions, init=init, rng=rng)
    starts = [s for s in range(env.n_states) if not env.is_terminal(s)]
    for episode in range(1, num_episodes + 1):
        eps = epsilon_schedule(episode, num_episodes, epsilon0)
        s = starts[rng.integers(len(starts))]
        for _ in range(max_steps):
            a = select_action(table.row(s), None, eps, rng)
            s2, r, done = env.step(s, a)
            q_update(table, s, a, r, s2, alpha, gamma, terminal=done)
            s = s2
            if done:
                break
    return table
