"""Mini-batch deep Q-learning update and the agent wrapper."""

from dataclasses import asdict, dataclass, fields

import numpy as np

from ..errors import InvalidConfigError, NotReadyError, OptimizationFailedError
from .network import QNetwork
from .policy import select_action


@dataclass(frozen=True)
class TrainConfig:
    # 1e-3 with plain gradient descent drives Q to overflow within a few
    # episodes on returns near 800; 3e-5 plus a synced target copy stays finite
    alpha: float = 3e-5
    gamma: float = 0.99
    num_episodes: int = 200
    num_steps: int = 284
    batch: int = 32
    epsilon0: float = 0.75
    capacity: int = 50_000
    seed: int = 0
    hidden: tuple = (400, 200)
    target_network: bool = True
    target_sync: int = 100
    step_input: bool = True

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidConfigError("alpha must be positive")
        if not 0.0 <= self.gamma <= 1.0:
            raise InvalidConfigError("gamma must lie in [0, 1]")
        if self.batch < 1:
            raise InvalidConfigError("batch size must be at least 1")
        if self.num_episodes < 0 or self.num_steps < 1:
            raise InvalidConfigError("episode and step counts must be non-negative / positive")
        if self.capacity < self.batch:
            raise InvalidConfigError("buffer capacity smaller than the batch")
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))

    def to_dict(self):
        d = asdict(self)
        d["hidden"] = list(self.hidden)
        return d

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise InvalidConfigError(f"unknown train settings: {sorted(unknown)}")
        return cls(**d)


def td_targets(net, s_next, r, terminal, gamma):
    """``r + gamma * max_a Q(s', a)``, with the max dropped for terminal rows."""
    q_next = net.forward(s_next).max(axis=1)
    return r + gamma * np.where(terminal, 0.0, q_next)


def loss_and_grads(net, s, a, targets):
    """Cost ``1/(2N) sum (target - Q(s, a))^2`` and its parameter gradients.

    Only the taken-action output of each row receives gradient; ``targets``
    are treated as constants.
    """
    n = len(a)
    q, hs, zs = net.forward_cache(s)
    rows = np.arange(n)
    err = targets - q[rows, a]
    loss = float(err @ err) / (2 * n)
    g = np.zeros_like(q)
    g[rows, a] = -err / n
    gw, gb = net.backward(hs, zs, g)
    return loss, gw, gb


def apply_gradients(net, gw, gb, lr):
    for w, b, dw, db in zip(net.weights, net.biases, gw, gb):
        w -= lr * dw
        b -= lr * db


def train_step(net, buffer, config, rng, target_net=None):
    """One plain gradient-descent step on a uniformly drawn mini-batch.

    Returns the cost before the update. Raises :class:`NotReadyError` while
    the buffer holds fewer than ``config.batch`` transitions and
    :class:`OptimizationFailedError` if the cost or gradient is not finite.
    """
    if len(buffer) < config.batch:
        raise NotReadyError(f"buffer holds {len(buffer)} < {config.batch} transitions")
    s, a, s_next, r, term = buffer.sample_arrays(config.batch, rng)
    tgt = td_targets(target_net if target_net is not None else net, s_next, r, term, config.gamma)
    with np.errstate(over="ignore", invalid="ignore"):
        loss, gw, gb = loss_and_grads(net, s, a, tgt)
    if not (np.isfinite(loss) and all(np.isfinite(g).all() for g in gw)):
        # refuse to write inf/nan into the weights; the caller decides what to do
        raise OptimizationFailedError("non-finite loss or gradient, training diverged")
    apply_gradients(net, gw, gb, config.alpha)
    return loss


class DQNAgent:
    """Q-network plus optional periodically synced target copy."""

    def __init__(self, net, config):
        self.net = net
        self.config = config
        self.target = net.copy() if config.target_network else None
        self.updates = 0

    @classmethod
    def create(cls, input_dim, n_actions, config, rng):
        sizes = (input_dim,) + tuple(config.hidden) + (n_actions,)
        return cls(QNetwork.initialized(sizes, rng), config)

    def q_values(self, x):
        return self.net.forward(x)

    def act(self, x, valid_mask, epsilon, rng):
        return select_action(self.net.forward(x), valid_mask, epsilon, rng)

    def learn(self, buffer, rng):
        loss = train_step(self.net, buffer, self.config, rng, self.target)
        self.updates += 1
        if self.target is not None and self.updates % self.config.target_sync == 0:
            self.target = self.net.copy()
        return loss

    def state_dict(self):
        d = {"network": self.net.to_dict(), "updates": self.updates}
        if self.target is not None:
            d["target"] = self.target.to_dict()
        return d

    @classmethod
    def from_state_dict(cls, d, config):
        agent = cls(QNetwork.from_dict(d["network"]), config)
        agent.updates = int(d.get("updates", 0))
        if "target" in d:
            agent.target = QNetwork.from_dict(d["target"])
        return agent
