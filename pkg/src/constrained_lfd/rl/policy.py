import numpy as np

from ..errors import NoValidActionError


def epsilon_schedule(episode, num_episodes, epsilon0=0.75):
    """Linear decay ``epsilon0 * (num_episodes - episode) / num_episodes``."""
    if num_episodes <= 0:
        return 0.0
    if not 0 <= episode <= num_episodes:
        raise ValueError(f"episode {episode} outside [0, {num_episodes}]")
    return epsilon0 * (num_episodes - episode) / num_episodes


def greedy(q_values, valid_mask=None):
    """Argmax over valid entries; ties resolve to the lowest index."""
    q = np.asarray(q_values, dtype=float)
    if valid_mask is None:
        return int(np.argmax(q))
    valid_mask = np.asarray(valid_mask, dtype=bool)
    if not valid_mask.any():
        raise NoValidActionError("no valid action available")
    return int(np.argmax(np.where(valid_mask, q, -np.inf)))


def select_action(q_values, valid_mask, epsilon, rng):
    """Epsilon-greedy choice restricted to ``valid_mask``.

    One uniform draw decides explore vs exploit; exploring draws a second
    integer to pick among the valid actions.
    """
    q = np.asarray(q_values, dtype=float)
    mask = np.ones(len(q), dtype=bool) if valid_mask is None else np.asarray(valid_mask, dtype=bool)
    valid = np.flatnonzero(mask)
    if len(valid) == 0:
        raise NoValidActionError("no valid action available")
    if rng.random() < epsilon:
        return int(valid[rng.integers(len(valid))])
    return greedy(q, mask)
