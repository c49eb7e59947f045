"""Q-learning: tabular reference, Q-network, replay buffer and training step."""

from .dqn import DQNAgent, TrainConfig, loss_and_grads, td_targets, train_step
from .network import QNetwork
from .policy import epsilon_schedule, greedy, select_action
from .replay import ExperienceBuffer, Transition
from .tabular import GridWorld, QTable, q_learning, q_update, value_iteration

__all__ = [
    "DQNAgent", "TrainConfig", "loss_and_grads", "td_targets", "train_step",
    "QNetwork", "epsilon_schedule", "greedy", "select_action",
    "ExperienceBuffer", "Transition",
    "GridWorld", "QTable", "q_learning", "q_update", "value_iteration",
]
