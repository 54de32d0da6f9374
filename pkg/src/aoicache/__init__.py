"""Age-of-information aware status updating for a caching IoT network.

A slotted simulator (edge caching node, one sensor, N users) and the
expected-Sarsa learner that decides when to ask the sensor for a fresh update.
"""

from aoicache.config import ScenarioConfig, load_config, dump_config
from aoicache.channel import LinkParams, failure_probability, snr_threshold
from aoicache.environment import Environment, SlotOutcome, SlotState
from aoicache.qtable import QTable
from aoicache.learner import LearnerParams, train
from aoicache.policies import Policy
from aoicache.harness import RunMetrics, evaluate

__all__ = [
    "ScenarioConfig",
    "load_config",
    "dump_config",
    "LinkParams",
    "snr_threshold",
    "failure_probability",
    "Environment",
    "SlotOutcome",
    "SlotState",
    "QTable",
    "LearnerParams",
    "train",
    "Policy",
    "RunMetrics",
    "evaluate",
]
