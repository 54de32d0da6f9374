"""Update-decision policies.

``zero_wait`` (update every slot) is the baseline the learned policy is
compared against. ``never``, ``periodic:k`` and ``random:q`` are extra
reference points that bracket the learned policy; ``eau`` / ``greedy`` is the
greedy policy of a trained table.
"""

from __future__ import annotations

from dataclasses import dataclass

from aoicache import _kernels
from aoicache.config import ScenarioConfig
from aoicache.environment import SlotState
from aoicache.qtable import QTable

_KINDS = {
    "zero_wait": _kernels.ZERO_WAIT,
    "never_update": _kernels.NEVER,
    "periodic": _kernels.PERIODIC,
    "random": _kernels.RANDOM,
    "greedy_q": _kernels.GREEDY,
}


@dataclass(frozen=True)
class Policy:
    kind: str
    param: float = 0.0
    table: QTable | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if self.kind == "periodic" and (self.param < 1 or self.param != int(self.param)):
            raise ValueError("periodic policy needs an integer period >= 1")
        if self.kind == "random" and not 0.0 <= self.param <= 1.0:
            raise ValueError("random policy needs a probability in [0, 1]")
        if self.kind == "greedy_q" and self.table is None:
            raise ValueError("greedy_q policy needs a Q-table")

    @classmethod
    def zero_wait(cls) -> "Policy":
        return cls("zero_wait")

    @classmethod
    def never_update(cls) -> "Policy":
        return cls("never_update")

    @classmethod
    def periodic(cls, k: int) -> "Policy":
        return cls("periodic", float(k))

    @classmethod
    def random(cls, q: float) -> "Policy":
        return cls("random", float(q))

    @classmethod
    def greedy(cls, table: QTable) -> "Policy":
        return cls("greedy_q", table=table)

    @property
    def code(self) -> int:
        return _KINDS[self.kind]

    @property
    def label(self) -> str:
        if self.kind == "periodic":
            return f"periodic:{int(self.param)}"
        if self.kind == "random":
            return f"random:{self.param!r}"
        if self.kind == "greedy_q":
            return "eau"
        return self.kind

    def check_matches(self, config: ScenarioConfig) -> None:
        if self.table is not None:
            self.table.check_matches(config)


def decide(policy: Policy, state: SlotState, slot_index: int, u: float) -> int:
    """Action for ``state`` in slot ``slot_index`` (0-based); ``u`` is the slot's Uniform(0,1) draw."""
    kind = policy.kind
    if kind == "zero_wait":
        return 1
    if kind == "never_update":
        return 0
    if kind == "periodic":
        return int(slot_index % int(policy.param) == 0)
    if kind == "random":
        return int(u < policy.param)
    return policy.table.greedy_action(state)


def parse_policy(text: str, table: QTable | None = None) -> Policy:
    """Build a policy from its config name: ``zero_wait``, ``never``, ``periodic:3``, ``random:0.2``, ``eau``."""
    name, _, arg = text.strip().partition(":")
    if name in ("zero_wait", "zero-wait"):
        return Policy.zero_wait()
    if name in ("never", "never_update"):
        return Policy.never_update()
    if name == "periodic":
        return Policy.periodic(int(arg))
    if name == "random":
        return Policy.random(float(arg))
    if name in ("eau", "greedy", "greedy_q"):
        if table is None:
            raise ValueError("the eau policy needs a trained Q-table")
        return Policy.greedy(table)
    raise ValueError(f"unknown policy {text!r}")


def is_learned(text: str) -> bool:
    return text.strip().partition(":")[0] in ("eau", "greedy", "greedy_q")
