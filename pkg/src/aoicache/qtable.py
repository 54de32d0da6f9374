"""Dense action-value table and its on-disk format.

States are indexed mixed-radix, ``idx = sum_m (aoi[m] - 1) * m_max**m``, and
the value of ``(state, action)`` lives at ``values[2 * idx + action]``.

File layout (all integers little-endian)::

    offset  size      field
    0       8         magic b"AOIQTBL\\0"
    8       4         format version (uint32, currently 1)
    12      4         n_users (uint32)
    16      4         m_max (uint32)
    20      4         reserved, zero
    24      32        scenario fingerprint (SHA-256 digest)
    56      8         iterations completed (uint64)
    64      8         t_max of the training run (uint64)
    72      8         training seed (int64)
    80      4*(N+1)   training cursor state, ages in slots (uint32 each)
    ...     8*2*M^(N+1)  values, float64 little-endian
    end-4   4         CRC-32 of every preceding byte (uint32)
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from aoicache.config import ScenarioConfig
from aoicache.environment import SlotState

MAGIC = b"AOIQTBL\0"
VERSION = 1
_HEADER = struct.Struct("<8sIIII32sQQq")


class QTableError(ValueError):
    pass


class FingerprintMismatch(QTableError):
    pass


def encode(state: SlotState, m_max: int) -> int:
    idx = 0
    for m, a in enumerate(state.aoi):
        if not 1 <= a <= m_max:
            raise ValueError(f"AoI {a} out of range 1..{m_max}")
        idx += (a - 1) * m_max**m
    return idx


def decode(idx: int, n_users: int, m_max: int) -> SlotState:
    if not 0 <= idx < m_max ** (n_users + 1):
        raise ValueError(f"state index {idx} out of range")
    aoi = []
    for _ in range(n_users + 1):
        idx, digit = divmod(idx, m_max)
        aoi.append(digit + 1)
    return SlotState(tuple(aoi))


def radix_weights(n_users: int, m_max: int) -> np.ndarray:
    return m_max ** np.arange(n_users + 1, dtype=np.int64)


@dataclass
class QTable:
    values: np.ndarray
    n_users: int
    m_max: int
    fingerprint: bytes
    iteration: int = 0
    t_max: int = 0
    seed: int = 0
    cursor: tuple[int, ...] = field(default=())

    def __post_init__(self):
        expected = 2 * self.m_max ** (self.n_users + 1)
        if self.values.shape != (expected,) or self.values.dtype != np.float64:
            raise QTableError(f"values must be float64 of length {expected}")
        if not self.cursor:
            self.cursor = (1,) * (self.n_users + 1)

    @classmethod
    def zeros(cls, config: ScenarioConfig, seed: int = 0) -> "QTable":
        return cls(np.zeros(config.table_size), config.n_users, config.m_max,
                   config.fingerprint(), t_max=config.t_max, seed=seed)

    @property
    def n_states(self) -> int:
        return self.m_max ** (self.n_users + 1)

    def index(self, state: SlotState) -> int:
        if state.n_users != self.n_users:
            raise ValueError("state has the wrong number of users")
        return encode(state, self.m_max)

    def q(self, state: SlotState, action: int) -> float:
        return float(self.values[2 * self.index(state) + action])

    def set(self, state: SlotState, action: int, value: float) -> None:
        self.values[2 * self.index(state) + action] = value

    def greedy_action(self, state: SlotState) -> int:
        """argmax_a Q(state, a); ties go to 0 (no update)."""
        i = 2 * self.index(state)
        return int(self.values[i + 1] > self.values[i])

    def greedy_policy(self) -> np.ndarray:
        """Greedy action for every state index."""
        pairs = self.values.reshape(-1, 2)
        return (pairs[:, 1] > pairs[:, 0]).astype(np.int8)

    def check_matches(self, config: ScenarioConfig) -> None:
        if self.fingerprint != config.fingerprint():
            raise FingerprintMismatch(
                f"table was trained for a different scenario than {config.name!r}"
                f" (table N={self.n_users}, M_max={self.m_max};"
                f" scenario N={config.n_users}, M_max={config.m_max})")

    # -- persistence -------------------------------------------------------

    def to_bytes(self) -> bytes:
        header = _HEADER.pack(MAGIC, VERSION, self.n_users, self.m_max, 0, self.fingerprint,
                              self.iteration, self.t_max, self.seed)
        cursor = np.asarray(self.cursor, dtype="<u4").tobytes()
        body = header + cursor + self.values.astype("<f8", copy=False).tobytes()
        return body + struct.pack("<I", zlib.crc32(body))

    @classmethod
    def from_bytes(cls, data: bytes, config: ScenarioConfig | None = None) -> "QTable":
        if len(data) < _HEADER.size + 4 or data[:8] != MAGIC:
            raise QTableError("not a Q-table file")
        body, (crc,) = data[:-4], struct.unpack("<I", data[-4:])
        if zlib.crc32(body) != crc:
            raise QTableError("Q-table file is corrupt (checksum mismatch)")
        magic, version, n, m_max, _, fp, iteration, t_max, seed = _HEADER.unpack_from(body)
        if version != VERSION:
            raise QTableError(f"unsupported Q-table version {version}")
        offset = _HEADER.size
        cursor = tuple(int(a) for a in np.frombuffer(body, "<u4", n + 1, offset))
        offset += 4 * (n + 1)
        size = 2 * m_max ** (n + 1)
        if len(body) - offset != 8 * size:
            raise QTableError("Q-table file has the wrong length")
        values = np.frombuffer(body, "<f8", size, offset).astype(np.float64)
        table = cls(values, n, m_max, fp, iteration, t_max, seed, cursor)
        if config is not None:
            table.check_matches(config)
        return table

    def save(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path, config: ScenarioConfig | None = None) -> "QTable":
        return cls.from_bytes(Path(path).read_bytes(), config)
