"""Reproducible random numbers: splitmix64 seeding feeding xoshiro256**.

Algorithm (all arithmetic mod 2**64):

* ``splitmix64(x)``: ``x += 0x9E3779B97F4A7C15``; ``z = x``;
  ``z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9``;
  ``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``; output ``z ^ (z >> 31)``.
* A generator seeded with ``seed`` fills its four state words with four
  successive splitmix64 outputs starting from ``x = seed``.
* ``next()`` is xoshiro256**: ``result = rotl(s1 * 5, 7) * 9``, then the
  usual xoshiro256 state update.
* ``uniform()`` is ``(next() >> 11) * 2**-53`` in ``[0, 1)``.
* Trial ``i`` of an experiment with master seed ``S`` uses
  ``trial_seed(S, i) = splitmix64 output for x = S ^ mix(i)``, where
  ``mix(i)`` is the splitmix64 output for ``x = i``.  Results therefore do
  not depend on how trials are split across workers.

:class:`Xoshiro256` and :class:`BatchXoshiro256` produce bit-identical
streams; the batch version just advances many independent states at once.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TWO53 = 2.0**-53


def _splitmix_step(x: int) -> tuple[int, int]:
    x = (x + GOLDEN) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return x, z ^ (z >> 31)


def splitmix64(x: int) -> int:
    return _splitmix_step(x & MASK64)[1]


def trial_seed(master_seed: int, trial: int) -> int:
    return splitmix64((master_seed & MASK64) ^ splitmix64(trial))


def _seed_state(seed: int) -> list[int]:
    x = seed & MASK64
    state = []
    for _ in range(4):
        x, z = _splitmix_step(x)
        state.append(z)
    return state


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256:
    """Scalar xoshiro256** generator."""

    def __init__(self, seed: int) -> None:
        self.s = _seed_state(seed)

    def next(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def uniform(self) -> float:
        return (self.next() >> 11) * _TWO53


def _splitmix_array(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = x + np.uint64(GOLDEN)
    z = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return x, z ^ (z >> np.uint64(31))


def trial_seeds(master_seed: int, start: int, stop: int) -> np.ndarray:
    """Vectorized ``trial_seed(master_seed, i)`` for ``start <= i < stop``."""
    idx = np.arange(start, stop, dtype=np.uint64)
    mixed = _splitmix_array(idx)[1] ^ np.uint64(master_seed & MASK64)
    return _splitmix_array(mixed)[1]


class BatchXoshiro256:
    """Independent xoshiro256** streams advanced in lockstep with numpy."""

    def __init__(self, seeds) -> None:
        x = np.asarray(seeds, dtype=np.uint64).ravel()
        words = []
        for _ in range(4):
            x, z = _splitmix_array(x)
            words.append(z)
        self.s0, self.s1, self.s2, self.s3 = words

    def __len__(self) -> int:
        return len(self.s0)

    @staticmethod
    def _rotl(x: np.ndarray, k: int) -> np.ndarray:
        return (x << np.uint64(k)) | (x >> np.uint64(64 - k))

    def next(self) -> np.ndarray:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        result = self._rotl(s1 * np.uint64(5), 7) * np.uint64(9)
        t = s1 << np.uint64(17)
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        self.s3 = self._rotl(s3, 45)
        return result

    def uniform(self) -> np.ndarray:
        return (self.next() >> np.uint64(11)).astype(np.float64) * _TWO53
