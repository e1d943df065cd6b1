"""Selectors: total functions from stream positions to call indices.

An eventually periodic selector is a finite prefix followed by a nonempty
loop.  Oracle selectors name a registered total function; the registry also
records whether the function is known to be eventually periodic, known not
to be, or unknown (which downgrades regularity verdicts accordingly).
"""

from __future__ import annotations

from dataclasses import dataclass


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# name -> (function ℕ -> call index, ep_status)
# ep_status: "aperiodic" (known not eventually periodic), "unknown"
ORACLES = {
    "prime-indicator": (lambda n: 1 if _is_prime(n) else 0, "aperiodic"),
    "collatz-parity": (lambda n: _collatz_parity(n), "unknown"),
}


def _collatz_parity(n):
    # parity of the number of steps 3x+1 / x/2 from n+1 down to 1
    x, steps = n + 1, 0
    while x != 1 and steps < 10_000:
        x = 3 * x + 1 if x % 2 else x // 2
        steps += 1
    return steps % 2


@dataclass(frozen=True, slots=True)
class EventuallyPeriodic:
    prefix: tuple
    loop: tuple

    def __post_init__(self):
        if not self.loop:
            raise ValueError("loop must be nonempty")

    def at(self, n):
        if n < len(self.prefix):
            return self.prefix[n]
        return self.loop[(n - len(self.prefix)) % len(self.loop)]

    def shift(self):
        """Selector for the tail of the stream (drop position 0)."""
        if self.prefix:
            return EventuallyPeriodic(self.prefix[1:], self.loop)
        return EventuallyPeriodic((), self.loop[1:] + self.loop[:1])

    def indices(self):
        return sorted(set(self.prefix) | set(self.loop))

    @property
    def eventually_periodic(self):
        return True


@dataclass(frozen=True, slots=True)
class Oracle:
    name: str
    offset: int = 0

    def __post_init__(self):
        if self.name not in ORACLES:
            raise ValueError(f"unknown oracle {self.name!r}")

    def at(self, n):
        return ORACLES[self.name][0](n + self.offset)

    def shift(self):
        return Oracle(self.name, self.offset + 1)

    def indices(self):
        return None  # support not statically known: assume all calls reachable

    @property
    def ep_status(self):
        return ORACLES[self.name][1]

    @property
    def eventually_periodic(self):
        return False
