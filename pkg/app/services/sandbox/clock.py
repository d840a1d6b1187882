from app.core.exceptions import InvariantBreachException


class SimClock:
    """
    Simulated milliseconds since scenario start.

    Monotone non-decreasing. Only the fleet scheduler (and tests) advance it;
    nothing in the simulator reads the wall clock.
    """

    def __init__(self, start: int = 0):
        if start < 0:
            raise ValueError("clock cannot start before 0")
        self._now = start

    @property
    def now(self) -> int:
        return self._now

    def advance(self, delta_ms: int) -> int:
        """
        Move the clock forward.
        :param delta_ms: Non-negative step
        :return: New time
        """
        return self.advance_to(self._now + delta_ms)

    def advance_to(self, t: int) -> int:
        """
        Jump to an absolute time.
        :param t: Target time, never before now
        :return: New time
        :raises InvariantBreachException: If t lies in the past
        """
        if t < self._now:
            raise InvariantBreachException("clock-monotone", f"cannot move clock from {self._now} back to {t}")
        self._now = t
        return self._now

    def __repr__(self) -> str:
        return f"SimClock(now={self._now})"
