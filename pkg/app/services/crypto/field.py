"""Prime-field arithmetic (default p = 2^61 - 1)."""

from dataclasses import dataclass

from sympy import mod_inverse

from app.core.config import settings


@dataclass(frozen=True, slots=True)
class FieldElement:
    """Integer in [0, p). Operands must share the prime."""

    value: int
    prime: int = settings.field_prime

    def __post_init__(self):
        if not 0 <= self.value < self.prime:
            object.__setattr__(self, "value", self.value % self.prime)

    def _coerce(self, other: "FieldElement | int") -> int:
        if isinstance(other, FieldElement):
            if other.prime != self.prime:
                raise ValueError("field elements from different primes")
            return other.value
        return other % self.prime

    def __add__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement((self.value + self._coerce(other)) % self.prime, self.prime)

    def __sub__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement((self.value - self._coerce(other)) % self.prime, self.prime)

    def __mul__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement((self.value * self._coerce(other)) % self.prime, self.prime)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value % self.prime, self.prime)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(int(mod_inverse(self.value, self.prime)), self.prime)

    def __truediv__(self, other: "FieldElement | int") -> "FieldElement":
        return self * FieldElement(self._coerce(other), self.prime).inverse()

    def __int__(self) -> int:
        return self.value
