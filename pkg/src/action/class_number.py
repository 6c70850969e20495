"""Class numbers of imaginary quadratic orders by reduced-form enumeration."""

from math import gcd, isqrt
from typing import List, NamedTuple

from ..utils.errors import ParameterError


class BinaryQF(NamedTuple):
    """Binary quadratic form a x^2 + b x y + c y^2."""
    a: int
    b: int
    c: int

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        if not abs(self.b) <= self.a <= self.c:
            return False
        if self.b < 0 and (abs(self.b) == self.a or self.a == self.c):
            return False
        return True

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1


def _check_discriminant(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise ParameterError(f"invalid discriminant {D}: need D < 0 and D = 0, 1 mod 4")


def reduced_forms(D: int) -> List[BinaryQF]:
    """All reduced primitive positive definite forms of discriminant D.

    Args:
        D: Negative discriminant

    Returns:
        Forms ordered by (a, b)

    Raises:
        ParameterError: If D is not a valid negative discriminant
    """
    _check_discriminant(D)
    forms = []
    # reduced forms satisfy 3a^2 <= |D|
    a_max = isqrt(-D // 3)
    for a in range(1, a_max + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            numerator = b * b - D
            if numerator % (4 * a):
                continue
            form = BinaryQF(a, b, numerator // (4 * a))
            if form.is_reduced() and form.is_primitive():
                forms.append(form)
    return forms


def class_number_bqf(D: int) -> int:
    """Class number h(D), the count of reduced primitive forms."""
    return len(reduced_forms(D))
