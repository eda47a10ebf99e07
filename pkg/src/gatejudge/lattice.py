"""The totally ordered lattice of growth-rate classes."""

from __future__ import annotations

import enum
import math


class ComplexityClass(enum.IntEnum):
    C1 = 0
    CLOG = 1
    CN = 2
    CNLOGN = 3
    CN2 = 4
    CN3 = 5
    CSUPER = 6

    @property
    def token(self) -> str:
        return _TOKENS[self]

    @classmethod
    def from_token(cls, token: str) -> "ComplexityClass":
        """Parse a bit-exact class token such as ``"O(n log n)"``.

        Raises ``ValueError`` for anything else, including whitespace variants.
        """
        try:
            return _BY_TOKEN[token]
        except KeyError:
            raise ValueError(f"unknown complexity token {token!r}") from None

    def log_growth(self, n: float) -> float:
        """Natural log of the growth function evaluated at size ``n``.

        The logarithmic factor is floored at 1 so that size 1 stays finite.
        """
        if self is ComplexityClass.CSUPER:
            raise ValueError("superpolynomial class has no fitted growth function")
        lg = math.log(max(math.log2(n), 1.0))
        ln = math.log(n)
        return {
            ComplexityClass.C1: 0.0,
            ComplexityClass.CLOG: lg,
            ComplexityClass.CN: ln,
            ComplexityClass.CNLOGN: ln + lg,
            ComplexityClass.CN2: 2.0 * ln,
            ComplexityClass.CN3: 3.0 * ln,
        }[self]


_TOKENS = {
    ComplexityClass.C1: "O(1)",
    ComplexityClass.CLOG: "O(log n)",
    ComplexityClass.CN: "O(n)",
    ComplexityClass.CNLOGN: "O(n log n)",
    ComplexityClass.CN2: "O(n^2)",
    ComplexityClass.CN3: "O(n^3)",
    ComplexityClass.CSUPER: "SUPER",
}
_BY_TOKEN = {tok: cls for cls, tok in _TOKENS.items()}

# Classes reachable by curve fitting; CSUPER only comes from the timeout path.
FITTABLE = tuple(c for c in ComplexityClass if c is not ComplexityClass.CSUPER)


class Order(str, enum.Enum):
    A_BETTER = "a_better"
    EQUAL = "equal"
    B_BETTER = "b_better"


def compare_classes(a: ComplexityClass, b: ComplexityClass) -> tuple[Order, int]:
    """Compare two classes; lower growth is better.

    Returns the ordering and the number of lattice positions between them.
    """
    steps = abs(int(a) - int(b))
    if a < b:
        return Order.A_BETTER, steps
    if a > b:
        return Order.B_BETTER, steps
    return Order.EQUAL, 0
