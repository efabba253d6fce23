"""Binary quadratic forms as a pseudo-Euclidean 3-space.

A form is stored by the coefficients (a, b, c) of Q(s, t) = (a s^2 + 2 b s t + c t^2) / 2.
The pseudo inner product has signature (+, -, -) in the basis
W = (1, 0, 1), X = (1, 0, -1), Y = (0, 1, 0), and the Poisson bracket turns
the space into the Lie algebra sl(2, R).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


@dataclass(frozen=True)
class QuadForm2:
    a: float
    b: float
    c: float

    def __call__(self, s: float, t: float) -> float:
        return 0.5 * (self.a * s * s + 2.0 * self.b * s * t + self.c * t * t)

    def __add__(self, other: QuadForm2) -> QuadForm2:
        return QuadForm2(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: QuadForm2) -> QuadForm2:
        return QuadForm2(self.a - other.a, self.b - other.b, self.c - other.c)

    def __mul__(self, k: float) -> QuadForm2:
        return QuadForm2(k * self.a, k * self.b, k * self.c)

    __rmul__ = __mul__

    def __truediv__(self, k: float) -> QuadForm2:
        return QuadForm2(self.a / k, self.b / k, self.c / k)

    def __neg__(self) -> QuadForm2:
        return QuadForm2(-self.a, -self.b, -self.c)

    def coeffs(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    def max_abs(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c))

    def norm2(self) -> float:
        """Self pseudo inner product a c - b^2 (negative outside the discriminant cone)."""
        return self.a * self.c - self.b * self.b


W = QuadForm2(1.0, 0.0, 1.0)
ZERO = QuadForm2(0.0, 0.0, 0.0)


class ConePosition(enum.Enum):
    INSIDE = "Inside"
    ON_CONE = "OnCone"
    OUTSIDE = "Outside"


def psi_inner(q1: QuadForm2, q2: QuadForm2) -> float:
    return 0.5 * (q1.a * q2.c + q2.a * q1.c) - q1.b * q2.b


def poisson_bracket(q1: QuadForm2, q2: QuadForm2) -> QuadForm2:
    # {f, g} = (f_s g_t - f_t g_s) / 2 on the polynomial representatives
    return QuadForm2(
        q1.a * q2.b - q2.a * q1.b,
        0.5 * (q1.a * q2.c - q2.a * q1.c),
        q1.b * q2.c - q2.b * q1.c,
    )


def trace_form(q: QuadForm2) -> float:
    return q.a + q.c


def cone_position(q: QuadForm2, tol: float = 0.0) -> ConePosition:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    n2 = q.norm2()
    if n2 > tol:
        return ConePosition.INSIDE
    if n2 < -tol:
        return ConePosition.OUTSIDE
    return ConePosition.ON_CONE


def conjugate_forms(q1: QuadForm2, q2: QuadForm2, tol: float = 1e-9) -> bool:
    """Whether the projective points of q1 and q2 are pole/polar conjugate.

    The test is scale invariant: the pseudo inner product is compared against
    the product of the largest coefficients of each representative.
    """
    s1, s2 = q1.max_abs(), q2.max_abs()
    if s1 == 0.0 or s2 == 0.0:
        raise ValueError("conjugacy is undefined for the zero form")
    return abs(psi_inner(q1, q2)) <= tol * s1 * s2


def psi_gram(forms: list[QuadForm2]) -> list[list[float]]:
    return [[psi_inner(p, q) for q in forms] for p in forms]
