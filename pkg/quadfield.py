"""
Real Quadratic Field Arithmetic
Exact arithmetic in M = Q(sqrt m) and its ring of integers, fundamental units
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt

from mpmath import mp, mpf
from sympy import factorint

from src.utils.error_handler import NonUnitError

# Continued-fraction steps before giving up on a fundamental unit
MAX_CF_STEPS = 1_000_000


@dataclass(frozen=True)
class QuadInt:
    """a + b*w in the integral basis (1, w) of Z_M; m lives in the QuadField"""

    a: int
    b: int = 0

    def __add__(self, other: "QuadInt") -> "QuadInt":
        if isinstance(other, int):
            return QuadInt(self.a + other, self.b)
        return QuadInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        if isinstance(other, int):
            return QuadInt(self.a - other, self.b)
        return QuadInt(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.a, -self.b)

    def scale(self, n: int) -> "QuadInt":
        """Multiply by a rational integer"""
        return QuadInt(self.a * n, self.b * n)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def as_list(self) -> list:
        return [self.a, self.b]


ZERO = QuadInt(0, 0)
ONE = QuadInt(1, 0)


@dataclass(frozen=True)
class QuadField:
    """M = Q(sqrt m) with w^2 = t*w + n fixed once per field"""

    m: int
    t: int = field(init=False)
    n: int = field(init=False)
    disc: int = field(init=False)

    def __post_init__(self):
        if self.m % 4 == 1:
            object.__setattr__(self, "t", 1)
            object.__setattr__(self, "n", (self.m - 1) // 4)
            object.__setattr__(self, "disc", self.m)
        else:
            object.__setattr__(self, "t", 0)
            object.__setattr__(self, "n", self.m)
            object.__setattr__(self, "disc", 4 * self.m)

    @property
    def eta(self) -> QuadInt:
        """Fundamental unit (> 1 in the embedding sqrt m > 0)"""
        return fundamental_unit(self.m)

    def mul(self, u: QuadInt, v: QuadInt) -> QuadInt:
        bb = u.b * v.b
        return QuadInt(u.a * v.a + self.n * bb, u.a * v.b + u.b * v.a + self.t * bb)

    def conj(self, u: QuadInt) -> QuadInt:
        return QuadInt(u.a + self.t * u.b, -u.b)

    def norm(self, u: QuadInt) -> int:
        return u.a * u.a + self.t * u.a * u.b - self.n * u.b * u.b

    def omega_values(self) -> tuple:
        """Numeric w^(1) > w^(2) at the current mpmath precision"""
        root = mp.sqrt(self.disc)
        return (mpf(self.t) + root) / 2, (mpf(self.t) - root) / 2

    def embed(self, u: QuadInt, i: int):
        """u^(i) as an mpf; i = 0 sends sqrt m to the positive root"""
        return u.a + u.b * self.omega_values()[i]

    def mod_p(self, u: QuadInt, omega_res: int, p: int) -> int:
        """Image of u under w -> omega_res in F_p"""
        return (u.a + u.b * omega_res) % p


def build_quad_field(m: int) -> QuadField:
    """Validated QuadField for squarefree m > 1"""
    if not isinstance(m, int) or m <= 1:
        raise ValueError(f"m must be an integer > 1, got {m!r}")
    if any(e > 1 for e in factorint(m).values()):
        raise ValueError(f"m = {m} is not squarefree")
    return QuadField(m)


def quad_mul(u: QuadInt, v: QuadInt, field_: QuadField) -> QuadInt:
    """Exact product in Z_M"""
    return field_.mul(u, v)


def quad_conj(u: QuadInt, field_: QuadField) -> QuadInt:
    """Image under the nontrivial automorphism of M"""
    return field_.conj(u)


def quad_norm(u: QuadInt, field_: QuadField) -> int:
    """N_{M/Q}(u)"""
    return field_.norm(u)


@lru_cache(maxsize=None)
def fundamental_unit(m: int) -> QuadInt:
    """Smallest unit > 1 of Z_M via the continued fraction of w

    The expansion of (P + sqrt d)/Q is run with integer state only. A
    convergent p/q of w with p - q*conj(w) of norm +-1 is the fundamental
    unit; its w-coordinates are (p - q*t, q).
    """
    quad = build_quad_field(m)
    d = m
    if quad.t == 1:
        P, Q = 1, 2
    else:
        P, Q = 0, 1
    root = isqrt(d)
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    for _ in range(MAX_CF_STEPS):
        a = (P + root) // Q
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        candidate = QuadInt(p_cur - q_cur * quad.t, q_cur)
        if abs(quad.norm(candidate)) == 1:
            return candidate
        P = a * Q - P
        Q = (d - P * P) // Q
    raise ArithmeticError(f"continued fraction of Q(sqrt {m}) did not close")


def unit_pow(u: QuadInt, k: int, field_: QuadField) -> QuadInt:
    """Exact k-th power; negative k needs u to be a unit"""
    if k < 0:
        norm = field_.norm(u)
        if abs(norm) != 1:
            raise NonUnitError(f"{u} has norm {norm}, cannot invert")
        u = field_.conj(u).scale(norm)
        k = -k
    result = ONE
    base = u
    while k:
        if k & 1:
            result = field_.mul(result, base)
        base = field_.mul(base, base)
        k >>= 1
    return result
