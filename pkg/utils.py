"""
PIB Solver Utilities Module
Helper functions for bound parsing, coordinate parsing and element formatting
"""

from typing import Sequence

from sympy import Rational, SympifyError

ALPHA_POWERS = ("", "α", "α²")


def horner(coeffs: Sequence[int], x):
    """Evaluate a polynomial given highest-degree first"""
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def parse_bound(text) -> int:
    """Exact positive integer from a decimal string such as '1e50'"""
    try:
        value = Rational(str(text).strip())
    except (SympifyError, TypeError, ValueError) as e:
        raise ValueError(f"not a decimal number: {text!r}") from e
    if value.q != 1 or value < 1:
        raise ValueError(f"bound must be a positive integer, got {text!r}")
    return int(value)


def parse_coordinates(text: str, count: int = 6) -> tuple:
    """Parse 'a1,a2,x1,x2,y1,y2' into a tuple of ints"""
    parts = [p for p in text.replace(" ", "").split(",") if p != ""]
    if len(parts) != count:
        raise ValueError(f"expected {count} comma-separated integers, got {len(parts)}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as e:
        raise ValueError(f"coordinates must be integers: {text!r}") from e


def format_quad(a: int, b: int, surd: str = "ω") -> str:
    """Render a + b*surd compactly"""
    if b == 0:
        return str(a)
    coef = "" if b == 1 else "-" if b == -1 else str(b)
    tail = f"{coef}{surd}"
    if a == 0:
        return tail
    return f"{a}{'+' if b > 0 else ''}{tail}"


def format_element(coords: Sequence[int], denom: int = 1) -> str:
    """Render six basis coordinates as A + X*a + Y*a^2"""
    terms = []
    for power in range(3):
        a, b = coords[2 * power], coords[2 * power + 1]
        if a == 0 and b == 0:
            continue
        quad = format_quad(a, b)
        if power == 0:
            terms.append(quad)
        elif b == 0 and a in (1, -1):
            terms.append(("-" if a < 0 else "") + ALPHA_POWERS[power])
        elif (a == 0 or b == 0):
            terms.append(f"{quad}{ALPHA_POWERS[power]}")
        else:
            terms.append(f"({quad}){ALPHA_POWERS[power]}")
    text = " + ".join(terms).replace("+ -", "- ") if terms else "0"
    if denom != 1:
        text = f"({text})/{denom}"
    return text

