import random
from math import isqrt

import pytest
from mpmath import mp, mpf
from sympy import factorint

from quadfield import (ONE, QuadField, QuadInt, build_quad_field, fundamental_unit, quad_conj,
                       quad_mul, quad_norm, unit_pow)
from src.utils.error_handler import NonUnitError

SQUAREFREE_UP_TO_50 = [m for m in range(2, 51) if all(e == 1 for e in factorint(m).values())]


def test_basis_constants():
    q2, q5 = QuadField(2), QuadField(5)
    assert (q2.t, q2.n, q2.disc) == (0, 2, 8)
    assert (q5.t, q5.n, q5.disc) == (1, 1, 5)


def test_arithmetic_sqrt2():
    q = build_quad_field(2)
    eta = QuadInt(1, 1)
    assert quad_mul(eta, eta, q) == QuadInt(3, 2)
    assert quad_conj(eta, q) == QuadInt(1, -1)
    assert quad_norm(eta, q) == -1
    assert quad_norm(QuadInt(3, 2), q) == 1


def test_arithmetic_golden_ratio():
    q = build_quad_field(5)
    w = QuadInt(0, 1)
    assert q.mul(w, w) == QuadInt(1, 1)
    assert q.conj(w) == QuadInt(1, -1)
    assert q.norm(w) == -1


def test_invalid_m():
    for bad in (1, 0, -3, 4, 12):
        with pytest.raises(ValueError):
            build_quad_field(bad)


@pytest.mark.parametrize("m, expected", [
    (2, QuadInt(1, 1)),
    (3, QuadInt(2, 1)),
    (5, QuadInt(0, 1)),
    (6, QuadInt(5, 2)),
    (7, QuadInt(8, 3)),
    (13, QuadInt(1, 1)),
    (46, QuadInt(24335, 3588)),
])
def test_fundamental_unit_known(m, expected):
    assert fundamental_unit(m) == expected


def _smallest_unit(m: int, limit: int = 5000) -> QuadInt:
    """Exhaustive search on the w-coordinate"""
    q = build_quad_field(m)
    for y in range(1, limit):
        if q.t == 0:
            for s in (-1, 1):
                a2 = m * y * y + s
                a = isqrt(a2)
                if a > 0 and a * a == a2:
                    return QuadInt(a, y)
        else:
            # (x + y sqrt m) / 2 = (x - y) / 2 + y w
            for s in (-4, 4):
                x2 = m * y * y + s
                x = isqrt(x2) if x2 > 0 else 0
                if x > 0 and x * x == x2 and (x - y) % 2 == 0:
                    return QuadInt((x - y) // 2, y)
    raise AssertionError(f"no unit found for m={m}")


@pytest.mark.parametrize("m", SQUAREFREE_UP_TO_50)
def test_fundamental_unit_matches_exhaustive_search(m):
    eta = fundamental_unit(m)
    q = build_quad_field(m)
    assert abs(q.norm(eta)) == 1
    with mp.workdps(30):
        assert q.embed(eta, 0) > 1
    assert eta == _smallest_unit(m)


def test_unit_pow_negative_exponent():
    q = build_quad_field(2)
    eta = fundamental_unit(2)
    inv = unit_pow(eta, -1, q)
    assert inv == QuadInt(-1, 1)
    assert q.mul(inv, eta) == ONE
    assert q.mul(unit_pow(eta, 5, q), unit_pow(eta, -5, q)) == ONE
    assert unit_pow(eta, 0, q) == ONE


def test_unit_pow_rejects_non_unit_inverse():
    q = build_quad_field(2)
    with pytest.raises(NonUnitError):
        unit_pow(QuadInt(2, 1), -1, q)
    assert unit_pow(QuadInt(2, 1), 2, q) == QuadInt(6, 4)


def test_embeddings_and_residues():
    q = build_quad_field(2)
    with mp.workdps(30):
        w1, w2 = q.omega_values()
        assert w1 > 0 > w2
        assert abs(q.embed(QuadInt(1, 1), 0) - (1 + mp.sqrt(2))) < mpf('1e-25')
    # 3^2 = 9 = 2 mod 7
    assert q.mod_p(QuadInt(1, 1), 3, 7) == 4


@pytest.mark.parametrize("m", [2, 3, 5, 13, 46])
def test_conjugation_and_norm_respect_arithmetic(m):
    q = build_quad_field(m)
    rng = random.Random(1000 + m)
    for _ in range(200):
        u = QuadInt(rng.randint(-50, 50), rng.randint(-50, 50))
        v = QuadInt(rng.randint(-50, 50), rng.randint(-50, 50))
        assert quad_conj(u + v, q) == quad_conj(u, q) + quad_conj(v, q)
        assert quad_conj(quad_mul(u, v, q), q) == quad_mul(quad_conj(u, q), quad_conj(v, q), q)
        assert quad_conj(quad_conj(u, q), q) == u
        assert quad_norm(quad_mul(u, v, q), q) == quad_norm(u, q) * quad_norm(v, q)
    assert quad_conj(ONE, q) == ONE


@pytest.mark.parametrize("m", [2, 5, 7, 13])
def test_unit_pow_inverse_pairs(m):
    q = build_quad_field(m)
    eta = fundamental_unit(m)
    for k in range(-30, 31):
        assert q.mul(unit_pow(eta, k, q), unit_pow(eta, -k, q)) == ONE
        assert abs(q.norm(unit_pow(eta, k, q))) == 1
