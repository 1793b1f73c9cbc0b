import time

import pytest
from mpmath.libmp import NoConvergence
from sympy import Poly

import absolute_solver
from absolute_solver import (GeneratorRecord, are_equivalent, canonical_coords, canonicalize,
                             corollary_family, disc_of_reciprocal, integer_roots,
                             is_monogenic_polynomial, j_polynomial, power_basis_element_index,
                             reciprocal_generator, scan_k, solve_j_equation,
                             solve_j_equation_real)
from quadfield import QuadInt
from relative_solver import RelativeSolution
from sextic_field import (ALPHA, K_ONE, KElement, embeddings_at, from_power_basis, index, k_mul,
                          x)
from src.utils.error_handler import CorollaryHypothesisError, NonUnitError, NotPrimitiveError
from unit_bounds import k_range

EXAMPLE1_G = (1, 0, 4, 2, 4, 4, -1)
TRIVIAL = RelativeSolution((0, 0), 1, QuadInt(1, 0), QuadInt(0, 0), True)
SECOND = RelativeSolution((1, 0), 1, QuadInt(0, 0), QuadInt(-1, 0), True)


def test_integer_roots():
    assert integer_roots([1, 0, -4]) == [-2, 2]
    assert integer_roots([1, -6, 11, -6]) == [1, 2, 3]
    assert integer_roots([2, 0, 1]) == []
    assert integer_roots([0, 0, 5]) == []
    assert integer_roots([3, -3]) == [1]
    big = 10 ** 12
    assert integer_roots([1, -(big + 1), big]) == [1, big]
    with pytest.raises(ValueError):
        integer_roots([0, 0])


def test_integer_roots_with_hints():
    assert integer_roots([1, 0, -4], approx_roots=[-1.7, 2.4]) == [-2, 2]


def test_integer_roots_when_polyroots_stalls(monkeypatch, capsys):
    def stalled(*args, **kwargs):
        raise NoConvergence("stalled")

    monkeypatch.setattr(absolute_solver, "polyroots", stalled)
    assert integer_roots([1, 0, -4]) == [-2, 2]
    assert integer_roots([1, -6, 11, -6]) == [1, 2, 3]
    assert "did not converge" in capsys.readouterr().out


def test_canonical_sign():
    assert canonical_coords((-2, 0, 0, -1, 1)) == (2, 0, 0, 1, -1)
    assert canonical_coords((-2, 0, 0, 1, -1)) == (-2, 0, 0, 1, -1)
    assert canonical_coords((-3, 0, 0, 0, 0)) == (3, 0, 0, 0, 0)
    assert canonical_coords((0, -1, 0, 0, 0)) == (0, 1, 0, 0, 0)


def test_canonicalize_merges_sign_twins():
    a = GeneratorRecord((-2, 0, 0, 1, -1), (0, 0, -1, 0), -1, 1, -2, True)
    b = GeneratorRecord((2, 0, 0, -1, 1), (0, 0, -1, 0), -1, -1, 2, True)
    c = GeneratorRecord((0, 1, 0, 0, 0), (1, 0, 0, 0), 0, 1, 0, True)
    classes = canonicalize([a, b, c])
    assert [r.coords for r in classes] == [(-2, 0, 0, 1, -1), (0, 1, 0, 0, 0)]
    assert GeneratorRecord.from_dict(a.to_dict()) == a
    assert a.element() == KElement.make((0, -2, 0, 0, 1, -1))


def test_equivalence():
    shifted = KElement.make((5, 0, -1, 0, 0, 0))
    assert are_equivalent(ALPHA, shifted)
    assert are_equivalent(ALPHA, ALPHA)
    assert not are_equivalent(ALPHA, KElement.make((0, 0, 0, 0, 1, 0)))
    assert not are_equivalent(ALPHA, KElement.make((0, 0, 1, 0, 0, 0), 2))


def test_j_polynomial_of_alpha(example1, table500):
    jpoly = j_polynomial(TRIVIAL, 0, 1, example1, table500)
    assert jpoly.degree == 9
    assert abs(jpoly.coeffs[-1]) == 1
    assert 0 in solve_j_equation(jpoly)


def test_j_polynomial_precision_stability(example1, table500):
    at500 = j_polynomial(SECOND, -1, 1, example1, table500)
    at600 = j_polynomial(SECOND, -1, 1, example1, embeddings_at(example1, 600))
    assert at500.coeffs == at600.coeffs
    assert -2 in solve_j_equation(at500)


def test_real_coefficient_path_agrees(example1, table500):
    for rel, k in ((TRIVIAL, 0), (SECOND, -1), (SECOND, 3)):
        jpoly = j_polynomial(rel, k, 1, example1, table500)
        assert solve_j_equation_real(jpoly) == solve_j_equation(jpoly)
    assert -2 in solve_j_equation_real(j_polynomial(SECOND, -1, 1, example1, table500))


@pytest.mark.slow
def test_scan_finds_known_generators(example1, table500):
    C = 10 ** 50
    trivial = canonicalize(scan_k(TRIVIAL, example1, table500, C))
    assert (0, 1, 0, 0, 0) in [r.coords for r in trivial]
    records = scan_k(SECOND, example1, table500, C)
    hits = [r for r in records if r.coords == (-2, 0, 0, 1, -1)]
    assert hits and hits[0].k == -1 and hits[0].sign == 1 and hits[0].a2_root == -2
    assert all(r.index_verified for r in records)


def test_monogenic_polynomials():
    assert is_monogenic_polynomial(EXAMPLE1_G)
    assert is_monogenic_polynomial([1, 0, -2])
    assert not is_monogenic_polynomial([1, 0, -5])
    assert not is_monogenic_polynomial([1, 0, 1, 0])


def test_power_basis_element_index():
    assert power_basis_element_index([0, 1], [1, 0, -2]) == 1
    assert power_basis_element_index([0, 2], [1, 0, -2]) == 2
    assert power_basis_element_index([3, 1], [1, 0, -2]) == 1


def test_reciprocal_generator_example1(example1):
    element = reciprocal_generator(EXAMPLE1_G)
    assert element == (0, 4, 2, 4, 0, 1)
    assert reciprocal_generator(EXAMPLE1_G, example1) == element
    u = from_power_basis(element, example1.quad, example1.f)
    assert index(u, example1) == 1
    assert not are_equivalent(u, ALPHA)


def test_reciprocal_generator_hypotheses(example1):
    with pytest.raises(CorollaryHypothesisError):
        reciprocal_generator([1, 0, -1])
    with pytest.raises(CorollaryHypothesisError):
        reciprocal_generator([2, 0, 0, 1])
    with pytest.raises(CorollaryHypothesisError):
        reciprocal_generator([1, 0, 0, 2])
    with pytest.raises(CorollaryHypothesisError):
        reciprocal_generator([1, 0, 0, 0, -1])
    with pytest.raises(CorollaryHypothesisError):
        reciprocal_generator([1, 0, 4, 2, 2, 4, 1], example1)


@pytest.mark.parametrize("b, c", [(0, 0), (1, 0), (1, 1), (0, 1), (1, -1)])
def test_corollary_family(b, c):
    _, g = corollary_family(b, c)
    assert g == (1, 0, 4, 2, 4 - 2 * b * b, -4 * b * c + 4, -2 * c * c + 1)
    if not Poly(list(g), x).is_irreducible or not is_monogenic_polynomial(g):
        pytest.skip(f"(b, c) = ({b}, {c}) is outside the corollary hypotheses")
    element = reciprocal_generator(g)
    assert element == (0, 4 - 2 * b * b, 2, 4, 0, 1)
    assert power_basis_element_index(element, g) == 1


def test_corollary_family_has_members():
    members = [(b, c) for b, c in [(0, 0), (1, 0), (1, 1), (0, 1), (1, -1)]
               if Poly(list(corollary_family(b, c)[1]), x).is_irreducible
               and is_monogenic_polynomial(corollary_family(b, c)[1])]
    assert (0, 1) in members


def _unit_generators(spec, count):
    eta = KElement.make((1, 1, 0, 0, 0, 0))
    eps1, eps2 = spec.units
    found = []
    for a in range(3):
        for b in range(4):
            for c in range(3):
                if b == 0 and c == 0:
                    continue
                u = K_ONE
                for base, n in ((eta, a), (eps1, b), (eps2, c)):
                    for _ in range(n):
                        u = k_mul(u, base, spec)
                found.append(u)
                if len(found) == count:
                    return found
    return found


def test_reciprocal_preserves_discriminant(example1):
    checked = 0
    for u in _unit_generators(example1, 33):
        try:
            disc = disc_of_reciprocal(u, example1)
        except NotPrimitiveError:
            continue
        assert disc != 0
        checked += 1
        if checked == 20:
            break
    assert checked == 20


def test_reciprocal_needs_a_unit(example1):
    with pytest.raises(NonUnitError):
        disc_of_reciprocal(ALPHA.scale(2), example1)
    with pytest.raises(NotPrimitiveError):
        disc_of_reciprocal(KElement.make((1, 1, 0, 0, 0, 0)), example1)


def test_reciprocal_of_alpha_keeps_disc_g(example1):
    disc_g = Poly(list(EXAMPLE1_G), x).discriminant()
    assert disc_of_reciprocal(ALPHA, example1) == int(disc_g) == example1.D_K


EXAMPLE3_THIRD = RelativeSolution(None, 1, QuadInt(3, -2), QuadInt(-6, 4), True, "direct")


def test_example3_third_generator_exponent(example3):
    table = embeddings_at(example3, 500)
    jpoly = j_polynomial(EXAMPLE3_THIRD, 2, 1, example3, table)
    assert -4 in solve_j_equation(jpoly)
    # eta^2 (3 - 2 sqrt2) = 1, so the generator is -4 sqrt2 + a - 2a^2
    element = KElement.make((0, -4, 1, 0, -2, 0))
    assert index(element, example3) == 1


@pytest.mark.slow
def test_scan_finds_example3_third_generator(example3):
    records = scan_k(EXAMPLE3_THIRD, example3, embeddings_at(example3, 500), 10 ** 50)
    hits = [r for r in records if r.coords == (-4, 1, 0, -2, 0)]
    assert hits
    assert (hits[0].k, hits[0].sign, hits[0].a2_root) == (2, 1, -4)


@pytest.mark.benchmark
def test_integer_coefficients_beat_real_coefficients(example1, table500):
    lo, hi = k_range(TRIVIAL.X0, TRIVIAL.Y0, example1, table500, 10 ** 50)
    jpolys = [j_polynomial(TRIVIAL, k, sign, example1, table500)
              for k in range(lo, hi + 1) for sign in (1, -1)]
    start = time.perf_counter()
    exact = [solve_j_equation(j) for j in jpolys]
    integer_time = time.perf_counter() - start
    start = time.perf_counter()
    real = [solve_j_equation_real(j) for j in jpolys]
    real_time = time.perf_counter() - start
    assert real == exact
    assert real_time >= 10 * integer_time
