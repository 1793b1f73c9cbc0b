"""
Absolute Generator Search
Extends relative solutions to generators of power integral bases by scanning
the eta exponent and solving the degree-9 index equation in a2, plus the
reciprocal-generator operations for unit generators
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, List, Optional, Sequence

from mpmath import ceil, floor, log10, mp, mpc, mpf, polyroots
from mpmath.libmp import NoConvergence
from sympy import Matrix, Poly, Rational, ZZ
from sympy.polys.numberfields.basis import round_two

from quadfield import ZERO, QuadInt, build_quad_field, unit_pow
from relative_solver import MAX_PRECISION, PRECISION_STEP, RelativeSolution
from sextic_field import (EmbeddingTable, FieldSpec, KElement, absolute_norm, absolute_polynomial,
                          conjugates, embeddings_at, from_power_basis, index, k_inverse,
                          min_poly, x)
from src.utils.error_handler import (CorollaryHypothesisError, NonUnitError, NotPrimitiveError,
                                     PrecisionExhaustedError)
from unit_bounds import k_range
from utils import horner

# Configuration
JPOLY_PRECISION = 500
ROUNDING_TOLERANCE_DIGITS = 100
GUARD_DIGITS = 20
POLYROOTS_STEPS = (100, 400, 1600)


@dataclass(frozen=True)
class JPolynomial:
    """P(a2) = D_M^3 prod (a2 - r) with the nine factor roots r kept as hints"""

    coeffs: tuple
    roots: tuple
    precision: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def shifted(self, value: int) -> tuple:
        """Coefficients of P - value"""
        return self.coeffs[:-1] + (self.coeffs[-1] - value,)


@dataclass(frozen=True)
class GeneratorRecord:
    coords: tuple
    relative: tuple
    k: int
    sign: int
    a2_root: int
    index_verified: bool

    def element(self) -> KElement:
        return KElement((0, *self.coords))

    def to_dict(self) -> dict:
        return {
            'coords': list(self.coords),
            'relative': list(self.relative),
            'k': self.k,
            'sign': self.sign,
            'a2_root': self.a2_root,
            'index_verified': self.index_verified,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorRecord":
        return cls(tuple(data['coords']), tuple(data['relative']), data['k'], data['sign'],
                   data['a2_root'], data['index_verified'])


def _delta(rel: RelativeSolution, k: int, sign: int, spec: FieldSpec) -> tuple:
    """Exact X, Y of sign * eta^k * (X0 a + Y0 a^2)"""
    quad = spec.quad
    nu = unit_pow(spec.eta, k, quad).scale(sign)
    return quad.mul(nu, rel.X0), quad.mul(nu, rel.Y0)


def _expand(roots: Sequence[mpc]) -> list:
    coeffs = [mpc(1)]
    for r in roots:
        nxt = coeffs + [mpc(0)]
        for n in range(1, len(nxt)):
            nxt[n] -= r * coeffs[n - 1]
        coeffs = nxt
    return coeffs


def j_polynomial(rel: RelativeSolution, k: int, sign: int, spec: FieldSpec,
                 table: EmbeddingTable, max_precision: int = MAX_PRECISION) -> JPolynomial:
    """Integer polynomial P with J(a2 w + sign eta^k (X0 a + Y0 a^2)) = |P(a2)|"""
    X, Y = _delta(rel, k, sign, spec)
    delta = KElement.from_axy(ZERO, X, Y)
    scale = spec.quad.disc ** 3
    precision = table.precision
    while True:
        if precision > max_precision:
            raise PrecisionExhaustedError(
                f"J-polynomial for k={k} did not round to integers below {max_precision} digits")
        current = table if precision == table.precision else embeddings_at(spec, precision)
        with mp.workdps(precision):
            vals = conjugates(delta, current)
            gap = current.omega_vals[0] - current.omega_vals[1]
            roots = [-(vals[j1] - vals[3 + j2]) / gap for j1 in range(3) for j2 in range(3)]
            largest = max(mpf(1), max(abs(r) for r in roots))
            needed = int(9 * log10(largest + 1) + log10(scale) + ROUNDING_TOLERANCE_DIGITS + GUARD_DIGITS)
            if needed > precision:
                precision = -(-needed // PRECISION_STEP) * PRECISION_STEP
                continue
            tolerance = mpf(10) ** (-ROUNDING_TOLERANCE_DIGITS)
            coeffs = []
            for c in _expand(roots):
                c *= scale
                n = int(mp.nint(c.real))
                if abs(c.imag) > tolerance or abs(c.real - n) > tolerance:
                    break
                coeffs.append(n)
            else:
                return JPolynomial(tuple(coeffs), tuple(roots), precision)
        print(f"⚠️ J-polynomial rounding failed at {precision} digits (k={k}), escalating")
        precision += PRECISION_STEP


def _approximate_roots(coeffs: Sequence[int]) -> list:
    """Durand-Kerner roots, or real isolating intervals from sympy when it stalls"""
    digits = max(len(str(abs(c))) for c in coeffs)
    with mp.workdps(max(50, digits + 30)):
        for steps in POLYROOTS_STEPS:
            try:
                return list(polyroots(list(coeffs), maxsteps=steps, extraprec=4 * digits + 50))
            except NoConvergence:
                continue
    print("⚠️ polyroots did not converge, isolating real roots exactly")
    midpoints = []
    with mp.workdps(max(50, digits + 30)):
        for (a, b), _ in Poly(list(coeffs), x).intervals(eps=Rational(1, 2)):
            mid = Rational(a + b, 2)
            midpoints.append(mpf(int(mid.p)) / int(mid.q))
    return midpoints


def integer_roots(coeffs: Sequence[int], approx_roots: Optional[Sequence] = None) -> List[int]:
    """All integer roots of an integer polynomial (highest degree first)

    approx_roots, when given, must place a point within distance < 1 of every
    integer root; candidates are the floor and ceiling of those points and
    each one is confirmed by exact evaluation.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if not coeffs:
        raise ValueError("zero polynomial has no finite root set")
    if len(coeffs) == 1:
        return []
    if approx_roots is None:
        approx_roots = _approximate_roots(coeffs)
    candidates = set()
    for z in approx_roots:
        z = mpc(z)
        if abs(z.imag) <= 1:
            candidates.add(int(floor(z.real)))
            candidates.add(int(ceil(z.real)))
    return sorted(c for c in candidates if horner(coeffs, c) == 0)


def solve_j_equation(jpoly: JPolynomial) -> List[int]:
    """Integers a2 with P(a2) = 1 or P(a2) = -1"""
    hits = set(integer_roots(jpoly.shifted(1), jpoly.roots))
    hits.update(integer_roots(jpoly.shifted(-1), jpoly.roots))
    return sorted(hits)


def real_coefficients(jpoly: JPolynomial) -> list:
    """Unrounded D_M^3 prod (a2 - r), real parts at the polynomial's precision"""
    with mp.workdps(jpoly.precision):
        return [jpoly.coeffs[0] * c.real for c in _expand(jpoly.roots)]


def solve_j_equation_real(jpoly: JPolynomial) -> List[int]:
    """Integers a2 with |P(a2)| = 1 from the roots of the real-coefficient P -+ 1

    Same answer as solve_j_equation, reached without the integer conversion
    or the root hints.
    """
    with mp.workdps(jpoly.precision):
        coeffs = real_coefficients(jpoly)
        candidates = set()
        for value in (1, -1):
            shifted = coeffs[:-1] + [coeffs[-1] - value]
            for steps in POLYROOTS_STEPS:
                try:
                    roots = polyroots(shifted, maxsteps=steps, extraprec=jpoly.precision)
                    break
                except NoConvergence:
                    continue
            else:
                raise PrecisionExhaustedError(
                    f"real-coefficient roots did not converge at {jpoly.precision} digits")
            for z in roots:
                z = mpc(z)
                if abs(z.imag) <= 1:
                    candidates.update((int(floor(z.real)), int(ceil(z.real))))
        return sorted(n for n in candidates
                      if abs(int(mp.nint(mp.polyval(coeffs, n)))) == 1)


def _candidates(rel: RelativeSolution, k: int, sign: int, spec: FieldSpec,
                table: EmbeddingTable) -> List[tuple]:
    jpoly = j_polynomial(rel, k, sign, spec, table)
    with mp.workdps(jpoly.precision):
        return [(k, sign, a2) for a2 in solve_j_equation(jpoly)]


def _verify(rel: RelativeSolution, candidate: tuple, spec: FieldSpec,
            C: int) -> Optional[GeneratorRecord]:
    k, sign, a2 = candidate
    X, Y = _delta(rel, k, sign, spec)
    coords = (a2, X.a, X.b, Y.a, Y.b)
    if max(abs(c) for c in coords) >= C:
        return None
    try:
        if index(KElement((0, *coords)), spec) != 1:
            return None
    except NotPrimitiveError:
        return None
    return GeneratorRecord(coords, rel.coords, k, sign, a2, True)


def scan_k(rel: RelativeSolution, spec: FieldSpec, table: EmbeddingTable, C: int,
           threads: int = 1, verbose: bool = False) -> List[GeneratorRecord]:
    """Index-verified generators a2 w +- eta^k (X0 a + Y0 a^2) over the k range"""
    kmin, kmax = k_range(rel.X0, rel.Y0, spec, table, C)
    if verbose:
        print(f"🔍 Scanning k in [{kmin}, {kmax}] for relative solution {rel.coords}")
    # mpmath precision is process-global, so the J-polynomials are built serially
    candidates = [c for k in range(kmin, kmax + 1) for sign in (1, -1)
                  for c in _candidates(rel, k, sign, spec, table)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            checked = list(pool.map(lambda c: _verify(rel, c, spec, C), candidates))
    else:
        checked = [_verify(rel, c, spec, C) for c in candidates]
    records = [r for r in checked if r is not None]
    if verbose:
        for r in records:
            print(f"✅ k={r.k} sign={r.sign:+d} a2={r.a2_root}: {r.coords}")
    return records


def canonical_coords(coords: Sequence[int]) -> tuple:
    """Fix the sign so the first nonzero of (x1, x2, y1, y2, a2) is positive"""
    order = (*coords[1:], coords[0])
    lead = next((c for c in order if c), 0)
    return tuple(coords) if lead >= 0 else tuple(-c for c in coords)


def canonicalize(records: Iterable[GeneratorRecord]) -> List[GeneratorRecord]:
    """One representative per class of u ~ +-u + n"""
    classes = {}
    for record in records:
        key = canonical_coords(record.coords)
        if key not in classes:
            classes[key] = replace(record, coords=key)
    return [classes[key] for key in sorted(classes)]


def are_equivalent(u: KElement, v: KElement) -> bool:
    """u - v or u + v is a rational integer"""
    if not (u.is_integral and v.is_integral):
        return False
    return not any((u - v).coords[1:]) or not any((u + v).coords[1:])


def is_monogenic_polynomial(coeffs: Sequence[int]) -> bool:
    """disc(f) equals the field discriminant, i.e. Z[a] is the maximal order"""
    poly = Poly(list(coeffs), x, domain=ZZ)
    if not poly.is_irreducible:
        return False
    _, field_disc = round_two(poly)
    return int(poly.discriminant()) == int(field_disc)


def power_basis_element_index(element: Sequence[int], coeffs: Sequence[int]) -> int:
    """(Z[a] : Z[u]) for u = sum element[i] a^i and f(a) = 0, f monic"""
    f = Poly(list(coeffs), x, domain=ZZ)
    n = f.degree()
    u = Poly(list(reversed(list(element))), x, domain=ZZ)
    rows = []
    power = Poly(1, x, domain=ZZ)
    for _ in range(n):
        low_first = list(reversed(power.all_coeffs()))
        rows.append([int(c) for c in low_first] + [0] * (n - len(low_first)))
        power = (power * u).rem(f)
    return abs(int(Matrix(rows).det(method="bareiss")))


def reciprocal_generator(f_abs: Sequence[int], spec: Optional[FieldSpec] = None) -> tuple:
    """Power-basis coordinates of a2 a + a3 a^2 + ... + a^(n-1), a generator equivalent to +-1/a"""
    coeffs = [int(c) for c in f_abs]
    n = len(coeffs) - 1
    if n <= 2:
        raise CorollaryHypothesisError(f"degree {n} polynomial; the construction needs degree > 2")
    if coeffs[0] != 1:
        raise CorollaryHypothesisError("polynomial must be monic")
    if abs(coeffs[-1]) != 1:
        raise CorollaryHypothesisError(f"constant term {coeffs[-1]} is not +-1")
    element = (0, *(coeffs[n - i - 1] for i in range(1, n - 1)), 1)
    if spec is not None:
        if tuple(coeffs) != tuple(spec.g):
            raise CorollaryHypothesisError("polynomial differs from the field's defining polynomial")
        quad, f = spec.quad, spec.f
        found = index(from_power_basis(element, quad, f), spec)
    else:
        if not Poly(coeffs, x).is_irreducible:
            raise CorollaryHypothesisError("polynomial is reducible")
        found = power_basis_element_index(element, coeffs)
    if found != 1:
        raise CorollaryHypothesisError(f"reversed element has index {found}; f is not monogenic")
    return element


def disc_of_reciprocal(u: KElement, spec: FieldSpec) -> int:
    """disc(min_poly(1/u)), checked against disc(min_poly(u)) for a unit generator u"""
    mp_u = min_poly(u, spec)
    if mp_u.degree() != 6:
        raise NotPrimitiveError(mp_u.degree())
    norm = absolute_norm(u, spec)
    if not u.is_integral or abs(norm) != 1:
        raise NonUnitError(f"element has absolute norm {norm}")
    inverse_disc = min_poly(k_inverse(u, spec), spec).discriminant()
    direct_disc = mp_u.discriminant()
    if inverse_disc != direct_disc:
        raise ArithmeticError(f"disc(1/u) = {inverse_disc} differs from disc(u) = {direct_disc}")
    return int(direct_disc)


def corollary_family(b: int, c: int) -> tuple:
    """Relative cubic x^3 + (2 + b sqrt2) x + (1 + c sqrt2) and its sextic over Q"""
    f = (QuadInt(0, 0), QuadInt(2, b), QuadInt(1, c))
    return f, absolute_polynomial(build_quad_field(2), f)
