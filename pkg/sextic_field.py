"""
Sextic Field Arithmetic
Exact and high-precision arithmetic in K = M(a): products, minimal polynomials,
the index, the relative norm form and the table of complex embeddings
"""

from dataclasses import dataclass
from math import gcd, isqrt, lcm
from typing import Optional, Sequence

from mpmath import mp, mpc, mpf, polyroots
from sympy import Matrix, Poly, QQ, Rational, symbols

from cache_manager import cache_manager
from quadfield import ONE, ZERO, QuadField, QuadInt, build_quad_field
from src.utils.error_handler import FieldSpecError, NotPrimitiveError, RootPairingError

x = symbols("x")

# Conjugate labels (i, j): i runs over the two embeddings of M, j over the roots of f^(i)
CONJUGATES = tuple((i, j) for i in range(2) for j in range(3))
MIN_PRECISION = 50


@dataclass(frozen=True)
class KElement:
    """(a1 + a2 w) + (x1 + x2 w) a + (y1 + y2 w) a^2, all over denom"""

    coords: tuple
    denom: int = 1

    @classmethod
    def make(cls, coords: Sequence[int], denom: int = 1) -> "KElement":
        """Build in lowest terms with a positive denominator"""
        coords = tuple(int(c) for c in coords)
        if len(coords) != 6:
            raise ValueError(f"expected 6 coordinates, got {len(coords)}")
        if denom == 0:
            raise ZeroDivisionError("zero denominator")
        if denom < 0:
            coords, denom = tuple(-c for c in coords), -denom
        common = gcd(denom, *coords)
        if common > 1:
            coords, denom = tuple(c // common for c in coords), denom // common
        return cls(coords, denom)

    @classmethod
    def from_axy(cls, A: QuadInt, X: QuadInt, Y: QuadInt, denom: int = 1) -> "KElement":
        return cls.make((A.a, A.b, X.a, X.b, Y.a, Y.b), denom)

    @classmethod
    def rational(cls, n: int) -> "KElement":
        return cls((n, 0, 0, 0, 0, 0))

    @property
    def A(self) -> QuadInt:
        return QuadInt(self.coords[0], self.coords[1])

    @property
    def X(self) -> QuadInt:
        return QuadInt(self.coords[2], self.coords[3])

    @property
    def Y(self) -> QuadInt:
        return QuadInt(self.coords[4], self.coords[5])

    @property
    def is_integral(self) -> bool:
        return self.denom == 1

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "KElement") -> "KElement":
        d = lcm(self.denom, other.denom)
        s, o = d // self.denom, d // other.denom
        return KElement.make([a * s + b * o for a, b in zip(self.coords, other.coords)], d)

    def __neg__(self) -> "KElement":
        return KElement(tuple(-c for c in self.coords), self.denom)

    def __sub__(self, other: "KElement") -> "KElement":
        return self + (-other)

    def scale(self, n: int) -> "KElement":
        return KElement.make([c * n for c in self.coords], self.denom)


BASIS = tuple(KElement(tuple(int(k == i) for k in range(6))) for i in range(6))
K_ONE = BASIS[0]
OMEGA = BASIS[1]
ALPHA = BASIS[2]


@dataclass(frozen=True)
class FieldSpec:
    """K = M(a) with f(a) = 0, g = f^(1) f^(2), unit system and discriminant"""

    quad: QuadField
    f2: QuadInt
    f1: QuadInt
    f0: QuadInt
    g: tuple
    units: tuple
    D_K: int
    name: str = ""

    @property
    def f(self) -> tuple:
        return self.f2, self.f1, self.f0

    @property
    def h(self) -> int:
        return len(self.units)

    @property
    def eta(self) -> QuadInt:
        return self.quad.eta


# Exact arithmetic on (quad, f) so it is usable before a FieldSpec exists

def _mul_parts(u: tuple, v: tuple, quad: QuadField, f: tuple) -> tuple:
    """Product of (A, X, Y) triples, reduced with a^3 = -f2 a^2 - f1 a - f0"""
    prod = [ZERO] * 5
    for i, ui in enumerate(u):
        if ui.is_zero():
            continue
        for j, vj in enumerate(v):
            if not vj.is_zero():
                prod[i + j] = prod[i + j] + quad.mul(ui, vj)
    f2, f1, f0 = f
    for n in (4, 3):
        c = prod[n]
        if c.is_zero():
            continue
        prod[n - 1] = prod[n - 1] - quad.mul(f2, c)
        prod[n - 2] = prod[n - 2] - quad.mul(f1, c)
        prod[n - 3] = prod[n - 3] - quad.mul(f0, c)
    return prod[0], prod[1], prod[2]


def _mul(u: KElement, v: KElement, quad: QuadField, f: tuple) -> KElement:
    A, X, Y = _mul_parts((u.A, u.X, u.Y), (v.A, v.X, v.Y), quad, f)
    return KElement.from_axy(A, X, Y, u.denom * v.denom)


def from_power_basis(coeffs: Sequence[int], quad: QuadField, f: tuple, denom: int = 1) -> KElement:
    """sum coeffs[k] a^k (k = 0..5) over denom, in the six-element basis"""
    total = KElement.rational(0)
    power = K_ONE
    for c in coeffs:
        if c:
            total = total + KElement(tuple(int(c) * e for e in power.coords))
        power = _mul(power, ALPHA, quad, f)
    return KElement.make(total.coords, denom)


def absolute_polynomial(quad: QuadField, f: tuple) -> tuple:
    """Coefficients of g = f^(1) f^(2), highest degree first"""
    rel = [ONE, *f]
    conj = [quad.conj(c) for c in rel]
    out = [ZERO] * 7
    for i, a in enumerate(rel):
        for j, b in enumerate(conj):
            out[i + j] = out[i + j] + quad.mul(a, b)
    if any(c.b for c in out):
        raise FieldSpecError("f * conj(f) is not rational; coefficients inconsistent", "f")
    return tuple(c.a for c in out)


def _trace_form_determinant(quad: QuadField, f: tuple) -> int:
    traces = [_matrix(b, quad, f).trace() for b in BASIS]
    gram = Matrix(6, 6, lambda r, c: sum(
        coef * tr for coef, tr in zip(_mul(BASIS[r], BASIS[c], quad, f).coords, traces)))
    return int(gram.det(method="bareiss"))


def _matrix(u: KElement, quad: QuadField, f: tuple) -> Matrix:
    cols = [_mul(KElement(u.coords), b, quad, f).coords for b in BASIS]
    return Matrix(6, 6, lambda r, c: Rational(cols[c][r], u.denom))


def build_field_spec(m: int, f2: QuadInt, f1: QuadInt, f0: QuadInt, units: Sequence[KElement],
                     D_K: Optional[int] = None, g: Optional[Sequence[int]] = None,
                     name: str = "") -> FieldSpec:
    """Validated FieldSpec; D_K and g are recomputed and checked when supplied"""
    try:
        quad = build_quad_field(m)
    except ValueError as e:
        raise FieldSpecError(str(e), "m") from e
    f = (f2, f1, f0)
    computed_g = absolute_polynomial(quad, f)
    if g is not None and tuple(int(c) for c in g) != computed_g:
        raise FieldSpecError(f"g {list(g)} does not match f*conj(f) = {list(computed_g)}", "g")
    if not Poly(computed_g, x).is_irreducible:
        raise FieldSpecError(f"g = {Poly(computed_g, x).as_expr()} is reducible over Q", "f")
    units = tuple(units)
    if len(units) not in (2, 3, 4):
        raise FieldSpecError(f"unit system needs h in {{2, 3, 4}} units, got {len(units)}", "units")
    for n, unit in enumerate(units, start=1):
        if not unit.is_integral:
            raise FieldSpecError(f"unit {n} is not an algebraic integer in the basis", "units")
        norm = _matrix(unit, quad, f).det(method="bareiss")
        if abs(norm) != 1:
            raise FieldSpecError(f"unit {n} has absolute norm {norm}", "units")
    computed_dk = _trace_form_determinant(quad, f)
    if D_K is not None and int(D_K) != computed_dk:
        raise FieldSpecError(f"D_K = {D_K} differs from the trace-form determinant {computed_dk}", "D_K")
    return FieldSpec(quad, f2, f1, f0, computed_g, units, computed_dk, name)


def k_mul(u: KElement, v: KElement, spec: FieldSpec) -> KElement:
    """Exact product in K"""
    return _mul(u, v, spec.quad, spec.f)


def k_pow(u: KElement, n: int, spec: FieldSpec) -> KElement:
    """u^n for n >= 0"""
    result, base = K_ONE, u
    while n:
        if n & 1:
            result = k_mul(result, base, spec)
        base = k_mul(base, base, spec)
        n >>= 1
    return result


def multiplication_matrix(u: KElement, spec: FieldSpec) -> Matrix:
    """Rational 6x6 matrix of v -> u*v on the basis (1, w, a, wa, a^2, wa^2)"""
    return _matrix(u, spec.quad, spec.f)


def absolute_norm(u: KElement, spec: FieldSpec) -> Rational:
    return multiplication_matrix(u, spec).det(method="bareiss")


def k_inverse(u: KElement, spec: FieldSpec) -> KElement:
    """Exact 1/u from the multiplication-matrix system over Q"""
    if u.is_zero():
        raise ZeroDivisionError("zero has no inverse")
    sol = multiplication_matrix(u, spec).LUsolve(Matrix([1, 0, 0, 0, 0, 0]))
    denom = lcm(*(int(Rational(v).q) for v in sol))
    return KElement.make([int(Rational(v) * denom) for v in sol], denom)


def min_poly(u: KElement, spec: FieldSpec) -> Poly:
    """Primitive integer minimal polynomial, monic when u is an algebraic integer"""
    cp = multiplication_matrix(u, spec).charpoly(x)
    _, poly = Poly(cp.as_expr(), x, domain=QQ).sqf_part().monic().clear_denoms(convert=True)
    return poly


def index(u: KElement, spec: FieldSpec) -> int:
    """(Z_K : Z[u]) = sqrt(disc(min_poly(u)) / D_K)"""
    if not u.is_integral:
        raise ValueError("index is defined for algebraic integers only")
    mp_u = min_poly(u, spec)
    if mp_u.degree() != 6:
        raise NotPrimitiveError(mp_u.degree())
    disc = int(mp_u.discriminant())
    quotient, rem = divmod(disc, spec.D_K)
    root = isqrt(quotient) if quotient >= 0 else -1
    if rem or root < 0 or root * root != quotient:
        raise FieldSpecError(f"disc {disc} is not a square multiple of D_K = {spec.D_K}; "
                             "the basis is not integral")
    return root


def power_basis_index(u: KElement, spec: FieldSpec) -> int:
    """|det| of the coordinates of 1, u, ..., u^5; zero when u is not primitive"""
    if not u.is_integral:
        raise ValueError("index is defined for algebraic integers only")
    powers = [K_ONE]
    for _ in range(5):
        powers.append(k_mul(powers[-1], u, spec))
    return abs(int(Matrix([p.coords for p in powers]).det(method="bareiss")))


@dataclass(frozen=True)
class NormForm:
    """F(X, Y) = c3 X^3 + c2 X^2 Y + c1 X Y^2 + c0 Y^3 over Z_M"""

    quad: QuadField
    coeffs: tuple

    def evaluate(self, X: QuadInt, Y: QuadInt) -> QuadInt:
        mul = self.quad.mul
        x2, y2 = mul(X, X), mul(Y, Y)
        terms = (mul(x2, X), mul(x2, Y), mul(X, y2), mul(y2, Y))
        total = ZERO
        for c, t in zip(self.coeffs, terms):
            total = total + mul(c, t)
        return total

    def norm_value(self, X: QuadInt, Y: QuadInt) -> int:
        """N_{M/Q}(F(X, Y))"""
        return self.quad.norm(self.evaluate(X, Y))

    def is_unit_value(self, X: QuadInt, Y: QuadInt) -> bool:
        return abs(self.norm_value(X, Y)) == 1


def relative_norm_form(spec: FieldSpec) -> NormForm:
    """N_{K/M}(X - tY) for t = f2 + a, i.e. Y^3 f(X/Y - f2) expanded"""
    quad = spec.quad
    f2, f1, f0 = spec.f
    f2sq = quad.mul(f2, f2)
    coeffs = (ONE, f2.scale(-2), f2sq + f1, f0 - quad.mul(f1, f2))
    return NormForm(quad, coeffs)


def relative_index(u: KElement, spec: FieldSpec) -> int:
    """Exact I_{K/M}(u) = |N_{M/Q}(F(X, Y))|"""
    if not u.is_integral:
        raise ValueError("relative index is defined for algebraic integers only")
    return abs(relative_norm_form(spec).norm_value(u.X, u.Y))


@dataclass(frozen=True)
class EmbeddingTable:
    """Conjugates a^(i,j) at a fixed working precision (decimal digits)"""

    precision: int
    omega_vals: tuple
    alpha_vals: tuple
    theta_vals: tuple

    def alpha(self, i: int, j: int) -> mpc:
        return self.alpha_vals[i][j]

    def theta(self, i: int, j: int) -> mpc:
        return self.theta_vals[i][j]


def build_embeddings(spec: FieldSpec, precision: int) -> EmbeddingTable:
    """Roots of g paired to the embeddings of M by testing f^(i)"""
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} digits")
    with mp.workdps(precision):
        omegas = spec.quad.omega_values()
        roots = polyroots(list(spec.g), maxsteps=max(100, precision), extraprec=4 * precision)
        threshold = mpf(10) ** (-(precision // 2))
        rel = [[c.a + c.b * omegas[i] for c in (ONE, *spec.f)] for i in range(2)]
        groups = ([], [])
        for root in roots:
            root = mpc(root)
            residuals = [abs(((r[0] * root + r[1]) * root + r[2]) * root + r[3]) for r in rel]
            hits = [i for i in range(2) if residuals[i] < threshold]
            if len(hits) != 1:
                raise RootPairingError(
                    f"root {mp.nstr(root, 15)} pairs with {len(hits)} embeddings "
                    f"(residuals {mp.nstr(residuals[0], 5)}, {mp.nstr(residuals[1], 5)})")
            groups[hits[0]].append(root)
        if any(len(grp) != 3 for grp in groups):
            raise RootPairingError(f"pairing split the roots {len(groups[0])}/{len(groups[1])}")
        scale = mpf(10) ** (precision // 2)
        alpha_vals = tuple(
            tuple(sorted(grp, key=lambda z: (int(mp.nint(z.real * scale)), z.imag)))
            for grp in groups)
        theta_vals = tuple(
            tuple(rel[i][1] + a for a in alpha_vals[i]) for i in range(2))
    return EmbeddingTable(precision, tuple(omegas), alpha_vals, theta_vals)


def embeddings_at(spec: FieldSpec, precision: int) -> EmbeddingTable:
    """Memoised build_embeddings"""
    return cache_manager.cached_call(build_embeddings, spec, precision)


def embed_element(u: KElement, table: EmbeddingTable, i: int, j: int) -> mpc:
    """Numeric conjugate u^(i,j)"""
    with mp.workdps(table.precision):
        w = table.omega_vals[i]
        a = table.alpha_vals[i][j]
        c = u.coords
        value = (c[0] + c[1] * w) + (c[2] + c[3] * w) * a + (c[4] + c[5] * w) * a * a
        return value / u.denom if u.denom != 1 else value


def conjugates(u: KElement, table: EmbeddingTable) -> tuple:
    """All six conjugates in CONJUGATES order"""
    return tuple(embed_element(u, table, i, j) for i, j in CONJUGATES)


def size(u: KElement, table: EmbeddingTable) -> mpf:
    """Maximum absolute value of the conjugates"""
    with mp.workdps(table.precision):
        return max(abs(v) for v in conjugates(u, table))


def j_factor(u: KElement, spec: FieldSpec, table: EmbeddingTable) -> mpf:
    """prod |u^(1,j1) - u^(2,j2)| / |D_M|^(3/2)"""
    with mp.workdps(table.precision):
        vals = conjugates(u, table)
        prod = mpf(1)
        for a in vals[:3]:
            for b in vals[3:]:
                prod *= abs(a - b)
        return prod / mpf(abs(spec.quad.disc)) ** mpf(1.5)


def relative_index_numeric(u: KElement, table: EmbeddingTable) -> mpf:
    """Relative index from conjugate differences over those of a"""
    with mp.workdps(table.precision):
        vals = conjugates(u, table)
        num = mpf(1)
        den = mpf(1)
        for i in range(2):
            for j1 in range(3):
                for j2 in range(j1 + 1, 3):
                    num *= abs(vals[3 * i + j1] - vals[3 * i + j2])
                    den *= abs(table.alpha(i, j1) - table.alpha(i, j2))
        return num / den
