"""
Relative Thue Equation Solver
Turns surviving exponent tuples into exactly verified relative generators
(X0, Y0) with N_{K/M}(X0 - tY0) a unit of Z_M
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, List, Optional, Sequence

from mpmath import det, floor, inverse, log, matrix, mp, mpf

from quadfield import QuadInt, unit_pow
from sextic_field import (CONJUGATES, EmbeddingTable, FieldSpec, conjugates, embeddings_at,
                          relative_norm_form)
from sieve import full_box
from src.utils.error_handler import PrecisionExhaustedError

# Configuration
LINEAR_PRECISION = 250
MAX_PRECISION = 2000
PRECISION_STEP = 100
INTEGER_TOLERANCE = mpf('1e-25')


@dataclass(frozen=True)
class RelativeSolution:
    exponents: Optional[tuple]
    sign: int
    X0: QuadInt
    Y0: QuadInt
    verified: bool
    source: str = "sieve"

    @property
    def coords(self) -> tuple:
        return self.X0.a, self.X0.b, self.Y0.a, self.Y0.b

    def to_dict(self) -> dict:
        return {
            'exponents': list(self.exponents) if self.exponents is not None else None,
            'sign': self.sign,
            'coords': list(self.coords),
            'verified': self.verified,
            'source': self.source,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RelativeSolution":
        x1, x2, y1, y2 = data['coords']
        exps = tuple(data['exponents']) if data['exponents'] is not None else None
        return cls(exps, data['sign'], QuadInt(x1, x2), QuadInt(y1, y2),
                   data['verified'], data.get('source', 'sieve'))


@dataclass(frozen=True)
class LinearSystem:
    """The best-conditioned 4x4 system in (x10, x20, y10, y20) and unit conjugates"""

    rows: tuple
    inverse: object
    determinant: mpf
    unit_values: tuple
    precision: int


def _system_rows(table: EmbeddingTable) -> list:
    rows = []
    for i, j in CONJUGATES:
        w, th = table.omega_vals[i], table.theta(i, j)
        rows.append([mpf(1), w, -th, -w * th])
    return rows


def prepare_system(spec: FieldSpec, table: EmbeddingTable,
                   max_precision: int = MAX_PRECISION) -> LinearSystem:
    """Pick the four conjugate rows with the largest |det|, escalating precision"""
    while True:
        with mp.workdps(table.precision):
            rows = _system_rows(table)
            scored = []
            for chosen in combinations(range(6), 4):
                mat = matrix([rows[r] for r in chosen])
                scored.append((abs(det(mat)), chosen, mat))
            best_det, chosen, mat = max(scored, key=lambda s: s[0])
            if best_det > mpf(10) ** (-(table.precision // 4)):
                unit_vals = tuple(tuple(conjugates(u, table)[r] for r in chosen)
                                  for u in spec.units)
                return LinearSystem(chosen, inverse(mat), best_det, unit_vals, table.precision)
        if table.precision + PRECISION_STEP > max_precision:
            raise PrecisionExhaustedError(
                f"all 4-row systems ill-conditioned up to {table.precision} digits")
        print(f"⚠️ Ill-conditioned linear systems, raising precision to "
              f"{table.precision + PRECISION_STEP} digits")
        table = embeddings_at(spec, table.precision + PRECISION_STEP)


def _nearest_integer(value) -> Optional[int]:
    if abs(value.imag) > INTEGER_TOLERANCE:
        return None
    n = int(mp.nint(value.real))
    if abs(value.real - n) > INTEGER_TOLERANCE:
        return None
    return n


def solve_tuple(exponents: Sequence[int], sign: int, spec: FieldSpec, table: EmbeddingTable,
                system: Optional[LinearSystem] = None) -> Optional[RelativeSolution]:
    """Solve for (X0, Y0) with X0 - tY0 = sign * prod eps_l^k_l; None on rejection"""
    if system is None:
        system = prepare_system(spec, table)
    with mp.workdps(system.precision):
        rhs = []
        for idx in range(4):
            value = mpf(sign)
            for l, k in enumerate(exponents):
                if k:
                    value *= system.unit_values[l][idx] ** k
            rhs.append(value)
        sol = system.inverse * matrix(rhs)
        unknowns = [_nearest_integer(sol[c]) for c in range(4)]
    if any(u is None for u in unknowns):
        return None
    X0, Y0 = QuadInt(unknowns[0], unknowns[1]), QuadInt(unknowns[2], unknowns[3])
    if X0.is_zero() and Y0.is_zero():
        return None
    if not relative_norm_form(spec).is_unit_value(X0, Y0):
        return None
    return RelativeSolution(tuple(exponents), sign, X0, Y0, True)


def relative_orbit_key(X0: QuadInt, Y0: QuadInt, spec: FieldSpec) -> tuple:
    """Canonical coordinates of (X0, Y0) modulo multiplication by +-eta^k"""
    quad = spec.quad
    Z = Y0 if X0.is_zero() else X0
    with mp.workdps(60):
        log_eta = log(abs(quad.embed(spec.eta, 0)))
        t = (log(abs(quad.embed(Z, 0))) - log(abs(quad.embed(Z, 1)))) / (2 * log_eta)
        k = int(floor(t + mpf(0.5)))
    nu = unit_pow(spec.eta, -k, quad)
    X, Y = quad.mul(nu, X0), quad.mul(nu, Y0)
    coords = (X.a, X.b, Y.a, Y.b)
    lead = next(c for c in coords if c)
    return coords if lead > 0 else tuple(-c for c in coords)


def _deduplicate(solutions: Iterable[RelativeSolution], spec: FieldSpec) -> List[RelativeSolution]:
    seen = set()
    kept = []
    for sol in solutions:
        key = relative_orbit_key(sol.X0, sol.Y0, spec)
        if key not in seen:
            seen.add(key)
            kept.append(sol)
    return kept


def solve_all(survivors: Iterable[Sequence[int]], spec: FieldSpec, table: EmbeddingTable,
              threads: int = 1) -> List[RelativeSolution]:
    """Verified relative solutions for every surviving tuple, both signs"""
    tuples = sorted(set(tuple(t) for t in survivors))
    if not tuples:
        return []
    system = prepare_system(spec, table)
    jobs = [(t, s) for t in tuples for s in (1, -1)]

    def attempt(job):
        return solve_tuple(job[0], job[1], spec, table, system)

    if threads > 1:
        # workers share one mpmath context; pin it for the whole pool
        with mp.workdps(system.precision), ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(attempt, jobs))
    else:
        results = [attempt(job) for job in jobs]
    return _deduplicate([r for r in results if r is not None], spec)


def solve_box(spec: FieldSpec, table: EmbeddingTable, B0: int,
              threads: int = 1) -> List[RelativeSolution]:
    """The unsieved path: solve every tuple of [-B0, B0]^h"""
    return solve_all(full_box(spec.h, B0), spec, table, threads)


def enumerate_direct(spec: FieldSpec, bound: int) -> List[RelativeSolution]:
    """Exact search of |x1|, |x2|, |y1|, |y2| <= bound for unit values of the norm form"""
    form = relative_norm_form(spec)
    found = []
    for x1, x2, y1, y2 in product(range(-bound, bound + 1), repeat=4):
        X0, Y0 = QuadInt(x1, x2), QuadInt(y1, y2)
        if X0.is_zero() and Y0.is_zero():
            continue
        if form.is_unit_value(X0, Y0):
            found.append(RelativeSolution(None, 1, X0, Y0, True, "direct"))
    return _deduplicate(found, spec)


def merge_solutions(*groups: Iterable[RelativeSolution], spec: FieldSpec) -> List[RelativeSolution]:
    """Concatenate solution lists keeping the first member of each orbit"""
    return _deduplicate([s for group in groups for s in group], spec)
