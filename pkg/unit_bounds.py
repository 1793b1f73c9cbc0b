"""
Unit Exponent Bounds
Log-size bound c1, Cramer bounds on unit exponents, the small-conjugate
fallback bound and the admissible range of the eta exponent k
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Tuple

from mpmath import ceil, det, floor, inverse, log, matrix, mp, mpc, mpf

from quadfield import QuadInt
from sextic_field import CONJUGATES, EmbeddingTable, FieldSpec, conjugates
from src.utils.error_handler import SingularSystemError

# Configuration
BOUND_PRECISION = 100
SINGULAR_DET = mpf('1e-20')
NEGATIVE_ROW_FACTOR = 3
POSITIVE_CONJUGATES = 3
ROW_STRATEGIES = ("paired", "worst", "tightest")


@dataclass(frozen=True)
class BoundReport:
    C: int
    c1: mpf
    B0: int
    chosen_rows: tuple
    condition_note: mpf
    pattern: tuple = ()
    row_strategy: str = "paired"

    def to_dict(self) -> dict:
        return {
            'C': str(self.C),
            'c1': mp.nstr(self.c1, 20),
            'B0': self.B0,
            'chosen_rows': [list(CONJUGATES[r]) for r in self.chosen_rows],
            'positive_pattern': [list(CONJUGATES[r]) for r in self.pattern],
            'condition_note': mp.nstr(self.condition_note, 10),
            'row_strategy': self.row_strategy,
        }


def log_size_bound(C: int, spec: FieldSpec, table: EmbeddingTable) -> mpf:
    """c1 = C + |w|C + |t|(C + |w|C) with sizes read from the table"""
    with mp.workdps(table.precision):
        w = max(abs(v) for v in table.omega_vals)
        th = max(abs(v) for row in table.theta_vals for v in row)
        C = mpf(C)
        return C + w * C + th * (C + w * C)


def _unit_log_rows(spec: FieldSpec, table: EmbeddingTable) -> list:
    """Row r: [log|eta^(i)|, log|eps_1^(i,j)|, ..., log|eps_h^(i,j)|]"""
    eta_logs = [log(abs(spec.quad.embed(spec.eta, i))) for i in range(2)]
    unit_vals = [conjugates(u, table) for u in spec.units]
    return [[eta_logs[i]] + [log(abs(vals[r])) for vals in unit_vals]
            for r, (i, _) in enumerate(CONJUGATES)]


def _nonsingular_systems(rows: list, size: int) -> list:
    systems = []
    for chosen in combinations(range(len(rows)), size):
        mat = matrix([rows[r][:size] for r in chosen])
        d = abs(det(mat))
        if d >= SINGULAR_DET:
            systems.append((chosen, inverse(mat), d))
    return systems


def conjugate_classes(table: EmbeddingTable) -> tuple:
    """Rows grouped by equal absolute value: real conjugates alone, complex ones in pairs"""
    with mp.workdps(table.precision):
        tolerance = mpf(10) ** (-(table.precision // 2))
        seen = set()
        classes = []
        for r, (i, j) in enumerate(CONJUGATES):
            if r in seen:
                continue
            a = mpc(table.alpha(i, j))
            group = [r]
            if abs(a.imag) > tolerance:
                group += [3 * i + k for k in range(3)
                          if k != j and abs(table.alpha(i, k) - mp.conj(a)) < tolerance]
            seen.update(group)
            classes.append(tuple(group))
    return tuple(classes)


def _cramer_bound(inv, chosen: tuple, rhs: list, n: int) -> mpf:
    return max(sum(abs(inv[l, c]) * rhs[r] for c, r in enumerate(chosen)) for l in range(1, n))


def _row_pattern_bound(systems: list, L: mpf, n: int, row_strategy: str) -> tuple:
    """Any three rows positive, the rest at NEGATIVE_ROW_FACTOR * L"""
    best = None
    for pattern in combinations(range(6), 3):
        rhs = [L if r in pattern else NEGATIVE_ROW_FACTOR * L for r in range(6)]
        per_rows = [(_cramer_bound(inv, chosen, rhs, n), chosen, d) for chosen, inv, d in systems]
        pick = max(per_rows) if row_strategy == "worst" else min(per_rows)
        if best is None or pick[0] > best[0][0]:
            best = (pick, pattern)
    return best


def _paired_bound(systems: list, classes: tuple, L: mpf, n: int) -> Optional[tuple]:
    """Positive conjugates taken a whole class at a time, each pattern solved on its own rows"""
    regular = {chosen: (inv, d) for chosen, inv, d in systems}
    subsets = [s for size in range(1, len(classes) + 1) for s in combinations(classes, size)]
    target = min(w for w in (sum(len(c) for c in s) for s in subsets) if w >= POSITIVE_CONJUGATES)
    rhs = [L] * 6
    best = None
    for pattern in subsets:
        if sum(len(c) for c in pattern) != target:
            continue
        own = [c[0] for c in pattern]
        others = [c[0] for c in classes if c not in pattern]
        if len(own) >= n:
            choices = list(combinations(own, n))
        else:
            choices = [tuple(sorted(own + list(extra)))
                       for extra in combinations(others, n - len(own))]
        per_rows = [(_cramer_bound(regular[c][0], c, rhs, n), c, regular[c][1])
                    for c in choices if c in regular]
        if not per_rows:
            continue
        pick = min(per_rows)
        rows = tuple(sorted(r for c in pattern for r in c))
        if best is None or pick[0] > best[0][0]:
            best = (pick, rows)
    return best


def exponent_box(C: int, spec: FieldSpec, table: EmbeddingTable,
                 row_strategy: str = "paired") -> BoundReport:
    """B0 with max |k_l| <= B0 for every small solution, via Cramer's rule

    "paired" treats a complex-conjugate pair as one absolute value, takes the
    patterns with POSITIVE_CONJUGATES positive conjugates and bounds each by
    log c1 on the tightest regular system holding one row per positive class,
    completed from the other classes.
    "worst" and "tightest" range over every three-row pattern with
    NEGATIVE_ROW_FACTOR * log c1 on the other rows.
    """
    if table.precision < BOUND_PRECISION:
        raise ValueError(f"bounds need a table of at least {BOUND_PRECISION} digits")
    if row_strategy not in ROW_STRATEGIES:
        raise ValueError(f"row_strategy must be one of {ROW_STRATEGIES}")
    n = spec.h + 1
    c1 = log_size_bound(C, spec, table)
    with mp.workdps(BOUND_PRECISION):
        L = log(c1)
        systems = _nonsingular_systems(_unit_log_rows(spec, table), n)
        if not systems:
            raise SingularSystemError("every choice of unit-log rows is singular; "
                                      "the units are dependent")
        if row_strategy == "paired":
            best = _paired_bound(systems, conjugate_classes(table), L, n)
            if best is None:
                raise SingularSystemError("no positivity pattern has a regular system")
        else:
            best = _row_pattern_bound(systems, L, n, row_strategy)
        (bound, chosen, d), pattern = best
        B0 = int(ceil(bound))
    return BoundReport(int(C), c1, B0, chosen, d, pattern, row_strategy)


def small_conjugate_fallback(spec: FieldSpec, table: EmbeddingTable, C: int,
                             rhs_bound: int = 1) -> int:
    """Coordinate bound when four conjugates of X - tY are below rhs_bound"""
    with mp.workdps(BOUND_PRECISION):
        rows = []
        for i, j in CONJUGATES:
            w, th = table.omega_vals[i], table.theta(i, j)
            rows.append([mpf(1), w, -th, -w * th])
        worst = None
        for chosen in combinations(range(6), 4):
            mat = matrix([rows[r] for r in chosen])
            if abs(det(mat)) < SINGULAR_DET:
                continue
            inv = inverse(mat)
            bound = max(sum(abs(inv[c, k]) for k in range(4)) for c in range(4)) * rhs_bound
            worst = bound if worst is None else max(worst, bound)
        if worst is None:
            raise SingularSystemError("every 4-row choice of the fallback system is singular")
        return min(int(floor(worst)), C - 1)


def k_range(X0: QuadInt, Y0: QuadInt, spec: FieldSpec, table: EmbeddingTable,
            C: int) -> Tuple[int, int]:
    """Interval of k for which some coordinate of +-eta^k Z stays below C"""
    if X0.is_zero() and Y0.is_zero():
        raise ValueError("k_range needs (X0, Y0) != (0, 0)")
    Z = Y0 if X0.is_zero() else X0
    quad = spec.quad
    with mp.workdps(BOUND_PRECISION):
        z1, z2 = abs(quad.embed(Z, 0)), abs(quad.embed(Z, 1))
        log_eta = log(abs(quad.embed(spec.eta, 0)))
        w1, w2 = quad.omega_values()
        gap = abs(w1 - w2)
        top = log((mpf(C) + mpf('0.1')) * gap)
        kmax = int(floor((top - log(z1)) / log_eta))
        kmin = -int(floor((top - log(z2)) / log_eta))
        small = mpf('0.1') * gap
        k0_pos = max(0, int(ceil(log(z2 / small) / log_eta)))
        k0_neg = max(0, int(ceil(log(z1 / small) / log_eta)))
    return min(kmin, -k0_neg) - 1, max(kmax, k0_pos) + 1
