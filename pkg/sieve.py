"""
Modular Siegel Sieve
Fully split primes, residue plans and the vectorised congruence test over
the unit-exponent box
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterable, List, Optional, Sequence

import numpy as np
from sympy import Poly, ZZ, nextprime
from sympy.ntheory import sqrt_mod
from sympy.polys.galoistools import gf_factor_sqf, gf_from_int_poly, gf_pow_mod

from sextic_field import FieldSpec, KElement, x
from src.utils.error_handler import SplitPrimeNotFoundError
from utils import horner

# Configuration
MAX_PRIME = 2 ** 31 - 1
MAX_PRIME_TRIES = 20_000


@dataclass(frozen=True)
class SievePlan:
    """Residues of the conjugates modulo a fully split prime p"""

    p: int
    roots: tuple
    omega_res: tuple
    assignment: tuple
    t: tuple
    e: tuple

    def to_dict(self) -> dict:
        return {
            'p': self.p,
            'roots': list(self.roots),
            'omega_res': list(self.omega_res),
            'assignment': [list(r) for r in self.assignment],
        }


def _excluded_factor(spec: FieldSpec) -> int:
    disc_g = int(Poly(spec.g, x).discriminant())
    denoms = 1
    for u in spec.units:
        denoms *= u.denom
    return abs(disc_g * spec.quad.disc * denoms)


def _residue(u: KElement, w: int, r: int, p: int) -> int:
    c = u.coords
    value = (c[0] + c[1] * w) + (c[2] + c[3] * w) * r + (c[4] + c[5] * w) * r * r
    return value * pow(u.denom, -1, p) % p


def _omega_residues(spec: FieldSpec, p: int) -> list:
    quad = spec.quad
    roots = sqrt_mod(quad.m % p, p, all_roots=True) or []
    if quad.t == 1:
        half = pow(2, -1, p)
        roots = [(1 + s) * half % p for s in roots]
    return sorted(set(roots))


def plan_for_prime(spec: FieldSpec, p: int) -> Optional[SievePlan]:
    """Plan for p, or None when g does not split into distinct linear factors"""
    gp = gf_from_int_poly(list(spec.g), p)
    if gf_pow_mod(ZZ.map([1, 0]), p, gp, p, ZZ) != [1, 0]:
        return None
    _, factors = gf_factor_sqf(gp, p, ZZ)
    if len(factors) != 6 or any(len(fac) != 2 for fac in factors):
        return None
    roots = sorted(int(-fac[1]) % p for fac in factors)
    omegas = _omega_residues(spec, p)
    if len(omegas) != 2:
        return None
    assignment = []
    for w in omegas:
        rel = [1] + [spec.quad.mod_p(c, w, p) for c in spec.f]
        assignment.append(tuple(r for r in roots if horner(rel, r) % p == 0))
    if sorted(assignment[0] + assignment[1]) != roots or any(len(a) != 3 for a in assignment):
        return None
    t = tuple(tuple((spec.quad.mod_p(spec.f2, w, p) + r) % p for r in assignment[i])
              for i, w in enumerate(omegas))
    e = tuple(tuple(tuple(_residue(u, w, r, p) for r in assignment[i])
                    for i, w in enumerate(omegas)) for u in spec.units)
    if any(v == 0 for unit in e for emb in unit for v in emb):
        return None
    return SievePlan(p, tuple(roots), tuple(omegas), tuple(assignment), t, e)


def split_primes(spec: FieldSpec, start: int = 2, count: int = 1,
                 max_tries: int = MAX_PRIME_TRIES) -> List[SievePlan]:
    """The first count fully split primes >= start, as plans"""
    if start < 2:
        raise ValueError("start must be at least 2")
    excluded = _excluded_factor(spec)
    plans = []
    p = start - 1
    for _ in range(max_tries):
        p = nextprime(p)
        if p > MAX_PRIME:
            break
        if p == 2 or excluded % p == 0:
            continue
        plan = plan_for_prime(spec, p)
        if plan is not None:
            plans.append(plan)
            if len(plans) == count:
                return plans
    raise SplitPrimeNotFoundError(
        f"found {len(plans)} of {count} split primes starting at {start} "
        f"within {max_tries} candidates")


def find_split_prime(spec: FieldSpec, start: int = 2) -> SievePlan:
    """Smallest fully split prime >= start, with residues assigned"""
    plan = split_primes(spec, start, 1)[0]
    print(f"🔍 Split prime p={plan.p}: roots {list(plan.roots)}")
    return plan


def _power_table(base: int, B0: int, p: int) -> np.ndarray:
    return np.array([pow(base, k, p) for k in range(-B0, B0 + 1)], dtype=np.int64)


@dataclass(frozen=True)
class _Congruence:
    """Coefficients and power tables for one embedding's Siegel congruence"""

    coef: tuple
    tables: tuple
    grids: tuple


def _congruence(plan: SievePlan, B0: int, i: int) -> _Congruence:
    p = plan.p
    t1, t2, t3 = plan.t[i]
    coef = ((t2 - t3) % p, (t3 - t1) % p, (t1 - t2) % p)
    tables = tuple(tuple(_power_table(unit[i][j], B0, p) for j in range(3)) for unit in plan.e)
    grids = ()
    if len(tables) > 2:
        grids = tuple((tables[-2][j][:, np.newaxis] * tables[-1][j][np.newaxis, :]) % p
                      for j in range(3))
    return _Congruence(coef, tables, grids)


def _strip_survivors(k1_index: int, plan: SievePlan, B0: int,
                     congruences: Sequence[_Congruence]) -> list:
    """Survivors with k1 = k1_index - B0; the trailing exponents are vectorised"""
    p = plan.p
    h = len(plan.e)
    width = 2 * B0 + 1
    vector_dims = 1 if h == 2 else 2
    survivors = []
    for middle in product(range(width), repeat=h - 1 - vector_dims):
        mask = None
        for cong in congruences:
            total = None
            for j in range(3):
                head = cong.coef[j] * int(cong.tables[0][j][k1_index]) % p
                for l, idx in enumerate(middle, start=1):
                    head = head * int(cong.tables[l][j][idx]) % p
                block = cong.tables[-1][j] if vector_dims == 1 else cong.grids[j]
                term = head * block % p
                total = term if total is None else (total + term) % p
            hit = total == 0
            mask = hit if mask is None else mask & hit
        prefix = (k1_index - B0, *(idx - B0 for idx in middle))
        for position in zip(*np.nonzero(mask)):
            survivors.append((*prefix, *(int(c) - B0 for c in position)))
    return survivors


def siegel_sieve(plan: SievePlan, B0: int, embeddings: Iterable[int] = (0,),
                 threads: int = 1) -> List[tuple]:
    """Exponent tuples in [-B0, B0]^h passing the Siegel congruence mod p"""
    if B0 < 0:
        raise ValueError("B0 must be nonnegative")
    embeddings = tuple(embeddings)
    congruences = [_congruence(plan, B0, i) for i in embeddings]
    strips = range(2 * B0 + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda s: _strip_survivors(s, plan, B0, congruences), strips))
    else:
        parts = [_strip_survivors(s, plan, B0, congruences) for s in strips]
    return sorted(t for part in parts for t in part)


def multi_prime_sieve(spec: FieldSpec, B0: int, num_primes: int, start: int = 2,
                      embeddings: Iterable[int] = (0,), threads: int = 1,
                      verbose: bool = False) -> List[tuple]:
    """Intersection of the survivor sets over successive split primes"""
    if num_primes < 1:
        raise ValueError("num_primes must be at least 1")
    plans = split_primes(spec, start, num_primes)
    box = (2 * B0 + 1) ** spec.h
    sets = []
    for plan in plans:
        found = siegel_sieve(plan, B0, embeddings, threads)
        if verbose:
            print(f"📊 p={plan.p}: {len(found)} of {box} tuples survive ({len(found) / box:.4%})")
        sets.append(set(found))
    return sorted(reduce(set.intersection, sets))


def full_box(h: int, B0: int) -> Iterable[tuple]:
    """Every exponent tuple in [-B0, B0]^h"""
    return product(range(-B0, B0 + 1), repeat=h)
