"""
PIB Solver Command Line
Runs the full pipeline from a field config, exposes each stage as a
subcommand and provides the exhaustive index oracle
"""

import argparse
import json
import time
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path
from typing import List, Optional, Sequence, Union

from absolute_solver import (GeneratorRecord, canonical_coords, canonicalize, reciprocal_generator,
                             scan_k)
from cache_manager import cache_manager, spec_fingerprint
from quadfield import fundamental_unit
from relative_solver import RelativeSolution, enumerate_direct, merge_solutions, solve_all
from sextic_field import (KElement, embeddings_at, from_power_basis, index, power_basis_index,
                          relative_index)
from sieve import multi_prime_sieve, split_primes
from src.components.results_table import (classes_frame, export_csv, generators_frame,
                                          print_table, relative_frame)
from src.config.field_config import ORACLE_MAX_BOUND, TOOL_VERSION, FieldConfig, load_config
from src.utils.error_handler import ConfigError, NotPrimitiveError, safe_execute
from src.utils.performance import (get_stage_calls, get_stage_timings, reset_metrics,
                                   track_performance)
from unit_bounds import BOUND_PRECISION, exponent_box, small_conjugate_fallback
from utils import format_element, format_quad, parse_coordinates

ConfigSource = Union[str, Path, FieldConfig]

# Configuration
SIEVE_EMBEDDING_CHOICES = {"0": (0,), "1": (1,), "both": (0, 1)}


@dataclass
class RunReport:
    """Machine-readable outcome of one pipeline run"""

    fingerprint: str
    name: str
    C: str
    bounds: dict
    fallback: dict
    sieve: dict
    relative: List[RelativeSolution]
    generators: List[GeneratorRecord]
    timings: dict = field(default_factory=dict)
    version: str = TOOL_VERSION

    def to_dict(self, with_timings: bool = True) -> dict:
        data = {
            'fingerprint': self.fingerprint,
            'name': self.name,
            'C': self.C,
            'bounds': self.bounds,
            'fallback': self.fallback,
            'sieve': self.sieve,
            'relative_solutions': [r.to_dict() for r in self.relative],
            'generators': [g.to_dict() for g in self.generators],
            'version': self.version,
        }
        if with_timings:
            data['timings'] = self.timings
        return data

    def to_json(self, with_timings: bool = True) -> str:
        return json.dumps(self.to_dict(with_timings), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        return cls(
            fingerprint=data['fingerprint'],
            name=data['name'],
            C=data['C'],
            bounds=data['bounds'],
            fallback=data['fallback'],
            sieve=data['sieve'],
            relative=[RelativeSolution.from_dict(r) for r in data['relative_solutions']],
            generators=[GeneratorRecord.from_dict(g) for g in data['generators']],
            timings=data.get('timings', {}),
            version=data['version'],
        )

    @property
    def classes(self) -> List[tuple]:
        return [g.coords for g in self.generators]


def _config(source: ConfigSource) -> FieldConfig:
    return source if isinstance(source, FieldConfig) else load_config(source)


@track_performance("bounds")
def _bounds(config: FieldConfig):
    spec = config.spec
    table = embeddings_at(spec, BOUND_PRECISION)
    report = exponent_box(config.C, spec, table)
    if config.exponent_bound is not None:
        report = replace(report, B0=config.exponent_bound, row_strategy="pinned")
    print(f"📊 c1 = {float(report.c1):.4e}, B0 = {report.B0} ({report.row_strategy})")
    return report


@track_performance("fallback")
def _fallback(config: FieldConfig) -> tuple:
    spec = config.spec
    bound = small_conjugate_fallback(spec, embeddings_at(spec, BOUND_PRECISION), config.C)
    if bound > config.direct_search_cap:
        print(f"⚠️ Small-conjugate bound {bound} exceeds the direct-search cap "
              f"{config.direct_search_cap}; that case is not enumerated")
        return bound, []
    found = enumerate_direct(spec, bound)
    print(f"✅ Direct search to {bound}: {len(found)} relative solutions")
    return bound, found


@track_performance("sieve")
def _sieve(config: FieldConfig, B0: int, threads: int, verbose: bool) -> tuple:
    spec = config.spec
    plans = split_primes(spec, config.prime_start, config.num_primes)
    for plan in plans:
        print(f"🔍 Split prime p={plan.p}: roots {list(plan.roots)}")
    start = time.perf_counter()
    survivors = multi_prime_sieve(spec, B0, config.num_primes, config.prime_start,
                                  config.sieve_embeddings, threads, verbose)
    seconds = time.perf_counter() - start
    box = (2 * B0 + 1) ** spec.h
    print(f"📊 {len(survivors)} of {box} exponent tuples survive the sieve ({seconds:.2f}s)")
    return [p.p for p in plans], box, survivors, seconds


@track_performance("relative")
def _relative(config: FieldConfig, survivors: Sequence[tuple], direct: Sequence[RelativeSolution],
              threads: int) -> List[RelativeSolution]:
    spec = config.spec
    table = embeddings_at(spec, config.linear_precision)
    found = solve_all(survivors, spec, table, threads)
    merged = merge_solutions(found, direct, spec=spec)
    print(f"✅ {len(merged)} relative solutions")
    return merged


@track_performance("absolute")
def _absolute(config: FieldConfig, relative: Sequence[RelativeSolution], threads: int,
              verbose: bool) -> List[GeneratorRecord]:
    spec = config.spec
    table = embeddings_at(spec, config.jpoly_precision)
    records = []
    for rel in relative:
        records.extend(scan_k(rel, spec, table, config.C, threads, verbose))
    classes = canonicalize(records)
    print(f"✅ {len(classes)} generator classes")
    return classes


def run_solve(source: ConfigSource, threads: int = 1, verbose: bool = False,
              primes: Optional[int] = None) -> RunReport:
    """Bounds, sieve, relative solve, k-scan and canonicalisation for one config"""
    config = _config(source)
    if primes is not None:
        config = replace(config, num_primes=primes)
    reset_metrics()
    spec = config.spec
    print(f"🔍 Solving '{config.name or 'field'}' with C = {config.C_text}")
    bound = _bounds(config)
    fallback_bound, direct = _fallback(config)
    primes_used, box, survivors, seconds = _sieve(config, bound.B0, threads, verbose)
    relative = _relative(config, survivors, direct, threads)
    generators = _absolute(config, relative, threads, verbose)
    sieve_stats = {
        'primes': primes_used,
        'box_size': box,
        'survivor_count': len(survivors),
        'seconds': round(seconds, 6),
    }
    if verbose:
        sieve_stats['survivors'] = [list(t) for t in survivors]
    timings = {stage: round(sec, 6) for stage, sec in get_stage_timings().items()}
    timings['sieve_wall'] = sieve_stats.pop('seconds')
    return RunReport(
        fingerprint=spec_fingerprint(spec),
        name=config.name,
        C=str(config.C),
        bounds=bound.to_dict(),
        fallback={'bound': fallback_bound, 'enumerated': fallback_bound <= config.direct_search_cap},
        sieve=sieve_stats,
        relative=list(relative),
        generators=list(generators),
        timings=timings,
    )


def run_oracle(source: ConfigSource, c: int) -> List[tuple]:
    """Canonical (a2, x1, x2, y1, y2) with max |coord| <= c and index 1, by exhaustion"""
    if not 0 <= c <= ORACLE_MAX_BOUND:
        raise ConfigError("oracle_bound", f"expected 0 <= c <= {ORACLE_MAX_BOUND}, got {c}")
    spec = _config(source).spec
    span = range(-c, c + 1)
    classes = []
    for x1, x2, y1, y2 in product(span, repeat=4):
        if relative_index(KElement((0, 0, x1, x2, y1, y2)), spec) != 1:
            continue
        for a2 in span:
            coords = (a2, x1, x2, y1, y2)
            if canonical_coords(coords) != coords:
                continue
            if power_basis_index(KElement((0, *coords)), spec) == 1:
                classes.append(coords)
    print(f"✅ Oracle to {c}: {len(classes)} generator classes")
    return sorted(classes)


def run_verify(source: ConfigSource, coords: Union[str, Sequence[int]]) -> Optional[int]:
    """Exact index of an element, or None when it is not primitive"""
    spec = _config(source).spec
    if isinstance(coords, str):
        coords = parse_coordinates(coords)
    element = KElement.make(coords)
    try:
        value = index(element, spec)
    except NotPrimitiveError as e:
        print(f"❌ {format_element(element.coords)}: not primitive ({e})")
        return None
    print(f"✅ I({format_element(element.coords)}) = {value} "
          f"(relative factor {relative_index(element, spec)})")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Power integral bases of sextic fields with a real quadratic subfield")
    parser.add_argument("--config", type=Path, help="field config (JSON)")
    parser.add_argument("--report", type=Path, help="write the JSON run report here")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument("--primes", type=int, default=None, help="number of split primes to sieve with")
    parser.add_argument("--csv", type=Path, default=None, help="export the result table as CSV")
    parser.add_argument("--sieve-embeddings", choices=sorted(SIEVE_EMBEDDING_CHOICES), default=None,
                        dest="sieve_embeddings", help="embedding of M whose congruence the sieve tests")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", help="full pipeline")
    sub.add_parser("sieve", help="exponent bound and sieve survivors")
    sub.add_parser("relative", help="relative Thue solutions")
    verify = sub.add_parser("verify", help="exact index of an element")
    verify.add_argument("coords", help="a1,a2,x1,x2,y1,y2")
    oracle = sub.add_parser("oracle", help="exhaustive search of a small box")
    oracle.add_argument("--oracle-bound", type=int, default=3, dest="oracle_bound")
    reciprocal = sub.add_parser("reciprocal", help="generator equivalent to 1/a")
    reciprocal.add_argument("--poly", default=None, help="coefficients, highest degree first")
    unit = sub.add_parser("unit", help="fundamental unit of Q(sqrt m)")
    unit.add_argument("--m", type=int, required=True)
    return parser


def _require_config(args) -> FieldConfig:
    if args.config is None:
        raise ConfigError("config", f"--config is required for '{args.command}'")
    config = load_config(args.config)
    if args.primes is not None:
        config = replace(config, num_primes=args.primes)
    if args.sieve_embeddings is not None:
        config = replace(config, sieve_embeddings=SIEVE_EMBEDDING_CHOICES[args.sieve_embeddings])
    return config


@safe_execute("Solve")
def _cmd_solve(args) -> int:
    report = run_solve(_require_config(args), args.threads, args.verbose)
    frame = generators_frame(report.generators)
    print_table(frame, "Generator classes")
    export_csv(frame, args.csv)
    if args.report:
        args.report.write_text(report.to_json())
        print(f"✅ Report written to {args.report}")
    return 0


@safe_execute("Sieve")
def _cmd_sieve(args) -> int:
    config = _require_config(args)
    bound = _bounds(config)
    _, _, survivors, _ = _sieve(config, bound.B0, args.threads, args.verbose)
    if args.verbose:
        for t in survivors:
            print(f"   {t}")
    return 0


@safe_execute("Relative")
def _cmd_relative(args) -> int:
    config = _require_config(args)
    bound = _bounds(config)
    _, direct = _fallback(config)
    _, _, survivors, _ = _sieve(config, bound.B0, args.threads, args.verbose)
    frame = relative_frame(_relative(config, survivors, direct, args.threads))
    print_table(frame, "Relative solutions")
    export_csv(frame, args.csv)
    return 0


@safe_execute("Verify")
def _cmd_verify(args) -> int:
    try:
        coords = parse_coordinates(args.coords)
    except ValueError as e:
        raise ConfigError("coords", str(e)) from e
    run_verify(_require_config(args), coords)
    return 0


@safe_execute("Oracle")
def _cmd_oracle(args) -> int:
    frame = classes_frame(run_oracle(_require_config(args), args.oracle_bound))
    print_table(frame, "Oracle classes")
    export_csv(frame, args.csv)
    return 0


@safe_execute("Reciprocal")
def _cmd_reciprocal(args) -> int:
    if args.poly:
        try:
            coeffs = [int(c) for c in args.poly.replace(" ", "").split(",")]
        except ValueError as e:
            raise ConfigError("poly", f"expected comma-separated integers: {args.poly!r}") from e
        element = reciprocal_generator(coeffs)
        terms = " + ".join(f"{c}*a^{n}" for n, c in enumerate(element) if c)
        print(f"✅ Reciprocal generator: {terms}")
        return 0
    config = _require_config(args)
    element = reciprocal_generator(config.spec.g, config.spec)
    coords = from_power_basis(element, config.spec.quad, config.spec.f).coords
    print(f"✅ Reciprocal generator: {format_element(coords)}")
    return 0


@safe_execute("Unit")
def _cmd_unit(args) -> int:
    try:
        eta = fundamental_unit(args.m)
    except ValueError as e:
        raise ConfigError("m", str(e)) from e
    print(f"✅ Fundamental unit of Q(√{args.m}): {format_quad(eta.a, eta.b)}")
    return 0


COMMANDS = {
    'solve': _cmd_solve,
    'sieve': _cmd_sieve,
    'relative': _cmd_relative,
    'verify': _cmd_verify,
    'oracle': _cmd_oracle,
    'reciprocal': _cmd_reciprocal,
    'unit': _cmd_unit,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    code = COMMANDS[args.command](args)
    if args.verbose:
        stats = cache_manager.get_stats()
        print(f"📊 Embedding cache: {stats['cache_hits']} hits, {stats['cache_misses']} misses")
        timings = get_stage_timings()
        for stage, calls in get_stage_calls().items():
            print(f"📊 Stage {stage}: {calls} call(s), {timings.get(stage, 0.0):.2f}s")
    return code
