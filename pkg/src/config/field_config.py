"""
Field Configuration
Loads and validates the JSON description of a sextic field and run parameters
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

from quadfield import QuadInt, build_quad_field
from sextic_field import FieldSpec, KElement, build_field_spec, from_power_basis
from src.utils.error_handler import ConfigError, FieldSpecError
from utils import parse_bound

# Defaults
DEFAULT_C = "1e50"
DEFAULT_PRIME_START = 2
DEFAULT_LINEAR_PRECISION = 250
DEFAULT_JPOLY_PRECISION = 500
DEFAULT_NUM_PRIMES = 1
DEFAULT_DIRECT_SEARCH_CAP = 8
DEFAULT_SIEVE_EMBEDDINGS = (0,)
ORACLE_MAX_BOUND = 10
MIN_LINEAR_PRECISION = 250
MIN_JPOLY_PRECISION = 500
TOOL_VERSION = "1.0.0"


@dataclass(frozen=True)
class FieldConfig:
    """A validated FieldSpec plus everything a pipeline run needs"""

    spec: FieldSpec
    C: int
    C_text: str
    prime_start: int = DEFAULT_PRIME_START
    linear_precision: int = DEFAULT_LINEAR_PRECISION
    jpoly_precision: int = DEFAULT_JPOLY_PRECISION
    num_primes: int = DEFAULT_NUM_PRIMES
    sieve_embeddings: tuple = DEFAULT_SIEVE_EMBEDDINGS
    exponent_bound: Optional[int] = None
    direct_search_cap: int = DEFAULT_DIRECT_SEARCH_CAP
    name: str = ""


def _quad(value: Any, field: str) -> QuadInt:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)):
        raise ConfigError(field, f"expected [a, b] with integer entries, got {value!r}")
    return QuadInt(value[0], value[1])


def _int(data: dict, key: str, default: int, minimum: int, field: Optional[str] = None) -> int:
    value = data.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ConfigError(field or key, f"expected an integer >= {minimum}, got {value!r}")
    return value


def _int_list(value: Any, field: str, length: Optional[int] = None) -> list:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool)
                                              for v in value):
        raise ConfigError(field, f"expected a list of integers, got {value!r}")
    if length is not None and len(value) != length:
        raise ConfigError(field, f"expected {length} entries, got {len(value)}")
    return value


def _sieve_embeddings(data: dict) -> tuple:
    """Embeddings of M whose congruence the sieve tests; both_embeddings is shorthand for [0, 1]"""
    both = data.get("both_embeddings")
    listed = data.get("sieve_embeddings")
    if both is not None and listed is not None:
        raise ConfigError("sieve_embeddings", "give either sieve_embeddings or both_embeddings")
    if both is not None:
        if not isinstance(both, bool):
            raise ConfigError("both_embeddings", f"expected true or false, got {both!r}")
        return (0, 1) if both else DEFAULT_SIEVE_EMBEDDINGS
    if listed is None:
        return DEFAULT_SIEVE_EMBEDDINGS
    values = _int_list(listed, "sieve_embeddings")
    if not values or len(set(values)) != len(values) or not set(values) <= {0, 1}:
        raise ConfigError("sieve_embeddings", f"expected distinct entries from [0, 1], got {listed!r}")
    return tuple(sorted(values))


def _unit(value: Any, field: str, quad, f) -> KElement:
    """Plain arrays are power-basis coefficients; objects name their basis"""
    if isinstance(value, list):
        coeffs = _int_list(value, field)
        if not 1 <= len(coeffs) <= 6:
            raise ConfigError(field, "power-basis units need 1 to 6 coefficients")
        return from_power_basis(coeffs, quad, f)
    if not isinstance(value, dict):
        raise ConfigError(field, f"expected an array or object, got {value!r}")
    denom = value.get("denominator", 1)
    if not isinstance(denom, int) or isinstance(denom, bool) or denom <= 0:
        raise ConfigError(f"{field}.denominator", f"expected a positive integer, got {denom!r}")
    if "coords" in value:
        return KElement.make(_int_list(value["coords"], f"{field}.coords", 6), denom)
    if "power_basis" in value:
        coeffs = _int_list(value["power_basis"], f"{field}.power_basis")
        if not 1 <= len(coeffs) <= 6:
            raise ConfigError(f"{field}.power_basis", "expected 1 to 6 coefficients")
        return from_power_basis(coeffs, quad, f, denom)
    raise ConfigError(field, "unit object needs 'coords' or 'power_basis'")


def config_from_dict(data: dict) -> FieldConfig:
    """Validate a parsed config document"""
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a JSON object")
    m = data.get("m")
    if not isinstance(m, int) or isinstance(m, bool):
        raise ConfigError("m", f"expected an integer, got {m!r}")
    try:
        quad = build_quad_field(m)
    except ValueError as e:
        raise ConfigError("m", str(e)) from e

    rel = data.get("f")
    if not isinstance(rel, dict):
        raise ConfigError("f", "expected an object with keys f2, f1, f0")
    f = tuple(_quad(rel.get(key, [0, 0]), f"f.{key}") for key in ("f2", "f1", "f0"))

    raw_units = data.get("units")
    if not isinstance(raw_units, list) or not raw_units:
        raise ConfigError("units", "expected a non-empty list of units")
    units = [_unit(u, f"units[{n}]", quad, f) for n, u in enumerate(raw_units)]

    g = data.get("g")
    if g is not None:
        g = _int_list(g, "g", 7)
    D_K = data.get("D_K")
    if D_K is not None and (not isinstance(D_K, int) or isinstance(D_K, bool)):
        raise ConfigError("D_K", f"expected an integer, got {D_K!r}")

    name = str(data.get("name", ""))
    try:
        spec = build_field_spec(m, *f, units=units, D_K=D_K, g=g, name=name)
    except FieldSpecError as e:
        raise ConfigError(e.field, str(e)) from e

    C_text = str(data.get("C", DEFAULT_C))
    try:
        C = parse_bound(C_text)
    except ValueError as e:
        raise ConfigError("C", str(e)) from e

    precision = data.get("precision", {})
    if not isinstance(precision, dict):
        raise ConfigError("precision", "expected an object with keys linear, jpoly")
    linear = _int(precision, "linear", DEFAULT_LINEAR_PRECISION, MIN_LINEAR_PRECISION, "precision.linear")
    jpoly = _int(precision, "jpoly", DEFAULT_JPOLY_PRECISION, MIN_JPOLY_PRECISION, "precision.jpoly")

    exponent_bound = data.get("exponent_bound")
    if exponent_bound is not None:
        exponent_bound = _int(data, "exponent_bound", 0, 0)
    embeddings = _sieve_embeddings(data)

    return FieldConfig(
        spec=spec,
        C=C,
        C_text=C_text,
        prime_start=_int(data, "prime_start", DEFAULT_PRIME_START, 2),
        linear_precision=linear,
        jpoly_precision=jpoly,
        num_primes=_int(data, "primes", DEFAULT_NUM_PRIMES, 1),
        sieve_embeddings=embeddings,
        exponent_bound=exponent_bound,
        direct_search_cap=_int(data, "direct_search_cap", DEFAULT_DIRECT_SEARCH_CAP, 0),
        name=name,
    )


def load_config(path: Union[str, Path]) -> FieldConfig:
    """Read and validate a JSON config file"""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError("config", f"cannot read {path}: {e.strerror}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"invalid JSON at line {e.lineno}: {e.msg}") from e
    config = config_from_dict(data)
    print(f"✅ Loaded field config '{config.name or path.stem}' (m={config.spec.quad.m}, h={config.spec.h})")
    return config
