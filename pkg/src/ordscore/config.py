"""Run configuration and CSV ingestion for the command-line front end.

A run is described by a single JSON document (``"schema": 1``).  Factor
level order always comes from the config's explicit level list, never from
sorting the observed labels.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError
from .factors import OrderedFactor
from .fitting import Family
from .monospline import METHODS
from .optimizer import FactorPlan, IntegerMapping, Mapping, ModelPlan, PolyMapping

__all__ = ["FactorConfig", "RunConfig", "load_config", "load_dataset", "build_plan", "Dataset"]

RESPONSE_TRANSFORMS = ("identity", "sqrt", "log")
MAPPING_TYPES = ("optimized", "poly", "integer")


@dataclass(frozen=True)
class FactorConfig:
    column: str
    levels: tuple[str, ...]
    mapping_type: str = "optimized"
    degree: int | None = None          # for "poly"
    spline_m: int = 1                  # for "optimized", spline variant
    spline_method: str = "fritsch_carlson"
    baseline_degree: int | None = None  # for "optimized", baseline variant


@dataclass(frozen=True)
class RunConfig:
    data_path: Path
    response: str
    response_transform: str
    family: Family
    covariates: tuple[str, ...]
    factors: tuple[FactorConfig, ...]
    output_dir: Path | None = None
    seed: int = 0


@dataclass
class Dataset:
    n_rows: int
    response: np.ndarray
    covariates: dict[str, np.ndarray]
    factors: dict[str, OrderedFactor]
    columns: list[str] = field(default_factory=list)


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise ConfigError(f"{where}: missing required key {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"{where}: key {key!r} must be of type {kind.__name__}")
    return value


def _parse_factor(entry: dict, index: int) -> FactorConfig:
    where = f"factors[{index}]"
    if not isinstance(entry, dict):
        raise ConfigError(f"{where}: must be an object")
    column = _require(entry, "column", str, where)
    levels = _require(entry, "levels", list, where)
    if len(levels) < 2:
        raise ConfigError(f"{where}: need at least 2 levels for {column!r}")
    if len(set(map(str, levels))) != len(levels):
        raise ConfigError(f"{where}: duplicate levels for {column!r}")
    mapping = entry.get("mapping", {"type": "optimized"})
    if not isinstance(mapping, dict):
        raise ConfigError(f"{where}: 'mapping' must be an object")
    mtype = mapping.get("type", "optimized")
    if mtype not in MAPPING_TYPES:
        raise ConfigError(
            f"{where}: mapping type {mtype!r} not one of {MAPPING_TYPES}"
        )
    k = len(levels)
    degree = mapping.get("degree")
    spline_m = mapping.get("spline_m", 1)
    spline_method = mapping.get("spline_method", "fritsch_carlson")
    baseline_degree = mapping.get("baseline_degree")
    if mtype == "poly":
        if not isinstance(degree, int) or not 1 <= degree <= k - 1:
            raise ConfigError(
                f"{where}: poly mapping needs an integer 'degree' in 1..{k - 1}"
            )
    if mtype == "optimized":
        if k < 3:
            raise ConfigError(
                f"{where}: factor {column!r} has K = {k} levels; score "
                "optimization requires K >= 3 (encode a binary factor "
                "directly, e.g. as a 0/1 covariate)"
            )
        if not isinstance(spline_m, int) or not 1 <= spline_m <= k - 2:
            raise ConfigError(
                f"{where}: 'spline_m' must be an integer in 1..{k - 2}"
            )
        if spline_method not in METHODS:
            raise ConfigError(
                f"{where}: 'spline_method' must be one of {METHODS}"
            )
        if baseline_degree is not None and (
            not isinstance(baseline_degree, int)
            or not 1 <= baseline_degree <= k - 1
        ):
            raise ConfigError(
                f"{where}: 'baseline_degree' must be an integer in 1..{k - 1}"
            )
    return FactorConfig(
        column=column,
        levels=tuple(str(v) for v in levels),
        mapping_type=mtype,
        degree=degree,
        spline_m=spline_m,
        spline_method=spline_method,
        baseline_degree=baseline_degree,
    )


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a run configuration file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    schema = raw.get("schema")
    if schema != 1:
        raise ConfigError(f"unsupported config schema {schema!r}; expected 1")

    data = _require(raw, "data", str, "config")
    data_path = Path(data)
    if not data_path.is_absolute():
        data_path = path.parent / data_path

    response = _require(raw, "response", str, "config")
    transform = raw.get("response_transform", "identity")
    if transform not in RESPONSE_TRANSFORMS:
        raise ConfigError(
            f"response_transform {transform!r} not one of {RESPONSE_TRANSFORMS}"
        )
    try:
        family = Family.from_string(raw.get("family", "gaussian"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    covariates = raw.get("covariates", [])
    if not isinstance(covariates, list) or not all(isinstance(c, str) for c in covariates):
        raise ConfigError("'covariates' must be a list of column names")
    factors_raw = _require(raw, "factors", list, "config")
    factors = tuple(_parse_factor(e, i) for i, e in enumerate(factors_raw))

    used = [response, *covariates, *(f.column for f in factors)]
    if len(set(used)) != len(used):
        raise ConfigError(f"columns used more than once in config: {used}")

    output_dir = raw.get("output_dir")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("'seed' must be an integer")
    return RunConfig(
        data_path=data_path,
        response=response,
        response_transform=transform,
        family=family,
        covariates=tuple(covariates),
        factors=factors,
        output_dir=Path(output_dir) if output_dir is not None else None,
        seed=seed,
    )


def _parse_numeric(value: str, line: int, column: str) -> float:
    if value == "":
        raise DataError(f"line {line}, column {column!r}: missing value")
    try:
        return float(value)
    except ValueError:
        raise DataError(
            f"line {line}, column {column!r}: cannot parse {value!r} as a number"
        ) from None


def load_dataset(config: RunConfig) -> Dataset:
    """Load the CSV referenced by the config, typing every used column.

    Numeric columns become float64 arrays; factor columns become level
    indices per the config's ordered level lists.  Any missing value,
    unparseable numeric cell, or unknown factor level raises
    :class:`DataError` with the file line and column.
    """
    path = config.data_path
    if not path.exists():
        raise DataError(f"data file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"data file {path} is empty") from None
        rows = list(reader)

    col_index: dict[str, int] = {}
    for i, name in enumerate(header):
        if name not in col_index:
            col_index[name] = i
    numeric_cols = [config.response, *config.covariates]
    for name in numeric_cols + [f.column for f in config.factors]:
        if name not in col_index:
            raise ConfigError(f"column {name!r} not found in {path} header")

    n = len(rows)
    numeric: dict[str, np.ndarray] = {name: np.empty(n) for name in numeric_cols}
    level_maps = {
        f.column: {lab: k + 1 for k, lab in enumerate(f.levels)}
        for f in config.factors
    }
    codes: dict[str, np.ndarray] = {
        f.column: np.empty(n, dtype=np.int64) for f in config.factors
    }

    for r, row in enumerate(rows):
        line = r + 2  # header is line 1
        if len(row) != len(header):
            raise DataError(
                f"line {line}: expected {len(header)} fields, found {len(row)}"
            )
        for name in numeric_cols:
            numeric[name][r] = _parse_numeric(row[col_index[name]], line, name)
        for fconf in config.factors:
            value = row[col_index[fconf.column]]
            if value == "":
                raise DataError(f"line {line}, column {fconf.column!r}: missing value")
            code = level_maps[fconf.column].get(value)
            if code is None:
                raise DataError(
                    f"line {line}, column {fconf.column!r}: unknown level {value!r} "
                    f"(configured levels: {list(fconf.levels)})"
                )
            codes[fconf.column][r] = code

    response = numeric.pop(config.response)
    response = _transform_response(response, config)
    _check_family_response(response, config.family)

    factors = {
        f.column: OrderedFactor(f.column, f.levels, codes[f.column])
        for f in config.factors
    }
    return Dataset(
        n_rows=n,
        response=response,
        covariates=numeric,
        factors=factors,
        columns=header,
    )


def _transform_response(y: np.ndarray, config: RunConfig) -> np.ndarray:
    t = config.response_transform
    if t == "identity":
        return y
    if t == "sqrt":
        bad = np.nonzero(y < 0)[0]
        if bad.size:
            raise DataError(
                f"line {bad[0] + 2}, column {config.response!r}: negative value "
                "under sqrt transform"
            )
        return np.sqrt(y)
    bad = np.nonzero(y <= 0)[0]
    if bad.size:
        raise DataError(
            f"line {bad[0] + 2}, column {config.response!r}: non-positive value "
            "under log transform"
        )
    return np.log(y)


def _check_family_response(y: np.ndarray, family: Family) -> None:
    if family is Family.BINOMIAL_LOGIT and not np.all((y == 0) | (y == 1)):
        raise DataError("binomial family requires a 0/1 response")
    if family is Family.POISSON_LOG and (np.any(y < 0) or np.any(y != np.floor(y))):
        raise DataError("poisson family requires nonnegative integer responses")


def build_plan(config: RunConfig, data: Dataset) -> ModelPlan:
    """Assemble the library-level model plan from config plus loaded data."""
    plans = []
    for fconf in config.factors:
        factor = data.factors[fconf.column]
        if fconf.mapping_type == "optimized":
            plans.append(
                FactorPlan(
                    factor=factor,
                    scored=True,
                    spline_m=fconf.spline_m,
                    spline_method=fconf.spline_method,
                    baseline_degree=fconf.baseline_degree,
                )
            )
        else:
            mapping: Mapping
            if fconf.mapping_type == "poly":
                mapping = PolyMapping(fconf.degree)
            else:
                mapping = IntegerMapping()
            plans.append(FactorPlan(factor=factor, scored=False, fixed=mapping))
    return ModelPlan(
        y=data.response,
        covariates=tuple((c, data.covariates[c]) for c in config.covariates),
        factors=tuple(plans),
        family=config.family,
    )
