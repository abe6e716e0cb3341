"""Project records: CSV I/O, case filtering, MMSI imputation, min-max scaling,
seeded splitting and a synthetic generator with the same schema."""

from __future__ import annotations

import csv
import io
import math
import os
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

NUMERIC_FEATURES = (
    "function_points",
    "max_team_size",
    "ub_business_units",
    "ub_locations",
    "ub_concurrent_users",
)
NOMINAL_FEATURE = "development_platform"
FEATURES = NUMERIC_FEATURES + (NOMINAL_FEATURE,)
TARGET = "work_effort"

PLATFORMS = ("PC", "MidRange", "MainFrame")
RATINGS = ("A", "B", "C", "D")
RESOURCE_LEVELS = (1, 2, 3, 4)
DEVELOPMENT_TYPES = ("NewDevelopment", "Enhancement", "Redevelopment")

CSV_COLUMNS = (
    "project_id",
    "function_points",
    "max_team_size",
    "ub_business_units",
    "ub_locations",
    "ub_concurrent_users",
    "development_platform",
    "work_effort",
    "data_quality_rating",
    "ufp_rating",
    "resource_level",
    "development_type",
)

# Case-selection criteria, in the order they are attributed in summaries.
FILTER_CRITERIA = ("data_quality_rating", "resource_level", "ufp_rating", "development_type")


class DataError(ValueError):
    """Raised for schema violations; ``problems`` holds one line per bad row/cell."""

    def __init__(self, message: str, problems: Sequence[str] = ()):
        self.problems = list(problems)
        if self.problems:
            message = message + "\n" + "\n".join(f"  {p}" for p in self.problems)
        super().__init__(message)


@dataclass(frozen=True)
class ProjectRecord:
    project_id: str
    function_points: Optional[float] = None
    max_team_size: Optional[float] = None
    ub_business_units: Optional[float] = None
    ub_locations: Optional[float] = None
    ub_concurrent_users: Optional[float] = None
    development_platform: Optional[str] = None
    work_effort: Optional[float] = None
    data_quality_rating: str = "A"
    ufp_rating: str = "A"
    resource_level: int = 1
    development_type: str = "NewDevelopment"

    def __post_init__(self):
        for name in NUMERIC_FEATURES + (TARGET,):
            v = getattr(self, name)
            if v is None:
                continue
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
        if self.work_effort is not None and self.work_effort <= 0:
            raise ValueError(f"work_effort must be > 0, got {self.work_effort}")
        _check_enum("development_platform", self.development_platform, PLATFORMS, optional=True)
        _check_enum("data_quality_rating", self.data_quality_rating, RATINGS)
        _check_enum("ufp_rating", self.ufp_rating, RATINGS)
        _check_enum("resource_level", self.resource_level, RESOURCE_LEVELS)
        _check_enum("development_type", self.development_type, DEVELOPMENT_TYPES)

    def missing_features(self) -> list[str]:
        return [name for name in FEATURES if getattr(self, name) is None]


def _check_enum(name, value, allowed, optional=False):
    if value is None and optional:
        return
    if value not in allowed:
        raise ValueError(f"{name} must be one of {', '.join(map(str, allowed))}; got {value!r}")


@dataclass(frozen=True)
class Dataset:
    records: tuple[ProjectRecord, ...]
    provenance: str = "raw"

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen = Counter(r.project_id for r in self.records)
        dupes = sorted(k for k, n in seen.items() if n > 1)
        if dupes:
            raise DataError("duplicate project ids", [f"project_id {d!r}" for d in dupes])

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.records]


# --------------------------------------------------------------------------
# CSV
# --------------------------------------------------------------------------

def _parse_cell(column: str, text: str):
    text = text.strip()
    if text == "":
        return None
    if column in NUMERIC_FEATURES or column == TARGET:
        return float(text)
    if column == "resource_level":
        return int(text)
    return text


def parse_records(rows: Iterable[Mapping[str, str]], first_row: int = 2) -> list[ProjectRecord]:
    records, problems = [], []
    for rownum, row in enumerate(rows, start=first_row):
        values = {}
        bad = False
        for column in CSV_COLUMNS:
            try:
                values[column] = _parse_cell(column, row.get(column) or "")
            except ValueError:
                problems.append(f"row {rownum}, column {column}: cannot parse {row.get(column)!r}")
                bad = True
        if bad:
            continue
        if values["project_id"] is None:
            problems.append(f"row {rownum}, column project_id: empty")
            continue
        for required in ("data_quality_rating", "ufp_rating", "resource_level", "development_type"):
            if values[required] is None:
                problems.append(f"row {rownum}, column {required}: empty")
                bad = True
        if bad:
            continue
        try:
            records.append(ProjectRecord(**values))
        except ValueError as exc:
            column = str(exc).split(" ", 1)[0]
            problems.append(f"row {rownum}, column {column}: {exc}")
    if problems:
        raise DataError("invalid project data", problems)
    return records


def load_csv(path) -> Dataset:
    """Read a project CSV. Empty cells are missing values."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        unknown = [h for h in header if h not in CSV_COLUMNS]
        absent = [c for c in CSV_COLUMNS if c not in header]
        if unknown or absent:
            problems = [f"unknown column {h!r}" for h in unknown]
            problems += [f"missing column {c!r}" for c in absent]
            raise DataError(f"{path}: header does not match the project schema", problems)
        records = parse_records(reader)
    return Dataset(tuple(records), provenance="raw")


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dumps_csv(ds: Dataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in ds.records:
        writer.writerow([_format_cell(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


# --------------------------------------------------------------------------
# case selection
# --------------------------------------------------------------------------

def _violations(r: ProjectRecord) -> list[str]:
    out = []
    if r.data_quality_rating not in ("A", "B"):
        out.append("data_quality_rating")
    if r.resource_level not in (1, 2):
        out.append("resource_level")
    if r.ufp_rating not in ("A", "B"):
        out.append("ufp_rating")
    if r.development_type != "NewDevelopment":
        out.append("development_type")
    return out


def filter_cases(ds: Dataset) -> Dataset:
    kept = tuple(r for r in ds.records if not _violations(r))
    return Dataset(kept, provenance="filtered")


def filter_summary(ds: Dataset) -> dict[str, int]:
    """Discard counts per criterion.

    A record failing several criteria is charged to the first one in
    ``FILTER_CRITERIA`` order, so the counts add up to the number discarded.
    """
    counts = {name: 0 for name in FILTER_CRITERIA}
    for r in ds.records:
        v = _violations(r)
        if v:
            counts[v[0]] += 1
    return counts


# --------------------------------------------------------------------------
# imputation
# --------------------------------------------------------------------------

def impute_mmsi(ds: Dataset) -> Dataset:
    """Mean/mode single imputation.

    Records without a work effort are dropped, never imputed. Means and modes
    come from the present values of the remaining records; mode ties go to the
    lexicographically smallest label.
    """
    records = [r for r in ds.records if r.work_effort is not None]
    fill = {}
    for name in FEATURES:
        present = [getattr(r, name) for r in records if getattr(r, name) is not None]
        if len(present) == len(records):
            continue
        if not present:
            raise DataError(f"cannot impute {name}: every value is missing")
        if name == NOMINAL_FEATURE:
            counts = Counter(present)
            top = max(counts.values())
            fill[name] = min(k for k, n in counts.items() if n == top)
        else:
            fill[name] = math.fsum(present) / len(present)
    out = []
    for r in records:
        patch = {k: v for k, v in fill.items() if getattr(r, k) is None}
        out.append(replace(r, **patch) if patch else r)
    return Dataset(tuple(out), provenance="imputed")


# --------------------------------------------------------------------------
# normalization
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalizationParams:
    """Training-set min/max per numeric column (original units)."""

    bounds: Mapping[str, tuple[float, float]]

    def __post_init__(self):
        for name, (lo, hi) in self.bounds.items():
            if not lo <= hi:
                raise ValueError(f"{name}: min {lo} exceeds max {hi}")

    @classmethod
    def fit(cls, ds: Dataset) -> "NormalizationParams":
        if not len(ds):
            raise ValueError("cannot fit normalization on an empty dataset")
        bounds = {}
        for name in NUMERIC_FEATURES + (TARGET,):
            col = ds.column(name)
            if any(v is None for v in col):
                raise DataError(f"{name} has missing values; impute before normalizing")
            bounds[name] = (float(min(col)), float(max(col)))
        return cls(bounds)

    def scale(self, name: str, value: float) -> float:
        lo, hi = self.bounds[name]
        if hi == lo:
            return 0.0
        return min(max((value - lo) / (hi - lo), 0.0), 1.0)

    def unscale(self, name: str, value: float) -> float:
        lo, hi = self.bounds[name]
        return lo + value * (hi - lo)


@dataclass(frozen=True)
class NormalizedRecord:
    project_id: str
    values: Mapping[str, float]
    development_platform: str
    work_effort: Optional[float] = None


def normalize_record(r: ProjectRecord, params: NormalizationParams) -> NormalizedRecord:
    missing = r.missing_features()
    if missing:
        raise DataError(f"project {r.project_id}: missing {', '.join(missing)}")
    values = {name: params.scale(name, getattr(r, name)) for name in NUMERIC_FEATURES}
    effort = None if r.work_effort is None else params.scale(TARGET, r.work_effort)
    return NormalizedRecord(r.project_id, values, r.development_platform, effort)


def normalize_minmax(train: Dataset, test: Dataset):
    """Scale features and effort to [0, 1] with min/max fitted on ``train``.

    Test values are clamped into [0, 1]; a constant training column maps to 0.
    Returns ``(train_records, test_records, params)``.
    """
    params = NormalizationParams.fit(train)
    return (
        [normalize_record(r, params) for r in train.records],
        [normalize_record(r, params) for r in test.records],
        params,
    )


# --------------------------------------------------------------------------
# splitting
# --------------------------------------------------------------------------

DEFAULT_TRAIN_FRACTION = 74 / 151


def split(ds: Dataset, train_fraction: float = DEFAULT_TRAIN_FRACTION, seed: int = 42):
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(ds)
    if n < 2:
        raise ValueError("need at least 2 records to split")
    order = np.random.default_rng(seed).permutation(n)
    n_train = int(math.floor(train_fraction * n + 1e-9))
    train = tuple(ds.records[i] for i in order[:n_train])
    test = tuple(ds.records[i] for i in order[n_train:])
    return Dataset(train, ds.provenance + "/train"), Dataset(test, ds.provenance + "/test")


# --------------------------------------------------------------------------
# synthetic data
# --------------------------------------------------------------------------

SYNTH_MISSING_FIELDS = FEATURES + (TARGET,)


@dataclass(frozen=True)
class SynthSpec:
    """Parameters for :func:`synth_generate`.

    ``missing_rate`` maps a feature (or ``work_effort``) to the fraction of
    records left blank; ``violations`` maps a case-selection criterion to the
    fraction of records that fail it.
    """

    count: int = 151
    missing_rate: Mapping[str, float] = field(default_factory=dict)
    noise: float = 0.0
    seed: int = 42
    violations: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be >= 0")
        if not (self.noise >= 0 and math.isfinite(self.noise)):
            raise ValueError("noise must be >= 0")
        for name, rate in self.missing_rate.items():
            if name not in SYNTH_MISSING_FIELDS:
                raise ValueError(f"unknown field for missing_rate: {name}")
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"missing rate for {name} must be in [0, 1], got {rate}")
        for name, frac in self.violations.items():
            if name not in FILTER_CRITERIA:
                raise ValueError(f"unknown filter criterion: {name}")
            if not 0.0 <= frac <= 1.0:
                raise ValueError(f"violation fraction for {name} must be in [0, 1], got {frac}")


def synthetic_effort(function_points, max_team_size):
    """Effort in hours, increasing in both size and team size."""
    return 12.0 * np.asarray(function_points) * np.sqrt(1.0 + np.asarray(max_team_size) / 4.0)


def synth_generate(spec: SynthSpec) -> Dataset:
    """Generate schema-compatible projects, deterministic under ``spec.seed``.

    Effort is ``synthetic_effort(fp, team) * exp(noise * eps)`` with standard
    normal ``eps``. Missing cells and filter violations are injected into
    exactly ``round(rate * count)`` randomly chosen records each.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.count
    fp = np.round(rng.lognormal(mean=5.5, sigma=0.8, size=n)) + 10.0
    team = rng.integers(1, 31, size=n).astype(float)
    bu = rng.integers(1, 10, size=n).astype(float)
    loc = rng.integers(1, 10, size=n).astype(float)
    users = rng.integers(1, 500, size=n).astype(float)
    platform = rng.choice(len(PLATFORMS), size=n, p=[0.4, 0.25, 0.35])
    eps = rng.standard_normal(n)
    effort = synthetic_effort(fp, team) * np.exp(spec.noise * eps)
    effort = np.maximum(np.round(effort, 1), 1.0)

    cols = {
        "function_points": fp,
        "max_team_size": team,
        "ub_business_units": bu,
        "ub_locations": loc,
        "ub_concurrent_users": users,
    }
    rows = []
    for i in range(n):
        row = {name: float(cols[name][i]) for name in NUMERIC_FEATURES}
        row.update(
            project_id=f"P{i + 1:04d}",
            development_platform=PLATFORMS[platform[i]],
            work_effort=float(effort[i]),
            data_quality_rating="A" if rng.random() < 0.6 else "B",
            ufp_rating="A" if rng.random() < 0.7 else "B",
            resource_level=1 if rng.random() < 0.8 else 2,
            development_type="NewDevelopment",
        )
        rows.append(row)

    bad_values = {
        "data_quality_rating": ("C", "D"),
        "ufp_rating": ("C", "D"),
        "resource_level": (3, 4),
        "development_type": ("Enhancement", "Redevelopment"),
    }
    for name in FILTER_CRITERIA:
        k = int(round(spec.violations.get(name, 0.0) * n))
        for i in sorted(rng.choice(n, size=k, replace=False)):
            options = bad_values[name]
            rows[i][name] = options[int(rng.integers(len(options)))]
    for name in SYNTH_MISSING_FIELDS:
        k = int(round(spec.missing_rate.get(name, 0.0) * n))
        for i in sorted(rng.choice(n, size=k, replace=False)):
            rows[i][name] = None

    return Dataset(tuple(ProjectRecord(**row) for row in rows), provenance="synthetic")


__all__ = [
    "CSV_COLUMNS",
    "DataError",
    "Dataset",
    "FEATURES",
    "NUMERIC_FEATURES",
    "NormalizationParams",
    "NormalizedRecord",
    "ProjectRecord",
    "SynthSpec",
    "dumps_csv",
    "filter_cases",
    "filter_summary",
    "impute_mmsi",
    "load_csv",
    "normalize_minmax",
    "normalize_record",
    "split",
    "synth_generate",
]
