"""Accuracy metrics (MRE, MMRE, Pred) and the fuzziness-threshold sweep."""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .dataset import DEFAULT_TRAIN_FRACTION, Dataset, NormalizationParams, normalize_record, split
from .induction import GrowthConfig, fuzzify_training_set, grow_tree, tree_stats
from .inference import InferenceMode, predict_normalized

log = logging.getLogger(__name__)

DEFAULT_THRESHOLDS = tuple(round(0.1 * i, 1) for i in range(1, 10))
DEFAULT_CLASS_COUNTS = (11, 16)

MMRE_TARGET = 25.0
PRED25_TARGET = 75.0


@dataclass(frozen=True)
class PredictionPair:
    actual: float
    estimated: float
    project_id: str = ""

    def __post_init__(self):
        if not self.actual > 0:
            raise ValueError(f"actual effort must be > 0, got {self.actual}")


def mre(pair: PredictionPair) -> float:
    if not pair.actual > 0:
        raise ValueError(f"actual effort must be > 0, got {pair.actual}")
    return abs(pair.actual - pair.estimated) / pair.actual


def mmre(pairs: Sequence[PredictionPair]) -> float:
    """Mean MRE, in percent."""
    if not pairs:
        raise ValueError("mmre of an empty list")
    return 100.0 * sum(mre(p) for p in pairs) / len(pairs)


def pred(pairs: Sequence[PredictionPair], p: float = 25.0) -> float:
    """Percentage of pairs with MRE <= p/100."""
    if not pairs:
        raise ValueError("pred of an empty list")
    if p < 0:
        raise ValueError("pred level must be >= 0")
    level = p / 100.0
    k = sum(1 for pair in pairs if mre(pair) <= level)
    return 100.0 * k / len(pairs)


def acceptable(mmre_value: float, pred25_value: float) -> tuple[bool, bool]:
    return mmre_value <= MMRE_TARGET, pred25_value >= PRED25_TARGET


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------

REPORT_COLUMNS = ("effort_classes", "threshold", "mmre", "pred25", "node_count", "seed")


@dataclass(frozen=True)
class ReportRow:
    threshold: float
    effort_classes: int
    mmre: float
    pred25: float
    node_count: int
    seed: int


@dataclass(frozen=True)
class EvaluationReport:
    rows: tuple[ReportRow, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for r in self.rows:
            writer.writerow([
                r.effort_classes, f"{r.threshold:g}", f"{r.mmre:.6f}", f"{r.pred25:.6f}", r.node_count, r.seed,
            ])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "EvaluationReport":
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            rows.append(ReportRow(
                float(rec["threshold"]), int(rec["effort_classes"]), float(rec["mmre"]),
                float(rec["pred25"]), int(rec["node_count"]), int(rec["seed"]),
            ))
        return cls(tuple(rows))

    def class_counts(self) -> list[int]:
        return sorted({r.effort_classes for r in self.rows})

    def series(self, effort_classes: int) -> list[ReportRow]:
        return sorted((r for r in self.rows if r.effort_classes == effort_classes), key=lambda r: r.threshold)

    def series_text(self, effort_classes: int) -> str:
        """Whitespace-delimited threshold / MMRE / Pred(25) columns."""
        lines = ["# threshold mmre pred25"]
        lines += [f"{r.threshold:g} {r.mmre:.6f} {r.pred25:.6f}" for r in self.series(effort_classes)]
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# experiments
# --------------------------------------------------------------------------

def _cell(args):
    train_examples, test_records, params, actual, config, mode, seed = args
    tree = grow_tree(train_examples, config, params=params)
    pairs = [
        PredictionPair(a, predict_normalized(tree, r, mode), r.project_id)
        for r, a in zip(test_records, actual)
    ]
    return ReportRow(
        config.fuzziness_control_threshold, config.effort_classes,
        mmre(pairs), pred(pairs, 25.0), tree_stats(tree).node_count, seed,
    )


def threshold_sweep(
    ds: Dataset,
    thresholds: Iterable[float] = DEFAULT_THRESHOLDS,
    class_counts: Iterable[int] = DEFAULT_CLASS_COUNTS,
    seed: int = 42,
    mode: InferenceMode = InferenceMode.EXEMPLAR_BASED,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
    base_config: Optional[GrowthConfig] = None,
    workers: int = 1,
) -> EvaluationReport:
    """Grow and test one tree per (class count, threshold) cell.

    ``ds`` must already be filtered and imputed. All cells share one split
    drawn from ``seed``; normalization is fitted on the training part.
    """
    base_config = base_config or GrowthConfig()
    train, test = split(ds, train_fraction, seed)
    params = NormalizationParams.fit(train)
    train_norm = [normalize_record(r, params) for r in train.records]
    test_norm = [normalize_record(r, params) for r in test.records]
    actual = [r.work_effort for r in test.records]
    jobs = []
    for k in sorted(set(class_counts)):
        k_config = replace(base_config, effort_classes=k)
        examples = fuzzify_training_set(train_norm, k_config)
        for th in sorted(set(thresholds)):
            config = replace(k_config, fuzziness_control_threshold=th)
            jobs.append((examples, test_norm, params, actual, config, mode, seed))
    log.info("sweep: %d cells, %d train / %d test records", len(jobs), len(train), len(test))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_cell, jobs))
    else:
        rows = [_cell(job) for job in jobs]
    return EvaluationReport(tuple(rows))


def evaluate(
    ds: Dataset,
    config: GrowthConfig,
    seed: int = 42,
    mode: InferenceMode = InferenceMode.EXEMPLAR_BASED,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
) -> EvaluationReport:
    """Single-cell evaluation at ``config``'s threshold and class count."""
    return threshold_sweep(
        ds, [config.fuzziness_control_threshold], [config.effort_classes],
        seed=seed, mode=mode, train_fraction=train_fraction, base_config=config,
    )
