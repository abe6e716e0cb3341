"""Command-line entry point: ``fuzzy-effort <command> [--config FILE] [flags]``.

Commands: synth, preprocess, train, predict, evaluate, sweep.

Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from .dataset import (
    DEFAULT_TRAIN_FRACTION,
    FILTER_CRITERIA,
    SYNTH_MISSING_FIELDS,
    DataError,
    Dataset,
    SynthSpec,
    dumps_csv,
    filter_cases,
    filter_summary,
    impute_mmsi,
    load_csv,
    synth_generate,
)
from .evaluation import DEFAULT_CLASS_COUNTS, DEFAULT_THRESHOLDS, evaluate, threshold_sweep
from .fuzzy import TNormKind
from .induction import DEFAULT_FUZZY_SETS, GrowthConfig, dumps_tree, loads_tree, train_tree, tree_stats
from .inference import InferenceMode, dumps_predictions, predict_records

log = logging.getLogger("fuzzy_effort")

EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_DATA = 3


class ConfigError(ValueError):
    pass


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _ints(text):
    return tuple(int(v) for v in text.split(",") if v.strip())


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass
class RunConfig:
    input: Optional[str] = None
    out: Optional[str] = None
    tree: Optional[str] = None
    records: Optional[str] = None
    seed: int = 42
    train_fraction: float = DEFAULT_TRAIN_FRACTION
    tnorm: str = "product"
    threshold: float = 0.4
    leaf_decision_threshold: float = 0.0
    min_information_gain: float = 1e-6
    classes: int = 16
    fs_function_points: int = DEFAULT_FUZZY_SETS["function_points"]
    fs_max_team_size: int = DEFAULT_FUZZY_SETS["max_team_size"]
    fs_ub_business_units: int = DEFAULT_FUZZY_SETS["ub_business_units"]
    fs_ub_locations: int = DEFAULT_FUZZY_SETS["ub_locations"]
    fs_ub_concurrent_users: int = DEFAULT_FUZZY_SETS["ub_concurrent_users"]
    mode: str = "exemplar"
    sweep_thresholds: tuple = DEFAULT_THRESHOLDS
    sweep_classes: tuple = DEFAULT_CLASS_COUNTS
    figures: bool = True
    workers: int = 1
    synth_count: int = 151
    synth_noise: float = 0.2
    synth_missing_rate: float = 0.0
    synth_missing: dict = field(default_factory=dict)
    synth_violations: dict = field(default_factory=dict)

    def growth_config(self) -> GrowthConfig:
        return GrowthConfig(
            tnorm=TNormKind.parse(self.tnorm),
            fuzziness_control_threshold=self.threshold,
            leaf_decision_threshold=self.leaf_decision_threshold,
            min_information_gain=self.min_information_gain,
            fuzzy_sets={
                "function_points": self.fs_function_points,
                "max_team_size": self.fs_max_team_size,
                "ub_business_units": self.fs_ub_business_units,
                "ub_locations": self.fs_ub_locations,
                "ub_concurrent_users": self.fs_ub_concurrent_users,
            },
            effort_classes=self.classes,
        )

    def inference_mode(self) -> InferenceMode:
        return InferenceMode.parse(self.mode)

    def synth_spec(self) -> SynthSpec:
        missing = {name: self.synth_missing_rate for name in SYNTH_MISSING_FIELDS if name != "work_effort"}
        missing.update(self.synth_missing)
        return SynthSpec(
            count=self.synth_count,
            missing_rate=missing,
            noise=self.synth_noise,
            seed=self.seed,
            violations=dict(self.synth_violations),
        )


_PARSERS = {
    "seed": int, "train_fraction": float, "threshold": float, "leaf_decision_threshold": float,
    "min_information_gain": float, "classes": int, "fs_function_points": int, "fs_max_team_size": int,
    "fs_ub_business_units": int, "fs_ub_locations": int, "fs_ub_concurrent_users": int,
    "sweep_thresholds": _floats, "sweep_classes": _ints, "figures": _bool, "workers": int,
    "synth_count": int, "synth_noise": float, "synth_missing_rate": float,
}
CONFIG_KEYS = (
    [f.name for f in fields(RunConfig) if f.name not in ("synth_missing", "synth_violations")]
    + [f"synth_missing_{name}" for name in SYNTH_MISSING_FIELDS]
    + [f"synth_violation_{name}" for name in FILTER_CRITERIA]
)


def parse_config_text(text: str, cfg: Optional[RunConfig] = None) -> RunConfig:
    """Apply ``key = value`` lines to ``cfg``. Blank lines and ``#`` comments are skipped."""
    cfg = cfg or RunConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        set_key(cfg, key, value, where=f"line {lineno}")
    return cfg


def set_key(cfg: RunConfig, key: str, value: str, where: str = "") -> None:
    prefix = f"{where}: " if where else ""
    if key not in CONFIG_KEYS:
        raise ConfigError(f"{prefix}unknown config key {key!r}")
    try:
        if key.startswith("synth_missing_") and key != "synth_missing_rate":
            cfg.synth_missing[key[len("synth_missing_"):]] = float(value)
        elif key.startswith("synth_violation_"):
            cfg.synth_violations[key[len("synth_violation_"):]] = float(value)
        else:
            setattr(cfg, key, _PARSERS.get(key, str)(value))
    except ValueError as exc:
        raise ConfigError(f"{prefix}bad value for {key}: {exc}") from None


def write_atomic(path, text: str) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _require(value, what):
    if not value:
        raise ConfigError(f"no {what} given")
    return value


def _prepared(cfg: RunConfig) -> Dataset:
    return impute_mmsi(filter_cases(load_csv(_require(cfg.input, "input file"))))


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_synth(cfg: RunConfig) -> int:
    try:
        spec = cfg.synth_spec()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    ds = synth_generate(spec)
    out = cfg.out or "synthetic.csv"
    write_atomic(out, dumps_csv(ds))
    print(f"wrote {len(ds)} projects to {out}")
    return 0


def cmd_preprocess(cfg: RunConfig) -> int:
    raw = load_csv(_require(cfg.input, "input file"))
    counts = filter_summary(raw)
    filtered = filter_cases(raw)
    no_effort = sum(1 for r in filtered if r.work_effort is None)
    imputed_cells = sum(len(r.missing_features()) for r in filtered if r.work_effort is not None)
    clean = impute_mmsi(filtered) if len(filtered) else filtered
    out = cfg.out or "preprocessed.csv"
    write_atomic(out, dumps_csv(clean))
    print(f"{'criterion':<22}{'discarded':>10}")
    for name in FILTER_CRITERIA:
        print(f"{name:<22}{counts[name]:>10}")
    print(f"{'missing work_effort':<22}{no_effort:>10}")
    print(f"read {len(raw)}, kept {len(clean)}, imputed {imputed_cells} cells -> {out}")
    if not len(clean):
        print("warning: no projects survived preprocessing", file=sys.stderr)
    return 0


def cmd_train(cfg: RunConfig) -> int:
    config = cfg.growth_config()
    ds = _prepared(cfg)
    if not len(ds):
        raise DataError("no usable training projects")
    tree = train_tree(ds, config)
    out = cfg.out or "tree.txt"
    write_atomic(out, dumps_tree(tree))
    st = tree_stats(tree)
    print(f"nodes {st.node_count}, leaves {st.leaf_count}, depth {st.max_depth} -> {out}")
    for name, n in st.criteria.items():
        print(f"  {name:<22}{n:>6}")
    return 0


def cmd_predict(cfg: RunConfig) -> int:
    mode = cfg.inference_mode()
    text = Path(_require(cfg.tree, "tree file")).read_text(encoding="utf-8")
    try:
        tree = loads_tree(text)
    except (ValueError, KeyError) as exc:
        raise DataError(f"{cfg.tree}: unreadable tree file ({exc})") from None
    records = load_csv(_require(cfg.records or cfg.input, "records file"))
    problems = [
        f"row {i}, project {r.project_id}: missing {', '.join(r.missing_features())}"
        for i, r in enumerate(records, start=2)
        if r.missing_features()
    ]
    if problems:
        raise DataError("records with missing features cannot be predicted", problems)
    predictions = predict_records(tree, records.records, mode)
    out = cfg.out or "predictions.csv"
    write_atomic(out, dumps_predictions(predictions))
    print(f"wrote {len(predictions)} predictions to {out}")
    return 0


def cmd_evaluate(cfg: RunConfig) -> int:
    report = evaluate(_prepared(cfg), cfg.growth_config(), cfg.seed, cfg.inference_mode(), cfg.train_fraction)
    out = cfg.out or "evaluation.csv"
    write_atomic(out, report.to_csv())
    sys.stdout.write(report.to_csv())
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    report = threshold_sweep(
        _prepared(cfg),
        thresholds=cfg.sweep_thresholds,
        class_counts=cfg.sweep_classes,
        seed=cfg.seed,
        mode=cfg.inference_mode(),
        train_fraction=cfg.train_fraction,
        base_config=cfg.growth_config(),
        workers=cfg.workers,
    )
    out = Path(cfg.out or "sweep.csv")
    write_atomic(out, report.to_csv())
    stem = out.with_suffix("")
    for k in report.class_counts():
        write_atomic(stem.with_name(f"{stem.name}_series_K{k}.txt"), report.series_text(k))
    if cfg.figures:
        from .plotting import plot_sweep

        for path in plot_sweep(report, stem):
            log.info("figure %s", path)
    sys.stdout.write(report.to_csv())
    return 0


COMMANDS = {
    "synth": cmd_synth,
    "preprocess": cmd_preprocess,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzy-effort", description="Fuzzy ID3 software effort estimation")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output file")
    parser.add_argument("--mode", choices=["set", "exemplar"])
    parser.add_argument("--threshold", type=float, help="fuzziness control threshold")
    parser.add_argument("--classes", type=int, help="number of effort fuzzy sets")
    parser.add_argument("--input", help="project CSV")
    parser.add_argument("--tree", help="tree file (predict)")
    parser.add_argument("--records", help="projects to predict (predict)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def load_run_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        parse_config_text(text, cfg)
    for key in ("seed", "out", "mode", "threshold", "classes", "input", "tree", "records"):
        value = getattr(args, key)
        if value is not None:
            setattr(cfg, key, value)
    try:
        cfg.growth_config()
        cfg.inference_mode()
        if not 0.0 < cfg.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {cfg.train_fraction}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = load_run_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
