"""Classifying projects with a grown tree and turning class activations into hours."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .dataset import TARGET, NormalizationParams, NormalizedRecord, ProjectRecord, normalize_record
from .fuzzy import FuzzyPartition, TNormKind
from .induction import FuzzifiedExample, FuzzyTree, TreeNode, fuzzify_record


class InferenceMode(enum.Enum):
    SET_BASED = "set"
    EXEMPLAR_BASED = "exemplar"

    @classmethod
    def parse(cls, text: str) -> "InferenceMode":
        aliases = {"set": cls.SET_BASED, "set-based": cls.SET_BASED,
                   "exemplar": cls.EXEMPLAR_BASED, "exemplar-based": cls.EXEMPLAR_BASED}
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown inference mode {text!r}; expected 'set' or 'exemplar'") from None


class NoCoverageError(ValueError):
    """No leaf of the tree is activated by the record."""


@dataclass(frozen=True)
class ClassActivation:
    values: np.ndarray
    trace: tuple[tuple[int, float], ...] = ()

    def top(self, n: int = 3) -> list[tuple[int, float]]:
        return sorted(self.trace, key=lambda t: (-t[1], t[0]))[:n]


Record = Union[NormalizedRecord, FuzzifiedExample, Mapping[str, np.ndarray]]


def _memberships(tree: FuzzyTree, record: Record) -> Mapping[str, np.ndarray]:
    if isinstance(record, NormalizedRecord):
        return fuzzify_record(record, tree.attributes)
    if isinstance(record, FuzzifiedExample):
        return record.memberships
    return record


def leaf_activations(tree: FuzzyTree, record: Record) -> list[tuple[TreeNode, float]]:
    """Path activations of the nodes that answer for ``record``.

    Along a path, activation is the t-norm of the edge memberships. Activation
    that would flow into a branch pruned during growth (no training mass) stays
    with the internal node, which then answers with its own proportions; this
    keeps the total activation at 1 under the product t-norm.
    """
    memberships = _memberships(tree, record)
    kind = tree.config.tnorm
    out: list[tuple[TreeNode, float]] = []

    def visit(node: TreeNode, act: float):
        if node.is_leaf:
            out.append((node, act))
            return
        u = memberships[node.attribute]
        present = {j for j, _ in node.children}
        orphan = 0.0
        for j in range(len(u)):
            if j not in present and u[j] > 0:
                orphan += act * u[j] if kind is TNormKind.PRODUCT else min(act, u[j])
        if orphan > 0:
            out.append((node, min(orphan, act)))
        for j, child in node.children:
            a = act * u[j] if kind is TNormKind.PRODUCT else min(act, u[j])
            if a > 0:
                visit(child, float(a))

    visit(tree.root, 1.0)
    return out


def infer(tree: FuzzyTree, record: Record, mode: InferenceMode = InferenceMode.EXEMPLAR_BASED) -> ClassActivation:
    """Combine the activated leaves into one activation per effort class.

    Set-based: each leaf is a fuzzy set over classes, combined by max-min,
    ``a_k = max_leaf min(activation, p_k)``.
    Exemplar-based: each leaf is an exemplar weighted by its activation and its
    training mass, ``a_k ~ sum_leaf activation * mass * p_k``, normalized to 1.
    """
    acts = leaf_activations(tree, record)
    if not acts:
        raise NoCoverageError("record activates no leaf")
    trace = tuple((node.node_id, act) for node, act in acts)
    if mode is InferenceMode.SET_BASED:
        values = np.max([np.minimum(act, node.proportions) for node, act in acts], axis=0)
    else:
        values = np.sum([act * node.mass * node.proportions for node, act in acts], axis=0)
        total = values.sum()
        if not total > 0:
            raise NoCoverageError("activated leaves carry no mass")
        values = values / total
    return ClassActivation(np.asarray(values, dtype=float), trace)


def defuzzify(activation, effort_partition: FuzzyPartition, params: Optional[NormalizationParams] = None) -> float:
    """Centroid-weighted mean of the class activations, mapped back to hours.

    Without ``params`` the normalized value in [0, 1] is returned.
    """
    a = np.asarray(getattr(activation, "values", activation), dtype=float)
    if len(a) != len(effort_partition):
        raise ValueError("activation length does not match the effort partition")
    total = a.sum()
    if not total > 0:
        raise ValueError("cannot defuzzify an all-zero activation")
    value = float(np.dot(a, effort_partition.centroids) / total)
    if params is None:
        return value
    return params.unscale(TARGET, value)


def predict_normalized(tree: FuzzyTree, record: Record, mode: InferenceMode = InferenceMode.EXEMPLAR_BASED) -> float:
    return defuzzify(infer(tree, record, mode), tree.effort_partition, tree.params)


def predict_effort(tree: FuzzyTree, record: ProjectRecord, mode: InferenceMode = InferenceMode.EXEMPLAR_BASED) -> float:
    """Effort in hours for a raw project: normalize, clamp, infer, defuzzify."""
    if tree.params is None:
        raise ValueError("tree carries no normalization parameters")
    return predict_normalized(tree, normalize_record(record, tree.params), mode)


@dataclass(frozen=True)
class Prediction:
    project_id: str
    predicted_hours: float
    mode: InferenceMode
    trace: tuple[tuple[int, float], ...]


def predict_records(tree: FuzzyTree, records: Sequence[ProjectRecord], mode: InferenceMode = InferenceMode.EXEMPLAR_BASED) -> list[Prediction]:
    out = []
    for r in records:
        normalized = normalize_record(r, tree.params)
        act = infer(tree, normalized, mode)
        hours = defuzzify(act, tree.effort_partition, tree.params)
        out.append(Prediction(r.project_id, hours, mode, tuple(act.top(3))))
    return out


PREDICTION_COLUMNS = (
    "project_id", "predicted_hours", "mode",
    "node1", "activation1", "node2", "activation2", "node3", "activation3",
)


def dumps_predictions(predictions: Sequence[Prediction]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PREDICTION_COLUMNS)
    for p in predictions:
        row = [p.project_id, repr(p.predicted_hours), p.mode.value]
        for k in range(3):
            if k < len(p.trace):
                row += [str(p.trace[k][0]), repr(p.trace[k][1])]
            else:
                row += ["", ""]
        writer.writerow(row)
    return buf.getvalue()
