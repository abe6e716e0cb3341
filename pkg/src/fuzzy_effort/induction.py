"""Fuzzy ID3 induction.

Examples belong to every node with a degree. A node's class proportions are
t-norm weighted class memberships, its entropy is the base-2 entropy of those
proportions, and a node is split on the attribute with the highest
mass-weighted information gain. Each attribute is used at most once per path.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .dataset import (
    NOMINAL_FEATURE,
    NUMERIC_FEATURES,
    PLATFORMS,
    Dataset,
    NormalizationParams,
    NormalizedRecord,
    normalize_record,
)
from .fuzzy import FuzzyPartition, TNormKind, build_uniform_partition, fuzzify

DEFAULT_FUZZY_SETS = {
    "function_points": 7,
    "max_team_size": 11,
    "ub_business_units": 9,
    "ub_locations": 9,
    "ub_concurrent_users": 9,
}

LABEL_PREFIX = {
    "function_points": "FP",
    "max_team_size": "MTS",
    "ub_business_units": "UBU",
    "ub_locations": "UBL",
    "ub_concurrent_users": "UCU",
}
EFFORT_PREFIX = "E"

# Gains closer than this are treated as tied and resolved by attribute order.
GAIN_TIE_TOLERANCE = 1e-12


class EmptyNodeError(ValueError):
    """A node carries no membership mass."""


class StopCriterion(enum.Enum):
    THRESHOLD = "threshold"
    EXHAUSTED = "attributes-exhausted"
    MIN_MASS = "min-mass"
    MIN_GAIN = "min-gain"


@dataclass(frozen=True)
class GrowthConfig:
    tnorm: TNormKind = TNormKind.PRODUCT
    fuzziness_control_threshold: float = 0.4
    leaf_decision_threshold: float = 0.0
    min_information_gain: float = 1e-6
    fuzzy_sets: Mapping[str, int] = field(default_factory=lambda: dict(DEFAULT_FUZZY_SETS))
    effort_classes: int = 16

    def __post_init__(self):
        th = self.fuzziness_control_threshold
        if not 0.0 < th <= 1.0:
            raise ValueError(f"fuzziness control threshold must be in (0, 1], got {th}")
        if not self.leaf_decision_threshold >= 0.0:
            raise ValueError("leaf decision threshold must be >= 0")
        if not self.min_information_gain >= 0.0:
            raise ValueError("minimum information gain must be >= 0")
        if self.effort_classes < 2:
            raise ValueError(f"need at least 2 effort classes, got {self.effort_classes}")
        for name, n in self.fuzzy_sets.items():
            if n < 1:
                raise ValueError(f"{name}: fuzzy set count must be >= 1, got {n}")


@dataclass(frozen=True)
class Attribute:
    """A splittable attribute. ``partition`` is None for crisp/nominal ones."""

    name: str
    labels: tuple[str, ...]
    partition: Optional[FuzzyPartition] = None

    @classmethod
    def fuzzy(cls, name: str, partition: FuzzyPartition) -> "Attribute":
        return cls(name, partition.labels, partition)

    @classmethod
    def nominal(cls, name: str, values: Sequence[str]) -> "Attribute":
        return cls(name, tuple(values), None)

    def memberships(self, value) -> np.ndarray:
        if self.partition is not None:
            return fuzzify(self.partition, value)
        if value not in self.labels:
            raise ValueError(f"{self.name}: unknown value {value!r}")
        out = np.zeros(len(self.labels))
        out[self.labels.index(value)] = 1.0
        return out


def default_attributes(config: GrowthConfig) -> tuple[Attribute, ...]:
    attrs = []
    for name in NUMERIC_FEATURES:
        n = config.fuzzy_sets.get(name, DEFAULT_FUZZY_SETS[name])
        attrs.append(Attribute.fuzzy(name, build_uniform_partition(n, LABEL_PREFIX[name])))
    attrs.append(Attribute.nominal(NOMINAL_FEATURE, PLATFORMS))
    return tuple(attrs)


def effort_partition(config: GrowthConfig) -> FuzzyPartition:
    return build_uniform_partition(config.effort_classes, EFFORT_PREFIX)


@dataclass(frozen=True)
class FuzzifiedExample:
    memberships: Mapping[str, np.ndarray]
    classes: np.ndarray
    project_id: str = ""


def fuzzify_record(record: NormalizedRecord, attributes: Sequence[Attribute]) -> dict[str, np.ndarray]:
    out = {}
    for attr in attributes:
        if attr.name == NOMINAL_FEATURE:
            out[attr.name] = attr.memberships(record.development_platform)
        else:
            out[attr.name] = attr.memberships(record.values[attr.name])
    return out


def fuzzify_training_set(train: Sequence[NormalizedRecord], config: GrowthConfig) -> list[FuzzifiedExample]:
    attributes = default_attributes(config)
    classes = effort_partition(config)
    examples = []
    for r in train:
        if r.work_effort is None:
            raise ValueError(f"project {r.project_id}: training records need a work effort")
        examples.append(
            FuzzifiedExample(fuzzify_record(r, attributes), fuzzify(classes, r.work_effort), r.project_id)
        )
    return examples


# --------------------------------------------------------------------------
# node statistics
# --------------------------------------------------------------------------

def _conj_sums(kind: TNormKind, weights: np.ndarray, classes: np.ndarray) -> np.ndarray:
    """Sum over examples of T(u_k(y_i), w_i,l); ``weights`` is (n,) or (n, m)."""
    if weights.ndim == 1:
        if kind is TNormKind.PRODUCT:
            return weights @ classes
        return np.minimum(classes, weights[:, None]).sum(axis=0)
    if kind is TNormKind.PRODUCT:
        return weights.T @ classes
    return np.minimum(weights[:, :, None], classes[:, None, :]).sum(axis=0)


def _entropy_rows(p: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)


def _proportions(kind: TNormKind, mu: np.ndarray, classes: np.ndarray) -> np.ndarray:
    num = _conj_sums(kind, mu, classes)
    total = num.sum()
    if not total > 0:
        raise EmptyNodeError("node has zero membership mass")
    return num / total


def _gain(kind, mu, classes, node_entropy, attr_memberships) -> float:
    if kind is TNormKind.PRODUCT:
        child = mu[:, None] * attr_memberships
    else:
        child = np.minimum(mu[:, None], attr_memberships)
    masses = child.sum(axis=0)
    total = masses.sum()
    if not total > 0:
        return 0.0
    nums = _conj_sums(kind, child, classes)
    dens = nums.sum(axis=1)
    live = dens > 0
    child_entropy = _entropy_rows(nums[live] / dens[live, None])
    return float(node_entropy - np.dot(masses[live] / total, child_entropy))


def _stack(examples: Sequence[FuzzifiedExample], attribute: Optional[str] = None):
    classes = np.array([e.classes for e in examples], dtype=float)
    if attribute is None:
        return classes
    return classes, np.array([e.memberships[attribute] for e in examples], dtype=float)


def class_proportions(examples: Sequence[FuzzifiedExample], node_memberships, tnorm: TNormKind = TNormKind.PRODUCT) -> np.ndarray:
    mu = np.asarray(node_memberships, dtype=float)
    if len(mu) != len(examples):
        raise ValueError("one node membership per example is required")
    return _proportions(tnorm, mu, _stack(examples))


def fuzzy_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("proportions must be non-negative")
    return float(_entropy_rows(p))


def information_gain(examples: Sequence[FuzzifiedExample], node_memberships, attribute: str, tnorm: TNormKind = TNormKind.PRODUCT) -> float:
    mu = np.asarray(node_memberships, dtype=float)
    classes, memberships = _stack(examples, attribute)
    h = float(_entropy_rows(_proportions(tnorm, mu, classes)))
    return _gain(tnorm, mu, classes, h, memberships)


# --------------------------------------------------------------------------
# tree
# --------------------------------------------------------------------------

@dataclass
class TreeNode:
    proportions: np.ndarray
    mass: float
    depth: int
    attribute: Optional[str] = None
    children: list = field(default_factory=list)  # (set index, TreeNode)
    criterion: Optional[StopCriterion] = None
    node_id: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.attribute is None

    def walk(self):
        yield self
        for _, child in self.children:
            yield from child.walk()


@dataclass
class FuzzyTree:
    root: TreeNode
    config: GrowthConfig
    attributes: tuple[Attribute, ...]
    effort_partition: FuzzyPartition
    params: Optional[NormalizationParams] = None

    def attribute(self, name: str) -> Attribute:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        raise KeyError(name)

    def nodes(self):
        return list(self.root.walk())

    def leaves(self):
        return [n for n in self.root.walk() if n.is_leaf]


def grow_tree(
    examples: Sequence[FuzzifiedExample],
    config: GrowthConfig,
    attributes: Optional[Sequence[Attribute]] = None,
    params: Optional[NormalizationParams] = None,
) -> FuzzyTree:
    """Induce a fuzzy ID3 tree.

    A node becomes a leaf when the first of these holds, checked in order:
    some class proportion reaches the fuzziness control threshold; every
    attribute is already used on its path; its membership mass is below the
    leaf decision threshold; the best gain is below the minimum gain.
    Children that receive no membership mass are not created.
    """
    if not examples:
        raise ValueError("cannot grow a tree from an empty example set")
    attributes = tuple(attributes) if attributes is not None else default_attributes(config)
    classes = _stack(examples)
    if classes.shape[1] != config.effort_classes:
        raise ValueError(
            f"examples carry {classes.shape[1]} class memberships, config expects {config.effort_classes}"
        )
    member = {a.name: np.array([e.memberships[a.name] for e in examples], dtype=float) for a in attributes}
    mu0 = np.ones(len(examples))
    kind = config.tnorm

    def build(rows: np.ndarray, mu: np.ndarray, used: frozenset, depth: int) -> TreeNode:
        cls = classes[rows]
        p = _proportions(kind, mu, cls)
        node = TreeNode(p, float(mu.sum()), depth)
        if p.max() >= config.fuzziness_control_threshold:
            node.criterion = StopCriterion.THRESHOLD
            return node
        candidates = [a for a in attributes if a.name not in used]
        if not candidates:
            node.criterion = StopCriterion.EXHAUSTED
            return node
        if node.mass < config.leaf_decision_threshold:
            node.criterion = StopCriterion.MIN_MASS
            return node
        h = float(_entropy_rows(p))
        gains = [_gain(kind, mu, cls, h, member[a.name][rows]) for a in candidates]
        top = max(gains)
        best_gain, best = next((g, a) for g, a in zip(gains, candidates) if g >= top - GAIN_TIE_TOLERANCE)
        if best_gain < config.min_information_gain:
            node.criterion = StopCriterion.MIN_GAIN
            return node
        node.attribute = best.name
        u = member[best.name][rows]
        for j in range(len(best.labels)):
            child_mu = mu * u[:, j] if kind is TNormKind.PRODUCT else np.minimum(mu, u[:, j])
            live = child_mu > 0
            if not live.any():
                continue
            node.children.append((j, build(rows[live], child_mu[live], used | {best.name}, depth + 1)))
        return node

    root = build(np.arange(len(examples)), mu0, frozenset(), 0)
    for i, node in enumerate(root.walk()):
        node.node_id = i
    return FuzzyTree(root, config, attributes, effort_partition(config), params)


def train_tree(train: Dataset, config: GrowthConfig, params: Optional[NormalizationParams] = None) -> FuzzyTree:
    """Fit normalization on ``train`` (unless given), fuzzify, and grow."""
    if params is None:
        params = NormalizationParams.fit(train)
    normalized = [normalize_record(r, params) for r in train.records]
    return grow_tree(fuzzify_training_set(normalized, config), config, params=params)


@dataclass(frozen=True)
class TreeStats:
    node_count: int
    leaf_count: int
    max_depth: int
    criteria: Mapping[str, int]


def tree_stats(tree: FuzzyTree) -> TreeStats:
    nodes = tree.nodes()
    leaves = [n for n in nodes if n.is_leaf]
    hist = {c.value: 0 for c in StopCriterion}
    for leaf in leaves:
        hist[leaf.criterion.value] += 1
    return TreeStats(len(nodes), len(leaves), max(n.depth for n in nodes), hist)


# --------------------------------------------------------------------------
# text serialization
# --------------------------------------------------------------------------

FORMAT_HEADER = "fuzzy-id3-tree 1"


def _floats(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def dumps_tree(tree: FuzzyTree) -> str:
    """Render ``tree`` as text: a header block, then one node per line.

    Node lines are indented two spaces per depth and start with the edge
    label in brackets (except the root).
    """
    cfg = tree.config
    lines = [
        FORMAT_HEADER,
        f"tnorm {cfg.tnorm.value}",
        f"fuzziness_control_threshold {cfg.fuzziness_control_threshold!r}",
        f"leaf_decision_threshold {cfg.leaf_decision_threshold!r}",
        f"min_information_gain {cfg.min_information_gain!r}",
        f"effort_classes {cfg.effort_classes}",
    ]
    for attr in tree.attributes:
        if attr.partition is not None:
            lines.append(f"attribute {attr.name} fuzzy {len(attr.labels)} {attr.labels[0].removesuffix('0')}")
        else:
            lines.append(f"attribute {attr.name} nominal {','.join(attr.labels)}")
    if tree.params is not None:
        for name, (lo, hi) in tree.params.bounds.items():
            lines.append(f"norm {name} {lo!r} {hi!r}")
    lines.append("nodes")

    def emit(node: TreeNode, edge: Optional[str]):
        head = "  " * node.depth + (f"[{edge}] " if edge is not None else "")
        if node.is_leaf:
            body = f"leaf criterion={node.criterion.value}"
        else:
            body = f"split={node.attribute}"
        lines.append(f"{head}{body} p={_floats(node.proportions)} mass={node.mass!r}")
        if not node.is_leaf:
            labels = tree.attribute(node.attribute).labels
            for j, child in node.children:
                emit(child, labels[j])

    emit(tree.root, None)
    return "\n".join(lines) + "\n"


def loads_tree(text: str) -> FuzzyTree:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise ValueError("not a fuzzy-id3 tree file")
    header = {}
    attributes, bounds = [], {}
    i = 1
    while i < len(lines) and lines[i].strip() != "nodes":
        parts = lines[i].split()
        i += 1
        if not parts:
            continue
        key = parts[0]
        if key == "attribute":
            name, kind = parts[1], parts[2]
            if kind == "fuzzy":
                attributes.append(Attribute.fuzzy(name, build_uniform_partition(int(parts[3]), parts[4])))
            else:
                attributes.append(Attribute.nominal(name, parts[3].split(",")))
        elif key == "norm":
            bounds[parts[1]] = (float(parts[2]), float(parts[3]))
        else:
            header[key] = parts[1]
    if i >= len(lines):
        raise ValueError("tree file has no node section")
    config = GrowthConfig(
        tnorm=TNormKind.parse(header["tnorm"]),
        fuzziness_control_threshold=float(header["fuzziness_control_threshold"]),
        leaf_decision_threshold=float(header["leaf_decision_threshold"]),
        min_information_gain=float(header["min_information_gain"]),
        fuzzy_sets={a.name: len(a.labels) for a in attributes if a.partition is not None},
        effort_classes=int(header["effort_classes"]),
    )
    by_name = {a.name: a for a in attributes}
    stack: list[TreeNode] = []
    root = None
    for line in lines[i + 1:]:
        if not line.strip():
            continue
        depth = (len(line) - len(line.lstrip(" "))) // 2
        body = line.strip()
        edge = None
        if body.startswith("["):
            edge, body = body[1:].split("] ", 1)
        tokens = body.split()
        fields_ = dict(t.split("=", 1) for t in tokens[1:])
        node = TreeNode(
            np.array([float(v) for v in fields_["p"].split(",")]),
            float(fields_["mass"]),
            depth,
        )
        if tokens[0] == "leaf":
            node.criterion = StopCriterion(fields_["criterion"])
        else:
            node.attribute = tokens[0].split("=", 1)[1]
        del stack[depth:]
        if depth == 0:
            root = node
        else:
            parent = stack[depth - 1]
            parent.children.append((by_name[parent.attribute].labels.index(edge), node))
        stack.append(node)
    if root is None:
        raise ValueError("tree file has no root node")
    for k, node in enumerate(root.walk()):
        node.node_id = k
    params = NormalizationParams(bounds) if bounds else None
    return FuzzyTree(root, config, tuple(attributes), effort_partition(config), params)
