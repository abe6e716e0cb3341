import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fuzzy_effort.induction import Attribute, FuzzifiedExample  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


def random_crisp_problem(rng, max_features=6, max_rows=40):
    """Random categorical dataset as one-hot fuzzified examples.

    Returns (examples, attributes, rows, labels, n_values, k_count).
    """
    n_feat = int(rng.integers(1, max_features + 1))
    n_rows = int(rng.integers(1, max_rows + 1))
    k_count = int(rng.integers(2, 5))
    n_values = {f"x{j}": int(rng.integers(2, 5)) for j in range(n_feat)}
    names = list(n_values)
    rows = [{a: int(rng.integers(n_values[a])) for a in names} for _ in range(n_rows)]
    labels = [int(rng.integers(k_count)) for _ in range(n_rows)]
    attributes = [Attribute.nominal(a, [f"{a}={v}" for v in range(n_values[a])]) for a in names]
    examples = []
    for r, y in zip(rows, labels):
        mem = {a: np.eye(n_values[a])[r[a]] for a in names}
        examples.append(FuzzifiedExample(mem, np.eye(k_count)[y]))
    return examples, attributes, rows, labels, n_values, k_count


def random_fuzzy_problem(rng, max_features=6, max_rows=40):
    """Random fuzzified instance: Ruspini memberships plus random node memberships."""
    from fuzzy_effort.fuzzy import build_uniform_partition, fuzzify

    n_feat = int(rng.integers(1, max_features + 1))
    n_rows = int(rng.integers(2, max_rows + 1))
    k_count = int(rng.integers(2, 17))
    parts = {f"x{j}": build_uniform_partition(int(rng.integers(1, 12))) for j in range(n_feat)}
    classes = build_uniform_partition(k_count)
    examples = []
    for _ in range(n_rows):
        mem = {a: fuzzify(p, rng.random()) for a, p in parts.items()}
        examples.append(FuzzifiedExample(mem, fuzzify(classes, rng.random())))
    mu = rng.random(n_rows)
    mu[rng.random(n_rows) < 0.2] = 0.0
    mu[0] = max(mu[0], 0.1)
    return examples, list(parts), mu, k_count
