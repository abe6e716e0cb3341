"""Reference implementations used only by the tests.

Nothing here imports the package; each function is a direct, loop-based
evaluation so it can serve as an independent check.
"""

import math
from collections import Counter

GAIN_TIE = 1e-12
MIN_GAIN = 1e-6


def tnorm_product(a, b):
    return a * b


def tnorm_min(a, b):
    return a if a < b else b


def proportions(class_memberships, mu, t):
    """Class proportions at a node by a double loop over classes and examples."""
    k_count = len(class_memberships[0])
    num = []
    for k in range(k_count):
        s = 0.0
        for i in range(len(mu)):
            s += t(class_memberships[i][k], mu[i])
        num.append(s)
    den = 0.0
    for c in range(k_count):
        for i in range(len(mu)):
            den += t(class_memberships[i][c], mu[i])
    return [v / den for v in num]


def entropy(p):
    h = 0.0
    for v in p:
        if v > 0:
            h -= v * math.log2(v)
    return h


def gain(class_memberships, mu, attr_memberships, t):
    h_node = entropy(proportions(class_memberships, mu, t))
    m = len(attr_memberships[0])
    child_mu = [[t(mu[i], attr_memberships[i][l]) for i in range(len(mu))] for l in range(m)]
    masses = [sum(c) for c in child_mu]
    total = sum(masses)
    weighted = 0.0
    for l in range(m):
        if masses[l] <= 0:
            continue
        den = 0.0
        for i in range(len(mu)):
            for c in range(len(class_memberships[0])):
                den += t(class_memberships[i][c], child_mu[l][i])
        if den <= 0:
            continue
        weighted += masses[l] / total * entropy(proportions(class_memberships, child_mu[l], t))
    return h_node - weighted


# --------------------------------------------------------------------------
# textbook ID3 on categorical data
# --------------------------------------------------------------------------

def _dist(labels, k_count):
    counts = Counter(labels)
    n = len(labels)
    return tuple(counts.get(k, 0) / n for k in range(k_count))


def _h(labels):
    n = len(labels)
    return -sum((c / n) * math.log2(c / n) for c in Counter(labels).values())


def id3(rows, labels, attributes, n_values, k_count, threshold=1.0):
    """Classic ID3. ``rows`` are dicts attr -> value index.

    Returns ('leaf', reason, dist) or ('split', attr, [(value, subtree), ...]);
    children are listed in value order and only for values present.
    """
    dist = _dist(labels, k_count)
    if max(dist) >= threshold:
        return ("leaf", "threshold", dist)
    if not attributes:
        return ("leaf", "attributes-exhausted", dist)
    h = _h(labels)
    gains = []
    for a in attributes:
        rem = 0.0
        for v in range(n_values[a]):
            sub = [labels[i] for i, r in enumerate(rows) if r[a] == v]
            if sub:
                rem += len(sub) / len(rows) * _h(sub)
        gains.append(h - rem)
    top = max(gains)
    best_i = next(i for i, g in enumerate(gains) if g >= top - GAIN_TIE)
    if gains[best_i] < MIN_GAIN:
        return ("leaf", "min-gain", dist)
    best = attributes[best_i]
    rest = [a for a in attributes if a != best]
    children = []
    for v in range(n_values[best]):
        idx = [i for i, r in enumerate(rows) if r[best] == v]
        if idx:
            children.append((v, id3([rows[i] for i in idx], [labels[i] for i in idx], rest, n_values, k_count, threshold)))
    return ("split", best, children)


def id3_classify(tree, row):
    while tree[0] == "split":
        _, attr, children = tree
        tree = dict(children)[row[attr]]
    return tree[2]


# --------------------------------------------------------------------------
# metrics
# --------------------------------------------------------------------------

def metrics(actual, estimated, level=0.25):
    mres = [abs(a - e) / a for a, e in zip(actual, estimated)]
    mmre = 100 * sum(mres) / len(mres)
    k = 0
    for m in mres:
        if m <= level:
            k += 1
    pred = 100 * k / len(mres)
    return mmre, pred


def trapezoid_centroid(a, b, c, d, steps=200000):
    """Center of gravity by midpoint quadrature."""
    def mu(x):
        if b <= x <= c:
            return 1.0
        if x <= a or x >= d:
            return 0.0
        if x < b:
            return (x - a) / (b - a)
        return (d - x) / (d - c)

    h = (d - a) / steps
    num = den = 0.0
    for i in range(steps):
        x = a + (i + 0.5) * h
        m = mu(x)
        num += x * m
        den += m
    return num / den
