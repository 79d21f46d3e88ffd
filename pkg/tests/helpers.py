"""Random decision tables and a brute-force rough-set oracle built from plain sets."""

import itertools

import numpy as np

from rough_elm.rough import DecisionTable


# one "criterion N: PASS|FAIL ..." line per acceptance check, echoed in the terminal summary
ACCEPTANCE_LINES = []


def random_table(rng, max_rows=8, max_attrs=4, max_card=3, max_classes=3):
    n = int(rng.integers(1, max_rows + 1))
    m = int(rng.integers(1, max_attrs + 1))
    cards = rng.integers(1, max_card + 1, size=m)
    cond = np.column_stack([rng.integers(0, c, size=n) for c in cards])
    n_classes = int(rng.integers(1, max_classes + 1))
    dec = rng.integers(0, n_classes, size=n)
    return DecisionTable(cond, dec, cardinalities=tuple(int(c) for c in cards),
                         n_classes=n_classes)


def random_tables(count, seed=2024):
    rng = np.random.default_rng(seed)
    return [random_table(rng) for _ in range(count)]


def all_subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


# ---- brute-force rough-set oracle: pure Python sets, no package code


def oracle_partition(cond, attrs):
    n = len(cond)
    classes = []
    for i in range(n):
        if any(i in c for c in classes):
            continue
        classes.append(frozenset(
            j for j in range(n) if all(cond[i][a] == cond[j][a] for a in attrs)
        ))
    return classes


def oracle_lower_upper(classes, target):
    target = set(target)
    lower, upper = set(), set()
    for c in classes:
        if c <= target:
            lower |= c
        if c & target:
            upper |= c
    return frozenset(lower), frozenset(upper)


def oracle_regions(cond, dec, attrs):
    """(positive set, sum of upper-approximation sizes over decision classes) by enumeration."""
    classes = oracle_partition(cond, attrs) if attrs else [frozenset(range(len(cond)))]
    positive, upper_total = set(), 0
    for d in sorted(set(dec)):
        target = {i for i, v in enumerate(dec) if v == d}
        lo, up = oracle_lower_upper(classes, target)
        positive |= lo
        upper_total += len(up)
    return frozenset(positive), upper_total
