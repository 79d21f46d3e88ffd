"""Decision tables and rough-set computations.

Attribute subsets are plain sequences of condition-attribute indices.
Dependency degree and approximation precision are returned as exact
``Fraction`` values so the reduction loop compares them without any
floating-point threshold.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _accel
from .errors import AttrAlreadyInBase, EmptyAttrSet, IndexOutOfRange, SchemaMismatch


@dataclass(frozen=True, eq=False)
class DecisionTable:
    """Category-coded condition matrix plus a decision column.

    ``cardinalities[a]`` bounds the codes of attribute ``a``; ``n_classes``
    bounds the decision codes. Both default to ``max + 1`` of the data.
    """

    condition_values: np.ndarray
    decision_values: np.ndarray
    attribute_names: tuple = ()
    class_labels: tuple = ()
    cardinalities: tuple = ()
    n_classes: int = 0

    def __post_init__(self):
        cond = np.array(self.condition_values, dtype=np.int64, copy=True)
        dec = np.array(self.decision_values, dtype=np.int64, copy=True).ravel()
        if cond.ndim != 2:
            raise SchemaMismatch("condition_values must be a 2-D matrix")
        n_rows, n_cond = cond.shape
        if n_rows < 1 or n_cond < 1:
            raise SchemaMismatch("decision table needs at least one row and one attribute")
        if dec.shape[0] != n_rows:
            raise SchemaMismatch(f"{dec.shape[0]} decisions for {n_rows} rows")
        if cond.min() < 0 or dec.min() < 0:
            raise SchemaMismatch("category codes must be non-negative")

        cards = tuple(int(c) for c in self.cardinalities) or tuple(
            int(v) + 1 for v in cond.max(axis=0)
        )
        if len(cards) != n_cond or np.any(cond.max(axis=0) >= np.asarray(cards)):
            raise SchemaMismatch("condition code exceeds attribute cardinality")
        n_classes = int(self.n_classes) or int(dec.max()) + 1
        if dec.max() >= n_classes:
            raise SchemaMismatch("decision code exceeds n_classes")

        names = tuple(self.attribute_names) or tuple(f"a{j}" for j in range(n_cond))
        if len(names) != n_cond:
            raise SchemaMismatch("attribute_names length differs from attribute count")
        labels = tuple(self.class_labels) or tuple(str(k) for k in range(n_classes))

        cond.setflags(write=False)
        dec.setflags(write=False)
        object.__setattr__(self, "condition_values", cond)
        object.__setattr__(self, "decision_values", dec)
        object.__setattr__(self, "cardinalities", cards)
        object.__setattr__(self, "n_classes", n_classes)
        object.__setattr__(self, "attribute_names", names)
        object.__setattr__(self, "class_labels", labels)

    @property
    def n_rows(self):
        return self.condition_values.shape[0]

    @property
    def n_cond(self):
        return self.condition_values.shape[1]

    def project(self, attrs):
        """Table restricted to the condition attributes ``attrs`` (in that order)."""
        attrs = _check_attrs(self, attrs)
        return DecisionTable(
            self.condition_values[:, list(attrs)],
            self.decision_values,
            tuple(self.attribute_names[a] for a in attrs),
            self.class_labels,
            tuple(self.cardinalities[a] for a in attrs),
            self.n_classes,
        )

    def take_rows(self, rows):
        rows = np.asarray(rows, dtype=np.int64)
        return DecisionTable(
            self.condition_values[rows],
            self.decision_values[rows],
            self.attribute_names,
            self.class_labels,
            self.cardinalities,
            self.n_classes,
        )


@dataclass(frozen=True, eq=False)
class Partition:
    """Equivalence classes U/IND(B).

    ``class_of[i]`` is the class id of row ``i``; ids are dense and ordered by
    the smallest row in each class.
    """

    class_of: np.ndarray
    n_classes: int

    @property
    def n_rows(self):
        return self.class_of.shape[0]

    @property
    def classes(self):
        order = np.argsort(self.class_of, kind="stable")
        bounds = np.cumsum(np.bincount(self.class_of, minlength=self.n_classes))[:-1]
        return [frozenset(int(i) for i in block) for block in np.split(order, bounds)]


@dataclass(frozen=True)
class RegionReport:
    positive: frozenset
    boundary: frozenset
    negative: frozenset
    gamma: Fraction
    alpha: Fraction


@dataclass(frozen=True)
class Reduct:
    """Selected attribute indices in selection order; ``fallback`` marks the full-set return."""

    members: tuple
    fallback: bool = False
    gamma: Fraction = field(default=Fraction(0))

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


def _check_attrs(table, attrs):
    attrs = tuple(int(a) for a in attrs)
    for a in attrs:
        if not 0 <= a < table.n_cond:
            raise IndexOutOfRange(f"attribute index {a} outside [0, {table.n_cond})")
    if len(set(attrs)) != len(attrs):
        raise SchemaMismatch(f"duplicate attribute index in {attrs}")
    return attrs


def partition_trivial(table):
    return Partition(np.zeros(table.n_rows, dtype=np.int64), 1)


def _refine_by(table, part, attrs):
    class_of, n = part.class_of, part.n_classes
    for a in attrs:
        class_of, n = _accel.refine(
            class_of, n, table.condition_values[:, a], table.cardinalities[a]
        )
    return Partition(class_of, n)


def partition(table, attrs):
    """U/IND(attrs): rows share a class iff they agree on every attribute in ``attrs``."""
    attrs = _check_attrs(table, attrs)
    if not attrs:
        raise EmptyAttrSet("partition() needs at least one attribute; use partition_trivial()")
    return _refine_by(table, partition_trivial(table), attrs)


def lower_upper(part, target):
    target = np.fromiter((int(i) for i in target), dtype=np.int64)
    if target.size and (target.min() < 0 or target.max() >= part.n_rows):
        raise IndexOutOfRange("target rows outside the universe")
    in_target = np.zeros(part.n_rows, dtype=bool)
    in_target[target] = True
    sizes = np.bincount(part.class_of, minlength=part.n_classes)
    hits = np.bincount(part.class_of[in_target], minlength=part.n_classes)
    full = (hits == sizes)[part.class_of]
    touched = (hits > 0)[part.class_of]
    return _rows(full), _rows(touched)


def _rows(mask):
    return frozenset(int(i) for i in np.flatnonzero(mask))


def _counts(table, part):
    """(|POS|, sum over decision classes of |upper approximation|, positive mask)."""
    sizes, distinct = _accel.class_stats(
        part.class_of, part.n_classes, table.decision_values, table.n_classes
    )
    pure = distinct == 1
    n_pos = int(sizes[pure].sum())
    upper_total = int((sizes * distinct).sum())
    return n_pos, upper_total, pure


def positive_count(table, attrs):
    """|POS_attrs(D)| as an int; the cheap path used by the reduction loop."""
    attrs = _check_attrs(table, attrs)
    part = _refine_by(table, partition_trivial(table), attrs)
    return _counts(table, part)[0]


def positive_mask(table, attrs):
    """Boolean row mask of POS_attrs(D)."""
    attrs = _check_attrs(table, attrs)
    part = _refine_by(table, partition_trivial(table), attrs)
    return _counts(table, part)[2][part.class_of]


def gamma(table, attrs):
    return Fraction(positive_count(table, attrs), table.n_rows)


def regions(table, attrs):
    attrs = _check_attrs(table, attrs)
    part = _refine_by(table, partition_trivial(table), attrs)
    n_pos, upper_total, pure = _counts(table, part)
    pos_mask = pure[part.class_of]
    alpha = Fraction(n_pos, upper_total) if n_pos else Fraction(0)
    return RegionReport(
        positive=_rows(pos_mask),
        boundary=_rows(~pos_mask),
        # decision classes cover U, so the union of upper approximations is U
        negative=frozenset(),
        gamma=Fraction(n_pos, table.n_rows),
        alpha=alpha,
    )


def significance(table, a, base):
    base = _check_attrs(table, base)
    (a,) = _check_attrs(table, [a])
    if a in base:
        raise AttrAlreadyInBase(f"attribute {a} already in base {base}")
    return gamma(table, base + (a,)) - gamma(table, base)


def reduce(table):
    """Greedy forward selection by significance, then a backward pruning pass.

    Ties go to the lowest attribute index. If the full attribute set has zero
    dependency, or selection ends empty, the full set is returned with
    ``fallback=True``. Members are returned in ascending index order.
    """
    n = table.n_rows
    all_attrs = tuple(range(table.n_cond))
    full_pos = positive_count(table, all_attrs)
    if full_pos == 0:
        return Reduct(all_attrs, fallback=True, gamma=Fraction(0))

    chosen = []
    part = partition_trivial(table)
    cur_pos = _counts(table, part)[0]
    while cur_pos < full_pos:
        best_a, best_pos, best_part = -1, -1, None
        for a in all_attrs:
            if a in chosen:
                continue
            cand = _refine_by(table, part, [a])
            pos = _counts(table, cand)[0]
            if pos > best_pos:
                best_a, best_pos, best_part = a, pos, cand
        chosen.append(best_a)
        part, cur_pos = best_part, best_pos

    for a in list(chosen):
        rest = [b for b in chosen if b != a]
        if positive_count(table, rest) >= cur_pos:
            chosen = rest

    if not chosen:
        return Reduct(all_attrs, fallback=True, gamma=Fraction(full_pos, n))
    return Reduct(tuple(sorted(chosen)), fallback=False, gamma=Fraction(cur_pos, n))

