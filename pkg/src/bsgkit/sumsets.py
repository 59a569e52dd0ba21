"""Finite subsets of a group: sumsets, doubling, additive energy, and
signed representation counting.

Every quantity here is exact. Energy and representation counts are computed
through integer histograms (sum-representation functions), never floats, and
counters are Python ints so they cannot overflow.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Sequence

from .config import conv_cell_cap
from .errors import EmptySetError, SpecMismatchError, UnsupportedGroupError
from .groups import GroupElem, GroupSpec, elem_from_json, elem_to_json

if TYPE_CHECKING:  # pragma: no cover
    from .hypergraph import Instance


@dataclass(frozen=True)
class ElemSet:
    """Deduplicated set of group elements stored in lexicographic order."""

    spec: GroupSpec
    elems: tuple[GroupElem, ...]

    @classmethod
    def from_iterable(cls, spec: GroupSpec, items: Iterable[Sequence[int]]) -> "ElemSet":
        canon = {spec.canon(tuple(e)) for e in items}
        return cls(spec, tuple(sorted(canon)))

    @cached_property
    def _as_set(self) -> frozenset:
        return frozenset(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, elem) -> bool:
        return elem in self._as_set

    def to_json(self) -> list:
        return [elem_to_json(e) for e in self.elems]

    @classmethod
    def from_json(cls, spec: GroupSpec, data: Sequence) -> "ElemSet":
        return cls.from_iterable(spec, (elem_from_json(spec, e) for e in data))


@dataclass(frozen=True)
class SumStats:
    """Exact sumset statistics of one set: |A+A|, |A+A|/|A|, energy."""

    sumset_size: int
    doubling: Fraction
    energy: int


def _require_same_spec(a: ElemSet, b: ElemSet) -> None:
    if a.spec != b.spec:
        raise SpecMismatchError("sets belong to different groups")


def sumset(a: ElemSet, b: ElemSet) -> ElemSet:
    """All pairwise sums x + y with x in a, y in b."""
    _require_same_spec(a, b)
    spec = a.spec
    out = {spec.add(x, y) for x in a.elems for y in b.elems}
    return ElemSet(spec, tuple(sorted(out)))


def iterated_sumset(sets: Sequence[ElemSet]) -> ElemSet:
    """Left fold of sumset over one or more sets."""
    if not sets:
        raise EmptySetError("iterated sumset needs at least one set")
    acc = sets[0]
    for nxt in sets[1:]:
        acc = sumset(acc, nxt)
    return acc


def sum_histogram(a: ElemSet) -> Counter:
    """Counter mapping s to the number of ordered pairs (x, y) in a^2 with x+y = s."""
    spec = a.spec
    hist: Counter = Counter()
    for x in a.elems:
        for y in a.elems:
            hist[spec.add(x, y)] += 1
    return hist


def additive_energy(a: ElemSet) -> int:
    """Ordered quadruples (x, y, x', y') in a^4 with x + y = x' + y'."""
    return sum(c * c for c in sum_histogram(a).values())


def doubling_constant(a: ElemSet) -> Fraction:
    """|A+A| / |A| as an exact rational."""
    if len(a) == 0:
        raise EmptySetError("doubling constant of the empty set")
    return Fraction(len(sumset(a, a)), len(a))


def sum_stats(a: ElemSet) -> SumStats:
    if len(a) == 0:
        raise EmptySetError("statistics of the empty set")
    double = sumset(a, a)
    return SumStats(
        sumset_size=len(double),
        doubling=Fraction(len(double), len(a)),
        energy=additive_energy(a),
    )


def restricted_sumset(inst: "Instance") -> ElemSet:
    """Sums over edges of the instance hypergraph only."""
    spec = inst.spec
    parts = inst.parts
    out = set()
    for edge in inst.hypergraph.edges:
        out.add(spec.sum(parts[i].elems[v] for i, v in enumerate(edge)))
    return ElemSet(spec, tuple(sorted(out)))


def _free_box_cells(spec: GroupSpec, elems: Sequence[GroupElem], r: int) -> int:
    """Cell count of the bounding box of all signed (2r-1)-term sums."""
    cells = 1
    for j, m in enumerate(spec.moduli):
        if m:
            cells *= m
        else:
            lo = min(e[j] for e in elems)
            hi = max(e[j] for e in elems)
            # r positive terms and r-1 negated terms span this interval width.
            cells *= (2 * r - 1) * (hi - lo) + 1
    return cells


def _convolve(spec: GroupSpec, acc: dict, hist: dict) -> dict:
    out: dict = {}
    add = spec.add
    for ea, ca in acc.items():
        for eb, cb in hist.items():
            key = add(ea, eb)
            out[key] = out.get(key, 0) + ca * cb
    return out


def representation_table(
    spec: GroupSpec,
    s_set: ElemSet | Iterable[GroupElem],
    r: int,
    cell_cap: int | None = None,
) -> dict[GroupElem, int]:
    """Histogram of c_1 + ... + c_{r-1} - c_r - ... - c_{2r-2} + c_{2r-1}
    over all (2r-1)-tuples from the given set.

    Computed by r plus-convolutions and r-1 minus-convolutions of the set's
    indicator histogram. Raises UnsupportedGroupError when free coordinates
    make the bounding box of attainable sums exceed the cell cap.
    """
    if r < 2:
        raise ValueError(f"arity must be >= 2, got {r}")
    if isinstance(s_set, ElemSet):
        if s_set.spec != spec:
            raise SpecMismatchError("set belongs to a different group")
        elems = list(s_set.elems)
    else:
        elems = sorted({spec.canon(tuple(e)) for e in s_set})
    if not elems:
        return {}
    if any(m == 0 for m in spec.moduli):
        cap = conv_cell_cap(cell_cap)
        cells = _free_box_cells(spec, elems, r)
        if cells > cap:
            raise UnsupportedGroupError(
                f"convolution bounding box has {cells} cells, cap is {cap}"
            )
    plus = {e: 1 for e in elems}
    minus = {spec.neg(e): 1 for e in elems}
    acc = {spec.identity(): 1}
    for _ in range(r - 1):
        acc = _convolve(spec, acc, plus)
    for _ in range(r - 1):
        acc = _convolve(spec, acc, minus)
    return _convolve(spec, acc, plus)


def representation_count(
    spec: GroupSpec,
    s_set: ElemSet | Iterable[GroupElem],
    s: GroupElem,
    r: int,
    cell_cap: int | None = None,
) -> int:
    """Number of (2r-1)-tuples from the set whose signed sum equals s."""
    table = representation_table(spec, s_set, r, cell_cap=cell_cap)
    return table.get(spec.canon(tuple(s)), 0)
