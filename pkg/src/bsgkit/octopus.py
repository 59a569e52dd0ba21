"""Leg and octopus counting on partite hypergraphs.

A leg at part i on a pair (v, w) of distinct part-i vertices is a pair of
edges that agree on every coordinate except i, where they take v and w. Its
count equals a codegree in the bipartite flattening against part i. An
octopus anchored at a support tuple (v_1, ..., v_r) consists of one leg per
part i < r on (v_i, w_i), where (w_1, ..., w_{r-1}, v_r) is itself an edge.

Two counters are provided. The relaxed counter multiplies leg counts over
each closing edge, enforcing only w_i != v_i; it is the counter used by the
extraction bound checks. The exact counter enumerates witnesses and enforces
vertex-disjointness between legs; the "full" mode additionally forbids leg
interior vertices from coinciding with any anchor vertex.

Leg counts are cached per (part, v, w) with symmetric keys; inserts are
idempotent, so the cache is safe under concurrent sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .config import enum_budget
from .errors import (
    BudgetExceededError,
    ConfigInvalidError,
    IndexOutOfRangeError,
    SameVertexError,
)
from .hypergraph import Instance, PartiteHypergraph


def leg_count(h: PartiteHypergraph, part: int, v: int, w: int) -> int:
    """Number of legs at `part` on the distinct pair (v, w)."""
    if v == w:
        raise SameVertexError(f"leg pair needs distinct vertices, got {v} twice")
    h._check_vertex(part, v)
    h._check_vertex(part, w)
    key = (part, v, w) if v < w else (part, w, v)
    cached = h._leg_cache.get(key)
    if cached is None:
        flat = h.flatten(part)
        cached = flat.codegree(v, w)
        h._leg_cache[key] = cached
    return cached


def _check_support(h: PartiteHypergraph, support: Sequence[int]) -> tuple[int, ...]:
    sup = tuple(int(v) for v in support)
    if len(sup) != h.r:
        raise IndexOutOfRangeError(
            f"support has {len(sup)} vertices for arity {h.r}"
        )
    for i, v in enumerate(sup):
        h._check_vertex(i, v)
    return sup


def octopus_count_relaxed(h: PartiteHypergraph, support: Sequence[int]) -> int:
    """Sum over closing edges of the product of leg counts.

    For each edge (w_1, ..., w_{r-1}, v_r) through the last support vertex
    with w_i != v_i for every i, multiplies the leg counts at (v_i, w_i).
    No disjointness between legs is enforced beyond w_i != v_i.
    """
    sup = _check_support(h, support)
    r = h.r
    last = r - 1
    total = 0
    for edge in h.edges_through(last, sup[last]):
        mates = edge[:last]
        if any(mates[i] == sup[i] for i in range(last)):
            continue
        prod = 1
        for i in range(last):
            prod *= leg_count(h, i, sup[i], mates[i])
            if prod == 0:
                break
        total += prod
    return total


def _leg_matrix_row(h: PartiteHypergraph, part: int, v: int) -> list[int]:
    """Row of leg counts from v to every vertex of its part, 0 on the diagonal."""
    flat = h.flatten(part)
    row = []
    mask_v = flat.adj[v]
    for w in range(h.part_sizes[part]):
        row.append(0 if w == v else (mask_v & flat.adj[w]).bit_count())
    return row


def relaxed_count_table(
    h: PartiteHypergraph, subsets: Sequence[Sequence[int]]
) -> dict[tuple[int, ...], int]:
    """Relaxed counts for every support in the product of the given subsets.

    Grouped evaluation: legs-by-row matrices are built once, and closing
    edges are scanned once per last-part vertex. Results equal
    octopus_count_relaxed on each support.
    """
    if len(subsets) != h.r:
        raise IndexOutOfRangeError(f"{len(subsets)} subsets for arity {h.r}")
    subs = [tuple(sorted(set(int(v) for v in sub))) for sub in subsets]
    for i, sub in enumerate(subs):
        for v in sub:
            h._check_vertex(i, v)
    r = h.r
    last = r - 1
    out: dict[tuple[int, ...], int] = {}
    if any(not sub for sub in subs):
        return out
    if r == 2:
        rows = {v: _leg_matrix_row(h, 0, v) for v in subs[0]}
        for v2 in subs[1]:
            mates = [e[0] for e in h.edges_through(1, v2)]
            for v1 in subs[0]:
                row = rows[v1]
                out[(v1, v2)] = sum(row[w] for w in mates)
        return out
    if r == 3:
        rows0 = {v: _leg_matrix_row(h, 0, v) for v in subs[0]}
        rows1 = {v: _leg_matrix_row(h, 1, v) for v in subs[1]}
        for v3 in subs[2]:
            mates_by_w1: dict[int, list[int]] = {}
            for e in h.edges_through(2, v3):
                mates_by_w1.setdefault(e[0], []).append(e[1])
            # inner[w1][v2] = sum of leg counts from v2 to the w2 partners of w1
            inner: dict[int, dict[int, int]] = {}
            for w1, w2s in mates_by_w1.items():
                acc = {}
                for v2 in subs[1]:
                    row = rows1[v2]
                    acc[v2] = sum(row[w2] for w2 in w2s)
                inner[w1] = acc
            for v1 in subs[0]:
                row0 = rows0[v1]
                for v2 in subs[1]:
                    total = 0
                    for w1, acc in inner.items():
                        c0 = row0[w1]
                        if c0:
                            total += c0 * acc[v2]
                    out[(v1, v2, v3)] = total
        return out
    # General arity: fall back to the per-support counter.
    def rec(prefix: tuple[int, ...], depth: int):
        if depth == r:
            out[prefix] = octopus_count_relaxed(h, prefix)
            return
        for v in subs[depth]:
            rec(prefix + (v,), depth + 1)

    rec((), 0)
    return out


@dataclass(frozen=True)
class OctopusWitness:
    """One enumerated octopus: anchors, mates, and per-leg interior tuples.

    ``fills[i]`` lists the interior vertices of the leg at part i, ordered by
    ascending part index over the parts other than i.
    """

    support: tuple[int, ...]
    mates: tuple[int, ...]
    fills: tuple[tuple[int, ...], ...]

    def leg_edges(self, i: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """The two edges of the leg at part i (through v_i and through w_i)."""
        fill = self.fills[i]
        r = len(self.support)
        parts = [j for j in range(r) if j != i]
        base = dict(zip(parts, fill))
        edge_v = tuple(base[j] if j != i else self.support[i] for j in range(r))
        edge_w = tuple(base[j] if j != i else self.mates[i] for j in range(r))
        return edge_v, edge_w

    def closing_edge(self) -> tuple[int, ...]:
        return self.mates + (self.support[-1],)

    def all_edges(self) -> list[tuple[int, ...]]:
        out = []
        for i in range(len(self.mates)):
            ev, ew = self.leg_edges(i)
            out.append(ev)
            out.append(ew)
        out.append(self.closing_edge())
        return out

    def representation_sums(self, inst: Instance):
        """Edge sums (xs, ys, z) with sum(support elems) = sum(xs) - sum(ys) + z."""
        spec = inst.spec
        xs = []
        ys = []
        for i in range(len(self.mates)):
            ev, ew = self.leg_edges(i)
            xs.append(inst.edge_sum(ev))
            ys.append(inst.edge_sum(ew))
        z = inst.edge_sum(self.closing_edge())
        return tuple(xs), tuple(ys), z


_MODES = ("named-only", "full")


def _fill_candidates(
    h: PartiteHypergraph, part: int, v: int, w: int
) -> list[tuple[int, ...]]:
    """Interior tuples completing a leg at `part` on (v, w), as labels over
    the other parts in ascending part order."""
    flat = h.flatten(part)
    mask = flat.adj[v] & flat.adj[w]
    fills = []
    while mask:
        low = mask & -mask
        fills.append(flat.right_label(low.bit_length() - 1))
        mask ^= low
    return fills


def enumerate_octopus_witnesses(
    h: PartiteHypergraph,
    support: Sequence[int],
    mode: str = "named-only",
    budget: int | None = None,
) -> Iterator[OctopusWitness]:
    """Yield every octopus witness at the support under the given mode.

    named-only: anchors and mates are distinct and legs are pairwise
    vertex-disjoint; a leg interior vertex in the last part may coincide
    with the last anchor. full: additionally forbids that coincidence.
    Raises BudgetExceededError before enumerating if the candidate estimate
    exceeds the budget.
    """
    if mode not in _MODES:
        raise ConfigInvalidError(f"mode must be one of {_MODES}, got {mode!r}")
    sup = _check_support(h, support)
    r = h.r
    last = r - 1
    cap = enum_budget(budget)

    mate_edges = []
    for edge in h.edges_through(last, sup[last]):
        mates = edge[:last]
        if all(mates[i] != sup[i] for i in range(last)):
            mate_edges.append(mates)

    # Estimate: product of leg counts per closing edge, before disjointness.
    estimate = 0
    for mates in mate_edges:
        prod = 1
        for i in range(last):
            prod *= leg_count(h, i, sup[i], mates[i])
            if prod == 0:
                break
        estimate += prod
        if estimate > cap:
            raise BudgetExceededError(estimate, cap)

    other_parts = {i: [j for j in range(r) if j != i] for i in range(last)}

    for mates in mate_edges:
        fill_sets = []
        empty = False
        for i in range(last):
            fills = _fill_candidates(h, i, sup[i], mates[i])
            if not fills:
                empty = True
                break
            fill_sets.append(fills)
        if empty:
            continue
        used: list[set[int]] = [set() for _ in range(r)]
        for j in range(last):
            used[j].update((sup[j], mates[j]))
        if mode == "full":
            used[last].add(sup[last])
        order = sorted(range(last), key=lambda i: len(fill_sets[i]))
        chosen: list[tuple[int, ...] | None] = [None] * last

        def dfs(k: int) -> Iterator[OctopusWitness]:
            if k == last:
                yield OctopusWitness(sup, mates, tuple(chosen[i] for i in range(last)))
                return
            leg = order[k]
            parts = other_parts[leg]
            for fill in fill_sets[leg]:
                if any(fill[t] in used[parts[t]] for t in range(len(parts))):
                    continue
                for t, p in enumerate(parts):
                    used[p].add(fill[t])
                chosen[leg] = fill
                yield from dfs(k + 1)
                for t, p in enumerate(parts):
                    used[p].discard(fill[t])
            chosen[leg] = None

        yield from dfs(0)


def octopus_count_exact(
    h: PartiteHypergraph,
    support: Sequence[int],
    mode: str = "named-only",
    budget: int | None = None,
) -> int:
    """Exact number of octopus witnesses at the support under the given mode."""
    return sum(1 for _ in enumerate_octopus_witnesses(h, support, mode, budget))


def eps_good_threshold(
    r: int, part: int, eps: Fraction, k: Fraction, ambient_sizes: Sequence[int]
) -> Fraction:
    """Leg-count floor for a good pair in `part` (0-based) at quality eps.

    The floor is eps / (2^(r^2) * k^(part+2)) times the product of the
    ambient sizes of the other parts; ambient sizes are the original part
    sizes of the run, not the current filtered sizes.
    """
    if len(ambient_sizes) != r:
        raise ConfigInvalidError(f"{len(ambient_sizes)} ambient sizes for arity {r}")
    prod = 1
    for j, s in enumerate(ambient_sizes):
        if j != part:
            prod *= s
    return Fraction(eps) * prod / (2 ** (r * r) * Fraction(k) ** (part + 2))


def is_eps_good(
    h: PartiteHypergraph,
    part: int,
    v: int,
    w: int,
    eps: Fraction,
    k: Fraction,
    ambient_sizes: Sequence[int],
) -> bool:
    """Whether the distinct pair (v, w) clears the leg-count floor."""
    if v == w:
        raise SameVertexError(f"pair needs distinct vertices, got {v} twice")
    if not 0 < eps < 1:
        raise ConfigInvalidError(f"eps must lie in (0, 1), got {eps}")
    if k < 1:
        raise ConfigInvalidError(f"density parameter must be >= 1, got {k}")
    threshold = eps_good_threshold(h.r, part, eps, k, ambient_sizes)
    return leg_count(h, part, v, w) >= threshold


def is_good_vertex(
    h: PartiteHypergraph,
    part: int,
    v: int,
    u_set: Sequence[int],
    eps: Fraction,
    eps_prime: Fraction,
    k: Fraction,
    ambient_sizes: Sequence[int],
) -> bool:
    """Whether v forms good pairs with at least a (1 - eps_prime) fraction of u_set.

    Partners are counted over u_set excluding v itself.
    """
    if not 0 <= eps_prime < 1:
        raise ConfigInvalidError(f"eps_prime must lie in [0, 1), got {eps_prime}")
    good = 0
    for w in u_set:
        if w == v:
            continue
        if is_eps_good(h, part, v, w, eps, k, ambient_sizes):
            good += 1
    return good >= (1 - Fraction(eps_prime)) * len(u_set)
