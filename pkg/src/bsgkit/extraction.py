"""Constructive extraction pipelines.

The pipelines select large index subsets of each part so that every support
tuple across the chosen subsets carries many octopuses, then bound the
sumset of the chosen subsets through exact inequality reports. All
thresholds are exact rationals compared exactly; nothing is rounded.

The neighborhood selection step is deterministic: pivots are scanned in
descending degree (ties by index) and repaired by greedy deletion, then the
claimed conditions are verified before returning. Identical inputs always
produce identical traces and subsets.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .config import (
    DEFAULT_EXHAUSTIVE_CAP,
    DEFAULT_SAMPLE_COUNT,
    SUPPORT_SAMPLE_SEED,
)
from .errors import (
    ConfigInvalidError,
    DensityTooLowError,
    EmptyPartError,
    EpsilonTooLargeError,
    HypothesisViolatedError,
    InfeasibleEpsilonError,
    NoWitnessError,
    UnequalPartsError,
)
from .hypergraph import Bipartite, Instance, PartiteHypergraph
from .jsonio import frac_str, parse_fraction
from .octopus import (
    eps_good_threshold,
    leg_count,
    octopus_count_relaxed,
    relaxed_count_table,
)
from .report import BoundReport, Inequality, check_eq, check_ge, check_le
from .rng import SplitMix64
from .sumsets import iterated_sumset, restricted_sumset


@dataclass(frozen=True)
class DrcOutcome:
    """A verified neighborhood: the pivot, the left subset, and the exact
    thresholds it was checked against."""

    pivot: int
    repaired: bool
    deletions: int
    u: tuple[int, ...]
    bad_pair_fraction: Fraction
    codegree_threshold: Fraction
    size_floor: Fraction


@dataclass(frozen=True)
class IterateOutcome:
    """Result of one prune-then-select round on a single part.

    ``pruned`` is the bipartite view after low-degree pruning: left vertices
    are the survivors in order, the right side is the untouched product of
    the other parts.
    """

    part: int
    u: tuple[int, ...]
    survivors: tuple[int, ...]
    z_size: int
    k_prime: Fraction
    degree_floor: Fraction
    leg_threshold: Fraction
    good_fraction: Fraction
    drc: DrcOutcome
    pruned: Bipartite


@dataclass(frozen=True)
class ExtractionResult:
    """Chosen index subsets plus the ordered trace of every stage."""

    mode: str
    subsets: tuple[tuple[int, ...], ...]
    epsilon: Fraction | None
    trace: tuple[dict, ...]

    def __post_init__(self):
        for i, sub in enumerate(self.subsets):
            if not sub:
                raise NoWitnessError(f"chosen subset for part {i} is empty")

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.subsets)

    def trace_entry(self, kind: str) -> dict:
        for entry in self.trace:
            if entry.get("kind") == kind:
                return entry
        raise KeyError(f"no trace entry of kind {kind!r}")

    def to_json(self) -> dict:
        return {
            "epsilon": None if self.epsilon is None else frac_str(self.epsilon),
            "mode": self.mode,
            "subsets": [list(s) for s in self.subsets],
            "trace": list(self.trace),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExtractionResult":
        eps = data.get("epsilon")
        return cls(
            mode=data["mode"],
            subsets=tuple(tuple(int(v) for v in s) for s in data["subsets"]),
            epsilon=None if eps is None else parse_fraction(eps),
            trace=tuple(data.get("trace", [])),
        )


@dataclass(frozen=True)
class SweepOutcome:
    """Minimum relaxed count over verified supports and the floor used."""

    threshold: Fraction
    exhaustive: bool
    checked: int
    min_count: int
    min_support: tuple[int, ...]
    failing_supports: tuple[tuple[int, ...], ...]

    @property
    def failures(self) -> int:
        return len(self.failing_supports)

    @property
    def all_pass(self) -> bool:
        return self.failures == 0

    def to_trace(self) -> dict:
        return {
            "kind": "count-verify",
            "threshold": frac_str(self.threshold),
            "exhaustive": self.exhaustive,
            "checked": self.checked,
            "min_count": str(self.min_count),
            "min_support": list(self.min_support),
            "failures": self.failures,
        }


def _support_product(subsets: Sequence[Sequence[int]]) -> Iterable[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]
    for sub in subsets:
        out = [p + (v,) for p in out for v in sub]
    return out


def verify_relaxed_counts(
    h: PartiteHypergraph,
    subsets: Sequence[Sequence[int]],
    threshold: Fraction,
    *,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    seed: int = SUPPORT_SAMPLE_SEED,
    workers: int = 1,
) -> SweepOutcome:
    """Check the relaxed count floor over all supports, or a fixed-seed sample
    when the product exceeds the exhaustion cap.

    The sample sequence depends only on the seed and the subset sizes, so
    reports are byte-identical across runs and worker counts.
    """
    subs = [tuple(sub) for sub in subsets]
    if any(not sub for sub in subs):
        raise EmptyPartError("cannot verify over an empty subset")
    total = math.prod(len(s) for s in subs)
    exhaustive = total <= exhaustive_cap
    if exhaustive:
        supports = list(_support_product(subs))
    else:
        rng = SplitMix64(seed)
        supports = [
            tuple(sub[rng.next_below(len(sub))] for sub in subs)
            for _ in range(sample_count)
        ]

    if exhaustive and workers <= 1:
        table = relaxed_count_table(h, subs)
        counts = [table[s] for s in supports]
    elif workers <= 1:
        counts = [octopus_count_relaxed(h, s) for s in supports]
    else:
        chunk = (len(supports) + workers - 1) // workers
        blocks = [supports[i : i + chunk] for i in range(0, len(supports), chunk)]

        def run(block):
            return [octopus_count_relaxed(h, s) for s in block]

        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = [c for block in pool.map(run, blocks) for c in block]

    min_count = None
    min_support = None
    failing: list[tuple[int, ...]] = []
    for sup, count in zip(supports, counts):
        if min_count is None or count < min_count:
            min_count = count
            min_support = sup
        if count < threshold:
            failing.append(sup)
    assert min_count is not None and min_support is not None
    return SweepOutcome(
        threshold=threshold,
        exhaustive=exhaustive,
        checked=len(supports),
        min_count=min_count,
        min_support=min_support,
        failing_supports=tuple(failing),
    )


def _shuffled(count: int, seed: int) -> list[int]:
    order = list(range(count))
    rng = SplitMix64(seed)
    for i in range(count - 1, 0, -1):
        j = rng.next_below(i + 1)
        order[i], order[j] = order[j], order[i]
    return order


def drc_extract(
    g: Bipartite, k: Fraction, eps: Fraction, pivot_seed: int | None = None
) -> DrcOutcome:
    """Find a left subset in which almost all ordered pairs have high codegree.

    Requires edge count >= left*right/k. Scans right pivots in descending
    degree (ties by index), starts from the pivot's neighborhood, and while
    the subset stays above its size floor deletes the vertex participating
    in the most bad ordered pairs. Both claimed conditions are verified
    before returning; ordered pairs include (v, v), whose codegree is the
    degree of v. pivot_seed switches the scan to a seeded random order, for
    scale experiments; results are still verified and deterministic per seed.
    """
    k = Fraction(k)
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ConfigInvalidError(f"eps must lie in (0, 1), got {eps}")
    if k <= 0:
        raise ConfigInvalidError(f"density parameter must be positive, got {k}")
    a_size = g.left_size
    b_size = g.right_size
    if Fraction(g.edge_count) < Fraction(a_size * b_size) / k:
        raise DensityTooLowError(
            f"{g.edge_count} edges is below {a_size}*{b_size}/{k}"
        )
    size_floor = Fraction(a_size) / (2 * k)
    cothreshold = eps * b_size / (2 * k * k)

    if a_size == 0:
        return DrcOutcome(-1, False, 0, (), Fraction(0), cothreshold, size_floor)

    if pivot_seed is None:
        order = sorted(range(b_size), key=lambda z: (-g.right_degree(z), z))
    else:
        order = _shuffled(b_size, pivot_seed)
    for pivot in order:
        u = g.left_neighbors(pivot)
        deletions = 0
        while Fraction(len(u)) >= size_floor:
            row_bad = [
                sum(1 for w in u if g.codegree(v, w) < cothreshold) for v in u
            ]
            bad = sum(row_bad)
            pairs = len(u) * len(u)
            if Fraction(bad) <= eps * pairs:
                fraction = Fraction(bad, pairs) if pairs else Fraction(0)
                return DrcOutcome(
                    pivot=pivot,
                    repaired=deletions > 0,
                    deletions=deletions,
                    u=tuple(u),
                    bad_pair_fraction=fraction,
                    codegree_threshold=cothreshold,
                    size_floor=size_floor,
                )
            if Fraction(len(u)) <= size_floor:
                break
            worst = None
            worst_score = -1
            for idx, v in enumerate(u):
                diag = 1 if g.codegree(v, v) < cothreshold else 0
                score = 2 * row_bad[idx] - diag
                if score > worst_score:
                    worst_score = score
                    worst = v
            u.remove(worst)
            deletions += 1
    raise NoWitnessError(
        "no pivot produced a verified subset; the density precondition was "
        "violated or the density parameter was understated"
    )


def iterate_extract(
    h: PartiteHypergraph,
    part: int,
    k: Fraction,
    eps: Fraction,
    pivot_seed: int | None = None,
) -> IterateOutcome:
    """Prune low-degree vertices of one part, then select a verified subset.

    Flattens against `part`, keeps vertices of degree at least |Z|/(2k),
    reruns the density parameter exactly on the pruned graph, and applies
    drc_extract. The returned subset satisfies, and is checked against:
    size at least |part|/(4k), at least a (1 - eps) fraction of ordered
    pairs with leg count at least eps|Z|/(2k^2), and minimum degree at
    least |Z|/(2k).
    """
    k = Fraction(k)
    eps = Fraction(eps)
    h._check_part(part)
    if any(s == 0 for s in h.part_sizes):
        raise EmptyPartError("all parts must be non-empty")
    total = h.total_tuples
    if Fraction(h.edge_count) < Fraction(total) / k:
        raise DensityTooLowError(
            f"{h.edge_count} edges is below {total}/{k}"
        )
    flat = h.flatten(part)
    z_size = flat.right_size
    degree_floor = Fraction(z_size) / (2 * k)
    survivors = [
        v for v in range(h.part_sizes[part]) if flat.degree(v) >= degree_floor
    ]
    e_prime = sum(flat.degree(v) for v in survivors)
    if not survivors or e_prime == 0:
        raise NoWitnessError("pruning removed every vertex; precondition violated")
    k_prime = Fraction(len(survivors) * z_size, e_prime)
    g_prime = Bipartite(
        len(survivors), flat.right_shape, tuple(flat.adj[v] for v in survivors)
    )
    drc = drc_extract(g_prime, k_prime, eps, pivot_seed=pivot_seed)
    u = tuple(sorted(survivors[i] for i in drc.u))

    if Fraction(len(u)) < Fraction(h.part_sizes[part]) / (4 * k):
        raise NoWitnessError("selected subset is below its size floor")
    leg_threshold = eps * z_size / (2 * k * k)
    pairs = len(u) * len(u)
    good = sum(
        1
        for v in u
        for w in u
        if flat.codegree(v, w) >= leg_threshold
    )
    if Fraction(good) < (1 - eps) * pairs:
        raise NoWitnessError("good ordered-pair fraction fell below 1 - eps")
    if any(flat.degree(v) < degree_floor for v in u):
        raise NoWitnessError("a selected vertex is below the degree floor")
    return IterateOutcome(
        part=part,
        u=u,
        survivors=tuple(survivors),
        z_size=z_size,
        k_prime=k_prime,
        degree_floor=degree_floor,
        leg_threshold=leg_threshold,
        good_fraction=Fraction(good, pairs),
        drc=drc,
        pruned=g_prime,
    )


def _derived_eps(r: int, k: Fraction) -> Fraction:
    return Fraction(1) / ((r - 1) * 2 ** (r + 3) * k)


def octopus_extract(
    inst: Instance,
    k: Fraction,
    *,
    workers: int = 1,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    pivot_seed: int | None = None,
) -> ExtractionResult:
    """Select per-part subsets so that every support carries many octopuses.

    Runs one prune-and-select round per part below the last, each followed by
    a partner filter that keeps vertices forming good pairs with all but a
    2*eps fraction of the selected set, then keeps last-part vertices of high
    degree in the filtered hypergraph. Partner counting treats the vertex
    itself as a good partner, so the kept set is exactly the set whose bad
    partner count is at most 2*eps times the selected size.

    After selection, the relaxed count of every support (or a fixed-seed
    sample above the exhaustion cap) is verified against the derived floor
    and recorded in the trace.
    """
    h = inst.hypergraph
    r = inst.r
    k = Fraction(k)
    if k < 1:
        raise ConfigInvalidError(f"density parameter must be >= 1, got {k}")
    if any(s == 0 for s in h.part_sizes):
        raise EmptyPartError("all parts must be non-empty")
    total = h.total_tuples
    if Fraction(h.edge_count) < Fraction(total) / k:
        raise DensityTooLowError(f"{h.edge_count} edges is below {total}/{k}")
    ambient = h.part_sizes
    eps = _derived_eps(r, k)
    if eps >= Fraction(1, 4):
        raise InfeasibleEpsilonError(f"derived eps {eps} is not below 1/4")

    ambient_entry = {
        "kind": "ambient",
        "mode": "general",
        "sizes": list(ambient),
        "k": frac_str(k),
        "epsilon": frac_str(eps),
    }
    if pivot_seed is not None:
        ambient_entry["pivot_seed"] = pivot_seed
    trace: list[dict] = [ambient_entry]
    cur_maps: list[tuple[int, ...]] = [tuple(range(s)) for s in ambient]
    h_cur = h
    subsets: list[tuple[int, ...] | None] = [None] * r

    for stage in range(r - 1):
        p = stage
        k_param = (2**stage) * k
        it = iterate_extract(h_cur, p, k_param, eps, pivot_seed=pivot_seed)
        local_map = cur_maps[p]
        a_tilde = sorted(local_map[v] for v in it.u)
        trace.append(
            {
                "kind": "prune",
                "part": p,
                "degree_floor": frac_str(it.degree_floor),
                "survivors": sorted(local_map[v] for v in it.survivors),
            }
        )
        trace.append(
            {
                "kind": "drc",
                "part": p,
                "k_param": frac_str(k_param),
                "k_prime": frac_str(it.k_prime),
                "pivot": it.drc.pivot,
                "repaired": it.drc.repaired,
                "deletions": it.drc.deletions,
                "codegree_threshold": frac_str(it.drc.codegree_threshold),
                "bad_pair_fraction": frac_str(it.drc.bad_pair_fraction),
                "leg_threshold": frac_str(it.leg_threshold),
                "good_fraction": frac_str(it.good_fraction),
                "selected": list(a_tilde),
            }
        )

        leg_floor = eps_good_threshold(r, p, eps, k, ambient)
        partner_cap = 2 * eps * len(a_tilde)
        kept = []
        a_tilde_list = list(a_tilde)
        for v in a_tilde_list:
            bad = 0
            for w in a_tilde_list:
                if w != v and leg_count(h, p, v, w) < leg_floor:
                    bad += 1
            if Fraction(bad) <= partner_cap:
                kept.append(v)
        if not kept:
            raise NoWitnessError(f"partner filter emptied part {p}")
        trace.append(
            {
                "kind": "markov",
                "part": p,
                "leg_floor": frac_str(leg_floor),
                "partner_cap": frac_str(partner_cap),
                "candidates": list(a_tilde_list),
                "kept": list(kept),
            }
        )
        subsets[p] = tuple(kept)

        kept_set = set(kept)
        kept_local = [
            i for i, orig in enumerate(cur_maps[p]) if orig in kept_set
        ]
        h_cur = h_cur.induce(
            [
                kept_local if j == p else list(range(h_cur.part_sizes[j]))
                for j in range(r)
            ]
        )
        cur_maps[p] = tuple(kept)
        stage_floor = Fraction(math.prod(h_cur.part_sizes)) / (
            2 ** (stage + 1) * k
        )
        trace.append(
            {
                "kind": "stage-density",
                "stage": stage + 1,
                "edges": h_cur.edge_count,
                "floor": frac_str(stage_floor),
                "pass": Fraction(h_cur.edge_count) >= stage_floor,
            }
        )

    last = r - 1
    tail_floor = Fraction(
        math.prod(len(subsets[i]) for i in range(r - 1))
    ) / (2**r * k)
    kept_r = [
        v for v in range(ambient[last]) if h_cur.degree(last, v) >= tail_floor
    ]
    if not kept_r:
        raise NoWitnessError("degree filter emptied the last part")
    subsets[last] = tuple(kept_r)
    trace.append(
        {
            "kind": "tail-degree",
            "part": last,
            "threshold": frac_str(tail_floor),
            "kept": list(kept_r),
        }
    )

    count_floor = Fraction(total ** (r - 1)) / (
        8 ** (r**3) * (r - 1) ** (r - 1) * k ** ((r * r + 5 * r - 4) // 2)
    )
    size_floors = [
        Fraction(ambient[p]) / (2 ** (p + 3) * k) for p in range(r - 1)
    ] + [Fraction(ambient[last]) / (2 ** (r + 2) * k)]

    def run_sweep() -> SweepOutcome:
        return verify_relaxed_counts(
            h,
            [list(s) for s in subsets],
            count_floor,
            exhaustive_cap=exhaustive_cap,
            sample_count=sample_count,
            workers=workers,
        )

    # The degree and partner filters cannot rule out a support vertex whose
    # few edges all point back at the support itself; such a support carries
    # no octopus at all. When that happens, shrink the subsets minimally:
    # repeatedly drop the vertex participating in the most failing supports,
    # as long as its part stays at or above its size floor, and re-verify.
    sweep = run_sweep()
    while sweep.failures:
        participation: dict[tuple[int, int], int] = {}
        for sup in sweep.failing_supports:
            for p, v in enumerate(sup):
                key = (p, v)
                participation[key] = participation.get(key, 0) + 1
        candidates = sorted(
            participation.items(), key=lambda item: (-item[1], item[0])
        )
        removed = None
        for (p, v), _count in candidates:
            new_size = len(subsets[p]) - 1
            if new_size >= 1 and Fraction(new_size) >= size_floors[p]:
                subsets[p] = tuple(x for x in subsets[p] if x != v)
                removed = (p, v)
                break
        if removed is None:
            break  # cannot shrink further without breaching a size floor
        trace.append(
            {
                "kind": "count-repair",
                "part": removed[0],
                "vertex": removed[1],
                "failures_before": sweep.failures,
            }
        )
        sweep = run_sweep()

    for p in range(r):
        trace.append(
            {
                "kind": "size-floor",
                "part": p,
                "size": len(subsets[p]),
                "floor": frac_str(size_floors[p]),
                "pass": Fraction(len(subsets[p])) >= size_floors[p],
            }
        )
    trace.append(sweep.to_trace())
    return ExtractionResult(
        mode="general",
        subsets=tuple(subsets),
        epsilon=eps,
        trace=tuple(trace),
    )


def dense_extract(
    inst: Instance,
    eps: Fraction,
    delta: Fraction | str = "auto",
    *,
    workers: int = 1,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
) -> ExtractionResult:
    """Almost-spanning extraction for nearly complete hypergraphs.

    Keeps vertices of degree at least (1 - delta/eps) n^(r-1) per part and
    trims each part to exactly ceil((1 - eps) n) vertices by dropping the
    highest indices. delta="auto" resolves to eps/(10r). Every support (or a
    fixed-seed sample) is verified against the n^(r(r-1))/2 count floor.
    """
    h = inst.hypergraph
    r = inst.r
    sizes = set(h.part_sizes)
    if len(sizes) != 1:
        raise UnequalPartsError(f"part sizes {h.part_sizes} are not all equal")
    n = h.part_sizes[0]
    if n == 0:
        raise EmptyPartError("parts are empty")
    eps = Fraction(eps)
    if eps <= 0:
        raise ConfigInvalidError(f"eps must be positive, got {eps}")
    if eps >= Fraction(1, 10 * r):
        raise EpsilonTooLargeError(f"eps {eps} is not below 1/(10*{r})")
    delta_auto = isinstance(delta, str)
    if delta_auto:
        if delta != "auto":
            raise ConfigInvalidError(f"delta must be a rational or 'auto', got {delta!r}")
        delta_val = eps / (10 * r)
    else:
        delta_val = Fraction(delta)
        if delta_val < 0:
            raise ConfigInvalidError(f"delta must be >= 0, got {delta_val}")
    total = h.total_tuples
    if Fraction(h.edge_count) < (1 - delta_val) * total:
        raise DensityTooLowError(
            f"{h.edge_count} edges is below (1 - {delta_val}) * {total}"
        )

    trace: list[dict] = [
        {
            "kind": "ambient",
            "mode": "dense",
            "sizes": list(h.part_sizes),
            "epsilon": frac_str(eps),
            "delta": frac_str(delta_val),
            "delta_auto": delta_auto,
        }
    ]
    degree_floor = (1 - delta_val / eps) * n ** (r - 1)
    target = math.ceil((1 - eps) * n)
    subsets = []
    for i in range(r):
        qualifying = [
            v for v in range(n) if h.degree(i, v) >= degree_floor
        ]
        if len(qualifying) < target:
            raise NoWitnessError(
                f"part {i}: only {len(qualifying)} vertices reach the degree floor, "
                f"need {target}"
            )
        kept = qualifying[:target]
        subsets.append(tuple(kept))
        trace.append(
            {
                "kind": "degree-filter",
                "part": i,
                "threshold": frac_str(degree_floor),
                "qualifying": list(qualifying),
                "kept": list(kept),
                "target": target,
            }
        )

    count_floor = Fraction(n ** (r * (r - 1)), 2)
    sweep = verify_relaxed_counts(
        h,
        [list(s) for s in subsets],
        count_floor,
        exhaustive_cap=exhaustive_cap,
        sample_count=sample_count,
        workers=workers,
    )
    trace.append(sweep.to_trace())
    return ExtractionResult(
        mode="dense",
        subsets=tuple(subsets),
        epsilon=eps,
        trace=tuple(trace),
    )


def _count_verify_values(result: ExtractionResult) -> tuple[int, Fraction]:
    entry = result.trace_entry("count-verify")
    return int(entry["min_count"]), parse_fraction(entry["threshold"])


def sumset_growth_cap_pow_r(r: int, k: Fraction, c_pow_r: Fraction, total: int) -> Fraction:
    """r-th power of the sumset growth cap, as an exact rational.

    The cap itself is 8^(r^3) (r-1)^(r-1) k^((r^2+5r-4)/2) C^(2r-1) times the
    r-th root of the part size product; raising to the r-th power removes
    the roots so everything stays rational.
    """
    base = 8 ** (r**3) * (r - 1) ** (r - 1)
    return (
        Fraction(base) ** r
        * Fraction(k) ** (r * (r * r + 5 * r - 4) // 2)
        * Fraction(c_pow_r) ** (2 * r - 1)
        * total
    )


def bsg_extract(
    inst: Instance,
    k: Fraction | str = "measured",
    c: Fraction | str = "measured",
    *,
    workers: int = 1,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    pivot_seed: int | None = None,
) -> tuple[ExtractionResult, BoundReport]:
    """Full pipeline: subset extraction plus the exact sumset growth report.

    k and c may be exact rationals or "measured" to derive them from the
    instance. c is carried as the exact rational c^r throughout, and the
    growth bound is compared after raising both sides to the r-th power so
    no irrational arithmetic occurs.
    """
    h = inst.hypergraph
    r = inst.r
    total = h.total_tuples
    k_eff = h.measured_k() if isinstance(k, str) and k == "measured" else Fraction(k)
    if Fraction(h.edge_count) < Fraction(total) / k_eff:
        raise DensityTooLowError(f"{h.edge_count} edges is below {total}/{k_eff}")
    osize = len(restricted_sumset(inst))
    if isinstance(c, str) and c == "measured":
        c_pow_r = Fraction(osize**r, total)
    else:
        c_pow_r = Fraction(c) ** r
        if Fraction(osize**r) > c_pow_r * total:
            raise HypothesisViolatedError(
                "restricted-sumset-cap",
                f"|restricted sumset|^{r} = {osize**r} exceeds c^{r} * {total}",
            )

    result = octopus_extract(
        inst,
        k_eff,
        workers=workers,
        exhaustive_cap=exhaustive_cap,
        sample_count=sample_count,
        pivot_seed=pivot_seed,
    )
    chosen = inst.subset_elemsets(result.subsets)
    s_size = len(iterated_sumset(chosen))
    min_count, count_floor = _count_verify_values(result)

    rows: list[Inequality] = [
        check_ge(
            "edge-density-floor",
            Fraction(h.edge_count),
            Fraction(total) / k_eff,
            "edge count against the density parameter",
        ),
        check_le(
            "restricted-sumset-cap",
            Fraction(osize**r),
            c_pow_r * total,
            "restricted sumset size against the cap, r-th powers",
        ),
    ]
    for p in range(r):
        rows.append(
            check_ge(
                f"subset-size-floor-{p}",
                Fraction(len(result.subsets[p])),
                Fraction(h.part_sizes[p]) / (2 ** (p + 3) * k_eff),
                "chosen subset size against its floor",
            )
        )
    rows.append(
        check_ge(
            "octopus-count-floor",
            Fraction(min_count),
            count_floor,
            "minimum verified relaxed count against the derived floor",
        )
    )
    rows.append(
        check_le(
            "sumset-growth-bound",
            Fraction(s_size**r),
            sumset_growth_cap_pow_r(r, k_eff, c_pow_r, total),
            "sumset of chosen subsets against the growth cap, r-th powers",
        )
    )
    return result, BoundReport(tuple(rows))


def almost_all_extract(
    inst: Instance,
    c: Fraction | str = "measured",
    eps: Fraction = Fraction(1, 25),
    delta: Fraction | str = "auto",
    *,
    workers: int = 1,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
) -> tuple[ExtractionResult, BoundReport]:
    """Dense pipeline plus the linear sumset bound 2 c^(2r-1) n."""
    h = inst.hypergraph
    r = inst.r
    if len(set(h.part_sizes)) != 1:
        raise UnequalPartsError(f"part sizes {h.part_sizes} are not all equal")
    n = h.part_sizes[0]
    if n == 0:
        raise EmptyPartError("parts are empty")
    osize = len(restricted_sumset(inst))
    if isinstance(c, str) and c == "measured":
        c_eff = Fraction(osize, n)
    else:
        c_eff = Fraction(c)
        if osize > c_eff * n:
            raise HypothesisViolatedError(
                "restricted-sumset-cap",
                f"|restricted sumset| = {osize} exceeds {c_eff} * {n}",
            )

    result = dense_extract(
        inst,
        eps,
        delta,
        workers=workers,
        exhaustive_cap=exhaustive_cap,
        sample_count=sample_count,
    )
    result = dataclasses.replace(result, mode="almost-all")
    chosen = inst.subset_elemsets(result.subsets)
    s_size = len(iterated_sumset(chosen))
    min_count, count_floor = _count_verify_values(result)
    delta_val = parse_fraction(result.trace[0]["delta"])
    target = math.ceil((1 - Fraction(eps)) * n)

    rows: list[Inequality] = [
        check_ge(
            "edge-density-floor",
            Fraction(h.edge_count),
            (1 - delta_val) * h.total_tuples,
            "edge count against the near-complete floor",
        ),
        check_le(
            "restricted-sumset-cap-linear",
            Fraction(osize),
            c_eff * n,
            "restricted sumset size against the linear cap",
        ),
    ]
    for p in range(r):
        rows.append(
            check_eq(
                f"trimmed-size-{p}",
                len(result.subsets[p]),
                target,
                "trimmed subset size",
            )
        )
    rows.append(
        check_ge(
            "octopus-count-floor",
            Fraction(min_count),
            count_floor,
            "minimum verified relaxed count against the dense floor",
        )
    )
    rows.append(
        check_le(
            "almost-all-sumset-bound",
            Fraction(s_size),
            2 * c_eff ** (2 * r - 1) * n,
            "sumset of chosen subsets against the linear growth cap",
        )
    )
    return result, BoundReport(tuple(rows))
