"""Instance generation, measurement, independent bound verification, and
brute-force oracles.

Generators are fully determined by their seed via SplitMix64; the algorithm
identifier, family and parameters are recorded inside the instance JSON so
files can be regenerated bit-identically. Verification here recomputes every
quantity from scratch (per-support counters, fresh sumsets) rather than
trusting anything a pipeline recorded, so it serves as the second,
independent route for every reported inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .config import DEFAULT_EXHAUSTIVE_CAP, DEFAULT_SAMPLE_COUNT, SUPPORT_SAMPLE_SEED
from .errors import (
    ConfigInvalidError,
    ModeMismatchError,
    NoEdgesError,
    TooLargeError,
)
from .extraction import ExtractionResult, sumset_growth_cap_pow_r
from .groups import GroupElem, GroupSpec, make_group
from .hypergraph import Instance, PartiteHypergraph
from .jsonio import frac_str, parse_fraction
from .octopus import octopus_count_relaxed
from .report import BoundReport, Inequality, check_eq, check_ge, check_le
from .rng import ALGORITHM_ID, SplitMix64
from .sumsets import (
    ElemSet,
    iterated_sumset,
    representation_table,
    restricted_sumset,
)

FAMILIES = ("complete", "random-density", "planted", "dense")

BRUTE_FORCE_SIZE_GUARD = 24


@dataclass(frozen=True)
class GenConfig:
    """Seeded description of one generated instance.

    sizes: one size per part, or a single size repeated r times.
    family parameters: k for random-density, ap_fraction and target_c for
    planted, delta for dense. Unused parameters must stay None.
    """

    r: int
    sizes: tuple[int, ...]
    moduli: tuple[int, ...]
    seed: int
    family: str
    k: Fraction | None = None
    ap_fraction: Fraction | None = None
    target_c: Fraction | None = None
    delta: Fraction | None = None

    @classmethod
    def make(
        cls,
        r: int,
        n: int | Sequence[int],
        family: str,
        seed: int,
        moduli: Sequence[int] = (0,),
        k: Fraction | None = None,
        ap_fraction: Fraction | None = None,
        target_c: Fraction | None = None,
        delta: Fraction | None = None,
    ) -> "GenConfig":
        sizes = tuple([int(n)] * r) if isinstance(n, int) else tuple(int(v) for v in n)
        return cls(
            r=r,
            sizes=sizes,
            moduli=tuple(int(m) for m in moduli),
            seed=int(seed),
            family=family,
            k=None if k is None else Fraction(k),
            ap_fraction=None if ap_fraction is None else Fraction(ap_fraction),
            target_c=None if target_c is None else Fraction(target_c),
            delta=None if delta is None else Fraction(delta),
        )

    def validate(self) -> None:
        if self.r < 2:
            raise ConfigInvalidError(f"r must be >= 2, got {self.r}")
        if len(self.sizes) != self.r:
            raise ConfigInvalidError(f"{len(self.sizes)} sizes for r={self.r}")
        if any(s < 1 for s in self.sizes):
            raise ConfigInvalidError("every part size must be >= 1")
        if self.family not in FAMILIES:
            raise ConfigInvalidError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if not 0 <= self.seed < (1 << 64):
            raise ConfigInvalidError("seed must be a 64-bit unsigned integer")
        if self.family == "random-density":
            if self.k is None or self.k < 1:
                raise ConfigInvalidError("random-density requires k >= 1")
        if self.family == "planted":
            if self.ap_fraction is None or not 0 < self.ap_fraction <= 1:
                raise ConfigInvalidError("planted requires ap_fraction in (0, 1]")
            if self.target_c is None or self.target_c <= 0:
                raise ConfigInvalidError("planted requires target_c > 0")
        if self.family == "dense":
            if self.delta is None or not 0 <= self.delta < 1:
                raise ConfigInvalidError("dense requires delta in [0, 1)")

    def meta(self) -> dict:
        params: dict = {}
        if self.k is not None:
            params["k"] = frac_str(self.k)
        if self.ap_fraction is not None:
            params["ap_fraction"] = frac_str(self.ap_fraction)
        if self.target_c is not None:
            params["target_c"] = frac_str(self.target_c)
        if self.delta is not None:
            params["delta"] = frac_str(self.delta)
        return {
            "algorithm": ALGORITHM_ID,
            "family": self.family,
            "seed": self.seed,
            "sizes": list(self.sizes),
            "params": params,
        }


def _ap_element(spec: GroupSpec, j: int) -> GroupElem:
    return spec.canon((j,) + (0,) * (spec.width - 1))


def _ap_part(spec: GroupSpec, size: int) -> list[GroupElem]:
    if spec.moduli[0] != 0 and size > spec.moduli[0]:
        raise ConfigInvalidError(
            f"part size {size} exceeds first modulus {spec.moduli[0]}"
        )
    return [_ap_element(spec, j) for j in range(size)]


def _random_element(spec: GroupSpec, rng: SplitMix64, free_span: int) -> GroupElem:
    coords = []
    for m in spec.moduli:
        coords.append(rng.next_below(m) if m else rng.next_below(free_span))
    return tuple(coords)


def _lex_tuple(shape: Sequence[int], index: int) -> tuple[int, ...]:
    out = []
    for s in reversed(shape):
        out.append(index % s)
        index //= s
    return tuple(reversed(out))


def gen_instance(cfg: GenConfig) -> Instance:
    """Deterministically generate the configured instance."""
    cfg.validate()
    spec = make_group(cfg.moduli)
    rng = SplitMix64(cfg.seed)
    total = math.prod(cfg.sizes)

    if cfg.family in ("complete", "random-density", "dense"):
        parts = [
            ElemSet(spec, tuple(sorted(_ap_part(spec, s)))) for s in cfg.sizes
        ]
    else:  # planted
        group_order = None
        if all(m > 0 for m in cfg.moduli):
            group_order = math.prod(cfg.moduli)
        parts = []
        for s in cfg.sizes:
            if group_order is not None and s > group_order:
                raise ConfigInvalidError(
                    f"part size {s} exceeds group order {group_order}"
                )
            ap_len = max(1, min(s, math.ceil(cfg.ap_fraction * s)))
            elems = set(_ap_part(spec, ap_len))
            free_span = 64 * max(cfg.sizes)
            while len(elems) < s:
                elems.add(_random_element(spec, rng, free_span))
            parts.append(ElemSet(spec, tuple(sorted(elems))))

    sizes = tuple(len(p) for p in parts)
    if cfg.family == "complete":
        hg = PartiteHypergraph.complete(sizes)
    elif cfg.family == "random-density":
        target = math.ceil(Fraction(total) / cfg.k)
        keep_num, keep_den = (1 / cfg.k).numerator, (1 / cfg.k).denominator
        kept = []
        for idx in range(total):
            u = rng.next_u64()
            # keep with probability 1/k, exactly: u/2^64 < 1/k
            if u * keep_den < (1 << 64) * keep_num:
                kept.append(idx)
        kept_set = set(kept)
        if len(kept) > target:
            kept = kept[: target]  # drop lex-largest kept tuples
        elif len(kept) < target:
            for idx in range(total):
                if idx not in kept_set:
                    kept.append(idx)
                    if len(kept) == target:
                        break
            kept.sort()
        edges = [_lex_tuple(sizes, idx) for idx in kept]
        hg = PartiteHypergraph.build(cfg.r, sizes, edges)
    elif cfg.family == "planted":
        window = math.ceil(cfg.target_c * max(cfg.sizes))
        target_set = {_ap_element(spec, j) for j in range(window)}
        edges = []
        for idx in range(total):
            e = _lex_tuple(sizes, idx)
            s = spec.sum(parts[i].elems[v] for i, v in enumerate(e))
            if s in target_set:
                edges.append(e)
        floor = math.ceil(total * cfg.ap_fraction**cfg.r)
        if len(edges) < floor:
            present = set(edges)
            for idx in range(total):
                e = _lex_tuple(sizes, idx)
                if e not in present:
                    edges.append(e)
                    if len(edges) >= floor:
                        break
        hg = PartiteHypergraph.build(cfg.r, sizes, edges)
    else:  # dense
        remove_count = math.floor(cfg.delta * total)
        removed: set[int] = set()
        while len(removed) < remove_count:
            removed.add(rng.next_below(total))
        edges = [
            _lex_tuple(sizes, idx) for idx in range(total) if idx not in removed
        ]
        hg = PartiteHypergraph.build(cfg.r, sizes, edges)

    return Instance(spec, tuple(parts), hg, meta=cfg.meta())


def _nth_root_floor(x: int, n: int) -> int:
    """Floor of the n-th root of a non-negative integer."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return 0
    guess = 1 << ((x.bit_length() + n - 1) // n)
    while True:
        nxt = ((n - 1) * guess + x // guess ** (n - 1)) // n
        if nxt >= guess:
            break
        guess = nxt
    while guess**n > x:
        guess -= 1
    return guess


def root_decimal(value: Fraction, n: int, digits: int = 6) -> str:
    """Decimal approximation (rounded down) of the n-th root of a rational."""
    scaled = value.numerator * 10 ** (digits * n) // value.denominator
    root = _nth_root_floor(scaled, n)
    whole, frac = divmod(root, 10**digits)
    return f"{whole}.{frac:0{digits}d}"


@dataclass(frozen=True)
class Measurement:
    """Exact instance-level quantities."""

    edge_count: int
    density: Fraction
    k: Fraction
    c_pow_r: Fraction
    c_decimal: str
    restricted_sumset_size: int
    full_sumset_size: int

    def to_json(self) -> dict:
        return {
            "C_decimal_approx": self.c_decimal,
            "C_pow_r": frac_str(self.c_pow_r),
            "K": frac_str(self.k),
            "density": frac_str(self.density),
            "edge_count": self.edge_count,
            "full_sumset_size": self.full_sumset_size,
            "restricted_sumset_size": self.restricted_sumset_size,
        }


def measure_instance(inst: Instance) -> Measurement:
    """Exact density parameter, sumset cap, and sumset sizes of an instance."""
    h = inst.hypergraph
    if h.edge_count == 0:
        raise NoEdgesError("instance has no edges")
    total = h.total_tuples
    osize = len(restricted_sumset(inst))
    c_pow_r = Fraction(osize**inst.r, total)
    return Measurement(
        edge_count=h.edge_count,
        density=h.density(),
        k=h.measured_k(),
        c_pow_r=c_pow_r,
        c_decimal=root_decimal(c_pow_r, inst.r),
        restricted_sumset_size=osize,
        full_sumset_size=len(iterated_sumset(inst.parts)),
    )


def _result_k(result: ExtractionResult) -> Fraction:
    return parse_fraction(result.trace[0]["k"])


def check_bounds(
    result: ExtractionResult,
    inst: Instance,
    mode: str,
    *,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
) -> BoundReport:
    """Recompute every inequality of the relevant mode from scratch.

    Uses the density parameter recorded in the result trace and the measured
    sumset cap of the instance. Counts are recomputed with the per-support
    counter, sumsets from the chosen elements; nothing recorded by the
    pipeline is trusted except the run parameters themselves.
    """
    if result.mode != mode:
        raise ModeMismatchError(f"result mode {result.mode!r} != requested {mode!r}")
    h = inst.hypergraph
    r = inst.r
    total = h.total_tuples
    if len(result.subsets) != r:
        raise ModeMismatchError("result arity does not match the instance")
    chosen = inst.subset_elemsets(result.subsets)
    s_size = len(iterated_sumset(chosen))
    osize = len(restricted_sumset(inst))
    rows: list[Inequality] = []

    supports, exhaustive = _verification_supports(
        result.subsets, exhaustive_cap, sample_count
    )
    min_count = min(octopus_count_relaxed(h, sup) for sup in supports)

    if mode == "general":
        k_eff = _result_k(result)
        c_pow_r = Fraction(osize**r, total)
        rows.append(
            check_ge(
                "edge-density-floor",
                Fraction(h.edge_count),
                Fraction(total) / k_eff,
                "edge count against the density parameter",
            )
        )
        rows.append(
            check_le(
                "restricted-sumset-cap",
                Fraction(osize**r),
                c_pow_r * total,
                "restricted sumset size against the measured cap, r-th powers",
            )
        )
        for p in range(r):
            rows.append(
                check_ge(
                    f"subset-size-floor-{p}",
                    Fraction(len(result.subsets[p])),
                    Fraction(h.part_sizes[p]) / (2 ** (p + 3) * k_eff),
                    "chosen subset size against its floor",
                )
            )
        count_floor = Fraction(total ** (r - 1)) / (
            8 ** (r**3) * (r - 1) ** (r - 1) * k_eff ** ((r * r + 5 * r - 4) // 2)
        )
        rows.append(
            check_ge(
                "octopus-count-floor",
                Fraction(min_count),
                count_floor,
                "recomputed minimum relaxed count against the derived floor",
            )
        )
        rows.append(
            check_le(
                "sumset-growth-bound",
                Fraction(s_size**r),
                sumset_growth_cap_pow_r(r, k_eff, c_pow_r, total),
                "recomputed sumset against the growth cap, r-th powers",
            )
        )
    elif mode in ("dense", "almost-all"):
        if len(set(h.part_sizes)) != 1:
            raise ModeMismatchError("dense verification requires equal part sizes")
        n = h.part_sizes[0]
        eps = result.epsilon
        if eps is None:
            raise ModeMismatchError("dense result carries no epsilon")
        delta_val = parse_fraction(result.trace[0]["delta"])
        target = math.ceil((1 - eps) * n)
        rows.append(
            check_ge(
                "edge-density-floor",
                Fraction(h.edge_count),
                (1 - delta_val) * total,
                "edge count against the near-complete floor",
            )
        )
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
                Fraction(n ** (r * (r - 1)), 2),
                "recomputed minimum relaxed count against the dense floor",
            )
        )
        if mode == "almost-all":
            c_eff = Fraction(osize, n)
            rows.append(
                check_le(
                    "restricted-sumset-cap-linear",
                    Fraction(osize),
                    c_eff * n,
                    "restricted sumset size against the measured linear cap",
                )
            )
            rows.append(
                check_le(
                    "almost-all-sumset-bound",
                    Fraction(s_size),
                    2 * c_eff ** (2 * r - 1) * n,
                    "recomputed sumset against the linear growth cap",
                )
            )
    else:
        raise ModeMismatchError(f"unknown mode {mode!r}")
    return BoundReport(tuple(rows))


def _verification_supports(
    subsets: Sequence[Sequence[int]], exhaustive_cap: int, sample_count: int
) -> tuple[list[tuple[int, ...]], bool]:
    total = math.prod(len(s) for s in subsets)
    if total <= exhaustive_cap:
        supports: list[tuple[int, ...]] = [()]
        for sub in subsets:
            supports = [p + (v,) for p in supports for v in sub]
        return supports, True
    rng = SplitMix64(SUPPORT_SAMPLE_SEED)
    return [
        tuple(sub[rng.next_below(len(sub))] for sub in subsets)
        for _ in range(sample_count)
    ], False


def check_representations(
    result: ExtractionResult,
    inst: Instance,
    l_param: Fraction,
    *,
    cell_cap: int | None = None,
) -> BoundReport:
    """Check the signed representation route through the restricted sumset.

    For each sum s of the chosen subsets, the lexicographically least
    support tuple realizing s is the designated representative. The count of
    signed (2r-1)-term representations of s by restricted-sumset elements
    must reach l_param times the part product to the (2r-2)/r power, and in
    aggregate |S| times that floor cannot exceed the restricted sumset size
    to the (2r-1)-th power. Both are compared after raising to the r-th
    power.
    """
    h = inst.hypergraph
    r = inst.r
    total = h.total_tuples
    l_param = Fraction(l_param)
    spec = inst.spec
    osize_set = restricted_sumset(inst)
    table = representation_table(spec, osize_set, r, cell_cap=cell_cap)

    # Part elements are stored sorted, so lexicographic order on index tuples
    # equals lexicographic order on element tuples; the first support seen
    # for a sum is its lexicographically least representative.
    reps: dict[GroupElem, tuple[int, ...]] = {}
    supports, _ = _verification_supports(result.subsets, 10**9, 0)
    for sup in supports:
        s = spec.sum(inst.parts[i].elems[v] for i, v in enumerate(sup))
        if s not in reps:
            reps[s] = sup

    # per-s floor: count >= l_param * total^((2r-2)/r), via r-th powers
    per_s_rhs_pow = l_param**r * Fraction(total) ** (2 * r - 2)
    rows: list[Inequality] = []
    worst: tuple[int, GroupElem] | None = None
    all_pass = True
    for s in sorted(reps):
        count = table.get(s, 0)
        if worst is None or count < worst[0]:
            worst = (count, s)
        if Fraction(count) ** r < per_s_rhs_pow:
            all_pass = False
    assert worst is not None
    rows.append(
        check_ge(
            "representation-count-floor",
            Fraction(worst[0]) ** r,
            per_s_rhs_pow,
            "minimum per-sum signed representation count, r-th powers",
        )
    )
    rows.append(
        check_eq(
            "representation-count-all-pass",
            1 if all_pass else 0,
            1,
            "every per-sum count reached the floor",
        )
    )
    s_size = len(reps)
    rows.append(
        check_le(
            "representation-aggregate",
            Fraction(s_size) ** r * l_param**r * Fraction(total) ** (2 * r - 2),
            Fraction(len(osize_set)) ** (r * (2 * r - 1)),
            "aggregate representation inequality, r-th powers",
        )
    )
    return BoundReport(tuple(rows))


def brute_force_best_subsets(
    inst: Instance, min_sizes: Sequence[int]
) -> tuple[tuple[tuple[int, ...], ...], int]:
    """Exhaustive minimizer of the chosen-subset sumset at given size floors.

    Since sumsets are monotone under inclusion, the optimum over subsets of
    size at least the floor is attained at exactly the floor; combinations
    are enumerated in lexicographic order and the first minimizer is kept.
    Guarded to instances whose total part size is at most 24.
    """
    sizes = inst.part_sizes
    if sum(sizes) > BRUTE_FORCE_SIZE_GUARD:
        raise TooLargeError(
            f"total part size {sum(sizes)} exceeds guard {BRUTE_FORCE_SIZE_GUARD}"
        )
    if len(min_sizes) != inst.r:
        raise ConfigInvalidError(f"{len(min_sizes)} floors for {inst.r} parts")
    floors = [int(m) for m in min_sizes]
    for i, m in enumerate(floors):
        if not 1 <= m <= sizes[i]:
            raise ConfigInvalidError(
                f"floor {m} for part {i} is out of range [1, {sizes[i]}]"
            )

    best: tuple[tuple[tuple[int, ...], ...], int] | None = None

    def rec(i: int, chosen: list[tuple[int, ...]]):
        nonlocal best
        if i == inst.r:
            elem_sets = inst.subset_elemsets(chosen)
            size = len(iterated_sumset(elem_sets))
            if best is None or size < best[1]:
                best = (tuple(chosen), size)
            return
        for combo in combinations(range(sizes[i]), floors[i]):
            chosen.append(combo)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    assert best is not None
    return best
