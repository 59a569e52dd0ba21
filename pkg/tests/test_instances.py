"""Generators, measurement, the independent bound checker, representation
checks, and the brute-force subset oracle."""

import math
from fractions import Fraction
from itertools import combinations, product

import pytest

from bsgkit.errors import (
    ConfigInvalidError,
    ModeMismatchError,
    NoEdgesError,
    TooLargeError,
)
from bsgkit.extraction import ExtractionResult, bsg_extract, dense_extract
from bsgkit.groups import make_group
from bsgkit.hypergraph import Instance, PartiteHypergraph
from bsgkit.instances import (
    GenConfig,
    brute_force_best_subsets,
    check_bounds,
    check_representations,
    gen_instance,
    measure_instance,
    root_decimal,
)
from bsgkit.jsonio import canonical_dumps
from bsgkit.octopus import octopus_count_relaxed
from bsgkit.sumsets import ElemSet, iterated_sumset


def test_gen_complete_example():
    inst = gen_instance(GenConfig.make(r=2, n=4, family="complete", seed=1))
    assert inst.hypergraph.edge_count == 16
    assert [e[0] for e in inst.parts[0].elems] == [0, 1, 2, 3]
    assert inst.parts[0] == inst.parts[1]


def test_gen_determinism():
    cfg = GenConfig.make(
        r=3, n=6, family="random-density", seed=77, k=Fraction(3, 2)
    )
    a = canonical_dumps(gen_instance(cfg).to_json())
    b = canonical_dumps(gen_instance(cfg).to_json())
    assert a == b
    other = GenConfig.make(
        r=3, n=6, family="random-density", seed=78, k=Fraction(3, 2)
    )
    assert canonical_dumps(gen_instance(other).to_json()) != a


def test_gen_random_density_guarantee():
    for seed in range(5):
        for k in (Fraction(3, 2), Fraction(2), Fraction(4)):
            cfg = GenConfig.make(r=2, n=9, family="random-density", seed=seed, k=k)
            inst = gen_instance(cfg)
            target = math.ceil(Fraction(81) / k)
            assert inst.hypergraph.edge_count == target
            assert inst.hypergraph.measured_k() <= k


def test_gen_dense_guarantee():
    delta = Fraction(1, 50)
    for seed in range(4):
        cfg = GenConfig.make(r=2, n=10, family="dense", seed=seed, delta=delta)
        inst = gen_instance(cfg)
        assert inst.hypergraph.edge_count == math.ceil((1 - delta) * 100)


def test_gen_planted_full_ap_measured_c():
    cfg = GenConfig.make(
        r=2, n=16, family="planted", seed=3,
        ap_fraction=Fraction(1), target_c=Fraction(2),
    )
    inst = gen_instance(cfg)
    m = measure_instance(inst)
    assert m.k == 1
    assert m.c_pow_r == Fraction(31, 16) ** 2
    assert m.restricted_sumset_size == 31


def test_gen_planted_floor():
    cfg = GenConfig.make(
        r=2, n=12, family="planted", seed=8,
        ap_fraction=Fraction(1, 2), target_c=Fraction(2),
    )
    inst = gen_instance(cfg)
    floor = math.ceil(144 * Fraction(1, 2) ** 2)
    assert inst.hypergraph.edge_count >= floor


def test_gen_config_validation():
    with pytest.raises(ConfigInvalidError):
        GenConfig.make(r=1, n=4, family="complete", seed=0).validate()
    with pytest.raises(ConfigInvalidError):
        GenConfig.make(r=2, n=4, family="bogus", seed=0).validate()
    with pytest.raises(ConfigInvalidError):
        GenConfig.make(r=2, n=4, family="random-density", seed=0).validate()
    with pytest.raises(ConfigInvalidError):
        gen_instance(GenConfig.make(r=2, n=9, family="complete", seed=0, moduli=(5,)))


def test_measure_examples():
    inst = gen_instance(GenConfig.make(r=2, n=10, family="complete", seed=0))
    m = measure_instance(inst)
    assert m.k == 1
    assert m.restricted_sumset_size == 19
    assert m.c_pow_r == Fraction(361, 100)
    assert m.c_decimal.startswith("1.9")

    spec = make_group([0])
    parts = tuple(
        ElemSet.from_iterable(spec, [(v,) for v in vals])
        for vals in ([0, 1, 2], [0, 5])
    )
    single = Instance(
        spec, parts, PartiteHypergraph.build(2, (3, 2), [(1, 0)])
    )
    ms = measure_instance(single)
    assert ms.k == 6
    assert ms.restricted_sumset_size == 1

    empty = Instance(spec, parts, PartiteHypergraph.build(2, (3, 2), []))
    with pytest.raises(NoEdgesError):
        measure_instance(empty)


def test_root_decimal():
    assert root_decimal(Fraction(4), 2) == "2.000000"
    assert root_decimal(Fraction(2), 2).startswith("1.41421")
    assert root_decimal(Fraction(961, 256), 2) == "1.937500"


def test_check_bounds_complete_pass():
    inst = gen_instance(GenConfig.make(r=2, n=8, family="complete", seed=0))
    res, _ = bsg_extract(inst, Fraction(1), "measured")
    report = check_bounds(res, inst, "general")
    assert report.overall


def test_check_bounds_forced_failure():
    # subset-size floor for part 0 is 16/8 = 2, so a singleton must fail
    inst = gen_instance(GenConfig.make(r=2, n=16, family="complete", seed=0))
    res, _ = bsg_extract(inst, Fraction(1), "measured")
    # hand-built result with an undersized first subset
    tampered = ExtractionResult(
        mode="general",
        subsets=((0,),) + res.subsets[1:],
        epsilon=res.epsilon,
        trace=res.trace,
    )
    report = check_bounds(tampered, inst, "general")
    by_name = {q.name: q for q in report.inequalities}
    assert not by_name["subset-size-floor-0"].passed
    assert not report.overall


def test_check_bounds_mode_mismatch():
    inst = gen_instance(GenConfig.make(r=2, n=8, family="complete", seed=0))
    res, _ = bsg_extract(inst, Fraction(1), "measured")
    with pytest.raises(ModeMismatchError):
        check_bounds(res, inst, "dense")


def test_check_bounds_dense():
    eps = Fraction(1, 25)
    inst = gen_instance(
        GenConfig.make(r=2, n=10, family="dense", seed=1, delta=eps / 20)
    )
    res = dense_extract(inst, eps, eps / 20)
    report = check_bounds(res, inst, "dense")
    assert report.overall


def test_check_representations_complete_zm():
    spec_m = 11
    inst = gen_instance(
        GenConfig.make(r=2, n=5, family="complete", seed=0, moduli=(spec_m,))
    )
    res, _ = bsg_extract(inst, Fraction(1), "measured")
    # L from the verification: min relaxed count / total^(r-1)
    h = inst.hypergraph
    total = h.total_tuples
    min_count = min(
        octopus_count_relaxed(h, sup) for sup in product(*res.subsets)
    )
    l_param = Fraction(min_count, total)
    report = check_representations(res, inst, l_param)
    assert report.overall


def test_check_representations_matches_sumsets_module():
    # r=2 over Z_5 with a 2-element restricted sumset ties back to the
    # representation counter: count(0) = 3 for the set {0, 1}
    from bsgkit.sumsets import representation_count

    z5 = make_group([5])
    s_set = ElemSet.from_iterable(z5, [(0,), (1,)])
    assert representation_count(z5, s_set, (0,), 2) == 3


def test_brute_force_examples():
    inst = gen_instance(GenConfig.make(r=2, n=6, family="complete", seed=0))
    subsets, size = brute_force_best_subsets(inst, [6, 6])
    assert subsets == (tuple(range(6)), tuple(range(6)))
    assert size == 11

    spec = make_group([0])
    parts = tuple(
        ElemSet.from_iterable(spec, [(v,) for v in vals])
        for vals in ([0, 1, 5], [0, 1, 7])
    )
    inst2 = Instance(spec, parts, PartiteHypergraph.complete((3, 3)))
    subsets, size = brute_force_best_subsets(inst2, [2, 2])
    # independent oracle: enumerate all 9 subset pairs right here
    best = None
    for combo_a in combinations(range(3), 2):
        for combo_b in combinations(range(3), 2):
            sums = {
                spec.add(parts[0].elems[a], parts[1].elems[b])
                for a in combo_a
                for b in combo_b
            }
            key = (len(sums), (combo_a, combo_b))
            if best is None or key < best:
                best = key
    assert size == best[0]
    assert (subsets[0], subsets[1]) == best[1]


def test_brute_force_too_large():
    inst = gen_instance(GenConfig.make(r=2, n=16, family="complete", seed=0))
    with pytest.raises(TooLargeError):
        brute_force_best_subsets(inst, [2, 2])


def test_pipeline_never_beats_brute_force():
    for seed in range(4):
        inst = gen_instance(
            GenConfig.make(r=2, n=10, family="random-density", seed=seed, k=Fraction(2))
        )
        res, _ = bsg_extract(inst, Fraction(2), "measured")
        floors = [len(s) for s in res.subsets]
        _, best = brute_force_best_subsets(inst, floors)
        pipeline_size = len(iterated_sumset(inst.subset_elemsets(res.subsets)))
        assert pipeline_size >= best
