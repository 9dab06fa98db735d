import numpy as np
import pytest

from critopt.bigstep import (
    Endpoint,
    MoveRequest,
    TargetAssignment,
    accumulate_targets,
    backprop_lower_star,
    critical_set_decrease_birth,
    critical_set_decrease_death,
    critical_set_for_request,
    critical_set_increase_birth,
    critical_set_increase_death,
    diagram_method_gradient,
    gradient_from_targets,
    resolve_avg,
    resolve_fca,
    resolve_max,
)
from critopt.complexes import Filtration, lower_star_1d
from critopt.errors import AmbiguityError, DirectionError, WrongSimplexClassError
from critopt.oracle import random_filtration, random_request
from critopt.reduction import DecompositionCache, addition_count, read_pairs

# lower_star_1d([0, 3, 1, 2]) ids: vertices 0-3, edges e01=4, e12=5, e23=6
V0, V1, V2, V3, E01, E12, E23 = range(7)


@pytest.fixture
def path_setup(path_0312):
    filt = path_0312
    pairs = read_pairs(filt)
    by_birth = {p.birth_simplex: p for p in pairs}
    return filt, DecompositionCache(filt), by_birth


def test_increase_death_members_only_mover(path_setup):
    filt, cache, by_birth = path_setup
    cs = critical_set_increase_death(cache.primal(1), filt, E23, 3.0)
    assert cs.members == {E23}


def test_empty_interval_gives_mover_only(path_setup):
    filt, cache, _ = path_setup
    cs = critical_set_increase_death(cache.primal(1), filt, E23, 2.0)
    assert cs.members == {E23} and cs.closure == frozenset()


def test_decrease_death_members_and_closure(path_setup):
    filt, cache, _ = path_setup
    cs = critical_set_decrease_death(
        cache.primal(1), filt, E12, 1.0, up_dec=None
    )
    assert cs.members == {E01, E12}
    # e23 sits in the value range but shares no chain with e12
    assert E23 not in cs.members
    # the shared endpoint at value 3 gets dragged down
    assert cs.closure == {V1}


def test_decrease_death_unpaired_vertex(path_setup):
    filt, cache, _ = path_setup
    cs = critical_set_decrease_death(
        cache.primal(0), filt, V0, -1.0, up_dec=cache.primal(1)
    )
    assert cs.members == {V0}


def test_increase_birth_members(path_setup):
    filt, cache, _ = path_setup
    cs = critical_set_increase_birth(
        cache.dual(1), filt, V2, 2.0, own_dec=cache.primal(0)
    )
    assert cs.members == {V2, V3}


def test_birth_target_equal_value_gives_mover(path_setup):
    filt, cache, _ = path_setup
    cs = critical_set_increase_birth(
        cache.dual(1), filt, V2, 1.0, own_dec=cache.primal(0)
    )
    assert cs.members == {V2}


def test_increase_death_rejects_positive(path_setup):
    filt, cache, _ = path_setup
    with pytest.raises(WrongSimplexClassError):
        critical_set_increase_death(cache.primal(0), filt, V2, 5.0)


def test_direction_error(path_setup):
    filt, cache, _ = path_setup
    with pytest.raises(DirectionError):
        critical_set_increase_death(cache.primal(1), filt, E23, 1.0)
    with pytest.raises(DirectionError):
        critical_set_decrease_death(cache.primal(1), filt, E12, 4.0)


def test_decrease_death_rejects_positive_paired(path_setup):
    filt, cache, _ = path_setup
    # v2 is positive and paired with e12
    with pytest.raises(WrongSimplexClassError):
        critical_set_decrease_death(
            cache.primal(0), filt, V2, 0.5, up_dec=cache.primal(1)
        )


def test_decrease_birth_rejects_unpaired(path_setup):
    filt, cache, _ = path_setup
    with pytest.raises(WrongSimplexClassError):
        critical_set_decrease_birth(cache.dual(1), filt, V0, -1.0)


def test_increase_birth_rejects_negative(path_setup):
    filt, cache, _ = path_setup
    with pytest.raises(WrongSimplexClassError):
        critical_set_increase_birth(
            cache.dual(2) if filt.dim >= 1 else None,
            filt,
            E12,
            5.0,
            own_dec=cache.primal(1),
        )


def test_dispatch_unpaired_decrease_birth_uses_own_dim(path_setup):
    filt, cache, by_birth = path_setup
    req = MoveRequest(by_birth[V0], Endpoint.BIRTH, -2.0)
    cs = critical_set_for_request(req, filt, cache)
    assert cs.members == {V0}


def test_accumulate_single_request(path_setup):
    filt, cache, by_birth = path_setup
    req = MoveRequest(by_birth[V2], Endpoint.DEATH, 1.0)
    assign = accumulate_targets([req], filt, cache)
    assert set(assign.targets) == {E01, E12, V1}
    assert all(v == [1.0] for v in assign.targets.values())


def test_accumulate_disjoint_requests(path_setup):
    filt, cache, by_birth = path_setup
    reqs = [
        MoveRequest(by_birth[V0], Endpoint.BIRTH, -1.0),
        MoveRequest(by_birth[V3], Endpoint.DEATH, 3.0),
    ]
    assign = accumulate_targets(reqs, filt, cache)
    assert set(assign.targets) == {V0, E23}


def test_accumulate_overlapping_requests(path_setup):
    filt, cache, by_birth = path_setup
    reqs = [
        MoveRequest(by_birth[V2], Endpoint.DEATH, 1.0),
        MoveRequest(by_birth[V1], Endpoint.DEATH, 2.5),
    ]
    assign = accumulate_targets(reqs, filt, cache)
    assert assign.targets[E01] == [1.0, 2.5]


def _assignment(filt, targets):
    assign = TargetAssignment()
    for sid, ts in targets.items():
        for t in ts:
            assign.append(sid, t, filt)
    return assign


def test_resolve_max_examples():
    filt = lower_star_1d([1.0])
    assert resolve_max(_assignment(filt, {0: [0.5, 2.0]}), filt) == {0: 2.0}
    assert resolve_max(_assignment(filt, {}), filt) == {}
    # tie on distance prefers the larger value
    assert resolve_max(_assignment(filt, {0: [0.0, 2.0]}), filt) == {0: 2.0}


def test_resolve_avg_examples():
    filt = lower_star_1d([1.0])
    assert resolve_avg(_assignment(filt, {0: [2.0, 4.0]}), filt) == {0: 3.0}
    assert resolve_avg(_assignment(filt, {0: [5.0]}), filt) == {0: 5.0}
    assert resolve_avg(_assignment(filt, {}), filt) == {}


def test_resolve_fca_pins_movers(path_setup):
    filt, cache, by_birth = path_setup
    pair = by_birth[V2]
    reqs = [MoveRequest(pair, Endpoint.DEATH, 1.0)]
    assign = _assignment(filt, {E12: [1.0, 3.0], E01: [1.0, 3.0]})
    out = resolve_fca(assign, reqs, filt)
    assert out[E12] == 1.0  # mover keeps its own target
    assert out[E01] == 2.0  # everyone else averages


def test_resolve_fca_duplicate_mover_raises(path_setup):
    filt, _, by_birth = path_setup
    pair = by_birth[V2]
    reqs = [
        MoveRequest(pair, Endpoint.DEATH, 1.0),
        MoveRequest(pair, Endpoint.DEATH, 2.0),
    ]
    with pytest.raises(AmbiguityError):
        resolve_fca(TargetAssignment(), reqs, filt)


def test_gradient_from_targets(path_setup):
    filt, _, _ = path_setup
    grad = gradient_from_targets({V1: 3.0, V2: 3.0}, filt)
    assert grad[V1] == 0.0  # f = f'
    assert grad[V2] == 2 * (1.0 - 3.0)


def test_backprop_single_edge(path_setup):
    filt, _, _ = path_setup
    # e01's larger endpoint is v1
    assert backprop_lower_star({E01: 0.5}, filt) == {V1: 0.5}


def test_backprop_keeps_largest_magnitude():
    filt = lower_star_1d([0.0, 5.0, 1.0])
    # both edges attribute to v1; keep -3 over +1
    out = backprop_lower_star({3: 1.0, 4: -3.0}, filt)
    assert out == {1: -3.0}


def test_backprop_tie_prefers_smaller_simplex():
    filt = lower_star_1d([0.0, 5.0, 1.0])
    out = backprop_lower_star({3: 1.0, 4: -1.0}, filt)
    assert out == {1: 1.0}


def test_backprop_empty():
    filt = lower_star_1d([0.0, 1.0])
    assert backprop_lower_star({}, filt) == {}


def test_diagram_method_gradient_support(path_setup):
    filt, _, by_birth = path_setup
    pair = by_birth[V2]
    reqs = [
        MoveRequest(pair, Endpoint.BIRTH, 2.0),
        MoveRequest(pair, Endpoint.DEATH, 2.0),
    ]
    out = diagram_method_gradient(reqs, filt)
    assert set(out) == {V1, V2}  # e12 lands on v1
    assert out[V2] == 2 * (1.0 - 2.0)
    zero = diagram_method_gradient([MoveRequest(pair, Endpoint.DEATH, 3.0)], filt)
    assert zero == {V1: 0.0}


def test_accumulate_error_names_offending_request(path_setup):
    filt, cache, by_birth = path_setup
    # positive-and-paired mover asked to decrease: rejected with context
    bogus = MoveRequest(by_birth[V2], Endpoint.DEATH, 1.0)
    fake = MoveRequest(
        by_birth[V2].__class__(
            birth_simplex=V1, death_simplex=V2, birth=1.0, death=1.0, dim=0
        ),
        Endpoint.DEATH,
        0.5,
    )
    with pytest.raises(WrongSimplexClassError, match="request"):
        accumulate_targets([fake], filt, cache)
    # the healthy request still works alone
    accumulate_targets([bogus], filt, cache)


def test_extraction_does_no_reduction_work(path_setup):
    filt, cache, by_birth = path_setup
    cache.primal(0), cache.primal(1), cache.dual(1)
    before = addition_count()
    for req in (
        MoveRequest(by_birth[V2], Endpoint.DEATH, 1.0),
        MoveRequest(by_birth[V2], Endpoint.BIRTH, 2.0),
        MoveRequest(by_birth[V0], Endpoint.BIRTH, -1.0),
    ):
        critical_set_for_request(req, filt, cache)
    assert addition_count() == before


@pytest.mark.parametrize("seed", range(20))
def test_applying_resolved_values_keeps_filtration_valid(seed):
    rng = np.random.default_rng(seed)
    filt = random_filtration(seed, n_vertices=7, max_dim=3)
    case = ["increase_death", "decrease_death", "increase_birth", "decrease_birth"][
        seed % 4
    ]
    req = random_request(filt, rng, case)
    if req is None:
        return
    cache = DecompositionCache(filt)
    assign = accumulate_targets([req], filt, cache)
    resolved = resolve_max(assign, filt)
    values = filt.values.copy()
    for sid, t in resolved.items():
        values[sid] = t
    # closure included, so the new values still define a filtration
    Filtration(filt.complex, values)


@pytest.mark.parametrize("seed", range(15))
def test_single_request_max_reaches_target(seed):
    # the moved pair's endpoint lands exactly on the target after applying
    # the resolved map and re-reading the diagram
    filt = random_filtration(seed, n_vertices=6, max_dim=2)
    rng = np.random.default_rng(seed + 100)
    req = random_request(filt, rng, "decrease_death" if seed % 2 else "increase_death")
    if req is None:
        return
    cache = DecompositionCache(filt)
    assign = accumulate_targets([req], filt, cache)
    resolved = resolve_max(assign, filt)
    values = filt.values.copy()
    for sid, t in resolved.items():
        values[sid] = t
    new_filt = Filtration(filt.complex, values)
    new_pairs = read_pairs(new_filt)
    sigma = req.pair.birth_simplex
    match = [p for p in new_pairs if p.dim == req.pair.dim and p.birth_simplex == sigma]
    assert match and match[0].death == pytest.approx(req.target, abs=1e-12)
