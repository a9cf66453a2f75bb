import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from biparcel_tv import constructions as cons
from biparcel_tv.complex import (
    GENERATORS,
    boundary_4_simplex,
    direct,
    disjoint_union,
    sphere_join_unknot,
    sphere_join_unknot_disk,
)
from biparcel_tv.errors import DeltaInconsistent, InapplicableSite, Unsupported
from biparcel_tv.gaunt import functor_to_group, poset_chain
from biparcel_tv.moves import BULK_MOVES, random_move
from biparcel_tv.statesum import (
    Amplitude,
    coloring_weight,
    dw_oracle,
    enumerate_colorings,
    invariance_check,
    invariant,
)

from conftest import TV_S3_FIB


def test_trivial_single_coloring(triv, s4):
    assert len(list(enumerate_colorings(triv, s4))) == 1


def test_vec_z2_colorings_match_brute_force(vec_z2, s4):
    c = s4.complex
    brute = 0
    for labels in itertools.product((0, 1), repeat=len(c.edges)):
        lab = dict(zip(c.edges, labels))
        if all((lab[(u, v)] + lab[(v, w)]) % 2 == lab[(u, w)] for u, v, w in c.triangles):
            brute += 1
    found = list(enumerate_colorings(vec_z2, s4))
    assert len(found) == brute == 16 == 2 ** (len(c.vertices) - 1)


def test_pointed_coloring_is_forced(z2):
    g = poset_chain(2)
    b = cons.pointed_biparcel(z2, cons.standard_cocycle(2), g, functor_to_group(g, z2, {"1->2": "1"}))
    t = direct(sphere_join_unknot())
    (only,) = list(enumerate_colorings(b, t))
    for e, s in only.edge_color.items():
        assert b.simples[s].gamma_arrow == t.delta[e].replace("3", "2")


def test_colorings_respect_invariants(fib, s4):
    for lam in enumerate_colorings(fib, s4):
        for (u, v, w), idx in lam.triangle_color.items():
            n = fib.N(lam.edge_color[(u, v)], lam.edge_color[(v, w)], lam.edge_color[(u, w)])
            assert 0 <= idx < n


def test_enumeration_order_is_deterministic(vec_z3, s4):
    a = [tuple(l.edge_color.values()) for l in enumerate_colorings(vec_z3, s4)]
    assert a == sorted(a)


def test_sum_of_weights_equals_invariant(fib, s4):
    total = sum(coloring_weight(fib, s4, lam) for lam in enumerate_colorings(fib, s4))
    assert abs(total - invariant(fib, s4).value) < 1e-12


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_trivial_invariant_is_one(triv, name):
    assert invariant(triv, direct(GENERATORS[name]())).value == 1


def test_known_values(vec_z2, vec_z3, fib, s4):
    assert abs(invariant(vec_z2, s4).value - 0.5) < 1e-12
    assert abs(invariant(vec_z3, s4).value - 1 / 3) < 1e-12
    assert abs(invariant(fib, s4).value - TV_S3_FIB) < 1e-12


def test_amplitude_json(vec_z2, s4):
    d = invariant(vec_z2, s4, tolerance=1e-7).to_json()
    assert d == {"re": 0.5, "im": 0.0, "colorings_counted": 16, "tolerance": 1e-7}


def test_disjoint_union_multiplies(vec_z2):
    u = direct(disjoint_union(boundary_4_simplex(), boundary_4_simplex()))
    assert abs(invariant(vec_z2, u).value - 0.25) < 1e-12


def test_delta_inconsistent_when_base_cannot_host_strata(z2, disk):
    g = poset_chain(2)
    b = cons.pointed_biparcel(z2, cons.trivial_cochain(z2), g, functor_to_group(g, z2, {"1->2": "1"}))
    with pytest.raises(DeltaInconsistent):
        list(enumerate_colorings(b, disk))


def test_explicit_object_map(defect_z2, knot):
    a = invariant(defect_z2, knot)
    b = invariant(defect_z2, knot, objects={1: "1", 3: "3"})
    assert a.value == b.value


# oracle


def test_oracle_values(s4):
    assert dw_oracle(cons.cyclic_group(1), cons.trivial_cochain(cons.cyclic_group(1)).values, s4).value == 1
    z2 = cons.cyclic_group(2)
    assert abs(dw_oracle(z2, cons.trivial_cochain(z2).values, s4).value - 0.5) < 1e-12
    z3 = cons.cyclic_group(3)
    assert abs(dw_oracle(z3, cons.trivial_cochain(z3).values, s4).value - 1 / 3) < 1e-12


def test_oracle_rejects_stratified(z2, knot):
    with pytest.raises(Unsupported):
        dw_oracle(z2, cons.trivial_cochain(z2).values, knot)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(2, 0), (2, 1), (3, 0), (3, 1), (3, 2)]))
def test_invariant_matches_oracle_on_small_bulk_triangulations(seed, case):
    n, p = case
    omega = cons.standard_cocycle(n, p)
    b = cons.vec_group_fusion(omega)
    rng = random.Random(seed)
    t = direct(boundary_4_simplex())
    for _ in range(3):
        step = random_move(t, rng, BULK_MOVES)
        if step is None or len(step[2].complex.tets) > 12:
            break
        t = step[2]
        assert abs(invariant(b, t).value - dw_oracle(omega.group, omega.values, t).value) <= 1e-9


# reordering and determinism


@settings(max_examples=6, deadline=None)
@given(st.randoms(use_true_random=False))
def test_reordering_invariance(rnd):
    fib = cons.fibonacci()
    for gen in (boundary_4_simplex, sphere_join_unknot_disk):
        c = gen()
        base = invariant(fib, direct(c)).value
        order = {}
        for v, d in sorted(c.vertices.items()):
            order.setdefault(d, []).append(v)
        for vs in order.values():
            rnd.shuffle(vs)
        assert abs(invariant(fib, direct(c, order)).value - base) <= 1e-9


def test_single_thread_is_bit_identical(fib, disk, defect_fib):
    assert repr(invariant(defect_fib, disk)) == repr(invariant(defect_fib, disk))


def test_threads_agree(fib, s4):
    a = invariant(fib, s4)
    b = invariant(fib, s4, threads=2)
    assert a.close(b) and a.colorings_counted == b.colorings_counted


# harness


def test_invariance_trivial(triv, s4):
    trace = invariance_check(triv, s4, ["1-4", "2-3", "3-2", "4-1"])
    assert all(s["deviation"] == 0 for s in trace.steps)


def test_invariance_twisted_z2(vec_z2_twisted, s4):
    trace = invariance_check(vec_z2_twisted, s4, ["1-4", "2-3"])
    assert trace.max_deviation < 1e-9
    assert len(trace.to_json()["trace"]) == 3


def test_invariance_defect(defect_z2, defect_fib, disk):
    for b in (defect_z2, defect_fib):
        trace = invariance_check(b, disk, ["2-6", "6-2"])
        assert trace.ok and trace.max_deviation < 1e-9


def test_inapplicable_move_reports_index(vec_z2, s4):
    with pytest.raises(InapplicableSite) as err:
        invariance_check(vec_z2, s4, ["1-4", ("2-3", (0, 1, 4))])
    assert err.value.index == 2


def test_amplitude_close():
    a = Amplitude(1 + 0j, tolerance=1e-9)
    assert a.close(1 + 1e-10) and not a.close(1.1)
