import itertools

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from biparcel_tv import constructions as cons
from biparcel_tv.biparcel import check_move_consistency, validate
from biparcel_tv.errors import InvalidCocycle, InvalidFunctor, InvalidSector
from biparcel_tv.gaunt import (
    Functor,
    chaotic_preorder,
    functor_to_group,
    identity_functor,
    poset_chain,
    terminal_category,
)
from biparcel_tv.io import dumps


def _sign_cochain(group, flips):
    vals = dict(cons.standard_cocycle(2).values)
    for t in flips:
        vals[t] = -vals[t]
    return cons.Cochain3(group, vals)


# cocycles


def test_trivial_cochain_is_cocycle(z2):
    assert cons.check_cocycle(cons.trivial_cochain(z2)) == (True, None)


def test_sign_cocycle_on_z2():
    c = cons.standard_cocycle(2)
    assert abs(c("1", "1", "1") + 1) < 1e-12
    assert all(abs(v - 1) < 1e-12 for t, v in c.values.items() if t != ("1", "1", "1"))
    assert cons.check_cocycle(c) == (True, None)
    assert c.normalized


def test_flipping_the_only_free_value_stays_a_cocycle(z2):
    # undoing the sign at (1,1,1) leaves the trivial cochain
    assert cons.check_cocycle(_sign_cochain(z2, [("1", "1", "1")]))[0]


def test_flipped_cochain_witness(z2):
    ok, witness = cons.check_cocycle(_sign_cochain(z2, [("1", "0", "1")]))
    assert not ok
    assert witness == ("1", "0", "0", "1")


@pytest.mark.parametrize("p", [0, 1, 2])
def test_standard_cocycles_z3(p):
    assert cons.check_cocycle(cons.standard_cocycle(3, p))[0]


def test_cochain_json_roundtrip():
    c = cons.standard_cocycle(3)
    back = cons.Cochain3.from_json(c.to_json())
    assert back.to_json() == c.to_json()


# pointed


def test_pointed_over_terminal(z2):
    t = terminal_category()
    phi = functor_to_group(t, z2, {})
    b = cons.pointed_biparcel(z2, cons.trivial_cochain(z2), t, phi)
    assert len(b.simples) == 1


def test_pointed_over_chain2(z2):
    g = poset_chain(2)
    b = cons.pointed_biparcel(z2, cons.standard_cocycle(2), g, functor_to_group(g, z2, {"1->2": "1"}))
    assert len(b.simples) == 3
    assert all(b.dim(s) == 1 for s in b.simples)
    assert [len(b.over(a)) for a in sorted(g.arrows)] == [1, 1, 1]
    assert validate(b).ok and check_move_consistency(b).ok


@pytest.mark.parametrize("gens", [{"1->2": "1", "2->3": "2"}, {"1->2": "0", "2->3": "0"}, {"1->2": "2", "2->3": "2"}])
def test_pointed_over_chain3_z3(gens):
    z3 = cons.cyclic_group(3)
    g = poset_chain(3)
    b = cons.pointed_biparcel(z3, cons.standard_cocycle(3), g, functor_to_group(g, z3, gens))
    assert len(b.simples) == 6
    assert check_move_consistency(b).ok


def test_pointed_amplitudes_follow_phi(defect_z2):
    key = ("1@1->2", "0@id_2", "1@2->3", "0@1->3", "1@1->2", "1@2->3", 0, 0, 0, 0)
    assert key in defect_z2.tet_plus
    assert abs(defect_z2.tet_plus[key] - 1) < 1e-12  # omega(1,0,1) = 1


def test_pointed_rejects_non_cocycle(z2):
    g = poset_chain(2)
    with pytest.raises(InvalidCocycle):
        cons.pointed_biparcel(z2, _sign_cochain(z2, [("1", "0", "1")]), g, functor_to_group(g, z2, {"1->2": "1"}))


def test_pointed_rejects_bad_functor(z2):
    g = poset_chain(3)
    amap = {"id_1": "0", "id_2": "0", "id_3": "0", "1->2": "1", "2->3": "1", "1->3": "1"}
    phi = Functor(g, z2, {x: "*" for x in g.objects}, amap)
    with pytest.raises(InvalidFunctor):
        cons.pointed_biparcel(z2, cons.trivial_cochain(z2), g, phi)


@settings(max_examples=6, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.sampled_from(list(itertools.product([str(i) for i in range(3)], repeat=3))),
       st.sampled_from([-1, 1j, -1j]))
def test_non_cocycles_fail_move_consistency_z3(triple, factor):
    c = cons.standard_cocycle(3)
    vals = dict(c.values)
    vals[triple] *= factor
    bad = cons.Cochain3(c.group, vals)
    assert not cons.check_cocycle(bad)[0]
    assert not check_move_consistency(cons.vec_group_fusion(bad, check=False)).ok


# fusion


def test_fusion_vec_z2(vec_z2):
    assert len(vec_z2.simples) == 2
    assert vec_z2.constants["1"] == 2


def test_single_simple_is_trivial():
    key = ("e",) * 6 + (0, 0, 0, 0)
    b = cons.fusion_biparcel(["e"], {"e": 1}, {("e", "e"): {"e": 1}}, {key: 1}, {key: 1})
    assert len(b.simples) == 1 and b.constants["1"] == 1


def test_fibonacci(fib):
    assert validate(fib).ok
    tau = fib.dim("tau")
    assert abs(tau**2 - 1 - tau) < 1e-12
    assert check_move_consistency(fib).ok


def test_fibonacci_symbol_values():
    phi = cons.PHI
    assert cons.fibonacci_symbol(["tau"] * 6) == pytest.approx(-1 / phi**2)
    assert cons.fibonacci_symbol(["tau", "tau", "tau", "1", "1", "1"]) == pytest.approx(phi**-0.5)


def test_fusion_biparcel_propagates_validation_failure():
    from biparcel_tv.errors import ValidationFailed

    with pytest.raises(ValidationFailed):
        cons.fusion_biparcel(["1", "g"], {"1": 1, "g": 2}, {("1", "1"): {"1": 1}}, {}, {})


# sharp


def test_sharp_trivial_z2_is_graded_vec(triv, z2):
    s = cons.sharp_construction(triv, z2)
    assert len(s.simples) == 2 and len(s.base.objects) == 1
    renamed = cons.relabel(s, {"1.0": "0", "1.1": "1"}, s.base, {a: a for a in s.base.arrows}, {"*": "*"})
    assert cons.same_tables(renamed, cons.graded_vec(cons.trivial_cochain(z2)))


def test_sharp_with_trivial_groupoid_is_identity(vec_z2):
    s = cons.sharp_construction(vec_z2, cons.cyclic_group(1))
    renamed = cons.relabel(s, {"0.0": "0", "1.0": "1"}, vec_z2.base, {"0": "id_1"}, {"*": "1"})
    assert cons.same_tables(renamed, vec_z2)


def test_sharp_over_codiscrete(triv):
    s = cons.sharp_construction(triv, chaotic_preorder([1, 2]))
    assert len(s.simples) == 4
    assert validate(s).ok


# pullback


def test_pullback_along_identity(z2):
    d = cons.graded_vec(cons.standard_cocycle(2))
    p = cons.pullback(d, identity_functor(d.base), check=False)
    renamed = cons.relabel(p, {f"{g}@{g}": g for g in d.simples}, d.base,
                           {a: a for a in d.base.arrows}, {"*": "*"})
    assert cons.same_tables(renamed, d)


def test_pullback_matches_pointed(z2):
    g = poset_chain(2)
    phi = functor_to_group(g, z2, {"1->2": "1"})
    omega = cons.standard_cocycle(2)
    assert cons.same_tables(cons.pullback(cons.graded_vec(omega), phi),
                            cons.pointed_biparcel(z2, omega, g, phi))


def test_pullback_of_sectors():
    m = cons.matrix_units(2)
    g = poset_chain(2)
    phi = Functor(g, m.base, {"1": "1", "2": "2"}, {"id_1": "id_1", "id_2": "id_2", "1->2": "1->2"})
    p = cons.pullback(m, phi)
    assert sorted(p.simples) == ["e11@id_1", "e12@1->2", "e22@id_2"]
    assert p.simples["e12@1->2"].dual is None  # no reversed arrow in the chain
    assert validate(p).ok and check_move_consistency(p).ok


def test_pullback_fibers_are_restrictions(fib, defect_fib):
    for a in defect_fib.base.arrows:
        assert cons.fiber(defect_fib, a) == cons.fiber(fib, "id_1")


# sectors


def test_single_sector_is_unchanged(fib):
    s = cons.multifusion_sectors(list(fib.simples.values()), {k: ("x", "x") for k in fib.simples},
                                 {"x": "1"}, [(a, b, c, m) for (a, b), r in fib.fusion.items() for c, m in r.items()],
                                 fib.tet_plus, fib.tet_minus)
    assert len(s.base.objects) == 1
    assert {k: v.dim for k, v in s.simples.items()} == {k: v.dim for k, v in fib.simples.items()}


def test_matrix_units():
    m = cons.matrix_units(2)
    assert len(m.simples) == 4
    assert validate(m).ok
    assert m.constants == {"1": 1, "2": 1}
    assert check_move_consistency(m).ok


def test_sector_crossing_entry_rejected():
    m = cons.matrix_units(2)
    simples = list(m.simples.values())
    sector = {"e11": (1, 1), "e12": (1, 2), "e21": (2, 1), "e22": (2, 2)}
    fusion = [(a, b, c, k) for (a, b), r in m.fusion.items() for c, k in r.items()]
    fusion.append(("e11", "e22", "e12", 1))
    with pytest.raises(InvalidSector) as err:
        cons.multifusion_sectors(simples, sector, {1: "e11", 2: "e22"}, fusion, m.tet_plus, m.tet_minus)
    assert err.value.witness == ("e11", "e22", "e12")


# determinism


def test_constructions_are_deterministic(z2):
    g = poset_chain(3)
    def build():
        phi = functor_to_group(g, z2, {"1->2": "1", "2->3": "1"})
        return dumps(cons.pointed_biparcel(z2, cons.standard_cocycle(2), g, phi).to_json())
    assert build() == build()
    assert dumps(cons.fibonacci().to_json()) == dumps(cons.fibonacci().to_json())
