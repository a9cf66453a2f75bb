import dataclasses

import pytest

from biparcel_tv import constructions as cons
from biparcel_tv.biparcel import (
    Biparcel,
    SimpleArrow,
    check_move_consistency,
    global_constant,
    tet_amplitude,
    validate,
)
from biparcel_tv.errors import InadmissibleColoring, InvalidArgument

from conftest import PHI


def _with_dim(b, sid, dim):
    simples = [dataclasses.replace(s, dim=dim) if s.id == sid else s for s in b.simples.values()]
    fusion = [(a, c1, c, m) for (a, c1), row in b.fusion.items() for c, m in row.items()]
    return Biparcel.build(b.base, simples, b.identity_simples, fusion, b.tet_plus, b.tet_minus)


def test_trivial_passes_everything(triv):
    assert validate(triv).ok
    assert check_move_consistency(triv).ok


def test_vec_z2_completeness(vec_z2):
    rep = validate(vec_z2)
    assert rep.ok
    assert rep["completeness"].passed


def test_broken_dim_fails_completeness_at_gg(vec_z2):
    bad = _with_dim(vec_z2, "1", 2)
    rep = validate(bad)
    assert not rep["completeness"].passed
    # pairs involving the unit stay balanced: 1 * 2 == 2
    assert rep["completeness"].violations == 1
    assert rep["completeness"].witness == ("1", "1")


def test_global_constants(triv, vec_z2, fib):
    assert global_constant(triv, "1") == 1
    assert global_constant(vec_z2, "1") == 2
    assert abs(global_constant(fib, "1") - (1 + PHI**2)) < 1e-12
    assert abs(global_constant(fib, "1") - 3.6180339887) < 1e-9
    with pytest.raises(InvalidArgument):
        global_constant(fib, "nope")


def test_tet_amplitude_pointed(vec_z2, vec_z2_twisted):
    key = ("1", "1", "1", "1", "0", "0")
    assert tet_amplitude(vec_z2, key, +1) == 1
    assert tet_amplitude(vec_z2, key, -1) == 1
    assert abs(tet_amplitude(vec_z2_twisted, key, +1) - (-1)) < 1e-12
    assert abs(tet_amplitude(vec_z2_twisted, key, -1) - (-1)) < 1e-12


def test_tet_amplitude_is_pure(fib):
    key = ("tau",) * 6 + (0, 0, 0, 0)
    assert repr(tet_amplitude(fib, key, 1)) == repr(tet_amplitude(fib, key, 1))


def test_tet_amplitude_inadmissible(vec_z2):
    with pytest.raises(InadmissibleColoring):
        tet_amplitude(vec_z2, ("1", "1", "1", "1", "1", "0"), +1)


def test_absent_admissible_key_is_zero(vec_z2):
    stripped = vec_z2.with_tables({}, {})
    assert tet_amplitude(stripped, ("0",) * 6, 1) == 0


def test_identity_simple_checks():
    base = cons.terminal_category()
    b = Biparcel.build(base, [SimpleArrow("1", "id_1", 2 + 0j, "1")], {"1": "1"}, [("1", "1", "1", 1)], {}, {})
    assert not validate(b)["identity-simples"].passed


def test_dual_checks(vec_z3):
    simples = [dataclasses.replace(s, dual="0") if s.id == "2" else s for s in vec_z3.simples.values()]
    fusion = [(a, c1, c, m) for (a, c1), row in vec_z3.fusion.items() for c, m in row.items()]
    b = Biparcel.build(vec_z3.base, simples, vec_z3.identity_simples, fusion, vec_z3.tet_plus, vec_z3.tet_minus)
    assert not validate(b)["dual-involution"].passed


def test_tet_admissibility_check(vec_z2):
    bad = vec_z2.with_tables({("1", "1", "1", "1", "1", "1", 0, 0, 0, 0): 1}, vec_z2.tet_minus)
    assert not validate(bad)["tet-admissibility"].passed


def test_non_gaunt_base_rejected_for_biparcel(z2):
    d = cons.graded_vec(cons.trivial_cochain(z2))
    assert validate(d).ok  # as bicategory data
    strict = dataclasses.replace(d, require_gaunt=True)
    assert not validate(strict)["gaunt-base"].passed


def test_move_consistency_valid_cocycle(vec_z2_twisted):
    rep = check_move_consistency(vec_z2_twisted)
    assert rep.ok
    assert rep["move-2-3"].detail.startswith("320")


def test_move_consistency_rejects_non_cocycle(z2):
    vals = dict(cons.standard_cocycle(2).values)
    vals[("1", "0", "1")] = -1
    b = cons.vec_group_fusion(cons.Cochain3(z2, vals), check=False)
    rep = check_move_consistency(b)
    assert not rep.ok
    w = rep["move-2-3"].witness
    assert w["model"].startswith("2-3/") and abs(w["lhs"] - w["rhs"]) > 1


def test_fibonacci_quadratic(fib):
    d = fib.dim("tau")
    assert abs(d * d - (1 + d)) < 1e-12
    assert validate(fib).ok


def test_json_roundtrip(fib, defect_z2):
    for b in (fib, defect_z2):
        again = Biparcel.from_json(b.to_json())
        assert again.to_json() == b.to_json()


def test_malformed_json_raises():
    with pytest.raises(InvalidArgument):
        Biparcel.from_json({"simples": []})


def test_negative_multiplicity_rejected():
    with pytest.raises(InvalidArgument):
        Biparcel.build(cons.terminal_category(), [], {}, [("a", "b", "c", -1)], {}, {})
