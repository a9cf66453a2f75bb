import math

import pytest

from biparcel_tv import constructions as cons
from biparcel_tv.complex import boundary_4_simplex, direct, sphere_join_unknot, sphere_join_unknot_disk
from biparcel_tv.gaunt import Functor, functor_to_group, poset_chain, terminal_category

PHI = (1 + math.sqrt(5)) / 2
TV_S3_FIB = 1 / (1 + PHI**2)


@pytest.fixture(scope="session")
def z2():
    return cons.cyclic_group(2)


@pytest.fixture(scope="session")
def vec_z2():
    return cons.vec_group_fusion(cons.trivial_cochain(cons.cyclic_group(2)))


@pytest.fixture(scope="session")
def vec_z2_twisted():
    return cons.vec_group_fusion(cons.standard_cocycle(2))


@pytest.fixture(scope="session")
def vec_z3():
    return cons.vec_group_fusion(cons.trivial_cochain(cons.cyclic_group(3)))


@pytest.fixture(scope="session")
def fib():
    return cons.fibonacci()


@pytest.fixture(scope="session")
def triv():
    return cons.trivial()


@pytest.fixture(scope="session")
def defect_z2(z2):
    """Pointed pullback over poset_chain(3) into Z/2 with the nontrivial cocycle."""
    g3 = poset_chain(3)
    phi = functor_to_group(g3, z2, {"1->2": "1", "2->3": "1"})
    return cons.pointed_biparcel(z2, cons.standard_cocycle(2), g3, phi)


@pytest.fixture(scope="session")
def defect_fib(fib):
    """Fibonacci spread over poset_chain(3): transparent defects, nontrivial values."""
    g3 = poset_chain(3)
    t = terminal_category()
    return cons.pullback(fib, Functor(g3, t, {x: "1" for x in g3.objects}, {a: "id_1" for a in g3.arrows}))


@pytest.fixture
def s4():
    return direct(boundary_4_simplex())


@pytest.fixture
def knot():
    return direct(sphere_join_unknot())


@pytest.fixture
def disk():
    return direct(sphere_join_unknot_disk())
