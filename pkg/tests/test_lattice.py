import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import group
from cyclicfact.counting import cf2_bruteforce
from cyclicfact.errors import CapacityError, ValidationError
from cyclicfact.formulas import mobius_nt, tau
from cyclicfact.lattice import (
    DENSE_INCLUSION_LIMIT,
    dump_lattice,
    dumps_lattice,
    enumerate_subgroups,
    hall_mobius,
    is_elementary_abelian,
    mobius,
    mobius_from_bottom,
    mobius_to_top,
    prime_power,
    quotient_lattice_check,
)

SMALL = ["cyclic:6", "cyclic:12", "abelian:2^1,2^1", "abelian:3^1,3^1", "abelian:2^1,2^2",
         "abelian:2^1,2^1,2^1", "dihedral:3", "dihedral:4", "dihedral:6", "quaternion:3",
         "quaternion:4", "semidihedral:4", "modular:2,4", "dicyclic:3", "alternating:4",
         "gendicyclic:4,ahalfb", "symmetric:4"]


@pytest.mark.parametrize("spec", SMALL)
def test_enumeration_matches_naive_closure(spec):
    g = group(spec)
    lat = enumerate_subgroups(g)
    naive = oracles.all_subgroups(g)
    assert {frozenset(h.members) for h in lat.subgroups} == naive
    assert len(lat) == len(naive)
    cyc = {frozenset(lat.subgroups[i].members) for i in lat.cyclic_indices}
    assert cyc == oracles.cyclic_subgroups(g)


@pytest.mark.parametrize("spec,count,cyclic", [
    ("cyclic:6", 4, 4), ("cyclic:12", 6, 6), ("abelian:3^1,3^1", 6, 5), ("dihedral:4", 10, 7),
    ("quaternion:3", 6, 5), ("symmetric:4", 30, 17), ("alternating:5", 59, 32),
    ("symmetric:5", 156, 67), ("abelian:2^1,2^1,2^1,2^1,2^1", 374, 32),
])
def test_known_censuses(spec, count, cyclic):
    lat = enumerate_subgroups(group(spec))
    assert (len(lat), len(lat.cyclic_indices)) == (count, cyclic)


@pytest.mark.parametrize("n", range(3, 16))
def test_dihedral_subgroup_count(n):
    lat = enumerate_subgroups(group(f"dihedral:{n}"))
    assert len(lat) == sum(1 + n // d for d in oracles.divisors(n))


def test_ordering_and_closure():
    lat = enumerate_subgroups(group("symmetric:4"))
    orders = [h.order for h in lat.subgroups]
    assert orders == sorted(orders) and orders[0] == 1 and orders[-1] == 24
    for i in range(len(lat)):
        for j in range(len(lat)):
            m, k = lat.meet(i, j), lat.join(i, j)
            assert lat.contains(m, i) and lat.contains(m, j)
            assert lat.contains(i, k) and lat.contains(j, k)
    assert list(lat.cyclic_indices) == [i for i, h in enumerate(lat.subgroups) if h.is_cyclic]


def test_budget():
    with pytest.raises(CapacityError):
        enumerate_subgroups(group("symmetric:4"), budget=10)


def test_cyclic_poset_size_trivial():
    lat = enumerate_subgroups(group("dihedral:6"))
    assert lat.cyclic_poset_size(0) == 1 and lat.lattice_size(0) == 1


class TestMobius:
    @pytest.mark.parametrize("spec", SMALL)
    def test_matches_recursion_oracle(self, spec):
        g = group(spec)
        lat = enumerate_subgroups(g)
        mu = oracles.mobius_to_top({frozenset(h.members) for h in lat.subgroups})
        table = mobius(lat)
        assert [mu[frozenset(h.members)] for h in lat.subgroups] == list(table.to_top())
        assert mobius_to_top(lat) == list(table.to_top())

    @pytest.mark.parametrize("spec", SMALL)
    def test_interval_sums_vanish(self, spec):
        lat = enumerate_subgroups(group(spec))
        table = mobius(lat)
        for h in range(len(lat)):
            assert table(h, h) == 1
            for k in lat.above(h):
                if k != h:
                    between = [j for j in lat.above(h) if lat.contains(j, k)]
                    assert sum(table(j, k) for j in between) == 0

    @pytest.mark.parametrize("spec,value", [
        ("cyclic:7", -1), ("abelian:2^1,2^1", 2), ("quaternion:3", 0), ("symmetric:3", 3),
        ("symmetric:4", -12), ("alternating:5", -60), ("symmetric:5", 60),
        ("abelian:2^1,2^1,2^1,2^1,2^1", -1024),
    ])
    def test_known_values(self, spec, value):
        lat = enumerate_subgroups(group(spec))
        assert mobius(lat)(0, lat.top) == value == mobius_from_bottom(lat)[-1]

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 120))
    def test_cyclic_group_matches_number_theory(self, n):
        lat = enumerate_subgroups(group(f"cyclic:{n}"))
        assert len(lat) == tau(n)
        assert mobius(lat)(0, lat.top) == mobius_nt(n) == oracles.mobius_nt(n)


class TestHall:
    def test_closed_form(self):
        assert hall_mobius(2, 3, True) == -8
        assert hall_mobius(5, 1, True) == -1
        assert hall_mobius(2, 6, True) == 2**15
        assert hall_mobius(3, 3, False) == 0

    @pytest.mark.parametrize("spec", ["abelian:2^1,2^1,2^1", "abelian:3^1,3^1,3^1", "abelian:2^2,2^1",
                                      "quaternion:4", "dihedral:8", "modular:3,3", "abelian:5^1,5^1"])
    def test_against_lattice(self, spec):
        g = group(spec)
        p, n = prime_power(g.order)
        lat = enumerate_subgroups(g)
        assert mobius(lat)(0, lat.top) == hall_mobius(p, n, is_elementary_abelian(g))

    def test_prime_power(self):
        assert prime_power(64) == (2, 6)
        assert prime_power(12) is None
        assert prime_power(1) is None


class TestQuotients:
    def test_whole_group(self):
        lat = enumerate_subgroups(group("dihedral:4"))
        assert [(e.index, e.quotient_order, e.quotient_is_cyclic)
                for e in quotient_lattice_check(lat, lat.top)] == [(lat.top, 1, True)]

    def test_cyclic_quotients_all_cyclic(self):
        lat = enumerate_subgroups(group("cyclic:24"))
        for h in range(len(lat)):
            assert all(e.quotient_is_cyclic for e in quotient_lattice_check(lat, h))

    def test_non_normal_rejected(self):
        lat = enumerate_subgroups(group("symmetric:3"))
        non_normal = next(i for i, h in enumerate(lat.subgroups) if h.order == 2)
        with pytest.raises(ValidationError):
            quotient_lattice_check(lat, non_normal)

    @pytest.mark.parametrize("spec", ["abelian:2^1,2^2", "abelian:3^1,3^2", "abelian:2^1,2^1,2^2",
                                      "abelian:5^1,5^1", "abelian:2^2,2^2"])
    def test_abelian_cyclic_quotient_sum(self, spec):
        # CF2(G) = sum over H of |L1(G/H)|^2 mu(H) for abelian p-groups
        g = group(spec)
        lat = enumerate_subgroups(g)
        table = mobius(lat)
        total = 0
        for h in range(len(lat)):
            entries = quotient_lattice_check(lat, h)
            cyc_quotients = sum(e.quotient_is_cyclic for e in entries)
            total += cyc_quotients**2 * table(0, h)
        assert total == cf2_bruteforce(g)


class TestDump:
    def test_fields_and_determinism(self):
        lat = enumerate_subgroups(group("quaternion:3"))
        doc = dump_lattice(lat)
        assert set(doc) == {"group_name", "order", "subgroups", "inclusion_pairs", "mobius"}
        assert len(doc["subgroups"]) == 6
        assert all(s["members"] == sorted(s["members"]) for s in doc["subgroups"])
        mu = {(m["h"], m["k"]): m["value"] for m in doc["mobius"]}
        assert mu[(0, 5)] == 0
        again = dumps_lattice(enumerate_subgroups(group("quaternion:3")))
        assert dumps_lattice(lat) == again
        assert json.loads(again) == doc

    def test_inclusion_pairs_strict(self):
        lat = enumerate_subgroups(group("dihedral:4"))
        pairs = lat.inclusion_pairs()
        assert all(i != j and lat.contains(i, j) for i, j in pairs)
        assert len(pairs) == int(lat.leq.sum()) - len(lat)


def test_dense_limit_constant():
    assert DENSE_INCLUSION_LIMIT == 4096


def test_large_lattice_mobius_exact():
    lat = enumerate_subgroups(group("abelian:2^1,2^1,2^1,2^1,2^1"))
    values = mobius(lat).values
    assert values.dtype == np.int64 or values.dtype == object
    assert mobius(lat)(0, lat.top) == -(2**10)
