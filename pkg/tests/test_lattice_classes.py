from math import comb

import pytest

from basscensus import finite as fin
from basscensus import lattice_classes as lc
from basscensus import local_orders as lo
from basscensus.errors import UsageError


@pytest.mark.parametrize("level,u", [(0, 1), (1, 1), (1, 2), (2, 1), (2, 2), (3, 2)])
def test_eichler_counts(level, u):
    assert len(lc.eichler_lattice_classes(level, u)) == comb(u + level, u)


def test_bass_tuples_split_minus_one():
    chain = lo.overorder_chain(lo.tensor_local_order((3,), 3))
    classes = lc.bass_lattice_classes(chain, ("split", 2))
    assert sorted(l.data for l in classes) == [(0, 1), (2, 0)]
    assert len(lc.bass_lattice_classes(chain, ("split", 1))) == 1


def test_bass_shape_mismatch():
    chain = lo.overorder_chain(lo.tensor_local_order((4,), 2))
    with pytest.raises(Exception):
        lc.bass_lattice_classes(chain, ("division", 1))


@pytest.mark.parametrize("n,p,u,count", [((3,), 3, 2, 2), ((4,), 2, 2, 2), ((5,), 5, 1, 1),
                                         ((8,), 2, 1, 1), ((6,), 3, 1, 1)])
def test_brute_force_census(n, p, u, count):
    chain = lo.overorder_chain(lo.tensor_local_order(n, p))
    assert lc.brute_force_bass_count(chain, u).count == count


def test_brute_force_rank_limit():
    chain = lo.overorder_chain(lo.tensor_local_order((3,), 3))
    with pytest.raises(UsageError):
        lc.brute_force_bass_count(chain, 3)


def test_census_3_6_per_delta():
    res = lc.quotient_orbit_classification(((3, 6), 2))
    assert res.details["per_delta"] == [3, 3, 1, 1]
    assert len(res) == 8


def test_census_3_6_alternative_field():
    res = lc.census_3_6(fin.FiniteField.normal_basis(2))
    assert res.details["per_delta"] == [3, 3, 1, 1]


def test_columns_not_isomorphic():
    assert lc.columns_isomorphic() is False


@pytest.mark.parametrize("variant", ["default", "alternative"])
def test_census_1_2(variant):
    res = lc.quotient_orbit_classification((1, 2), 2, variant)
    assert res.names() == ["A (graph)", "R (index-1 congruence)", "O x O (ambient)"]


@pytest.mark.parametrize("case,p", [((2, 4), 2), ((2, 6), 3)])
def test_census_2_2p(case, p):
    res = lc.quotient_orbit_classification(case, p)
    assert res.names() == ["Delta (ambient)", "Gamma (a = c)"]
    alt = lc.quotient_orbit_classification(case, p, "alternative")
    assert alt.names() == res.names()


def test_census_unknown_case():
    with pytest.raises(UsageError):
        lc.quotient_orbit_classification((3, 4), 2)


def test_commutative_classes_3_6():
    m = lo.commutative_local_order((3, 6), 2)
    assert [str(x) for x in lc.commutative_lattice_classes(m)] == ["A", "O_K"]
