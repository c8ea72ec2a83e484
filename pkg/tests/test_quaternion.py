from fractions import Fraction

import pytest

from basscensus import quaternion as quat
from basscensus.errors import UsageError


@pytest.mark.parametrize("p,units", [(2, 24), (3, 12), (5, 6)])
def test_maximal_orders(p, units):
    O = quat.maximal_order(p)
    assert quat.reduced_discriminant(O) == p
    assert quat.ramified_places(O.algebra.a, O.algebra.b) == {p, quat.INF}
    assert len(quat.unit_group(O)) == units


def test_element_arithmetic():
    A = quat.QuaternionAlgebraQ(-1, -1)
    i, j, k = A.i, A.j, A.k
    assert i * j == k and j * i == -k
    x = A(1, 2, 3, 4)
    assert quat.reduced_norm(x) == 30
    assert quat.reduced_trace(x) == 2
    assert x * x.inverse() == A.one


@pytest.mark.parametrize("a,b", [(-1, -1), (-1, -3), (-2, -5), (3, 5), (-7, 11), (6, -10)])
def test_hilbert_reciprocity(a, b):
    places = [quat.INF] + [q for q in range(2, 60) if all(q % d for d in range(2, q))]
    prod = 1
    for v in places:
        prod *= quat.hilbert_symbol(a, b, v)
    assert prod == 1


@pytest.mark.parametrize("a,b", [(-1, -1), (3, 7), (-6, 10), (5, -2), (2, 3)])
def test_hilbert_methods_agree(a, b):
    assert quat.hilbert_symbol(a, b, 2) == quat.hilbert_symbol(a, b, 2, method="formula")
    for p in (3, 5, 7):
        assert quat.hilbert_symbol(a, b, p) == quat.hilbert_symbol(a, b, p, method="search")


def test_hilbert_rejects_zero():
    with pytest.raises(UsageError):
        quat.hilbert_symbol(0, 1, 3)


def test_short_vectors_norm_two():
    O = quat.maximal_order(2)
    # Hurwitz order: 24 elements of norm 2
    assert len(quat.short_vectors(O, 2)) == 24
    assert all(quat.reduced_norm(x) == 2 for x in quat.short_vectors(O, 2))


def test_unit_group_closed():
    O = quat.maximal_order(3)
    units = quat.unit_group(O)
    s = set(units)
    assert all(x * y in s for x in units for y in units)
    assert all(quat.reduced_norm(x) == Fraction(1) for x in units)
