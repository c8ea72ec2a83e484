import pytest

from basscensus import local_orders as lo
from basscensus.errors import UsageError


@pytest.mark.parametrize("p", [2, 3, 5])
def test_maximal_order_invariants(p):
    O = lo.local_maximal_order(p)
    assert lo.eichler_invariant(O) == -1
    assert lo.discriminant_exponent(O) == 1


def test_alternative_quadratic_model_agrees():
    for p in (2, 3, 5):
        O = lo.local_maximal_order(p, poly=lo.ALTERNATIVE_QUADRATIC[p])
        assert lo.eichler_invariant(O) == -1
        assert lo.discriminant_exponent(O) == 1


def test_matrix_order():
    M = lo.matrix_order(3)
    assert lo.eichler_invariant(M) == 2
    assert lo.discriminant_exponent(M) == 0


@pytest.mark.parametrize("n,p,e,disc", [(3, 3, -1, 2), (4, 2, -1, 2), (12, 2, 1, 2),
                                        (12, 3, 1, 2), (3, 2, 1, 1), (5, 5, -1, 4),
                                        (8, 2, -1, 4)])
def test_tensor_order_invariants(n, p, e, disc):
    m = lo.tensor_local_order((n,), p)
    assert lo.eichler_invariant(m) == e
    assert lo.stable_discriminant_exponent(m)[0] == disc


def test_precision_escalation_for_8_2():
    m = lo.tensor_local_order((8,), 2)
    n, k = lo.stable_discriminant_exponent(m)
    assert (n, k) == (4, 5)


@pytest.mark.parametrize("n,p,m", [(3, 3, 1), (4, 2, 1), (5, 5, 2), (8, 2, 2)])
def test_chain_lengths(n, p, m):
    chain = lo.overorder_chain(lo.tensor_local_order((n,), p))
    assert chain.m == m
    assert chain.exponents[-1] == 0
    assert all(a - b == 2 for a, b in zip(chain.exponents, chain.exponents[1:]))


def test_chain_rejects_eichler_orders():
    with pytest.raises(UsageError):
        lo.overorder_chain(lo.tensor_local_order((12,), 2))


def test_full_and_restricted_overorder_search_agree():
    m = lo.tensor_local_order((3,), 3)
    full = lo.minimal_overorders(m, "full")
    restricted = lo.minimal_overorders(m, "radical-idealizer")
    assert [w.key for w in full] == [w.key for w in restricted]


def test_commutative_overorders():
    m = lo.commutative_local_order((1, 2), 2)
    ws = lo.overorders_in(m, "full")
    assert len(ws) == 2
    top = lo.overorder_model(m, ws[-1])
    assert top.order.lattice == lo.maximal_commutative_lattice((1, 2))


def test_bad_precision():
    with pytest.raises(UsageError):
        lo.local_maximal_order(2, k=1)
