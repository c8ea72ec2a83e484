import pytest

from basscensus import cyclotomic as cyc
from basscensus.errors import UsageError


def test_small_cyclotomic_polynomials():
    assert cyc.cyclotomic_polynomial(1).coeffs == (-1, 1)
    assert cyc.cyclotomic_polynomial(3).coeffs == (1, 1, 1)
    assert cyc.cyclotomic_polynomial(8).coeffs == (1, 0, 0, 0, 1)
    assert cyc.cyclotomic_polynomial(12).coeffs == (1, 0, -1, 0, 1)
    assert str(cyc.cyclotomic_polynomial(6)) == "T^2-T+1"


@pytest.mark.parametrize("n", range(1, 13))
def test_degree_is_phi(n):
    assert cyc.cyclotomic_polynomial(n).degree == cyc.euler_phi(n)


def test_product_of_divisors():
    # T^12 - 1 = prod over d | 12 of Phi_d
    f = (1,)
    for d in (1, 2, 3, 4, 6, 12):
        f = cyc.poly_mul(f, cyc.cyclotomic_polynomial(d).coeffs)
    assert f == (-1,) + (0,) * 11 + (1,)


@pytest.mark.parametrize("pair,idx", [((1, 2), 2), ((2, 3), 1), ((2, 4), 2),
                                      ((2, 6), 3), ((3, 4), 1), ((3, 6), 4)])
def test_pair_indices(pair, idx):
    assert cyc.pair_order(*pair).index == idx
    assert cyc.index(pair) == idx


def test_unsupported_inputs():
    with pytest.raises(UsageError):
        cyc.cyclotomic_polynomial(13)
    with pytest.raises(UsageError):
        cyc.pair_order(1, 3)
    with pytest.raises(UsageError):
        cyc.normalize_case((1, 2, 3))


@pytest.mark.parametrize("n,p,tag", [(3, 3, "ramified"), (3, 2, "inert"), (4, 5, "split"),
                                     (8, 3, "mixed-degree"), (5, 2, "inert"),
                                     (12, 2, "ramified")])
def test_local_splitting(n, p, tag):
    assert cyc.local_splitting(n, p).tag == tag


def test_nonmaximal_primes():
    assert cyc.nonmaximal_primes((3, 6), 3) == {2, 3}
    assert cyc.nonmaximal_primes((3, 4), 2) == {2}
    assert cyc.nonmaximal_primes(4, 5) == frozenset()


def test_roots_of_unity_counts():
    assert len(cyc.roots_of_unity(3)) == 6
    assert len(cyc.roots_of_unity(4)) == 4
