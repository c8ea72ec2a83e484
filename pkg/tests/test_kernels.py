import os
import subprocess
import sys

import numpy as np
import pytest

from basscensus import _kernels as K
from basscensus import finite as fin

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba unavailable")


@needs_numba
@pytest.mark.parametrize("p", [2, 3, 5])
def test_mul_batch_paths_agree(p):
    rng = np.random.default_rng(p)
    c = rng.integers(0, p, size=(6, 6, 6))
    a = rng.integers(0, p ** 3, size=(50, 6))
    b = rng.integers(0, p ** 3, size=(50, 6))
    mod = p ** 3
    assert np.array_equal(K.mul_batch(c, a, b, mod, use_numba=True),
                          K.mul_batch(c, a, b, mod, use_numba=False))


@needs_numba
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rref_paths_agree(p):
    rng = np.random.default_rng(10 + p)
    for shape in [(3, 5), (6, 6), (8, 4), (1, 7)]:
        m = rng.integers(0, p, size=shape)
        r1, piv1 = K.rref(m, p, use_numba=True)
        r2, piv2 = K.rref(m, p, use_numba=False)
        assert np.array_equal(r1, r2)
        assert np.array_equal(piv1, piv2)


@needs_numba
@pytest.mark.parametrize("p,k", [(2, 6), (3, 4), (5, 3)])
def test_smith_paths_agree(p, k):
    rng = np.random.default_rng(100 * p + k)
    for _ in range(10):
        m = rng.integers(0, p ** k, size=(5, 5))
        assert np.array_equal(K.smith_valuations(m, p, k, use_numba=True),
                              K.smith_valuations(m, p, k, use_numba=False))


@needs_numba
def test_box_vectors_paths_agree():
    gram = np.array([[2, 1, 0, 0], [1, 2, 0, 0], [0, 0, 2, 1], [0, 0, 1, 4]])
    bounds = np.array([2, 2, 2, 2])
    for target in (2, 4, 6):
        assert np.array_equal(K.box_vectors(gram, bounds, target, use_numba=True),
                              K.box_vectors(gram, bounds, target, use_numba=False))


def test_smith_matches_diagonal():
    m = np.diag([4, 2, 1, 8])
    assert list(K.smith_valuations(m, 2, 6)) == [0, 1, 2, 3]


def test_rref_rank():
    m = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    rows, piv = K.rref(m, 5)
    assert len(piv) == 2
    assert fin.rref_rows(m, 5).shape[0] == 2


def test_disable_flag_fallback():
    code = ("from basscensus import _kernels as K, counting as ct;"
            "print(K.HAVE_NUMBA, ct.count((3,), 3, 'computed').value)")
    env = dict(os.environ, BASSCENSUS_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    assert out.stdout.split() == ["False", "2"]
