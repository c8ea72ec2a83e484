import numpy as np
import pytest

from basscensus import finite as fin
from basscensus.errors import StructuralError, UsageError


@pytest.mark.parametrize("p", [2, 3, 5])
def test_field_axioms(p):
    F = fin.FiniteField(p, 2)
    els = F.elements()
    one = F(1)
    for x in els:
        assert x * one == x
        if x:
            assert x * x.inverse() == one
    g = F.gen
    assert len({(g ** k).index for k in range(F.q - 1)}) >= 2


def test_frobenius_is_additive():
    F = fin.FiniteField(3, 2)
    for x in F.elements():
        for y in F.elements():
            assert F.frobenius(x + y) == F.frobenius(x) + F.frobenius(y)


@pytest.mark.parametrize("p", [2, 3])
def test_normal_basis_presents_same_field(p):
    F = fin.FiniteField.normal_basis(p)
    one = F(1)
    assert all(x * one == x for x in F.elements())
    assert len(F.units()) == p * p - 1


def test_reducible_polynomial_rejected():
    with pytest.raises(StructuralError):
        fin.FiniteField(2, 2, poly=(0, 1))
    with pytest.raises(UsageError):
        fin.FiniteField(4)


def test_matrix_algebra_units():
    M = fin.QuotientAlgebra.matrix_algebra(2, 2, 1)
    M.check_axioms()
    assert len(fin.unit_group_of_finite_algebra(M)) == 6
    assert fin.semisimple_type(M) == "full-matrix"


def test_trivial_extension_structure():
    F = fin.FiniteField(2, 2)
    E = fin.QuotientAlgebra.trivial_extension(F)
    E.check_axioms()
    J = fin.jacobson_radical(E)
    assert J.dim == 4
    assert len(fin.unit_group_of_finite_algebra(E)) == 144
    assert fin.semisimple_type(E, base_degree=2) == "split-pair"


def test_truncated_polynomial_radical():
    F = fin.FiniteField(3)
    A = fin.QuotientAlgebra.truncated_polynomial(F, 3)
    assert fin.jacobson_radical(A).dim == 2
    assert fin.semisimple_type(A) == "field"


def test_quotient_by_radical_is_field():
    F = fin.FiniteField(3, 2)
    A = fin.QuotientAlgebra.truncated_polynomial(F, 2)
    S, proj = A.quotient(fin.jacobson_radical(A))
    assert S.dim == 2 and S.is_commutative()
    assert fin.semisimple_type(S, base_degree=2) == "field"


def test_submodules_of_regular_module():
    # F_2[x]/(x^2) has ideals 0, (x), whole
    A = fin.QuotientAlgebra.truncated_polynomial(fin.FiniteField(2), 2)
    subs = fin.enumerate_submodules(A.left_regular_module())
    assert [s.dim for s in subs] == [0, 1, 2]


def test_orbit_classes_projective_line():
    # GL_2(F_3) acting on lines of F_3^2: one orbit of size 4
    p = 3
    lines = [fin.SubmoduleBasis.span(v, p, 2) for v in fin.projective_points(p, 2)]
    gens = [np.array([[1, 1], [0, 1]]), np.array([[0, 1], [1, 0]])]
    orbits = fin.orbit_classes(lines, gens)
    assert len(orbits) == 1 and orbits[0].size == 4


def test_double_coset_count_trivial():
    G = list(range(6))
    mul = lambda a, b: (a + b) % 6
    assert fin.double_coset_count(G, [0, 3], [0, 2, 4], mul) == 1
    assert fin.double_coset_count(G, [0], [0, 3], mul) == 3


def test_solve_in_basis_rejects_outside():
    with pytest.raises(StructuralError):
        fin.solve_in_basis([[1, 0, 0]], [[0, 1, 0]], 5)
