from fractions import Fraction

import pytest

from basscensus import class_numbers as cn
from basscensus.errors import UnsupportedError


@pytest.mark.parametrize("p,h", [(2, 1), (3, 1), (5, 1), (7, 1), (11, 2), (13, 1),
                                 (23, 3), (37, 3)])
def test_class_number_formula(p, h):
    exact = cn.h_maximal_quaternion_exact(p)
    assert isinstance(exact, Fraction) and exact == h


@pytest.mark.parametrize("p", [2, 3, 5])
def test_mass_formula(p):
    assert cn.check_mass(p) == Fraction(p - 1, 12)


def test_kronecker():
    assert [cn.kronecker(-3, p) for p in (2, 3, 5, 7)] == [-1, 0, -1, 1]
    assert [cn.kronecker(-4, p) for p in (2, 3, 5)] == [0, -1, 1]


def test_unit_images():
    s2 = cn.unit_reduction_summary(2)
    assert (s2["ring_units"], s2["ring_image"], s2["field_image"]) == (12, 12, 3)
    s3 = cn.unit_reduction_summary(3)
    assert (s3["field_units"], s3["field_image"]) == (8, 4)


def test_serre_kernels():
    assert len(cn.serre_kernel(2, "p")) == 2
    assert len(cn.serre_kernel(3, "p")) == 1
    # units of order 3 reduce to 1 modulo the prime above 3
    assert len(cn.serre_kernel(3, "P")) == 3


@pytest.mark.parametrize("p,count", [(2, 1), (3, 2)])
def test_gamma_double_cosets(p, count):
    assert cn.unit_image_double_cosets(p).count == count


def test_gluing_double_cosets():
    assert cn.gluing_double_cosets(2, "ring").count == 1
    assert cn.gluing_double_cosets(2, "field").count == 1


def test_genus_dispatch():
    assert cn.class_number_of_genus((2, 6), 3, "Gamma (a = c)").h == 2
    assert cn.class_number_of_genus((2, 6), 3, "Delta (ambient)").h == 1
    assert cn.class_number_of_genus((5,), 5, "x").h == 1
    with pytest.raises(UnsupportedError):
        cn.class_number_of_genus((2, 4), 3, "Gamma (a = c)")
