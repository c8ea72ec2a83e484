"""
Class numbers of the genera that occur in the census.

* ``h_maximal_quaternion``: the closed formula for the maximal order of
  the definite quaternion algebra ramified at {p, inf}, checked against
  the mass of the unit group.
* ``unit_image_double_cosets``: |left \\ G / right| where G is a finite
  unit group of a residue ring, left the image of the global units and
  right the image of the local units of the endomorphism order.
* ``class_number_of_genus``: dispatch over lattice classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import cyclotomic as cyc
from . import finite as fin
from . import quaternion as quat
from .errors import InternalConsistencyError, UnsupportedError, UsageError


def kronecker(a, p):
    """Kronecker symbol (a | p) for a prime p."""
    if p == 2:
        if a % 2 == 0:
            return 0
        return 1 if a % 8 in (1, 7) else -1
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def h_maximal_quaternion_exact(p) -> Fraction:
    return (Fraction(p - 1, 12) + Fraction(1, 3) * (1 - kronecker(-3, p))
            + Fraction(1, 4) * (1 - kronecker(-4, p)))


def h_maximal_quaternion(p) -> int:
    h = h_maximal_quaternion_exact(p)
    if h.denominator != 1:
        raise InternalConsistencyError(f"class number formula gave {h} at p={p}")
    return int(h)


def mass(p) -> Fraction:
    """sum 1/|O_i^x / {+-1}|, which must equal (p - 1)/12."""
    return Fraction(p - 1, 12)


def check_mass(p):
    """For class number one the mass is 2/|O^x|."""
    if h_maximal_quaternion(p) != 1:
        raise UsageError("mass check implemented for class number one")
    units = quat.unit_group(quat.maximal_order(p))
    got = Fraction(2, len(units))
    if got != mass(p):
        raise InternalConsistencyError(f"mass {got} differs from {mass(p)} at p={p}")
    return got


# ---------------------------------------------------------------------------
# unit images in residue rings
# ---------------------------------------------------------------------------

@dataclass
class ResidueData:
    p: int
    ring: fin.QuotientAlgebra       # O/pO
    field: fin.QuotientAlgebra      # O/P = F_{p^2}
    proj: np.ndarray                # O/pO -> O/P
    unit_coords: list               # global units in O/pO coordinates

    def field_images(self):
        return sorted({tuple(int(x) for x in u @ self.proj % self.p) for u in self.unit_coords})

    def ring_images(self):
        return sorted({tuple(int(x) for x in u) for u in self.unit_coords})


@lru_cache(maxsize=None)
def residue_data(p) -> ResidueData:
    O = quat.maximal_order(p)
    ring = O.to_integral().quotient(p, 1)
    J = fin.jacobson_radical(ring)
    field_, proj = ring.quotient(J, name="O/P")
    units = [np.array([int(c) % p for c in O.coords(u)], dtype=np.int64)
             for u in quat.unit_group(O)]
    return ResidueData(p, ring, field_, proj, units)


def cyclotomic_root_mod(n, p):
    """A root of Phi_n mod p (for Phi_n totally ramified at p)."""
    phi = cyc.cyclotomic_polynomial(n).coeffs
    roots = [t for t in range(p) if cyc.poly_eval(phi, t, p) == 0]
    if not roots:
        raise UsageError(f"Phi_{n} has no root mod {p}")
    return roots[0]


def cyclotomic_unit_image(n, p):
    """Image of the roots of unity of Z[zeta_n] in its residue field F_p."""
    if cyc.euler_phi(n) == 1:
        return [1, p - 1] if p > 2 else [1]
    t = cyclotomic_root_mod(n, p)
    return sorted({cyc.poly_eval(r, t, p) for r in cyc.roots_of_unity(n)})


def _units_of(alg):
    return [tuple(int(x) for x in u.vector) for u in fin.unit_group_of_finite_algebra(alg)]


@dataclass
class DoubleCosetData:
    count: int
    group_order: int
    left_order: int
    right_order: int
    description: str = ""


def _double_cosets(algs, group, left, right, description):
    def mul(x, y):
        return tuple(tuple(int(v) for v in A.mul(np.array(a), np.array(b)))
                     for A, a, b in zip(algs, x, y))
    count = fin.double_coset_count(group, left, right, mul)
    return DoubleCosetData(count, len(group), len(set(left)), len(set(right)), description)


def unit_image_double_cosets(p, n2=None):
    """|O^x x A^x \\ F_{p^2}^x x F_p^x / diag F_p^x| for the genus of Gamma.

    ``n2`` is the cyclotomic index of the second component (2p by default).
    """
    n2 = 2 * p if n2 is None else n2
    res = residue_data(p)
    Fp = fin.QuotientAlgebra.from_field(fin.FiniteField(p))
    Fq = res.field
    group = [(x, (a,)) for x in _units_of(Fq) for a in range(1, p)]
    left = [(x, (a,)) for x in res.field_images() for a in cyclotomic_unit_image(n2, p)]
    one_q = tuple(int(v) for v in Fq.one)
    right = [(tuple(lam * v % p for v in one_q), (lam,)) for lam in range(1, p)]
    return _double_cosets((Fq, Fp), group, left, right,
                          f"F_{p * p} x F_{p} units, O^x x A_{n2}^x on the left")


def gluing_double_cosets(p, level="ring"):
    """|O^x x O^x \\ G x G / diag G| with G = (O/pO)^x or (O/P)^x."""
    res = residue_data(p)
    if level == "ring":
        A, images = res.ring, res.ring_images()
    elif level == "field":
        A, images = res.field, res.field_images()
    else:
        raise UsageError(f"unknown level {level!r}")
    G = _units_of(A)
    group = [(x, y) for x in G for y in G]
    left = [(x, y) for x in images for y in images]
    right = [(x, x) for x in G]
    return _double_cosets((A, A), group, left, right, f"gluing over O/{level}")


def serre_kernel(p, modulus="p"):
    """Global units congruent to 1 modulo pO (``"p"``) or the prime P (``"P"``)."""
    res = residue_data(p)
    O = quat.maximal_order(p)
    units = quat.unit_group(O)
    one = res.ring.one % p
    out = []
    for u, c in zip(units, res.unit_coords):
        diff = (c - one) % p
        if modulus == "p":
            hit = not diff.any()
        elif modulus == "P":
            hit = not (diff @ res.proj % p).any()
        else:
            raise UsageError(f"unknown modulus {modulus!r}")
        if hit:
            out.append(u)
    return out


def unit_reduction_summary(p):
    res = residue_data(p)
    return {
        "global_units": len(res.unit_coords),
        "ring_units": len(_units_of(res.ring)),
        "ring_image": len(res.ring_images()),
        "field_units": len(_units_of(res.field)),
        "field_image": len(res.field_images()),
    }


# ---------------------------------------------------------------------------
# genera
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenusRecord:
    case: tuple
    p: int
    label: str
    h: int
    method: str
    detail: dict = field(default_factory=dict, compare=False, hash=False)


def class_number_of_genus(case, p, label) -> GenusRecord:
    """Class number of the genus of a lattice with the given local class.

    Outside the rational components the algebra B (x) K has no real place, so
    the Eichler condition holds; with h(K) = 1 and reduced norms of local
    units surjective the genus has a single class.
    """
    nbar = cyc.normalize_case(case)
    name = str(label)
    hq = h_maximal_quaternion(p)
    if len(nbar) == 1:
        n = nbar[0]
        if n in (1, 2):
            return GenusRecord(nbar, p, name, hq, "quaternion class number")
        return GenusRecord(nbar, p, name, 1, "eichler condition, unit determinants surjective")
    if nbar in ((2, 4), (2, 6)) or nbar == (1, 2):
        if nbar[-1] % p:
            raise UnsupportedError(f"genus of {nbar} computed only at p dividing {nbar[-1]}")
    if nbar in ((2, 4), (2, 6)):
        if name.startswith("Delta"):
            return GenusRecord(nbar, p, name, hq, "maximal product")
        dc = unit_image_double_cosets(p, nbar[1])
        return GenusRecord(nbar, p, name, hq * dc.count, "unit double cosets",
                           {"group": dc.group_order, "left": dc.left_order})
    if nbar == (1, 2):
        if name.startswith("O x O"):
            return GenusRecord(nbar, p, name, hq * hq, "maximal product")
        level = "ring" if name.startswith("A") else "field"
        dc = gluing_double_cosets(p, level)
        return GenusRecord(nbar, p, name, hq * hq * dc.count, "unit double cosets",
                           {"group": dc.group_order, "left": dc.left_order})
    if nbar == (2, 3):
        return GenusRecord(nbar, p, name, hq, "maximal product")
    return GenusRecord(nbar, p, name, 1, "eichler condition")
