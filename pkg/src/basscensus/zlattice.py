"""
Exact integer and rational linear algebra for orders over Z.

An :class:`IntegralAlgebra` is a Q-algebra with a fixed basis whose
structure constants are integers (so the basis spans a Z-order). Sub- and
over-orders are :class:`Lattice` objects inside it, stored as a common
denominator and an integer Hermite normal form, which makes equality a
plain comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import numpy as np

from . import _kernels as K
from .errors import PrecisionError, StructuralError


def bareiss_det(mat):
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    a = [[int(x) for x in row] for row in mat]
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf(rows):
    """Row Hermite normal form; zero rows are dropped."""
    a = [[int(x) for x in r] for r in rows]
    if not a:
        return []
    m = len(a[0])
    r = 0
    for c in range(m):
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            clean = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    clean = clean and a[i][c] == 0
            if clean:
                break
        if r < len(a) and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == len(a):
                break
    return [row for row in a[:r]]


def solve_fraction(basis, vectors):
    """Rational coordinates of ``vectors`` in a square invertible ``basis``."""
    n = len(basis)
    aug = [[Fraction(x) for x in basis[i]] for i in range(n)]
    # transpose: solve x @ basis = v  <=>  basis^T x^T = v^T
    mat = [[aug[j][i] for j in range(n)] for i in range(n)]
    vecs = [[Fraction(x) for x in v] for v in vectors]
    rhs = [[vecs[t][i] for t in range(len(vecs))] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if mat[i][c] != 0), None)
        if piv is None:
            raise StructuralError("basis is singular")
        mat[c], mat[piv] = mat[piv], mat[c]
        rhs[c], rhs[piv] = rhs[piv], rhs[c]
        inv = 1 / mat[c][c]
        mat[c] = [x * inv for x in mat[c]]
        rhs[c] = [x * inv for x in rhs[c]]
        for i in range(n):
            if i != c and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[c])]
                rhs[i] = [x - f * y for x, y in zip(rhs[i], rhs[c])]
    return [[rhs[i][t] for i in range(n)] for t in range(len(vecs))]


def _common_den(vectors):
    return reduce(lcm, (Fraction(x).denominator for v in vectors for x in v), 1)


@dataclass(frozen=True)
class Lattice:
    """The Z-span of ``rows / den`` (rows in Hermite normal form)."""
    den: int
    rows: tuple

    @classmethod
    def from_generators(cls, vectors):
        vectors = [[Fraction(x) for x in v] for v in vectors]
        d = _common_den(vectors)
        ints = [[int(x * d) for x in v] for v in vectors]
        h = hnf(ints)
        g = reduce(gcd, (x for r in h for x in r), d)
        return cls(d // g, tuple(tuple(x // g for x in r) for r in h))

    @property
    def rank(self):
        return len(self.rows)

    @property
    def dim(self):
        return len(self.rows[0]) if self.rows else 0

    def basis(self):
        return [[Fraction(x, self.den) for x in r] for r in self.rows]

    def coords(self, vectors):
        return solve_fraction(self.basis(), vectors)

    def contains(self, vectors):
        return all(x.denominator == 1 for c in self.coords(vectors) for x in c)

    def __le__(self, other):
        return other.contains(self.basis())

    def __add__(self, other):
        return Lattice.from_generators(self.basis() + other.basis())

    def scaled(self, c):
        c = Fraction(c)
        return Lattice.from_generators([[x * c for x in v] for v in self.basis()])

    def covolume(self):
        """|det| of the basis as an exact rational."""
        return Fraction(abs(bareiss_det(self.rows)), self.den ** self.rank)

    def index_in(self, other):
        """[other : self] for self contained in other."""
        q = self.covolume() / other.covolume()
        if q.denominator != 1:
            raise StructuralError("lattice is not contained in the larger lattice")
        return int(q)


class IntegralAlgebra:
    """A Q-algebra with integral structure constants on its defining basis."""

    def __init__(self, consts, one, name=""):
        self.consts = np.asarray(consts, dtype=object)
        self.dim = self.consts.shape[0]
        self.one = [Fraction(x) for x in one]
        self.name = name

    def mul(self, u, v):
        m = self.dim
        out = [Fraction(0)] * m
        for i in range(m):
            if u[i] == 0:
                continue
            for j in range(m):
                if v[j] == 0:
                    continue
                s = u[i] * v[j]
                row = self.consts[i, j]
                for l in range(m):
                    if row[l]:
                        out[l] += s * row[l]
        return out

    def standard_order(self):
        eye = [[Fraction(int(i == j)) for j in range(self.dim)] for i in range(self.dim)]
        return Order(self, Lattice.from_generators(eye), name=self.name)


class Order:
    """A full-rank multiplicatively closed lattice containing 1."""

    def __init__(self, algebra, lattice, name="", check=True):
        self.algebra = algebra
        self.lattice = lattice
        self.name = name
        self._consts = None
        if check:
            self.structure_constants()
            if not lattice.contains([algebra.one]):
                raise StructuralError("lattice does not contain 1")

    def __eq__(self, other):
        return isinstance(other, Order) and self.algebra is other.algebra \
            and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    @property
    def dim(self):
        return self.lattice.rank

    def basis(self):
        return self.lattice.basis()

    def structure_constants(self):
        if self._consts is None:
            b = self.basis()
            m = len(b)
            prods = [self.algebra.mul(b[i], b[j]) for i in range(m) for j in range(m)]
            coords = self.lattice.coords(prods)
            c = np.zeros((m, m, m), dtype=object)
            for idx, vec in enumerate(coords):
                if any(x.denominator != 1 for x in vec):
                    raise StructuralError(f"{self.name or 'lattice'} is not closed under products")
                c[idx // m, idx % m] = [int(x) for x in vec]
            self._consts = c
        return self._consts

    def one_coords(self):
        return [int(x) for x in self.lattice.coords([self.algebra.one])[0]]

    def quotient(self, p, k):
        """The finite algebra O / p^k O."""
        from .finite import QuotientAlgebra
        c = np.array(self.structure_constants() % (p ** k), dtype=np.int64)
        return QuotientAlgebra(p, k, c, self.one_coords(), name=f"{self.name} mod {p}^{k}",
                               check=False)

    def element(self, coords):
        """Ambient vector of the element with the given order coordinates."""
        b = self.basis()
        out = [Fraction(0)] * self.algebra.dim
        for c, row in zip(coords, b):
            if c:
                out = [x + Fraction(c) * y for x, y in zip(out, row)]
        return out

    def extend(self, vectors, p, name=""):
        """O + (1/p) * span(vectors), vectors given in O-coordinates."""
        gens = [[x / p for x in self.element(v)] for v in vectors]
        lat = self.lattice + Lattice.from_generators(gens) if gens else self.lattice
        return Order(self.algebra, lat, name=name)

    def contains(self, other):
        return other.lattice <= self.lattice

    def trace_form(self):
        """Integer Gram matrix of (x, y) -> tr_Z(L_{xy}) on the order basis."""
        c = self.structure_constants()
        m = self.dim
        t = [sum(c[l, j, j] for j in range(m)) for l in range(m)]
        return [[sum(c[i, j, l] * t[l] for l in range(m)) for j in range(m)] for i in range(m)]

    def multiplication_matrix(self, coords, side="left"):
        """Integer matrix of y -> x*y (or y*x), rows are images of basis vectors."""
        c = self.structure_constants()
        m = self.dim
        if side == "left":
            return [[sum(coords[i] * c[i, j, l] for i in range(m)) for l in range(m)]
                    for j in range(m)]
        return [[sum(coords[j] * c[i, j, l] for j in range(m)) for l in range(m)]
                for i in range(m)]


def vp(n, p):
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def det_valuation(mat, p, k, cross_check=True):
    """v_p(det mat) from Smith divisors mod p^k, cross-checked exactly.

    Raises :class:`PrecisionError` if some divisor vanishes (or nearly
    vanishes) modulo p^k.
    """
    arr = np.array([[int(x) % (p ** k) for x in row] for row in mat], dtype=np.int64)
    vals = K.smith_valuations(arr, p, k)
    if len(vals) and vals.max() >= k - 1:
        raise PrecisionError(f"elementary divisor valuation reaches k-1 = {k - 1}; "
                             f"recompute with larger precision", precision=k)
    total = int(vals.sum())
    if cross_check:
        exact = vp(bareiss_det(mat), p)
        if exact != total:
            raise PrecisionError(f"Smith valuation {total} differs from exact {exact}",
                                 precision=k)
    return total
