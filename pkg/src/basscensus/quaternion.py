"""
Rational quaternion algebras (a, b / Q), Hilbert symbols, the maximal
orders of D_{p,inf} for p = 2, 3, 5 and their unit groups.

Elements are coordinate tuples on 1, i, j, k = ij with i^2 = a, j^2 = b.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from . import _kernels as K
from .errors import InternalConsistencyError, UsageError
from .zlattice import IntegralAlgebra, Lattice, Order, bareiss_det, solve_fraction

INF = "inf"


# ---------------------------------------------------------------------------
# Hilbert symbols
# ---------------------------------------------------------------------------

def _split_valuation(x, p):
    x = Fraction(x)
    if x == 0:
        raise UsageError("Hilbert symbol of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    # num/den ~ num*den modulo squares
    return v, num * den


def _legendre(u, p):
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _hilbert_odd(a, b, p):
    al, u = _split_valuation(a, p)
    be, w = _split_valuation(b, p)
    sign = -1 if (al * be * ((p - 1) // 2)) % 2 else 1
    return sign * _legendre(u, p) ** (be % 2) * _legendre(w, p) ** (al % 2)


def _class_at_2(x):
    v, u = _split_valuation(x, 2)
    return (v % 2), u % 8


def _hilbert_2_search(a, b, bits=6):
    """Primitive solubility of z^2 = a x^2 + b y^2 modulo 2^bits."""
    va, ua = _class_at_2(a)
    vb, ub = _class_at_2(b)
    a2, b2 = (2 ** va) * ua, (2 ** vb) * ub
    mod = 2 ** bits
    sq = [(t * t) % mod for t in range(mod)]
    sq_set = {}
    for t, s in enumerate(sq):
        sq_set.setdefault(s, []).append(t)
    for x in range(mod):
        for y in range(mod):
            rhs = (a2 * sq[x] + b2 * sq[y]) % mod
            for z in sq_set.get(rhs, ()):
                if x % 2 or y % 2 or z % 2:
                    return 1
    return -1


def _hilbert_2_formula(a, b):
    al, u = _split_valuation(a, 2)
    be, w = _split_valuation(b, 2)

    def eps(t):
        return ((t - 1) // 2) % 2

    def omega(t):
        return ((t * t - 1) // 8) % 2

    e = eps(u % 8) * eps(w % 8) + al * omega(w % 8) + be * omega(u % 8)
    return -1 if e % 2 else 1


def hilbert_symbol(a, b, v, method="default"):
    """(a, b)_v for v a prime or ``"inf"``.

    ``method="search"`` forces the bounded solubility search at every finite
    place (used as a cross-check for the closed formulas).
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise UsageError("Hilbert symbol needs nonzero arguments")
    if v == INF or v == "∞":
        return -1 if (a < 0 and b < 0) else 1
    p = int(v)
    if p < 2 or any(p % d == 0 for d in range(2, isqrt(p) + 1)):
        raise UsageError(f"{v} is not a place")
    if p == 2:
        if method == "formula":
            return _hilbert_2_formula(a, b)
        return _hilbert_2_search(a, b)
    if method == "search":
        return _hilbert_odd_search(a, b, p)
    return _hilbert_odd(a, b, p)


def _hilbert_odd_search(a, b, p):
    """Same search as at 2; modulo p^3 is enough after squarefree reduction."""
    al, u = _split_valuation(a, p)
    be, w = _split_valuation(b, p)
    a2, b2 = p ** (al % 2) * u, p ** (be % 2) * w
    mod = p ** 3
    sq = [(t * t) % mod for t in range(mod)]
    roots = {}
    for t, s in enumerate(sq):
        roots.setdefault(s, []).append(t)
    for x in range(mod):
        for y in range(mod):
            for z in roots.get((a2 * sq[x] + b2 * sq[y]) % mod, ()):
                if x % p or y % p or z % p:
                    return 1
    return -1


def _prime_factors(n):
    n = abs(n)
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def ramified_places(a, b):
    a, b = Fraction(a), Fraction(b)
    cand = {2}
    for x in (a, b):
        cand |= _prime_factors(x.numerator) | _prime_factors(x.denominator)
    places = {p for p in cand if hilbert_symbol(a, b, p) == -1}
    if hilbert_symbol(a, b, INF) == -1:
        places.add(INF)
    if len(places) % 2:
        raise InternalConsistencyError(f"odd number of ramified places for ({a},{b})")
    return places


# ---------------------------------------------------------------------------
# algebras and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuaternionAlgebraQ:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a == 0 or self.b == 0:
            raise UsageError("quaternion parameters must be nonzero")

    def __str__(self):
        return f"({self.a},{self.b} / Q)"

    def __call__(self, *coords):
        if len(coords) == 1:
            coords = tuple(coords[0])
        if len(coords) != 4:
            raise UsageError("a quaternion has four coordinates")
        return QuatElement(self, tuple(Fraction(c) for c in coords))

    @property
    def definite(self):
        return self.a < 0 and self.b < 0

    def product(self, x, y):
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
                x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
                x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
                x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1)

    def ramified_places(self):
        return ramified_places(self.a, self.b)

    @property
    def one(self):
        return self(1, 0, 0, 0)

    @property
    def i(self):
        return self(0, 1, 0, 0)

    @property
    def j(self):
        return self(0, 0, 1, 0)

    @property
    def k(self):
        return self(0, 0, 0, 1)


@dataclass(frozen=True)
class QuatElement:
    algebra: QuaternionAlgebraQ
    coords: tuple

    def _other(self, y):
        if isinstance(y, (int, Fraction)):
            return self.algebra(y, 0, 0, 0)
        if y.algebra != self.algebra:
            raise UsageError("elements of different algebras")
        return y

    def __add__(self, y):
        y = self._other(y)
        return QuatElement(self.algebra, tuple(s + t for s, t in zip(self.coords, y.coords)))

    __radd__ = __add__

    def __neg__(self):
        return QuatElement(self.algebra, tuple(-s for s in self.coords))

    def __sub__(self, y):
        return self + (-self._other(y))

    def __mul__(self, y):
        if isinstance(y, (int, Fraction)):
            return QuatElement(self.algebra, tuple(s * y for s in self.coords))
        y = self._other(y)
        return QuatElement(self.algebra, self.algebra.product(self.coords, y.coords))

    def __rmul__(self, c):
        return self * c

    def __truediv__(self, c):
        return QuatElement(self.algebra, tuple(s / Fraction(c) for s in self.coords))

    def conjugate(self):
        x0, x1, x2, x3 = self.coords
        return QuatElement(self.algebra, (x0, -x1, -x2, -x3))

    def inverse(self):
        n = reduced_norm(self)
        if n == 0:
            raise ZeroDivisionError("zero divisor has no inverse")
        return self.conjugate() / n

    def __repr__(self):
        names = ("", "i", "j", "k")
        parts = []
        for c, nm in zip(self.coords, names):
            if c:
                parts.append(f"{c}{('*' + nm) if nm else ''}")
        return " + ".join(parts) if parts else "0"


def reduced_norm(x: QuatElement) -> Fraction:
    a, b = x.algebra.a, x.algebra.b
    x0, x1, x2, x3 = x.coords
    return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3


def reduced_trace(x: QuatElement) -> Fraction:
    return 2 * x.coords[0]


# ---------------------------------------------------------------------------
# Z-orders
# ---------------------------------------------------------------------------

class ZOrder:
    """A Z-order given by four rational basis quaternions."""

    def __init__(self, algebra: QuaternionAlgebraQ, basis, name=""):
        self.algebra = algebra
        self.basis = [algebra(b) if not isinstance(b, QuatElement) else b for b in basis]
        self.name = name
        if len(self.basis) != 4:
            raise UsageError("a quaternion order has rank 4")
        mat = [list(b.coords) for b in self.basis]
        self._mat = mat
        self._check_order()

    def coords(self, x):
        return solve_fraction(self._mat, [list(x.coords)])[0]

    def contains(self, x):
        return all(c.denominator == 1 for c in self.coords(x))

    def element(self, coeffs):
        out = self.algebra(0, 0, 0, 0)
        for c, b in zip(coeffs, self.basis):
            out = out + b * Fraction(int(c))
        return out

    def _check_order(self):
        if not self.contains(self.algebra.one):
            raise InternalConsistencyError(f"{self.name}: basis does not contain 1")
        for x, y in itertools.product(self.basis, repeat=2):
            if not self.contains(x * y):
                raise InternalConsistencyError(f"{self.name}: basis not closed under products")

    def structure_constants(self):
        c = np.zeros((4, 4, 4), dtype=object)
        for s, x in enumerate(self.basis):
            for t, y in enumerate(self.basis):
                c[s, t] = [int(v) for v in self.coords(x * y)]
        return c

    def to_integral(self):
        """The order as a Z-algebra on its own basis."""
        one = [int(v) for v in self.coords(self.algebra.one)]
        alg = IntegralAlgebra(self.structure_constants(), one, name=self.name)
        return alg.standard_order()

    def norm_gram(self):
        """Integer Gram matrix of 2*Nr, i.e. (x, y) -> Trd(x * conj(y))."""
        return [[int(reduced_trace(x * y.conjugate())) for y in self.basis] for x in self.basis]

    def trace_pairing(self):
        return [[reduced_trace(x * y) for y in self.basis] for x in self.basis]


def reduced_discriminant(order: ZOrder) -> int:
    det = bareiss_det([[int(v) for v in row] for row in order.trace_pairing()])
    d = isqrt(abs(det))
    if d * d != abs(det):
        raise InternalConsistencyError("trace-pairing determinant is not a square")
    return d


_MAXIMAL = {
    2: ((-1, -1), [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0),
                   tuple(Fraction(1, 2) for _ in range(4))]),
    3: ((-1, -3), [(1, 0, 0, 0), (0, 1, 0, 0), (Fraction(1, 2), 0, Fraction(1, 2), 0),
                   (0, Fraction(1, 2), 0, Fraction(1, 2))]),
    5: ((-2, -5), [(Fraction(1, 2), 0, Fraction(1, 2), Fraction(1, 2)),
                   (0, Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)),
                   (0, 0, 1, 0), (0, 0, 0, 1)]),
}


def maximal_order(p) -> ZOrder:
    """A maximal order of D_{p,inf}; validated on construction."""
    if p not in _MAXIMAL:
        raise UsageError("maximal orders are provided for p in {2, 3, 5}")
    (a, b), basis = _MAXIMAL[p]
    alg = QuaternionAlgebraQ(a, b)
    order = ZOrder(alg, basis, name=f"O_{p}")
    if alg.ramified_places() != {p, INF}:
        raise InternalConsistencyError(f"({a},{b}) is not ramified exactly at {p} and inf")
    if reduced_discriminant(order) != p:
        raise InternalConsistencyError(f"maximal order for p={p} has wrong discriminant")
    return order


def short_vectors(order: ZOrder, norm):
    """All order elements of reduced norm ``norm`` (definite algebras)."""
    if not order.algebra.definite:
        raise UsageError("short vectors need a definite algebra")
    gram = order.norm_gram()
    inv = solve_fraction(gram, [[int(i == j) for j in range(4)] for i in range(4)])
    target = 2 * Fraction(norm)
    bounds = []
    for i in range(4):
        q = inv[i][i] * target
        bounds.append(isqrt(q.numerator // q.denominator))
    vecs = K.box_vectors(np.array(gram, dtype=np.int64), np.array(bounds, dtype=np.int64),
                         int(target))
    return [order.element(v) for v in vecs]


def unit_group(order: ZOrder):
    units = short_vectors(order, 1)
    one = order.algebra.one
    keys = {u.coords for u in units}
    if one.coords not in keys or (-one).coords not in keys:
        raise InternalConsistencyError("unit enumeration misses +-1")
    for x in units:
        if (x.inverse()).coords not in keys:
            raise InternalConsistencyError("unit enumeration not closed under inverse")
    return sorted(units, key=lambda u: tuple(-c for c in u.coords))
