"""
Exact arithmetic in small finite rings.

Conventions
-----------
* Every algebra is stored over Z/p^k (k=1 gives F_p) by structure constants
  ``consts[i, j, l]`` = coefficient of e_l in e_i * e_j.
* Algebras over F_{p^2} are stored by restriction of scalars, i.e. as
  F_p-algebras of twice the dimension; ``qdeg`` records the degree so that
  reports can quote dimensions over F_q.
* Vectors are rows. A matrix ``A`` acts on a row vector ``v`` as ``v @ A``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels as K
from .errors import ResourceError, StructuralError, UsageError

#: x^2 + a1*x + a0 stored as (a0, a1); fixed once per prime.
DEFAULT_QUADRATIC = {2: (1, 1), 3: (1, 0), 5: (2, 0)}


def is_irreducible_quadratic(p, a0, a1):
    return all((x * x + a1 * x + a0) % p for x in range(p))


# ---------------------------------------------------------------------------
# finite fields F_p and F_{p^2}
# ---------------------------------------------------------------------------

class FiniteField:
    """F_p (degree 1) or F_{p^2} (degree 2) with the element encoding
    ``index = c0 + c1*p`` for ``c0 + c1*x``."""

    def __init__(self, p, degree=1, poly=None, basis=None):
        if p not in (2, 3, 5, 7, 11, 13) and any(p % d == 0 for d in range(2, p)):
            raise UsageError(f"{p} is not prime")
        if degree not in (1, 2):
            raise UsageError("only F_p and F_{p^2} are supported")
        self.p = p
        self.degree = degree
        self.q = p ** degree
        if degree == 2:
            poly = tuple(poly) if poly is not None else DEFAULT_QUADRATIC.get(p)
            if poly is None:
                poly = next((a0, a1) for a1 in range(p) for a0 in range(1, p)
                            if is_irreducible_quadratic(p, a0, a1))
            a0, a1 = poly[0] % p, poly[1] % p
            if not is_irreducible_quadratic(p, a0, a1):
                raise StructuralError(f"x^2+{a1}x+{a0} is reducible mod {p}")
            self.poly = (a0, a1)
        else:
            self.poly = None
        # rows: polynomial-basis coordinates of the chosen F_p-basis
        if basis is None:
            basis = np.eye(degree, dtype=np.int64)
        self.basis = np.asarray(basis, dtype=np.int64) % p
        self._basis_inv = _inverse_mod_p(self.basis, p)
        q = self.q
        coords = np.array([self._coords(i) for i in range(q)], dtype=np.int64)
        self._coords_arr = coords
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = self._index((coords[a] + coords[b]) % p)
                mul[a, b] = self._index(self._mul_coords(coords[a], coords[b]))
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([self._index((-coords[a]) % p) for a in range(q)])
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv_table = inv

    def _coords(self, i):
        return [(i // self.p ** t) % self.p for t in range(self.degree)]

    def _index(self, c):
        return int(sum(int(c[t]) * self.p ** t for t in range(self.degree)))

    def _mul_coords(self, a, b):
        p = self.p
        a = np.asarray(a) @ self.basis % p
        b = np.asarray(b) @ self.basis % p
        return self._poly_mul(a, b) @ self._basis_inv % p

    def _poly_mul(self, a, b):
        p = self.p
        if self.degree == 1:
            return np.array([(a[0] * b[0]) % p])
        a0, a1 = self.poly
        # (u0 + u1 x)(v0 + v1 x), x^2 = -a1 x - a0
        c0 = a[0] * b[0]
        c1 = a[0] * b[1] + a[1] * b[0]
        c2 = a[1] * b[1]
        return np.array([(c0 - a0 * c2) % p, (c1 - a1 * c2) % p])

    def __repr__(self):
        if self.degree == 1:
            return f"F_{self.p}"
        a0, a1 = self.poly
        return f"F_{self.q}[x^2+{a1}x+{a0}]"

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and self.p == other.p
                and self.degree == other.degree and self.poly == other.poly
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.p, self.degree, self.poly, self.basis.tobytes()))

    @classmethod
    def normal_basis(cls, p):
        """F_{p^2} on a normal basis {z, z^p} instead of {1, x}."""
        plain = cls(p, 2)
        for z in plain.units():
            rows = [plain.coords(z), plain.coords(z ** p)]
            if (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]) % p:
                return cls(p, 2, plain.poly, basis=rows)
        raise StructuralError("no normal element found")

    def __call__(self, value):
        if isinstance(value, FqElem):
            return value
        if isinstance(value, (tuple, list)):
            return FqElem(self, self._index([int(v) % self.p for v in value]))
        one = np.eye(self.degree, dtype=np.int64)[0] @ self._basis_inv
        return FqElem(self, self._index((int(value) * one) % self.p))

    def coords(self, x):
        return tuple(int(v) for v in self._coords_arr[x.index])

    def elements(self):
        return [FqElem(self, i) for i in range(self.q)]

    def units(self):
        return [FqElem(self, i) for i in range(1, self.q)]

    @property
    def gen(self):
        """The class of x (only for degree 2)."""
        if self.degree == 1:
            return self(1)
        x = np.array([0, 1]) @ self._basis_inv % self.p
        return FqElem(self, self._index(x))

    def frobenius(self, x):
        return x ** self.p

    def mult_matrix(self, x):
        """F_p-matrix of y -> y*x on coordinates (row convention)."""
        d = self.degree
        m = np.zeros((d, d), dtype=np.int64)
        for t in range(d):
            basis = FqElem(self, self.p ** t)
            m[t] = self.coords(basis * x)
        return m


def _inverse_mod_p(mat, p):
    n = mat.shape[0]
    red, piv = K.rref(np.hstack([mat % p, np.eye(n, dtype=np.int64)]), p)
    if len(piv) < n or piv[n - 1] >= n:
        raise StructuralError("basis matrix is singular")
    return red[:, n:].copy()


@dataclass(frozen=True)
class FqElem:
    field: FiniteField
    index: int

    def _check(self, other):
        if isinstance(other, int):
            return self.field(other)
        if not isinstance(other, FqElem) or other.field != self.field:
            raise UsageError("elements of different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FqElem(self.field, int(self.field.add_table[self.index, other.index]))

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.field, int(self.field.neg_table[self.index]))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return FqElem(self.field, int(self.field.mul_table[self.index, other.index]))

    __rmul__ = __mul__

    def inverse(self):
        if self.index == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FqElem(self.field, int(self.field.inv_table[self.index]))

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self):
        return self.index != 0

    def __repr__(self):
        c = self.field.coords(self)
        if self.field.degree == 1:
            return str(c[0])
        return f"({c[0]}+{c[1]}x)"

    @property
    def coords(self):
        return self.field.coords(self)


# ---------------------------------------------------------------------------
# subspaces of F_p^n
# ---------------------------------------------------------------------------

def rref_rows(rows, p, dim=None):
    arr = np.asarray(rows, dtype=np.int64)
    if arr.size == 0:
        n = dim if dim is not None else (arr.shape[1] if arr.ndim == 2 else 0)
        return np.zeros((0, n), dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    red, _ = K.rref(arr, p)
    return red


@dataclass(frozen=True)
class SubmoduleBasis:
    """An F_p-subspace in reduced row echelon form.

    ``qdeg`` is the degree of the field whose dimension is reported by
    :attr:`qdim` (F_4 submodules of an F_2-model have qdeg 2).
    """
    p: int
    ambient_dim: int
    rows: tuple
    qdeg: int = 1

    @classmethod
    def span(cls, vectors, p, ambient_dim, qdeg=1):
        red = rref_rows(np.asarray(vectors, dtype=np.int64).reshape(-1, ambient_dim), p,
                        ambient_dim)
        return cls(p, ambient_dim, tuple(tuple(int(x) for x in r) for r in red), qdeg)

    @property
    def dim(self):
        return len(self.rows)

    @property
    def qdim(self):
        return self.dim // self.qdeg

    @property
    def matrix(self):
        if not self.rows:
            return np.zeros((0, self.ambient_dim), dtype=np.int64)
        return np.array(self.rows, dtype=np.int64)

    @property
    def key(self):
        return (self.dim, self.rows)

    def __lt__(self, other):
        return self.key < other.key

    def contains(self, vectors):
        vec = np.asarray(vectors, dtype=np.int64).reshape(-1, self.ambient_dim)
        return SubmoduleBasis.span(np.vstack([self.matrix, vec]), self.p,
                                   self.ambient_dim).dim == self.dim

    def __add__(self, other):
        return SubmoduleBasis.span(np.vstack([self.matrix, other.matrix]), self.p,
                                   self.ambient_dim, self.qdeg)

    def image(self, mat):
        return SubmoduleBasis.span(self.matrix @ np.asarray(mat) % self.p, self.p,
                                   self.ambient_dim, self.qdeg)

    def elements(self):
        """All vectors of the subspace (lexicographic in the coefficients)."""
        if self.dim == 0:
            return np.zeros((1, self.ambient_dim), dtype=np.int64)
        coeffs = np.array(list(itertools.product(range(self.p), repeat=self.dim)),
                          dtype=np.int64)
        return coeffs @ self.matrix % self.p

    def complement_basis(self):
        """Standard basis vectors completing the pivots of this subspace."""
        piv = set()
        for r in self.rows:
            piv.add(next(i for i, x in enumerate(r) if x))
        return [i for i in range(self.ambient_dim) if i not in piv]


def closure(vectors, mats, p, ambient_dim, qdeg=1):
    """Smallest subspace containing ``vectors`` and stable under every matrix."""
    sub = SubmoduleBasis.span(vectors, p, ambient_dim, qdeg)
    mats = [np.asarray(m, dtype=np.int64) for m in mats]
    while True:
        if sub.dim in (0, ambient_dim):
            return sub
        base = sub.matrix
        new = SubmoduleBasis.span(np.vstack([base] + [base @ m % p for m in mats]),
                                  p, ambient_dim, qdeg)
        if new.dim == sub.dim:
            return sub
        sub = new


def is_stable(sub, mats):
    return all(sub.contains(sub.matrix @ np.asarray(m) % sub.p) for m in mats if sub.dim)


# ---------------------------------------------------------------------------
# structure-constant algebras over Z/p^k
# ---------------------------------------------------------------------------

class QuotientAlgebra:
    """A finite associative unital algebra over Z/p^k given by structure constants."""

    def __init__(self, p, k, consts, one, name="", qdeg=1, check=True):
        self.p = int(p)
        self.k = int(k)
        self.mod = self.p ** self.k
        self.consts = np.asarray(consts, dtype=np.int64) % self.mod
        m = self.consts.shape[0]
        if self.consts.shape != (m, m, m):
            raise StructuralError("structure constants must have shape (m, m, m)")
        self.dim = m
        self.one = np.asarray(one, dtype=np.int64) % self.mod
        self.name = name
        self.qdeg = qdeg
        if check:
            self.check_axioms()

    def __repr__(self):
        return f"QuotientAlgebra({self.name or 'anon'}, Z/{self.p}^{self.k}, dim={self.dim})"

    # -- construction -------------------------------------------------------
    @classmethod
    def from_function(cls, p, k, dim, mul, one, **kw):
        """``mul(i, j)`` returns the coordinate vector of e_i * e_j."""
        c = np.zeros((dim, dim, dim), dtype=np.int64)
        for i in range(dim):
            for j in range(dim):
                c[i, j] = np.asarray(mul(i, j), dtype=np.int64)
        return cls(p, k, c, one, **kw)

    @classmethod
    def matrix_algebra(cls, p, n=2, k=1):
        """Mat_n(Z/p^k) with basis the matrix units E_{ab}, index a*n+b."""
        dim = n * n

        def mul(i, j):
            a, b = divmod(i, n)
            c, d = divmod(j, n)
            v = np.zeros(dim, dtype=np.int64)
            if b == c:
                v[a * n + d] = 1
            return v

        one = np.zeros(dim, dtype=np.int64)
        for a in range(n):
            one[a * n + a] = 1
        return cls.from_function(p, k, dim, mul, one, name=f"Mat{n}(Z/{p}^{k})")

    @classmethod
    def from_field(cls, F):
        """F_q as an F_p-algebra on the basis 1, x."""
        d = F.degree

        def mul(i, j):
            return F.coords(F(_unit_coords(i, d)) * F(_unit_coords(j, d)))

        return cls.from_function(F.p, 1, d, mul, F.coords(F(1)), name=repr(F), qdeg=d)

    @classmethod
    def over_field(cls, F, qdim, qmul, qone, name=""):
        """Restriction of scalars of an F_q-algebra with *central* F_q.

        ``qmul(i, j)`` returns a list of ``qdim`` FqElem giving e_i e_j over F_q.
        The F_p-basis is ordered ``b_t e_i`` with index ``i*degree + t``, where
        b_t runs over the F_p-basis of F_q.
        """
        d = F.degree
        dim = qdim * d
        table = [[qmul(i, j) for j in range(qdim)] for i in range(qdim)]

        def split(idx):
            i, t = divmod(idx, d)
            return i, F(_unit_coords(t, d))

        def mul(a, b):
            i, s = split(a)
            j, t = split(b)
            st = s * t
            out = []
            for coeff in table[i][j]:
                out.extend(F.coords(coeff * st))
            return out

        one = []
        for c in qone:
            out = F(c) if not isinstance(c, FqElem) else c
            one.extend(F.coords(out))
        return cls.from_function(F.p, 1, dim, mul, one, name=name, qdeg=d)

    @classmethod
    def trivial_extension(cls, F):
        """The ring <a b; c d> with product rule
        <a b; c d><a' b'; c' d'> = <aa', ab'+bd'; ca'+dc', dd'>.

        F_q-basis order: a, b, c, d.
        """
        zero, one_ = F(0), F(1)

        def qmul(i, j):
            x = [zero] * 4
            y = [zero] * 4
            x[i] = one_
            y[j] = one_
            return _trivial_ext_product(x, y)

        return cls.over_field(F, 4, qmul, [one_, zero, zero, one_],
                              name=f"TrivExt({F!r})")

    @classmethod
    def truncated_polynomial(cls, F, n=2):
        """F_q[x]/(x^n)."""
        zero, one_ = F(0), F(1)

        def qmul(i, j):
            v = [zero] * n
            if i + j < n:
                v[i + j] = one_
            return v

        return cls.over_field(F, n, qmul, [one_] + [zero] * (n - 1),
                              name=f"{F!r}[x]/(x^{n})")

    # -- axioms ------------------------------------------------------------
    def check_axioms(self):
        m = self.dim
        eye = np.eye(m, dtype=np.int64)
        ones = np.tile(self.one, (m, 1))
        if not (np.array_equal(self.mul_many(ones, eye), eye)
                and np.array_equal(self.mul_many(eye, ones), eye)):
            raise StructuralError(f"{self!r}: unit element is not a two-sided identity")
        idx = np.array(list(itertools.product(range(m), repeat=3)), dtype=np.int64)
        a, b, c = eye[idx[:, 0]], eye[idx[:, 1]], eye[idx[:, 2]]
        left = self.mul_many(self.mul_many(a, b), c)
        right = self.mul_many(a, self.mul_many(b, c))
        if not np.array_equal(left, right):
            raise StructuralError(f"{self!r}: structure constants are not associative")

    # -- arithmetic ------------------------------------------------------------
    def mul_many(self, a, b):
        a = np.atleast_2d(np.asarray(a, dtype=np.int64))
        b = np.atleast_2d(np.asarray(b, dtype=np.int64))
        if a.shape[0] == 1 and b.shape[0] > 1:
            a = np.repeat(a, b.shape[0], axis=0)
        if b.shape[0] == 1 and a.shape[0] > 1:
            b = np.repeat(b, a.shape[0], axis=0)
        return K.mul_batch(self.consts, a % self.mod, b % self.mod, self.mod)

    def mul(self, a, b):
        return self.mul_many(a, b)[0]

    def element(self, coords):
        return AlgElem(self, tuple(int(x) % self.mod for x in coords))

    def basis(self):
        return [self.element(r) for r in np.eye(self.dim, dtype=np.int64)]

    @property
    def unit(self):
        return self.element(self.one)

    def left_matrix(self, x):
        """Matrix of y -> x*y (rows: images of basis vectors)."""
        x = np.asarray(x, dtype=np.int64)
        return np.einsum("i,ijl->jl", x, self.consts) % self.mod

    def right_matrix(self, x):
        """Matrix of y -> y*x."""
        x = np.asarray(x, dtype=np.int64)
        return np.einsum("j,ijl->il", x, self.consts) % self.mod

    def size(self):
        return self.mod ** self.dim

    def all_elements(self, budget=2 ** 24):
        n = self.size()
        if n > budget:
            raise ResourceError(f"{self!r} has {n} elements, budget is {budget}", required=n)
        return np.array(list(itertools.product(range(self.mod), repeat=self.dim)),
                        dtype=np.int64).reshape(-1, self.dim)

    def reduce(self):
        """Reduction modulo p."""
        if self.k == 1:
            return self
        return QuotientAlgebra(self.p, 1, self.consts % self.p, self.one % self.p,
                               name=f"{self.name} mod {self.p}", qdeg=self.qdeg, check=False)

    def is_commutative(self):
        return np.array_equal(self.consts, self.consts.transpose(1, 0, 2))

    def center(self):
        """F_p-basis of the center (k must be 1)."""
        self._need_field()
        m, p = self.dim, self.p
        # x central iff x e_j - e_j x = 0 for all j: linear in x
        diff = (self.consts - self.consts.transpose(1, 0, 2)) % p  # [i, j, l]
        mat = diff.reshape(m, m * m)
        return SubmoduleBasis(p, m, _nullspace_rows(mat, p))

    def _need_field(self):
        if self.k != 1:
            raise UsageError("operation needs an algebra over F_p; call reduce() first")

    # -- ideals and quotients -------------------------------------------------
    def ideal_generated(self, vectors, two_sided=True):
        self._need_field()
        mats = [self.left_matrix(e) for e in np.eye(self.dim, dtype=np.int64)]
        if two_sided:
            mats += [self.right_matrix(e) for e in np.eye(self.dim, dtype=np.int64)]
        return closure(vectors, mats, self.p, self.dim, self.qdeg)

    def is_two_sided_ideal(self, sub):
        eye = np.eye(self.dim, dtype=np.int64)
        mats = [self.left_matrix(e) for e in eye] + [self.right_matrix(e) for e in eye]
        return is_stable(sub, mats)

    def quotient(self, ideal, name=None):
        """A/I for a two-sided ideal I, with the projection matrix.

        Returns ``(quotient_algebra, proj)`` where ``v @ proj`` gives the
        quotient coordinates of ``v``.
        """
        self._need_field()
        if not self.is_two_sided_ideal(ideal):
            raise StructuralError("not a two-sided ideal")
        proj, lift = _quotient_maps(ideal)
        comp = lift  # rows: lifts of the quotient basis
        q = comp.shape[0]
        prods = self.mul_many(np.repeat(comp, q, axis=0), np.tile(comp, (q, 1)))
        consts = (prods @ proj % self.p).reshape(q, q, q)
        one = self.one @ proj % self.p
        qa = QuotientAlgebra(self.p, 1, consts, one,
                             name=name or f"{self.name}/I", qdeg=self.qdeg)
        return qa, proj

    def left_regular_module(self):
        return FiniteModule.from_algebra_action(self, np.eye(self.dim, dtype=np.int64))


def _unit_coords(i, d):
    v = [0] * d
    v[i] = 1
    return v


def _trivial_ext_product(x, y):
    a, b, c, d = x
    a2, b2, c2, d2 = y
    return [a * a2, a * b2 + b * d2, c * a2 + d * c2, d * d2]


def _nullspace_rows(mat, p):
    """Row basis (rref) of {x : x @ mat == 0 mod p}."""
    mat = np.asarray(mat, dtype=np.int64) % p
    n = mat.shape[0]
    # left nullspace of mat = nullspace of mat^T
    red, piv = K.rref(mat.T.copy(), p)
    piv = list(piv)
    free = [i for i in range(n) if i not in piv]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(piv):
            v[c] = (-red[r, f]) % p
        basis.append(v)
    if not basis:
        return ()
    return SubmoduleBasis.span(basis, p, n).rows


def _quotient_maps(sub):
    """Projection onto the standard complement of ``sub`` and its section."""
    p, n = sub.p, sub.ambient_dim
    comp = sub.complement_basis()
    q = len(comp)
    lift = np.zeros((q, n), dtype=np.int64)
    for t, c in enumerate(comp):
        lift[t, c] = 1
    # v = sum(coef * sub_rows) + sum(w_t * e_comp_t); solve for w
    proj = np.zeros((n, q), dtype=np.int64)
    rows = sub.matrix
    pivots = [next(i for i, x in enumerate(r) if x) for r in sub.rows]
    for i in range(n):
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        for r, c in zip(rows, pivots):
            if v[c]:
                v = (v - v[c] * r) % p
        proj[i] = v[comp]
    return proj, lift


@dataclass(frozen=True)
class AlgElem:
    algebra: QuotientAlgebra = field(compare=False)
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.algebra.dim:
            raise UsageError("coordinate length differs from algebra dimension")

    def __hash__(self):
        return hash((id(self.algebra), self.coords))

    def __eq__(self, other):
        return (isinstance(other, AlgElem) and other.algebra is self.algebra
                and other.coords == self.coords)

    def __mul__(self, other):
        return algebra_multiply(self, other)

    def __add__(self, other):
        if other.algebra is not self.algebra:
            raise UsageError("elements of different algebras")
        return self.algebra.element(np.add(self.coords, other.coords))

    def __sub__(self, other):
        if other.algebra is not self.algebra:
            raise UsageError("elements of different algebras")
        return self.algebra.element(np.subtract(self.coords, other.coords))

    @property
    def vector(self):
        return np.array(self.coords, dtype=np.int64)


def algebra_multiply(a: AlgElem, b: AlgElem) -> AlgElem:
    if a.algebra is not b.algebra:
        raise UsageError("cannot multiply elements of different algebras")
    return a.algebra.element(a.algebra.mul(a.vector, b.vector))


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------

@dataclass
class FiniteModule:
    """An F_p-vector space with a family of operators (the acting generators)."""
    p: int
    dim: int
    action: list
    name: str = ""
    qdeg: int = 1

    @classmethod
    def from_algebra_action(cls, alg, basis_rows, on="left", qdeg=None, name=""):
        """The subspace spanned by ``basis_rows`` of ``alg``, acted on by ``alg``.

        The span must be a left (``on="left"``) ideal; the module's
        coordinates are w.r.t. ``basis_rows``.
        """
        basis_rows = np.asarray(basis_rows, dtype=np.int64)
        p = alg.p
        mats = []
        for e in np.eye(alg.dim, dtype=np.int64):
            imgs = alg.mul_many(np.tile(e, (len(basis_rows), 1)), basis_rows) if on == "left" \
                else alg.mul_many(basis_rows, np.tile(e, (len(basis_rows), 1)))
            mats.append(solve_in_basis(basis_rows, imgs, p))
        return cls(p, len(basis_rows), mats, name=name,
                   qdeg=alg.qdeg if qdeg is None else qdeg)

    def direct_sum(self, other, name=""):
        if len(self.action) != len(other.action):
            raise UsageError("modules must be acted on by the same generators")
        mats = [_block_diag(a, b) for a, b in zip(self.action, other.action)]
        return FiniteModule(self.p, self.dim + other.dim, mats, name=name, qdeg=self.qdeg)

    def is_submodule(self, sub):
        return is_stable(sub, self.action)

    def generated(self, vectors):
        return closure(vectors, self.action, self.p, self.dim, self.qdeg)

    def whole(self):
        return SubmoduleBasis.span(np.eye(self.dim, dtype=np.int64), self.p, self.dim, self.qdeg)

    def zero(self):
        return SubmoduleBasis(self.p, self.dim, (), self.qdeg)


def _block_diag(a, b):
    n, m = a.shape[0], b.shape[0]
    out = np.zeros((n + m, n + m), dtype=np.int64)
    out[:n, :n] = a
    out[n:, n:] = b
    return out


def solve_in_basis(basis_rows, vectors, p):
    """Coordinates of ``vectors`` (rows) in the F_p-basis ``basis_rows``."""
    basis_rows = np.asarray(basis_rows, dtype=np.int64) % p
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64)) % p
    r, n = basis_rows.shape
    aug = np.hstack([basis_rows.T, vectors.T])  # n x (r + count)
    red, piv = K.rref(aug, p)
    if len(piv) and piv[-1] >= r:
        raise StructuralError("vector outside the span of the basis")
    if len(piv) != r:
        raise StructuralError("basis rows are linearly dependent")
    return red[:r, r:].T.copy() % p


# ---------------------------------------------------------------------------
# radical and semisimple type
# ---------------------------------------------------------------------------

def _is_nilpotent_subspace(alg, sub):
    """Whether the subspace ``sub`` (closed or not) satisfies sub^N = 0."""
    power = sub
    for _ in range(alg.dim + 1):
        if power.dim == 0:
            return True
        a = power.matrix
        b = sub.matrix
        prods = alg.mul_many(np.repeat(a, len(b), axis=0), np.tile(b, (len(a), 1)))
        nxt = SubmoduleBasis.span(prods, alg.p, alg.dim)
        if nxt.dim >= power.dim and power.contains(nxt.matrix) and nxt.dim == power.dim:
            return False
        power = nxt
    return power.dim == 0


def _nilpotent_mask(mats, p):
    """Which of a stack of square matrices over F_p are nilpotent."""
    n = mats.shape[-1]
    # float64 products are exact here: entries < p and n * p^2 << 2^53
    power = (mats % p).astype(np.float64)
    steps = 1
    while steps < n:
        power = np.fmod(np.matmul(power, power), p)
        steps *= 2
    return ~power.reshape(len(mats), -1).any(axis=1)


def _left_nil_mask(alg, elems, chunk=8192):
    """Necessary condition for x in J: L_{e_i x} nilpotent for every basis e_i."""
    p, m = alg.p, alg.dim
    consts = np.asarray(alg.consts, dtype=np.int64) % p
    keep = np.ones(len(elems), dtype=bool)
    for start in range(0, len(elems), chunk):
        idx = np.arange(start, min(start + chunk, len(elems)))
        for i in range(m):
            if not idx.size:
                break
            z = elems[idx] @ consts[i] % p                   # e_i x
            mats = np.einsum("ni,ijl->njl", z, consts) % p   # L_{e_i x}
            ok = _nilpotent_mask(mats, p)
            keep[idx[~ok]] = False
            idx = idx[ok]
    return keep


def trace_form_radical(alg):
    """{x : tr(L_{xy}) = 0 for all y}; contains the Jacobson radical."""
    alg._need_field()
    m, p = alg.dim, alg.p
    # tr L_{e_l} for each basis element
    tr = np.array([np.trace(alg.left_matrix(e)) for e in np.eye(m, dtype=np.int64)]) % p
    gram = np.einsum("ijl,l->ij", alg.consts, tr) % p
    return SubmoduleBasis(p, m, _nullspace_rows(gram, p), alg.qdeg)


def jacobson_radical(alg, budget=2 ** 20):
    """Largest nilpotent two-sided ideal of ``alg`` (over F_p).

    For an algebra over Z/p^k the radical of the reduction mod p is returned;
    J(A) itself is its preimage.
    """
    alg = alg.reduce()
    cand = trace_form_radical(alg)
    if alg.p ** cand.dim > budget:
        raise ResourceError(f"radical search needs {alg.p ** cand.dim} candidates",
                            required=alg.p ** cand.dim)
    eye = np.eye(alg.dim, dtype=np.int64)
    rad = SubmoduleBasis(alg.p, alg.dim, (), alg.qdeg)
    elems = cand.elements()
    elems = elems[_left_nil_mask(alg, elems)]
    for x in elems:
        if not x.any() or rad.contains(x):
            continue
        left_ideal = SubmoduleBasis.span(alg.mul_many(eye, np.tile(x, (alg.dim, 1))),
                                         alg.p, alg.dim)
        if _is_nilpotent_subspace(alg, left_ideal):
            rad = rad + left_ideal
    rad = SubmoduleBasis(rad.p, rad.ambient_dim, rad.rows, alg.qdeg)
    if not alg.is_two_sided_ideal(rad) or not _is_nilpotent_subspace(alg, rad):
        raise StructuralError("radical sweep produced a non-nilpotent ideal")
    return rad


def idempotents(alg, sub=None, budget=2 ** 20):
    alg = alg.reduce()
    elems = sub.elements() if sub is not None else alg.all_elements(budget)
    sq = alg.mul_many(elems, elems)
    return elems[(sq == elems).all(axis=1)]


SEMISIMPLE_TAGS = {"split-pair": 1, "field": 0, "quadratic-field": -1, "full-matrix": 2}


def semisimple_type(alg, base_degree=1):
    """Identify A/J(A) among f x f, f, f' and Mat_2(f).

    ``base_degree`` is [f : F_p] for the residue field f of the base ring.
    """
    alg = alg.reduce()
    rad = jacobson_radical(alg)
    semi = alg.quotient(rad)[0] if rad.dim else alg
    s = semi.dim
    f = base_degree
    if semi.is_commutative():
        n_idem = len(idempotents(semi))
        if s == 2 * f and n_idem == 4:
            return "split-pair"
        if s == f and n_idem == 2:
            return "field"
        if s == 2 * f and n_idem == 2:
            return "quadratic-field"
    elif s == 4 * f and semi.center().dim == f:
        return "full-matrix"
    raise StructuralError(f"semisimple quotient of dimension {s} over F_{alg.p} is not "
                          f"of quaternion-order shape (base degree {f})")


# ---------------------------------------------------------------------------
# units
# ---------------------------------------------------------------------------

def unit_mask(alg, elems):
    """Boolean mask of the invertible rows of ``elems``."""
    red = alg.reduce()
    mask = np.zeros(len(elems), dtype=bool)
    for t, x in enumerate(elems % red.p):
        mask[t] = len(K.rref(red.left_matrix(x), red.p)[1]) == red.dim
    return mask


def unit_group_of_finite_algebra(alg, budget=2 ** 24):
    """All two-sided units of a finite algebra (exhaustive)."""
    elems = alg.all_elements(budget)
    units = elems[unit_mask(alg, elems)]
    return [alg.element(u) for u in units]


# ---------------------------------------------------------------------------
# submodule lattices and orbits
# ---------------------------------------------------------------------------

def projective_points(p, dim, sub=None):
    """One representative per line of F_p^dim (or of a subspace)."""
    if sub is None:
        sub = SubmoduleBasis.span(np.eye(dim, dtype=np.int64), p, dim)
    elems = sub.elements()
    keep = []
    for v in elems:
        nz = np.nonzero(v)[0]
        if nz.size and v[nz[0]] == 1:
            keep.append(v)
    return np.array(keep, dtype=np.int64).reshape(-1, dim)


def enumerate_submodules(module: FiniteModule, generates: FiniteModule | None = None,
                         budget=2 ** 20):
    """Every submodule of ``module``, canonically sorted.

    With ``generates`` (a module on the same space with a larger action),
    only submodules whose ``generates``-closure is the whole space are kept.
    """
    p, n = module.p, module.dim
    if p ** n > budget:
        raise ResourceError(f"submodule sweep needs {p ** n} vectors", required=p ** n)
    cyclic = {}
    for v in projective_points(p, n):
        sub = module.generated(v)
        cyclic.setdefault(sub.key, sub)
    subs = {module.zero().key: module.zero()}
    frontier = list(subs.values())
    cyc = list(cyclic.values())
    while frontier:
        nxt = []
        for s in frontier:
            for c in cyc:
                t = s + c
                if t.key not in subs:
                    subs[t.key] = t
                    nxt.append(t)
        frontier = nxt
    out = sorted(subs.values())
    out = [SubmoduleBasis(s.p, s.ambient_dim, s.rows, module.qdeg) for s in out]
    if generates is not None:
        whole = generates.dim
        out = [s for s in out if generates.generated(s.matrix).dim == whole]
    return out


def projections_surjective(sub, block_sizes):
    """Whether each coordinate-block projection of ``sub`` is onto."""
    start = 0
    for size in block_sizes:
        block = sub.matrix[:, start:start + size] if sub.dim else np.zeros((0, size))
        if SubmoduleBasis.span(block, sub.p, size).dim != size:
            return False
        start += size
    return True


@dataclass(frozen=True)
class Orbit:
    representative: SubmoduleBasis
    size: int


def orbit_classes(elements: Sequence[SubmoduleBasis], group: Iterable) -> list:
    """Orbits of subspaces under a finite matrix group (acting on the right)."""
    elements = list(elements)
    index = {e.key: t for t, e in enumerate(elements)}
    parent = list(range(len(elements)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    group = [np.asarray(g, dtype=np.int64) for g in group]
    for t, e in enumerate(elements):
        for g in group:
            img = e.image(g)
            j = index.get(img.key)
            if j is None:
                raise StructuralError("group action maps a member outside the input set")
            a, b = find(t), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    classes = {}
    for t in range(len(elements)):
        classes.setdefault(find(t), []).append(elements[t])
    orbits = [Orbit(min(members), len(members)) for members in classes.values()]
    return sorted(orbits, key=lambda o: o.representative.key)


def double_coset_count(group, left, right, mul: Callable, key=lambda x: x):
    """|left \\ group / right| for finite groups given by element lists."""
    seen = set()
    count = 0
    for g in group:
        if key(g) in seen:
            continue
        count += 1
        for a in left:
            for b in right:
                seen.add(key(mul(mul(a, g), b)))
    return count
