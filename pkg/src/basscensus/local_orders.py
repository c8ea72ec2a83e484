"""
Local quaternion orders at a prime p.

Orders are global Z-orders (integral structure constants) whose
completion at p is the local order of interest; all p-local questions are
answered in the finite rings O/p^k O. The orders built here are

* ``local_maximal_order``: Z[w] + Z[w]eta with eta^2 = p and
  x*eta = eta*conj(x), where p is inert in Q(w);
* ``tensor_local_order``: A_nbar (x) O for the maximal order O of D_{p,inf};
* overorders inside p^{-1}O found by finite search.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import cyclotomic as cyc
from . import finite as fin
from .errors import InternalConsistencyError, PrecisionError, StructuralError, UsageError
from .quaternion import maximal_order
from .zlattice import IntegralAlgebra, Lattice, Order, bareiss_det, det_valuation, vp

DEFAULT_PRECISION = 4

# w^2 + c1*w + c0 = 0 stored as (c0, c1); p must be inert in Q(w)
QUADRATIC_MODEL = {2: (1, 1), 3: (1, 0), 5: (2, 0)}
ALTERNATIVE_QUADRATIC = {2: (1, 3), 3: (2, 1), 5: (2, 1)}

EICHLER_FROM_TYPE = {"split-pair": 1, "field": 0, "quadratic-field": -1, "full-matrix": 2}


@dataclass(frozen=True)
class CenterData:
    """The valuation ring O_F of the center, through a uniformizer."""
    uniformizer: tuple  # ambient coordinates (Fractions)
    f: int              # residue degree over F_p
    e: int              # ramification index over Z_p
    disc_valuation: int  # v_p of the discriminant of O_F over Z_p
    label: str = ""


@dataclass
class LocalOrderModel:
    order: Order
    p: int
    k: int = DEFAULT_PRECISION
    center: CenterData | None = None
    label: str = ""
    provenance: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __repr__(self):
        return f"LocalOrderModel({self.label}, p={self.p}, k={self.k}, rank={self.order.dim})"

    @property
    def dim(self):
        return self.order.dim

    def algebra(self, k=None):
        k = self.k if k is None else k
        key = ("alg", k)
        if key not in self._cache:
            self._cache[key] = self.order.quotient(self.p, k)
        return self._cache[key]

    def with_precision(self, k):
        return replace(self, k=k, _cache={})

    def uniformizer_coords(self):
        if self.center is None:
            raise StructuralError(f"{self.label}: center is not a local field")
        return [int(x) for x in self.order.lattice.coords([list(self.center.uniformizer)])[0]]

    def residue_algebra(self):
        """O / pi O as an F_p-algebra."""
        if "res" not in self._cache:
            R = self.algebra(1)
            pi = np.array(self.uniformizer_coords(), dtype=np.int64) % self.p
            ideal = fin.SubmoduleBasis.span(R.mul_many(np.tile(pi, (R.dim, 1)),
                                                       np.eye(R.dim, dtype=np.int64)),
                                            self.p, R.dim)
            self._cache["res"] = R.quotient(ideal, name=f"{self.label}/pi")
        return self._cache["res"]

    def radical_mod_p(self):
        """J(O)/pO inside O/pO (J(O) contains pi*O)."""
        if "rad" not in self._cache:
            R = self.algebra(1)
            res, proj = self.residue_algebra()
            jres = fin.jacobson_radical(res)
            pi = np.array(self.uniformizer_coords(), dtype=np.int64) % self.p
            gens = [R.mul_many(np.tile(pi, (R.dim, 1)), np.eye(R.dim, dtype=np.int64))]
            # lift radical vectors of the residue algebra through the section
            _, lift = fin._quotient_maps(fin.SubmoduleBasis.span(gens[0], self.p, R.dim))
            if jres.dim:
                gens.append(jres.matrix @ lift % self.p)
            self._cache["rad"] = fin.SubmoduleBasis.span(np.vstack(gens), self.p, R.dim)
        return self._cache["rad"]


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _quadratic_mul(c0, c1):
    """Multiplication and conjugation on Z[w] with w^2 = -c1 w - c0."""
    def mul(x, y):
        a0, a1 = x
        b0, b1 = y
        s0 = a0 * b0 - c0 * a1 * b1
        s1 = a0 * b1 + a1 * b0 - c1 * a1 * b1
        return (s0, s1)

    def conj(x):
        a0, a1 = x
        # conj(w) = -c1 - w
        return (a0 - c1 * a1, -a1)

    return mul, conj


def eta_algebra(p, poly=None, name=None):
    """Z[w] + Z[w]eta with eta^2 = p; basis 1, w, eta, w*eta."""
    c0, c1 = poly if poly is not None else QUADRATIC_MODEL[p]
    if any((x * x + c1 * x + c0) % p == 0 for x in range(p)):
        raise UsageError(f"w^2+{c1}w+{c0} is not irreducible mod {p}")
    mul, conj = _quadratic_mul(c0, c1)

    def split(v):
        return (v[0], v[1]), (v[2], v[3])

    def product(x, y):
        a, b = split(x)
        c, d = split(y)
        # (a + b eta)(c + d eta) = (ac + p b conj(d)) + (ad + b conj(c)) eta
        bd = mul(b, conj(d))
        first = tuple(s + p * t for s, t in zip(mul(a, c), bd))
        second = tuple(s + t for s, t in zip(mul(a, d), mul(b, conj(c))))
        return list(first) + list(second)

    consts = np.zeros((4, 4, 4), dtype=object)
    eye = np.eye(4, dtype=int).tolist()
    for i in range(4):
        for j in range(4):
            consts[i, j] = product(eye[i], eye[j])
    return IntegralAlgebra(consts, [1, 0, 0, 0], name=name or f"Z[w]+Z[w]eta (p={p})")


def local_maximal_order(p, k=DEFAULT_PRECISION, poly=None):
    if p not in QUADRATIC_MODEL:
        raise UsageError("p must be 2, 3 or 5")
    if k < 2:
        raise UsageError("precision k must be at least 2")
    alg = eta_algebra(p, poly)
    center = CenterData(uniformizer=(Fraction(p), 0, 0, 0), f=1, e=1, disc_valuation=0,
                        label="Z_p")
    return LocalOrderModel(alg.standard_order(), p, k, center, label=f"O_{p}",
                           provenance="eta-model")


def matrix_order(p, k=DEFAULT_PRECISION):
    """Mat_2(Z) as a model of Mat_2(Z_p)."""
    qa = fin.QuotientAlgebra.matrix_algebra(p, 2, 1)
    consts = np.array(qa.consts, dtype=object)
    alg = IntegralAlgebra(consts, [1, 0, 0, 1], name="Mat2(Z)")
    center = CenterData(uniformizer=(Fraction(p), 0, 0, Fraction(p)), f=1, e=1,
                        disc_valuation=0, label="Z_p")
    return LocalOrderModel(alg.standard_order(), p, k, center, label="Mat2(Z_p)",
                           provenance="matrix units")


def commutative_algebra(nbar):
    """A_nbar = Z[T]/(P_nbar) on the power basis."""
    nbar = cyc.normalize_case(nbar)
    P = cyc.pair_polynomial(nbar).coeffs
    d = len(P) - 1
    consts = np.zeros((d, d, d), dtype=object)
    for a in range(d):
        for b in range(d):
            _, r = cyc.poly_divmod((0,) * (a + b) + (1,), P)
            consts[a, b] = list(r) + [0] * (d - len(r))
    one = [1] + [0] * (d - 1)
    return IntegralAlgebra(consts, one, name=f"A{nbar}")


def maximal_commutative_lattice(nbar):
    """O_K = prod Z[zeta_ni] inside Q[T]/(P_nbar), on the A-coordinates."""
    from .zlattice import solve_fraction
    E = cyc.embedding_matrix(nbar)
    d = len(E)
    eye = [[int(i == j) for j in range(d)] for i in range(d)]
    return Lattice.from_generators(solve_fraction(E, eye))


def _tensor_algebra(nbar, p):
    A = commutative_algebra(nbar)
    O = maximal_order(p).to_integral()
    co = O.structure_constants()
    ca = A.consts
    d, m = A.dim, 4
    consts = np.zeros((d * m, d * m, d * m), dtype=object)
    for a in range(d):
        for i in range(m):
            for b in range(d):
                for j in range(m):
                    consts[a * m + i, b * m + j] = np.multiply.outer(ca[a, b], co[i, j]).reshape(-1)
    one_o = O.one_coords()
    one = [0] * (d * m)
    for i in range(m):
        one[i] = one_o[i]
    return IntegralAlgebra(consts, one, name=f"A{nbar}(x)O_{p}"), O, one_o


def tensor_ambient_vector(nbar, p, a_vec, o_vec=None):
    """Ambient coordinates of a (x) b for a in A_nbar and b in O (default 1)."""
    O = maximal_order(p).to_integral()
    o_vec = O.one_coords() if o_vec is None else o_vec
    return [Fraction(x) * y for x in a_vec for y in o_vec]


def _uniformizer(n, p, f):
    """An element 1 - T^j (or p) of A_n with v_p(Norm) = f."""
    A = commutative_algebra(n)
    d = A.dim
    cands = []
    for j in range(1, n):
        v = [0] * d
        v[0] += 1
        _, r = cyc.poly_divmod((0,) * j + (1,), cyc.cyclotomic_polynomial(n).coeffs)
        for t, c in enumerate(r):
            v[t] -= c
        cands.append(v)
    cands.append([p] + [0] * (d - 1))
    order = A.standard_order()
    for v in cands:
        N = bareiss_det(order.multiplication_matrix(v))
        if N != 0 and vp(N, p) == f:
            return v
    raise InternalConsistencyError(f"no uniformizer found for Q(zeta_{n}) at {p}")


def cyclotomic_center(n, p):
    loc = cyc.local_splitting(n, p)
    if loc.g != 1:
        raise StructuralError(f"{p} is not a single prime in Q(zeta_{n})")
    A = commutative_algebra(n).standard_order()
    dval = vp(bareiss_det(A.trace_form()), p) if A.dim > 1 else 0
    pi = _uniformizer(n, p, loc.f)
    return pi, CenterData(uniformizer=(), f=loc.f, e=loc.e, disc_valuation=dval,
                          label=f"Z_{p}[zeta_{n}]")


def tensor_local_order(nbar, p, k=DEFAULT_PRECISION):
    """A_nbar (x) O at p; for a single n the center data are attached."""
    nbar = cyc.normalize_case(nbar)
    if p not in (2, 3, 5):
        raise UsageError("p must be 2, 3 or 5")
    if len(nbar) == 2 and nbar not in cyc.PAIRS:
        raise UsageError(f"unsupported pair {nbar}")
    alg, O, one_o = _tensor_algebra(nbar, p)
    order = alg.standard_order()
    center = None
    if len(nbar) == 1 and cyc.local_splitting(nbar[0], p).g == 1:
        pi_a, cd = cyclotomic_center(nbar[0], p)
        center = replace(cd, uniformizer=tuple(tensor_ambient_vector(nbar, p, pi_a)))
    label = f"A{nbar[0] if len(nbar) == 1 else nbar},{p}"
    return LocalOrderModel(order, p, k, center, label=label, provenance="tensor")


def tensor_maximal_overorder(model_or_nbar, p=None):
    """O_K (x) O as an order in the ambient of ``tensor_local_order``."""
    if isinstance(model_or_nbar, LocalOrderModel):
        model = model_or_nbar
    else:
        model = tensor_local_order(model_or_nbar, p)
    nbar = cyc.normalize_case(_nbar_from_label(model.label))
    OK = maximal_commutative_lattice(nbar)
    Oi = maximal_order(model.p).to_integral()
    m = 4
    gens = []
    for row in OK.basis():
        for j in range(m):
            e = [0] * m
            e[j] = 1
            gens.append([x * y for x in row for y in e])
    lat = Lattice.from_generators(gens)
    order = Order(model.order.algebra, lat, name="O_K(x)O")
    return replace(model, order=order, label=model.label + ":max", provenance="O_K tensor",
                   _cache={})


def _nbar_from_label(label):
    body = label[1:].split(",")
    if body[0].startswith("("):
        return (int(body[0][1:]), int(body[1].strip(" )")))
    return int(body[0])


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def eichler_invariant(model: LocalOrderModel) -> int:
    res, _ = model.residue_algebra()
    kind = fin.semisimple_type(res, base_degree=model.center.f)
    return EICHLER_FROM_TYPE[kind]


def discriminant_exponent(model: LocalOrderModel, k=None) -> int:
    """n(O) with d(O) = (pi^n), from the Z_p-trace form computed mod p^k."""
    k = model.k if k is None else k
    if model.center is None:
        raise StructuralError("discriminant exponent needs a local field center")
    tf = model.order.trace_form()
    half = [[x // 2 for x in row] for row in tf]
    if any(x % 2 for row in tf for x in row):
        raise InternalConsistencyError("regular trace form is not even")
    v = det_valuation(half, model.p, k)
    c = model.center
    num = v - 4 * c.disc_valuation
    if num % (2 * c.f):
        raise InternalConsistencyError(f"trace-form valuation {v} is incompatible with f={c.f}")
    return num // (2 * c.f)


def stable_discriminant_exponent(model: LocalOrderModel, max_extra=6):
    """discriminant_exponent, raising the precision on PrecisionError.

    Returns ``(n, k_used)``.
    """
    for k in range(model.k, model.k + max_extra + 1):
        try:
            return discriminant_exponent(model, k), k
        except PrecisionError:
            continue
    raise PrecisionError(f"{model.label}: no stable discriminant up to k={model.k + max_extra}",
                         precision=model.k + max_extra)


# ---------------------------------------------------------------------------
# overorders
# ---------------------------------------------------------------------------

def _bimodule(R, sub=None):
    """Left and right multiplications by basis elements, restricted to ``sub``."""
    eye = np.eye(R.dim, dtype=np.int64)
    mats = [R.left_matrix(e) for e in eye] + [R.right_matrix(e) for e in eye]
    if sub is None:
        return fin.FiniteModule(R.p, R.dim, mats)
    basis = sub.matrix
    restricted = [fin.solve_in_basis(basis, basis @ m % R.p, R.p) for m in mats]
    return fin.FiniteModule(R.p, sub.dim, restricted)


def _closed(model, W_rows):
    """Whether O + p^{-1} W is multiplicatively closed (W an ideal of O/pO)."""
    p = model.p
    R2 = model.algebra(2)
    W = np.asarray(W_rows, dtype=np.int64)
    if len(W) == 0:
        return True
    prods = R2.mul_many(np.repeat(W, len(W), axis=0), np.tile(W, (len(W), 1)))
    if (prods % p).any():
        return False
    sub = fin.SubmoduleBasis.span(W, p, R2.dim)
    return sub.contains((prods // p) % p)


def left_order_of_radical_space(model):
    """(O_l(J) intersected with p^{-1}O) / O as a subspace of O/pO."""
    p = model.p
    R = model.algebra(1)
    R2 = model.algebra(2)
    J = model.radical_mod_p()
    jb = J.matrix
    # x in J with x*J = 0 in O/pO
    rows = []
    for x in jb:
        rows.append(np.concatenate([R.mul(x, j) for j in jb]))
    # kernel of J -> (O/pO)^{dim J}, x -> (x j)_j
    coeff_kernel = fin._nullspace_rows(np.array(rows, dtype=np.int64), p)
    S1 = (np.array(coeff_kernel, dtype=np.int64).reshape(-1, len(jb)) @ jb) % p \
        if coeff_kernel else np.zeros((0, R.dim), dtype=np.int64)
    if len(S1) == 0:
        return fin.SubmoduleBasis(p, R.dim, ())
    proj, _ = fin._quotient_maps(J)
    rows = []
    for x in S1:
        prods = R2.mul_many(np.tile(x, (len(jb), 1)), jb)
        if (prods % p).any():
            raise InternalConsistencyError("annihilator computation is inconsistent")
        rows.append(((prods // p) % p @ proj % p).reshape(-1))
    ker = fin._nullspace_rows(np.array(rows, dtype=np.int64), p)
    if not ker:
        return fin.SubmoduleBasis(p, R.dim, ())
    C = np.array(ker, dtype=np.int64).reshape(-1, len(S1)) @ S1 % p
    return fin.SubmoduleBasis.span(C, p, R.dim)


def overorders_in(model, space="auto", budget=2 ** 14):
    """All orders between O and p^{-1}O whose image lies in ``space``.

    ``space`` is ``"full"`` (all of O/pO), ``"radical-idealizer"``
    (O_l(J(O)) intersected with p^{-1}O) or ``"auto"``, which picks the full
    space when it has at most ``budget`` elements.
    Returns a list of (W, order) sorted by dim W, W an F_p-subspace of O/pO.
    """
    R = model.algebra(1)
    if space == "auto":
        space = "full" if model.p ** R.dim <= budget else "radical-idealizer"
    if space == "full":
        sub = None
    elif space == "radical-idealizer":
        sub = left_order_of_radical_space(model)
    else:
        raise UsageError(f"unknown search space {space!r}")
    module = _bimodule(R, sub)
    out = []
    for W in fin.enumerate_submodules(module, budget=2 ** 20):
        rows = W.matrix if sub is None else (W.matrix @ sub.matrix % model.p
                                             if W.dim else W.matrix)
        if _closed(model, rows):
            out.append(fin.SubmoduleBasis.span(rows, model.p, R.dim))
    out.sort(key=lambda s: s.key)
    return out


def overorder_model(model, W, label=None):
    order = model.order.extend([list(map(int, r)) for r in W.matrix], model.p,
                               name=label or model.label + "+")
    return replace(model, order=order, label=label or model.label + "'", _cache={},
                   provenance=f"overorder of {model.label}")


def minimal_overorders(model, space="auto"):
    subs = [W for W in overorders_in(model, space) if W.dim]
    minimal = [W for W in subs if not any(V.dim < W.dim and W.contains(V.matrix) for V in subs)]
    return minimal


@dataclass
class OverorderChain:
    orders: list
    eichler: int
    exponents: list
    bass_justification: str
    searched_space: list

    @property
    def m(self):
        return len(self.orders) - 1

    @property
    def hereditary_closure(self):
        return self.orders[-1]


def overorder_chain(model: LocalOrderModel, space="auto", max_steps=16) -> OverorderChain:
    """O = M^0 < M^1 < ... < M^m, each link the unique minimal overorder."""
    e = eichler_invariant(model)
    if e not in (-1, 0):
        raise UsageError(f"overorder chains are for Eichler invariant 0 or -1, got {e}")
    orders = [model]
    exps = [stable_discriminant_exponent(model)[0]]
    spaces = []
    # hereditary exactly when the discriminant is squarefree
    while exps[-1] > 1:
        cur = orders[-1]
        mins = minimal_overorders(cur, space)
        used = space if space != "auto" else (
            "full" if cur.p ** cur.dim <= 2 ** 14 else "radical-idealizer")
        spaces.append(used)
        if not mins:
            raise InternalConsistencyError(f"{cur.label}: no overorder found")
        if len(mins) > 1:
            raise InternalConsistencyError(f"{cur.label}: minimal overorder is not unique")
        nxt = overorder_model(cur, mins[0], label=f"M^{len(orders)}({model.label})")
        n_new = stable_discriminant_exponent(nxt)[0]
        drop = 2 if e == -1 else 1
        if exps[-1] - n_new != drop:
            raise InternalConsistencyError(
                f"exponent drop {exps[-1]} -> {n_new} differs from {drop}")
        orders.append(nxt)
        exps.append(n_new)
        if n_new > 1 and eichler_invariant(nxt) != e:
            raise InternalConsistencyError("Eichler invariant changed along the chain")
        if len(orders) > max_steps:
            raise InternalConsistencyError("overorder chain does not terminate")
    n0 = exps[0]
    expected_m = n0 // 2 if e == -1 else n0 - 1
    if len(orders) - 1 != expected_m:
        raise InternalConsistencyError(f"chain length {len(orders) - 1} != {expected_m}")
    just = "e(O) = -1 and a quaternion order with unramified residue extension" \
        if e == -1 else "e(O) = 0 with a Bass chain"
    return OverorderChain(orders, e, exps, just, spaces)



def commutative_local_order(nbar, p, k=DEFAULT_PRECISION):
    """A_nbar itself, viewed at p."""
    alg = commutative_algebra(nbar)
    return LocalOrderModel(alg.standard_order(), p, k, None,
                           label=f"A{cyc.normalize_case(nbar)},{p}", provenance="commutative")
