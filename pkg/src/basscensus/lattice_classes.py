"""
Isomorphism classes of local lattices.

Four sources of class lists:

* Eichler orders: non-decreasing exponent tuples;
* Bass orders with e in {0, -1}: tuples of multiplicities over the chain
  of minimal overorders;
* commutative Bass orders: one class per overorder;
* explicit finite census: submodules of a quotient module, up to the
  action of a finite unit group.

``brute_force_bass_count`` recomputes the Bass counts from scratch by the
finite census, so the two can be compared.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import cyclotomic as cyc
from . import finite as fin
from . import local_orders as lo
from .errors import InternalConsistencyError, StructuralError, UsageError


@dataclass(frozen=True, order=True)
class LatticeClassLabel:
    kind: str     # column | chain-order | overorder | explicit
    name: str
    prime: int
    data: tuple = ()

    def __str__(self):
        return self.name


@dataclass
class LocalClassList:
    case: tuple
    prime: int
    labels: list
    details: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def names(self):
        return [str(x) for x in self.labels]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise InternalConsistencyError(f"duplicate class labels for {self.case}")


def _compositions(total, weights):
    """Nonnegative tuples t with sum(w_i * t_i) == total."""
    if not weights:
        if total == 0:
            yield ()
        return
    w = weights[0]
    for t in range(total // w + 1):
        for rest in _compositions(total - w * t, weights[1:]):
            yield (t,) + rest


# ---------------------------------------------------------------------------
# Eichler orders
# ---------------------------------------------------------------------------

def eichler_lattice_classes(level, u, prime=0, case=()):
    """Lattices sum_i [O_F; pi^{e_i} O_F] with 0 <= e_1 <= ... <= e_u <= level."""
    if level < 0 or u < 1:
        raise UsageError("level must be >= 0 and u >= 1")
    labels = []
    for es in itertools.combinations_with_replacement(range(level + 1), u):
        name = " + ".join(f"[O;pi^{e}O]" for e in es)
        labels.append(LatticeClassLabel("column", name, prime, es))
    if len(labels) != comb(u + level, u):
        raise InternalConsistencyError("Eichler class count differs from C(u+e, u)")
    return LocalClassList(case, prime, labels, {"method": "eichler", "level": level, "u": u})


# ---------------------------------------------------------------------------
# Bass orders
# ---------------------------------------------------------------------------

def chain_is_split(chain):
    """Whether the quaternion algebra of the chain is Mat_2 of its center."""
    top = chain.hereditary_closure
    n_top = chain.exponents[-1]
    if n_top == 0:
        return True
    return lo.eichler_invariant(top) == 1


def bass_lattice_classes(chain, shape, prime=0, case=()):
    """Prop.-style classification over a Bass order with e in {0, -1}.

    ``shape`` is ``("split", u)`` for a module Mat_{2,u}(F) or
    ``("division", r)`` for B^r.
    """
    e, m = chain.eichler, chain.m
    if e not in (0, -1):
        raise UsageError("use eichler_lattice_classes for e in {1, 2}")
    kind, size = shape
    split = chain_is_split(chain)
    if (kind == "split") != split:
        raise StructuralError(f"module shape {kind} does not match the algebra")
    labels = []
    if kind == "division":
        for ts in _compositions(size, (1,) * (m + 1)):
            name = " + ".join(f"M{i}^{t}" for i, t in enumerate(ts) if t)
            labels.append(LatticeClassLabel("chain-order", name, prime, ts))
    elif e == 0:
        for tup in _compositions(size, (1, 1) + (2,) * m):
            r, s, ts = tup[0], tup[1], tup[2:]
            parts = [f"[O;piO]^{r}"] * bool(r) + [f"[O;O]^{s}"] * bool(s)
            parts += [f"M{i}^{t}" for i, t in enumerate(ts) if t]
            labels.append(LatticeClassLabel("chain-order", " + ".join(parts), prime, tup))
    else:
        for tup in _compositions(size, (1,) + (2,) * m):
            s, ts = tup[0], tup[1:]
            parts = [f"[O;O]^{s}"] * bool(s) + [f"M{i}^{t}" for i, t in enumerate(ts) if t]
            labels.append(LatticeClassLabel("chain-order", " + ".join(parts), prime, tup))
    return LocalClassList(case, prime, sorted(labels),
                          {"method": "bass", "e": e, "m": m, "shape": shape})


# ---------------------------------------------------------------------------
# commutative orders
# ---------------------------------------------------------------------------

def commutative_lattice_classes(model, case=()):
    """One class per overorder (every lattice is isomorphic to an overorder)."""
    overs = lo.overorders_in(model, "full")
    labels = []
    top = max(w.dim for w in overs)
    for W in overs:
        if W.dim == 0:
            name = "A"
        elif W.dim == top:
            name = "O_K"
        else:
            name = f"A+W{W.dim}"
        labels.append(LatticeClassLabel("overorder", name, model.p, (W.dim, W.rows)))
    return LocalClassList(case, model.p, labels, {"method": "overorders"})


# ---------------------------------------------------------------------------
# brute-force census for Bass orders
# ---------------------------------------------------------------------------

def _express(model_big, model_small):
    """Coordinates of the small order's basis in the big order's basis."""
    coords = model_big.order.lattice.coords(model_small.order.basis())
    if any(x.denominator != 1 for r in coords for x in r):
        raise StructuralError("order is not contained in the overorder")
    return np.array([[int(x) for x in r] for r in coords], dtype=np.int64)


def _pi_power_ideal(H, c):
    """pi^c H / pH inside H/pH."""
    p = H.p
    R = H.algebra(1)
    pi = np.array(H.uniformizer_coords(), dtype=np.int64) % p
    x = R.one.copy()
    for _ in range(c):
        x = R.mul(pi, x)
    gens = R.mul_many(np.tile(x, (R.dim, 1)), np.eye(R.dim, dtype=np.int64))
    return fin.SubmoduleBasis.span(gens, p, R.dim)


def _contains_pi_power(model, H, c):
    """Whether pi^c H is contained in the order ``model``."""
    pi = list(H.center.uniformizer)
    alg = H.order.algebra
    gens = []
    for b in H.order.basis():
        v = b
        for _ in range(c):
            v = alg.mul(pi, v)
        gens.append(v)
    return model.order.lattice.contains(gens)


def _lift_idempotent(R, e):
    for _ in range(64):
        e2 = R.mul(e, e)
        if np.array_equal(e2, e):
            return e
        e = (3 * e2 - 2 * R.mul(e2, e)) % R.p
    raise InternalConsistencyError("idempotent lifting did not converge")


def primitive_idempotent(R):
    """A nontrivial idempotent of R lifted from one of R/J."""
    J = fin.jacobson_radical(R)
    if J.dim:
        S, _ = R.quotient(J)
        _, lift = fin._quotient_maps(J)
    else:
        S, lift = R, np.eye(R.dim, dtype=np.int64)
    for e in fin.idempotents(S):
        if e.any() and not np.array_equal(e, S.one % S.p):
            return _lift_idempotent(R, e @ lift % R.p)
    raise StructuralError("R/J has no nontrivial idempotent")


@dataclass
class BruteForceCensus:
    count: int
    submodules: int
    group_order: int
    c: int
    representatives: list


def _action_on(R, V, rows, side):
    """Matrices of v -> a v (side="left") or v -> v a on the span V."""
    p = R.p
    mats = []
    for a in rows:
        t = np.tile(a, (len(V), 1))
        imgs = R.mul_many(t, V) if side == "left" else R.mul_many(V, t)
        mats.append(fin.solve_in_basis(V, imgs, p))
    return mats


def brute_force_bass_count(chain, u):
    """Count lattices of rank u over a Bass order by a finite census.

    H is the hereditary closure (here Mat_2(O_F)) and c is minimal with
    pi^c H inside O. Every lattice L satisfies pi^c HL <= L <= HL, so the
    classes are the orbits of Aut_H(HL) on O-submodules of HL/pi^c HL that
    generate it over H.
    """
    if u not in (1, 2):
        raise UsageError("brute force census supports u in {1, 2}")
    model = chain.orders[0]
    H = chain.hereditary_closure
    if chain.exponents[-1] != 0:
        raise UsageError("census implemented for chains ending at Mat_2(O_F)")
    e = model.center.e
    c = next((c for c in range(1, e + 1) if _contains_pi_power(model, H, c)), None)
    if c is None:
        raise UsageError("pH is not inside O; quotient is not an F_p-algebra")
    p = model.p
    Rbar, proj = H.algebra(1).quotient(_pi_power_ideal(H, c), name="H/pi^cH")
    eye = np.eye(Rbar.dim, dtype=np.int64)
    A_sub = fin.SubmoduleBasis.span(_express(H, model) % p @ proj % p, p, Rbar.dim)
    if u == 2:
        V = eye
        group_elems = [x.vector for x in fin.unit_group_of_finite_algebra(Rbar)]
    else:
        eps = primitive_idempotent(Rbar)
        t = np.tile(eps, (Rbar.dim, 1))
        V = fin.SubmoduleBasis.span(Rbar.mul_many(eye, t), p, Rbar.dim).matrix
        corner = fin.SubmoduleBasis.span(Rbar.mul_many(Rbar.mul_many(t, eye), t), p, Rbar.dim)
        # y is a unit of eps R eps iff y + (1 - eps) is a unit of R
        elems = corner.elements()
        mask = fin.unit_mask(Rbar, (elems + Rbar.one - eps) % p)
        group_elems = list(elems[mask])
    module = fin.FiniteModule(p, len(V), _action_on(Rbar, V, A_sub.matrix, "left"))
    over = fin.FiniteModule(p, len(V), _action_on(Rbar, V, eye, "left"))
    subs = fin.enumerate_submodules(module, generates=over)
    group = _action_on(Rbar, V, group_elems, "right")
    orbits = fin.orbit_classes(subs, group)
    return BruteForceCensus(len(orbits), len(subs), len(group), c,
                            [o.representative for o in orbits])


# ---------------------------------------------------------------------------
# explicit quotient censuses
# ---------------------------------------------------------------------------

QUOTIENT_CASES = (((1, 2), 2), ((3, 6), 2), ((2, 4), 2), ((2, 6), 3))


def _name_by_dim(sub, total_qdim, half_qdim):
    if sub.qdim == total_qdim:
        return "ambient"
    if sub.qdim == half_qdim:
        return "graph"
    if sub.qdim == total_qdim - 1:
        return "index-1 congruence"
    return f"dim-{sub.qdim}"


def _census(case, delta_left, delta_right, gen_left, gen_right, group, qdeg, names=None):
    """Orbits of submodules M of D1 + D2 under a group, with C M = D1 + D2."""
    p = delta_left.p
    acts = [fin._block_diag(a, b) for a, b in zip(delta_left.action, delta_right.action)]
    module = fin.FiniteModule(p, delta_left.dim + delta_right.dim, acts, qdeg=qdeg)
    zero_l = np.zeros((delta_left.dim,) * 2, dtype=np.int64)
    zero_r = np.zeros((delta_right.dim,) * 2, dtype=np.int64)
    gen = [fin._block_diag(a, zero_r) for a in gen_left] + \
          [fin._block_diag(zero_l, b) for b in gen_right]
    big = fin.FiniteModule(p, module.dim, gen, qdeg=qdeg)
    subs = fin.enumerate_submodules(module, generates=big)
    blocks = (delta_left.dim, delta_right.dim)
    for s in subs:
        if not fin.projections_surjective(s, blocks):
            raise InternalConsistencyError("generation and projection criteria disagree")
    orbits = fin.orbit_classes(subs, group)
    return subs, orbits


def _units_action(alg, module_rows, side="right"):
    units = fin.unit_group_of_finite_algebra(alg)
    mats = []
    for u in units:
        imgs = alg.mul_many(module_rows, np.tile(u.vector, (len(module_rows), 1))) \
            if side == "right" else alg.mul_many(np.tile(u.vector, (len(module_rows), 1)),
                                                 module_rows)
        mats.append(fin.solve_in_basis(module_rows, imgs, alg.p))
    return mats


def census_1_2(field_basis="polynomial"):
    """((1,2), 2): O/2O diagonal inside (O/2O)^2, units of both factors."""
    O = lo.local_maximal_order(2, poly=lo.QUADRATIC_MODEL[2] if field_basis == "polynomial"
                               else lo.ALTERNATIVE_QUADRATIC[2]).algebra(1)
    eye = np.eye(O.dim, dtype=np.int64)
    D = O.left_regular_module()
    right = _units_action(O, eye)
    group = [fin._block_diag(a, b) for a in right for b in right]
    subs, orbits = _census(((1, 2), 2), D, D, D.action, D.action, group, qdeg=2)
    labels = []
    standard_names = {2: "A (graph)", 3: "R (index-1 congruence)", 4: "O x O (ambient)"}
    for o in orbits:
        labels.append(LatticeClassLabel("explicit", standard_names.get(o.representative.qdim,
                                                                    _name_by_dim(o.representative, 4, 2)),
                                        2, (o.representative.rows,)))
    return LocalClassList(((1, 2), 2), 2, labels,
                          {"method": "census", "submodules": len(subs),
                           "orbit_sizes": [o.size for o in orbits]})


def trivial_extension_columns(F):
    """E-bar and its two column modules (dagger, ddagger)."""
    E = fin.QuotientAlgebra.trivial_extension(F)
    d = F.degree
    # basis b_t e_i has index i*d + t; entries a, b, c, d are e_0..e_3
    def rows(entries):
        return np.array([np.eye(E.dim, dtype=np.int64)[i * d + t]
                         for i in entries for t in range(d)], dtype=np.int64)
    dagger = rows((0, 2))    # first column: a, c
    ddagger = rows((1, 3))   # second column: b, d
    Mdag = fin.FiniteModule.from_algebra_action(E, dagger, name="dagger")
    Mddag = fin.FiniteModule.from_algebra_action(E, ddagger, name="ddagger")
    return E, Mdag, Mddag


def _scalar_matrix(module, F, lam):
    """Action of the central element lam * 1 on a module over the trivial extension."""
    d = F.degree
    vec = np.zeros(4 * d, dtype=np.int64)
    for entry in (0, 3):
        vec[entry * d:(entry + 1) * d] = F.coords(lam)
    out = np.zeros((module.dim, module.dim), dtype=np.int64)
    for c, mat in zip(vec, module.action):
        out = (out + int(c) * mat) % F.p
    return out


def census_3_6(field=None):
    """((3,6), 2): the four Delta types, F4^x x F4^x acting by scalars."""
    F = field if field is not None else fin.FiniteField(2, 2)
    E, dag, ddag = trivial_extension_columns(F)
    cols = {"dagger": dag, "ddagger": ddag}
    deltas = (("dagger", "dagger"), ("ddagger", "ddagger"),
              ("dagger", "ddagger"), ("ddagger", "dagger"))
    per_delta = []
    labels = []
    detail = {}
    for left, right in deltas:
        D1, D2 = cols[left], cols[right]
        s1 = [_scalar_matrix(D1, F, lam) for lam in F.units()]
        s2 = [_scalar_matrix(D2, F, lam) for lam in F.units()]
        group = [fin._block_diag(a, b) for a in s1 for b in s2]
        subs, orbits = _census(((3, 6), 2), D1, D2, D1.action, D2.action, group, qdeg=F.degree)
        for sub in subs:
            if sub.qdim < 2:
                raise InternalConsistencyError("retained submodule below the dimension floor")
        per_delta.append(len(orbits))
        for o in orbits:
            nm = _name_by_dim(o.representative, 4, 2)
            labels.append(LatticeClassLabel("explicit", f"{left}x{right}:{nm}", 2,
                                            (left, right, o.representative.rows)))
        detail[f"{left}x{right}"] = {"submodules": len(subs),
                                     "orbit_sizes": [o.size for o in orbits]}
    return LocalClassList(((3, 6), 2), 2, labels,
                          {"method": "census", "per_delta": per_delta, "deltas": detail})


def columns_isomorphic(F=None):
    """Search all F_p-linear bijections dagger -> ddagger commuting with E."""
    F = F if F is not None else fin.FiniteField(2, 2)
    E, dag, ddag = trivial_extension_columns(F)
    p, n = E.p, dag.dim
    for entries in itertools.product(range(p), repeat=n * n):
        T = np.array(entries, dtype=np.int64).reshape(n, n)
        if len(fin.K.rref(T, p)[1]) < n:
            continue
        if all(np.array_equal(a @ T % p, T @ b % p) for a, b in zip(dag.action, ddag.action)):
            return True
    return False


def census_2_2p(p, poly=None):
    """((2, 2p), p): O-bar diagonal inside O-bar x F_{p^2}."""
    O = lo.local_maximal_order(p, poly=poly).algebra(1)
    eye = np.eye(O.dim, dtype=np.int64)
    J = fin.jacobson_radical(O)
    res, proj = O.quotient(J, name="F_{p^2}")
    D1 = O.left_regular_module()
    # O acts on F_{p^2} = O/J through the projection
    act2 = [res.left_matrix(e @ proj % p) for e in eye]
    D2 = fin.FiniteModule(p, res.dim, act2)
    gen_right = act2
    right1 = _units_action(O, eye)
    scal = [(lam * np.eye(res.dim, dtype=np.int64)) % p for lam in range(1, p)]
    group = [fin._block_diag(a, b) for a in right1 for b in scal]
    subs, orbits = _census(((2, 2 * p), p), D1, D2, D1.action, gen_right, group, qdeg=2)
    for sub in subs:
        if sub.qdim < 2:
            raise InternalConsistencyError("retained submodule below the dimension floor")
    labels = []
    for o in orbits:
        rep = o.representative
        if rep.qdim == 3:
            name = "Delta (ambient)"
        else:
            name = "Gamma (a = c)"
            _check_gamma(O, proj, rep, p, group)
        labels.append(LatticeClassLabel("explicit", name, p, (rep.rows,)))
    return LocalClassList(((2, 2 * p), p), p, sorted(labels),
                          {"method": "census", "submodules": len(subs),
                           "orbit_sizes": [o.size for o in orbits]})


def _check_gamma(O, proj, rep, p, group):
    """Gamma-bar = {(x, c) : x mod J = c} lies in the orbit of ``rep``."""
    rows = [np.concatenate([x, x @ proj % p]) for x in np.eye(O.dim, dtype=np.int64)]
    gamma = fin.SubmoduleBasis.span(rows, p, len(rows[0]), rep.qdeg)
    if not any(rep.image(g).key == gamma.key for g in group):
        raise InternalConsistencyError("Gamma-bar is not in the orbit of the representative")


def quotient_orbit_classification(case, p=None, variant="default"):
    """Finite census for ((1,2),2), ((3,6),2), ((2,4),2), ((2,6),3).

    ``variant="alternative"`` rebuilds the residue field on another
    presentation (normal basis over F_2, another quadratic otherwise).
    """
    if p is None:
        case, p = case
    nbar = cyc.normalize_case(case)
    if (nbar, p) not in QUOTIENT_CASES:
        raise UsageError(f"no quotient census for {nbar} at p={p}")
    alt = variant == "alternative"
    if nbar == (1, 2):
        return census_1_2("alternative" if alt else "polynomial")
    if nbar == (3, 6):
        return census_3_6(fin.FiniteField.normal_basis(2) if alt else None)
    return census_2_2p(p, poly=lo.ALTERNATIVE_QUADRATIC[p] if alt else None)


# ---------------------------------------------------------------------------
# endomorphism orders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EndoDescriptor:
    """The endomorphism order of a global lattice, as needed for h."""
    kind: str   # maximal-product | congruence | subdirect | cyclotomic | det-surjective
    name: str
    p: int
    components: tuple = ()


def endomorphism_order(label, case):
    nbar, p = case
    nbar = cyc.normalize_case(nbar)
    if len(nbar) == 1:
        n = nbar[0]
        if n in (3, 4):
            # both classes have det(O_Lambda^x) = A_{n,p}^x
            return EndoDescriptor("det-surjective", f"End({label.name}) in Mat2(K_{n})", p,
                                  (f"A_{n}",))
        return EndoDescriptor("cyclotomic", f"A_{n}", p, (f"A_{n}",))
    if nbar in ((2, 4), (2, 6)):
        if label.name.startswith("Delta"):
            return EndoDescriptor("maximal-product", f"O x A_{nbar[1]}", p,
                                  ("O", f"A_{nbar[1]}"))
        return EndoDescriptor("congruence", "{(x,y) in O x A : x = y mod P}", p,
                              ("O", f"A_{nbar[1]}"))
    if nbar == (1, 2):
        return EndoDescriptor("subdirect", "End in (O x O) by overorder", p, ("O", "O"))
    return EndoDescriptor("cyclotomic", f"A{nbar} or its overorders", p, (str(nbar),))
