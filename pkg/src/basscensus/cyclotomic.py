"""
Cyclotomic polynomials, the orders A_n = Z[T]/(Phi_n) and the pair orders
A_(n1,n2) = Z[T]/(Phi_n1 * Phi_n2).

Polynomials are tuples of integer coefficients, constant term first.
A_6 shares the model Z[zeta_3] with A_3 through zeta_6 -> -zeta_3.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from . import zlattice
from .errors import UsageError

MAX_N = 12
PAIRS = ((1, 2), (2, 3), (2, 4), (2, 6), (3, 4), (3, 6))

# gluing condition inside O_K = Z[zeta_n1] x Z[zeta_n2]
_PRESENTATIONS = {
    (1, 2): "a ≡ b mod 2",
    (2, 3): "Z x Z[zeta_3] (maximal)",
    (2, 4): "a ≡ b mod (1+i)",
    (2, 6): "a ≡ b mod (1+zeta_6), the prime above 3",
    (3, 4): "Z[zeta_3] x Z[i] (maximal)",
    (3, 6): "a ≡ b mod 2Z[zeta_3]",
}


# -- integer polynomial helpers ------------------------------------------------

def _trim(f):
    f = list(f)
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return tuple(f)


def poly_mul(f, g, mod=None):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    if mod is not None:
        out = [c % mod for c in out]
    return _trim(out)


def poly_divmod(f, g, mod=None):
    """Division by a polynomial with unit leading coefficient."""
    f = list(f)
    g = _trim(g)
    lead = g[-1]
    if mod is None and lead not in (1, -1):
        raise UsageError("divisor must be monic over Z")
    inv = pow(lead, -1, mod) if mod is not None else lead
    q = [0] * max(len(f) - len(g) + 1, 1)
    for k in range(len(f) - len(g), -1, -1):
        c = f[k + len(g) - 1] * inv
        if mod is not None:
            c %= mod
        q[k] = c
        for j, b in enumerate(g):
            f[k + j] -= c * b
        if mod is not None:
            f = [x % mod for x in f]
    r = f[:len(g) - 1] or [0]
    return _trim(q), _trim(r)


def poly_eval(f, x, mod=None):
    out = 0
    for c in reversed(f):
        out = out * x + c
        if mod is not None:
            out %= mod
    return out


# -- cyclotomic data ---------------------------------------------------------

@dataclass(frozen=True)
class CyclotomicSpec:
    n: tuple
    coeffs: tuple

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __str__(self):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
            else:
                coef = f"{c:+d}"
            terms.append(coef + mono)
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_N:
        raise UsageError(f"n must be an integer in 1..{MAX_N}, got {n!r}")


@lru_cache(maxsize=None)
def _phi_coeffs(n):
    num = (-1,) + (0,) * (n - 1) + (1,)
    for d in range(1, n):
        if n % d == 0:
            num, r = poly_divmod(num, _phi_coeffs(d))
            assert r == (0,)
    return num


def cyclotomic_polynomial(n) -> CyclotomicSpec:
    _check_n(n)
    return CyclotomicSpec((int(n),), _phi_coeffs(int(n)))


def euler_phi(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def pair_polynomial(nbar) -> CyclotomicSpec:
    nbar = normalize_case(nbar)
    coeffs = (1,)
    for n in nbar:
        coeffs = poly_mul(coeffs, _phi_coeffs(n))
    return CyclotomicSpec(nbar, coeffs)


def normalize_case(nbar):
    """Accept ``3``, ``(3,)`` or ``(3, 6)`` and return a sorted tuple."""
    if isinstance(nbar, (int, np.integer)):
        nbar = (int(nbar),)
    nbar = tuple(sorted(int(n) for n in nbar))
    for n in nbar:
        _check_n(n)
    if len(nbar) not in (1, 2):
        raise UsageError("a case is a single n or a pair (n1, n2)")
    return nbar


# -- pair orders ---------------------------------------------------------------

@dataclass(frozen=True)
class PairOrderPresentation:
    pair: tuple
    congruence: str
    index: int
    components: tuple

    def __str__(self):
        return f"A{self.pair}: {self.congruence} (index {self.index})"


def embedding_matrix(nbar):
    """Rows: images of 1, T, ..., T^(d-1) in the power bases of the factors."""
    nbar = normalize_case(nbar)
    d = pair_polynomial(nbar).degree
    rows = []
    for k in range(d):
        mono = (0,) * k + (1,)
        row = []
        for n in nbar:
            phi = _phi_coeffs(n)
            _, r = poly_divmod(mono, phi)
            r = list(r) + [0] * (len(phi) - 1 - len(r))
            row.extend(r)
        rows.append(row)
    return rows


def pair_order(n1, n2) -> PairOrderPresentation:
    pair = tuple(sorted((n1, n2)))
    if pair not in PAIRS:
        raise UsageError(f"unsupported pair {pair}; supported: {PAIRS}")
    index = abs(zlattice.bareiss_det(embedding_matrix(pair)))
    comps = tuple(f"Z[zeta_{n}]" if euler_phi(n) > 1 else "Z" for n in pair)
    return PairOrderPresentation(pair, _PRESENTATIONS[pair], index, comps)


def index(nbar):
    """[O_K : A_nbar]; 1 for a single n."""
    nbar = normalize_case(nbar)
    if len(nbar) == 1:
        return 1
    return pair_order(*nbar).index


# -- local behaviour -------------------------------------------------------------

@dataclass(frozen=True)
class LocalBehavior:
    n: int
    p: int
    tag: str
    f: int  # residue degree
    e: int  # ramification index
    g: int  # number of primes

    @property
    def totally_split(self):
        return self.e == 1 and self.f == 1

    @property
    def totally_ramified(self):
        return self.e == euler_phi(self.n) and self.e > 1


def factor_mod_p(f, p):
    """Monic irreducible factorization over F_p as a sorted list of (factor, mult)."""
    f = tuple(c % p for c in f)
    lead_inv = pow(f[-1], -1, p)
    f = tuple((c * lead_inv) % p for c in f)
    out = {}
    deg = 1
    while len(f) > 1:
        found = False
        for g in _monic_polys(p, deg):
            q, r = poly_divmod(f, g, p)
            if r == (0,):
                out[g] = out.get(g, 0) + 1
                f = q
                found = True
                break
        if not found:
            if deg >= len(f) - 1:
                out[f] = out.get(f, 0) + 1
                break
            deg += 1
    return sorted(out.items(), key=lambda t: (len(t[0]), t[0]))


def _monic_polys(p, deg):
    # skip reducible candidates implicitly: smallest-degree divisor is irreducible
    for k in range(p ** deg):
        low = [(k // p ** t) % p for t in range(deg)]
        yield tuple(low) + (1,)


def _mult_order(p, n):
    k, x = 1, p % n
    while x != 1:
        x = (x * p) % n
        k += 1
    return k


def local_splitting(n, p) -> LocalBehavior:
    _check_n(n)
    facs = factor_mod_p(_phi_coeffs(n), p)
    e = facs[0][1]
    f = len(facs[0][0]) - 1
    g = len(facs)
    if any(m != e or len(h) - 1 != f for h, m in facs):
        raise AssertionError("cyclotomic factorization is not equidegree")
    # closed form check: n = p^a m
    a, m = 0, n
    while m % p == 0:
        m //= p
        a += 1
    e_th = euler_phi(p ** a) if a else 1
    f_th = _mult_order(p, m) if m > 1 else 1
    if (e, f) != (e_th, f_th):
        raise AssertionError(f"splitting of Phi_{n} mod {p} disagrees with theory")
    if e > 1:
        tag = "ramified"
    elif f == 1:
        tag = "split"
    elif g == 1:
        tag = "inert"
    else:
        tag = "mixed-degree"
    return LocalBehavior(n, p, tag, f, e, g)


def nonmaximal_primes(nbar, p):
    """Primes l where A_nbar tensored with the maximal order of D_{p,inf} is
    non-maximal at l.

    Away from p the algebra splits, so non-maximality comes only from the
    index. At p the local component over K_n,p is maximal only when every
    prime above p is unramified of odd residue degree.
    """
    nbar = normalize_case(nbar)
    idx = index(nbar)
    primes = {l for l in range(2, idx + 1) if idx % l == 0 and _is_prime(l)}
    for n in nbar:
        loc = local_splitting(n, p)
        if loc.e > 1 or loc.f % 2 == 0:
            primes.add(p)
    return frozenset(primes)


def _is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def roots_of_unity(n):
    """The torsion units of A_n for n in {3, 4, 6} as residues T^k and -T^k."""
    _check_n(n)
    phi = _phi_coeffs(n)
    out = set()
    for k in range(2 * n):
        for s in (1, -1):
            _, r = poly_divmod((0,) * k + (s,), phi)
            out.add(r)
    return sorted(out)
