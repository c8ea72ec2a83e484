"""
Hot integer kernels.

Every kernel exists twice: a numba ``@njit`` version and a plain numpy
version. The numba path is used when numba imports cleanly and the
environment variable ``BASSCENSUS_DISABLE_NUMBA`` is unset (or "0").
Both paths must return identical arrays; ``tests/test_kernels.py`` checks
that on random inputs.
"""

import os

import numpy as np

_flag = os.environ.get("BASSCENSUS_DISABLE_NUMBA", "0").strip().lower()
_DISABLED = _flag not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    import numba as nb
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    nb = None
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# batch product through structure constants
# ---------------------------------------------------------------------------

def _mul_batch_numpy(c, a, b, mod):
    # c[i, j, l]: coefficient of e_l in e_i e_j
    t = np.einsum("ni,ijl->njl", a, c) % mod
    return np.einsum("njl,nj->nl", t, b) % mod


def _mul_batch_loops(c, a, b, mod):
    # inputs are reduced mod ``mod``; a row sums m^3 terms below mod^3, so
    # the accumulator is only reduced at the end (callers keep mod < 2^15)
    n = a.shape[0]
    m = c.shape[0]
    out = np.zeros((n, m), dtype=np.int64)
    acc = np.zeros(m, dtype=np.int64)
    for r in range(n):
        acc[:] = 0
        for i in range(m):
            ai = a[r, i]
            if ai == 0:
                continue
            for j in range(m):
                bj = b[r, j]
                if bj == 0:
                    continue
                s = (ai * bj) % mod
                for l in range(m):
                    acc[l] += s * c[i, j, l]
        for l in range(m):
            out[r, l] = acc[l] % mod
    return out


# ---------------------------------------------------------------------------
# reduced row echelon form over F_p
# ---------------------------------------------------------------------------

def _rref_numpy(mat, p):
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    r = 0
    pivots = []
    for col in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, col]), p - 2, p)
        a[r] = (a[r] * inv) % p
        f = a[:, col].copy()
        f[r] = 0
        a = (a - np.outer(f, a[r])) % p
        pivots.append(col)
        r += 1
    return a[:r], np.array(pivots, dtype=np.int64)


def _rref_loops(mat, p):
    a = mat.copy() % p
    rows, cols = a.shape
    piv = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for col in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if a[i, col] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[k, j]
                a[k, j] = t
        # Fermat inverse, p is prime
        inv = 1
        base = a[r, col]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for j in range(cols):
            a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i != r and a[i, col] != 0:
                f = a[i, col]
                for j in range(cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        piv[r] = col
        r += 1
    return a[:r].copy(), piv[:r].copy()


# ---------------------------------------------------------------------------
# valuations of elementary divisors over Z/p^k
# ---------------------------------------------------------------------------

def _smith_vals_loops(mat, p, k):
    """Valuations of the elementary divisors of ``mat`` over Z/p^k.

    A divisor that vanishes mod p^k is reported with valuation k.
    """
    mod = 1
    for _ in range(k):
        mod *= p
    a = mat.copy() % mod
    n, m = a.shape
    size = min(n, m)
    vals = np.full(size, k, dtype=np.int64)
    for t in range(size):
        best = k
        bi = -1
        bj = -1
        for i in range(t, n):
            for j in range(t, m):
                x = a[i, j]
                if x == 0:
                    continue
                v = 0
                while x % p == 0:
                    x //= p
                    v += 1
                if v < best:
                    best = v
                    bi = i
                    bj = j
        if bi < 0:
            break
        for j in range(m):
            tmp = a[t, j]
            a[t, j] = a[bi, j]
            a[bi, j] = tmp
        for i in range(n):
            tmp = a[i, t]
            a[i, t] = a[i, bj]
            a[i, bj] = tmp
        piv = a[t, t]
        pk = 1
        for _ in range(best):
            pk *= p
        # unit part of the pivot, inverted mod p^k
        u = (piv // pk) % mod
        inv = 1
        base = u
        e = mod // p * (p - 1) - 1  # phi(p^k) - 1
        while e > 0:
            if e & 1:
                inv = (inv * base) % mod
            base = (base * base) % mod
            e >>= 1
        for i in range(t + 1, n):
            if a[i, t] != 0:
                f = ((a[i, t] // pk) * inv) % mod
                for j in range(t, m):
                    a[i, j] = (a[i, j] - f * a[t, j]) % mod
        for j in range(t + 1, m):
            if a[t, j] != 0:
                f = ((a[t, j] // pk) * inv) % mod
                for i in range(t, n):
                    a[i, j] = (a[i, j] - f * a[i, t]) % mod
        vals[t] = best
    return vals


# ---------------------------------------------------------------------------
# box enumeration for a positive definite integral form
# ---------------------------------------------------------------------------

def _box_vectors_numpy(gram, bounds, target):
    # gram is the (integral) Gram matrix of 2*Nr, target the value of 2*Nr
    axes = [np.arange(-b, b + 1, dtype=np.int64) for b in bounds]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(bounds))
    q = np.einsum("ni,ij,nj->n", grid, gram, grid)
    return grid[q == target]


def _box_vectors_loops(gram, bounds, target):
    d = bounds.shape[0]
    total = 1
    for i in range(d):
        total *= 2 * bounds[i] + 1
    out = np.empty((total, d), dtype=np.int64)
    cnt = 0
    x = np.empty(d, dtype=np.int64)
    for idx in range(total):
        r = idx
        for i in range(d):
            w = 2 * bounds[i] + 1
            x[i] = r % w - bounds[i]
            r //= w
        q = 0
        for i in range(d):
            for j in range(d):
                q += x[i] * gram[i, j] * x[j]
        if q == target:
            out[cnt] = x
            cnt += 1
    return out[:cnt].copy()


if HAVE_NUMBA:
    _mul_batch_nb = nb.njit(cache=True)(_mul_batch_loops)
    _rref_nb = nb.njit(cache=True)(_rref_loops)
    _smith_nb = nb.njit(cache=True)(_smith_vals_loops)
    _box_nb = nb.njit(cache=True)(_box_vectors_loops)


def _lexsort_rows(a):
    if a.shape[0] == 0:
        return a
    order = np.lexsort(a.T[::-1])
    return a[order]


def mul_batch(c, a, b, mod, use_numba=None):
    """Rowwise products ``a[r] * b[r]`` in the algebra with constants ``c``."""
    use = HAVE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA)
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    c = np.ascontiguousarray(c, dtype=np.int64)
    mod = int(mod)
    if use and mod < 2 ** 15:
        return _mul_batch_nb(c % mod, a % mod, b % mod, mod)
    return _mul_batch_numpy(c, a, b, mod)


def rref(mat, p, use_numba=None):
    """Reduced row echelon form over F_p; returns ``(rows, pivot_columns)``."""
    use = HAVE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA)
    mat = np.ascontiguousarray(mat, dtype=np.int64)
    if mat.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    if mat.shape[0] == 0:
        return mat.reshape(0, mat.shape[1]), np.zeros(0, dtype=np.int64)
    if use:
        return _rref_nb(mat, int(p))
    return _rref_numpy(mat, int(p))


def smith_valuations(mat, p, k, use_numba=None):
    """Sorted p-adic valuations of elementary divisors, computed mod p^k."""
    use = HAVE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA)
    mat = np.ascontiguousarray(mat, dtype=np.int64)
    if use:
        vals = _smith_nb(mat, int(p), int(k))
    else:
        vals = _smith_vals_loops(mat, int(p), int(k))
    return np.sort(vals)


def box_vectors(gram, bounds, target, use_numba=None):
    """All integer vectors in the box ``|x_i| <= bounds[i]`` with x G x^T == target."""
    use = HAVE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA)
    gram = np.ascontiguousarray(gram, dtype=np.int64)
    bounds = np.ascontiguousarray(bounds, dtype=np.int64)
    if use:
        out = _box_nb(gram, bounds, int(target))
    else:
        out = _box_vectors_numpy(gram, bounds, int(target))
    return _lexsort_rows(out)
