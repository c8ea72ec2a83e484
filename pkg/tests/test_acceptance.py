"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` or directly with
``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction

import pytest

from basscensus import class_numbers as cn
from basscensus import counting as ct
from basscensus import lattice_classes as lc
from basscensus import local_orders as lo
from basscensus import quaternion as quat

EXPECTED = {
    ((3,), 3): 2, ((4,), 2): 2, ((5,), 5): 1, ((8,), 2): 1,
    ((12,), 2): 3, ((12,), 3): 3, ((1, 2), 2): 3, ((2, 3), 3): 1,
    ((2, 4), 2): 2, ((2, 6), 3): 3, ((3, 4), 2): 2, ((3, 4), 3): 2,
    ((3, 6), 2): 8, ((3, 6), 3): 2,
}
TOTALS = {2: 49, 3: 45, 5: 47}
BASS_CASES = (((3,), 3, 2), ((3,), 3, 1), ((4,), 2, 2), ((4,), 2, 1), ((6,), 3, 1),
              ((5,), 5, 1), ((8,), 2, 1))


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    capture = getattr(report, "capsys", None)
    if capture is not None:
        with capture.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


@pytest.fixture(autouse=True)
def _attach_capsys(capsys):
    report.capsys = capsys
    yield
    report.capsys = None


def check_1():
    start = time.perf_counter()
    bad = []
    for (case, p), want in EXPECTED.items():
        res = ct.count(case, p, source="computed")
        if res.value != want or res.source != "computed":
            bad.append((case, p, res.value, want))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    return report(1, ok, f"{len(EXPECTED)} computed values, {elapsed:.1f}s, mismatches {bad}")


def check_2():
    bad = []
    traced = True
    for p, want in TOTALS.items():
        row = ct.ssp2_total(p)
        if row.total != want:
            bad.append((p, row.total, want))
        for r in row.results.values():
            traced &= r.source in ("computed", ct.FIXTURE_TAG)
            traced &= not (r.case in ((1,), (2,)) and r.source != "computed")
    return report(2, not bad and traced, f"totals {TOTALS}, mismatches {bad}, traced={traced}")


def check_3():
    default = lc.quotient_orbit_classification(((3, 6), 2)).details["per_delta"]
    alt = lc.quotient_orbit_classification(((3, 6), 2), variant="alternative")
    alt = alt.details["per_delta"]
    ok = default == [3, 3, 1, 1] and alt == default and sum(default) == 8
    return report(3, ok, f"per-Delta {default}, alternative F4 {alt}")


def _p3_expected_units():
    A = quat.QuaternionAlgebraQ(-1, -3)
    one, i, j = A.one, A.i, A.j
    half = Fraction(1, 2)
    out = {one, -one, i, -i}
    for s in (1, -1):
        x = (one + j * s) * half
        out |= {x, -x, i * x, -(i * x)}
    return out


def check_4():
    O2, O3 = quat.maximal_order(2), quat.maximal_order(3)
    u2, u3 = quat.unit_group(O2), quat.unit_group(O3)
    same_algebra = (O3.algebra.a, O3.algebra.b) == (-1, -3)
    list_ok = same_algebra and set(u3) == _p3_expected_units()
    s2 = cn.unit_reduction_summary(2)
    s3 = cn.unit_reduction_summary(3)
    kernel2 = cn.serre_kernel(2, "p")
    kernel_ok = sorted(map(repr, kernel2)) == sorted(map(repr, [O2.algebra.one, -O2.algebra.one]))
    surj = s2["ring_image"] == s2["ring_units"] == 12
    index3 = Fraction(s3["field_units"], s3["field_image"])
    ok = len(u2) == 24 and len(u3) == 12 and list_ok and surj and kernel_ok and index3 == 2
    return report(4, ok, f"|O^x| = {len(u2)}, {len(u3)}; p=3 list {list_ok}; "
                         f"p=2 surjective {surj}, kernel +-1 {kernel_ok}; p=3 index {index3}")


def _hilbert_product(a, b):
    places = [quat.INF] + [q for q in range(2, 200) if all(q % d for d in range(2, q))]
    prod = 1
    for v in places:
        prod *= quat.hilbert_symbol(a, b, v)
    return prod


def check_5():
    rng = random.Random(20240601)
    pairs = []
    while len(pairs) < 50:
        a, b = rng.randint(-60, 60), rng.randint(-60, 60)
        if a and b:
            pairs.append((a, b))
    recip = all(_hilbert_product(a, b) == 1 for a, b in pairs)
    discs = [quat.reduced_discriminant(quat.maximal_order(p)) for p in (2, 3, 5)]
    inv = {}
    stable = True
    for n, p in ((3, 3), (4, 2), (12, 2)):
        m = lo.tensor_local_order((n,), p)
        inv[(n, p)] = lo.eichler_invariant(m)
        n0, k = lo.stable_discriminant_exponent(m)
        stable &= lo.discriminant_exponent(m, k + 1) == n0
        stable &= lo.eichler_invariant(m.with_precision(k + 1)) == inv[(n, p)]
    drops = True
    for n, p in ((3, 3), (4, 2), (5, 5)):
        chain = lo.overorder_chain(lo.tensor_local_order((n,), p))
        step = 2 if chain.eichler == -1 else 1
        drops &= all(x - y == step for x, y in zip(chain.exponents, chain.exponents[1:]))
    for case, p in (((3,), 3), ((12,), 2)):
        stable &= ct.count(case, p, "computed", 5).value == ct.count(case, p, "computed").value
    ok = (recip and discs == [2, 3, 5] and inv == {(3, 3): -1, (4, 2): -1, (12, 2): 1}
          and drops and stable)
    return report(5, ok, f"reciprocity {recip}, discriminants {discs}, Eichler {inv}, "
                         f"drops {drops}, precision-stable {stable}")


def check_6():
    rows = []
    ok = True
    for case, p, u in BASS_CASES:
        chain = lo.overorder_chain(lo.tensor_local_order(case, p))
        shape = ("split", u) if lc.chain_is_split(chain) else ("division", u // 2)
        formula = len(lc.bass_lattice_classes(chain, shape))
        brute = lc.brute_force_bass_count(chain, u).count
        rows.append((case[0], p, u, formula, brute))
        ok &= formula == brute
    return report(6, ok, "(n, p, u, formula, brute force) " + str(rows))


def check_7():
    vals = {p: cn.h_maximal_quaternion_exact(p) for p in (2, 3, 5, 11)}
    ok = all(isinstance(v, Fraction) and v.denominator == 1 for v in vals.values())
    ok &= [int(vals[p]) for p in (2, 3, 5, 11)] == [1, 1, 1, 2]
    return report(7, ok, f"h = {[str(vals[p]) for p in (2, 3, 5, 11)]}")


CHECKS = (check_1, check_2, check_3, check_4, check_5, check_6, check_7)


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{i}" for i in range(1, 8)])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    results = [c() for c in CHECKS]
    sys.exit(0 if all(results) else 1)
